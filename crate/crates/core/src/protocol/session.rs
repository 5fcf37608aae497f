use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use super::{
    alice_apply_correction, alice_check_ctrl_phase1, alice_check_ctrl_phase2,
    alice_check_sift_phase1, alice_check_sift_phase2, bob_act, plan_bob_actions, sift_phase1,
    BobAction, CheckOutcome, Phase, ProtocolError, ProtocolParams, RoundRecord, FLYING_QUBIT,
};
use crate::adversary::AttackStrategy;
use crate::bits::BitString;
use crate::postproc::{finalize, PostprocConfig, PostprocError};
use crate::qsim::StateVector;
use crate::rng::seeded;
use crate::states::{ghz_like, z_basis, GhzLikeLabel};

/// Sifted key material of both parties.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyMaterial {
    pub m_a1: BitString,
    pub m_b1: BitString,
    pub m_a2: BitString,
    pub m_b2: BitString,
}

impl KeyMaterial {
    /// `M_A1 ‖ M_A2`.
    pub fn info_alice(&self) -> BitString {
        self.m_a1.concat(&self.m_a2)
    }

    /// `M_B1 ‖ M_B2`.
    pub fn info_bob(&self) -> BitString {
        self.m_b1.concat(&self.m_b2)
    }
}

/// Post-processed keys of both parties.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalKeys {
    pub alice: BitString,
    pub bob: BitString,
    /// Parity bits disclosed during reconciliation.
    pub leaked_bits: usize,
}

#[derive(Clone, Debug)]
pub struct SessionResult {
    pub params: ProtocolParams,
    /// Phase-1 records followed by phase-2 records; kept even on abort.
    pub records: Vec<RoundRecord>,
    pub detected: bool,
    pub detection_phase: Option<Phase>,
    /// Present iff no check failed.
    pub key_material: Option<KeyMaterial>,
    pub final_keys: Option<FinalKeys>,
    /// Checks passed but the INFO strings could not be reconciled.
    pub reconciliation_failed: bool,
    /// Largest trace distance, over attacked rounds, between the
    /// eavesdropper's register after the return leg and its initial state.
    pub probe_leakage: Option<f64>,
}

impl SessionResult {
    pub fn records_in(&self, phase: Phase) -> impl Iterator<Item = &RoundRecord> {
        self.records.iter().filter(move |r| r.phase == phase)
    }

    /// True when a key was established and both parties hold the same one.
    pub fn keys_agree(&self) -> bool {
        self.final_keys.as_ref().is_some_and(|k| k.alice == k.bob)
    }
}

/// Runs a full session driven by `params.seed`.
pub fn run_session(
    params: &ProtocolParams,
    strategy: &AttackStrategy,
) -> Result<SessionResult, ProtocolError> {
    let mut rng = seeded(params.seed);
    run_session_with_rng(params, strategy, &mut rng)
}

pub fn run_session_with_rng<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: &AttackStrategy,
    rng: &mut R,
) -> Result<SessionResult, ProtocolError> {
    params.validate()?;
    strategy.validate()?;
    let mut result = SessionResult {
        params: *params,
        records: Vec::with_capacity(params.phase1_positions() + params.phase2_positions()),
        detected: false,
        detection_phase: None,
        key_material: None,
        final_keys: None,
        reconciliation_failed: false,
        probe_leakage: None,
    };

    // Phase 1: S1 round trip.
    let attack = strategy.active_in(Phase::One);
    let plan = plan_bob_actions(params.phase1_positions(), params.phase1_ctrl(), rng)?;
    let mut records = Vec::with_capacity(plan.len());
    let mut states = Vec::with_capacity(plan.len());
    for (t, &action) in plan.iter().enumerate() {
        let (state, bit) = round_trip(ghz_like(GhzLikeLabel::G001), action, strategy, attack, &mut result, rng)?;
        records.push(RoundRecord::new(t, Phase::One, action, bit));
        states.push(state);
    }
    let passed = run_checks(&mut records, &states, params.phase1_checked_sift(), Phase::One, rng)?;
    result.records.extend(records.iter().cloned());
    if !passed {
        result.detected = true;
        result.detection_phase = Some(Phase::One);
        return Ok(result);
    }
    let extra: Vec<usize> = if attack {
        (3..3 + strategy.probe_qubits()).collect()
    } else {
        Vec::new()
    };
    let sifted = sift_phase1(&records, &states, &extra, params.phase2_positions(), rng)?;

    // Phase 2: corrected S2 round trip.
    let attack = strategy.active_in(Phase::Two);
    let plan = plan_bob_actions(params.phase2_positions(), params.phase2_ctrl(), rng)?;
    let mut records = Vec::with_capacity(plan.len());
    let mut states = Vec::with_capacity(plan.len());
    for (i, &action) in plan.iter().enumerate() {
        let pair = alice_apply_correction(&sifted.pairs[i], sifted.m_a1.get(i) as u8)?;
        let (state, bit) = round_trip(pair, action, strategy, attack, &mut result, rng)?;
        records.push(RoundRecord::new(i, Phase::Two, action, bit));
        states.push(state);
    }
    let passed = run_checks(&mut records, &states, params.phase2_checked_sift(), Phase::Two, rng)?;
    result.records.extend(records.iter().cloned());
    if !passed {
        result.detected = true;
        result.detection_phase = Some(Phase::Two);
        return Ok(result);
    }
    let mut m_a2 = BitString::new();
    let mut m_b2 = BitString::new();
    let z = z_basis();
    for (rec, state) in records.iter().zip(&states) {
        if rec.kept_for_key {
            m_b2.push(rec.bob_bit == Some(1));
            m_a2.push(state.measure(&[1], &z, rng)?.outcome == 1);
        }
    }
    let keys = KeyMaterial {
        m_a1: sifted.m_a1,
        m_b1: sifted.m_b1,
        m_a2,
        m_b2,
    };

    let config = PostprocConfig {
        hash_seed: rng.random(),
        ..PostprocConfig::default()
    };
    match finalize(&keys.info_alice(), &keys.info_bob(), &config) {
        Ok(k) => result.final_keys = Some(k),
        Err(PostprocError::ReconciliationFailed { .. }) => result.reconciliation_failed = true,
        Err(e) => return Err(e.into()),
    }
    result.key_material = Some(keys);
    Ok(result)
}

fn round_trip<R: Rng + ?Sized>(
    state: StateVector,
    action: BobAction,
    strategy: &AttackStrategy,
    attack: bool,
    result: &mut SessionResult,
    rng: &mut R,
) -> Result<(StateVector, Option<u8>), ProtocolError> {
    let mut state = state;
    if attack {
        state = strategy.attach_probe(&state)?;
        state = strategy.attack_forward(&state, FLYING_QUBIT, rng)?;
    }
    let (mut state, bit) = bob_act(&state, FLYING_QUBIT, action, rng)?;
    if attack {
        state = strategy.attack_return(&state, FLYING_QUBIT, rng)?;
        if let Some(d) = strategy.probe_leakage(&state)? {
            result.probe_leakage = Some(result.probe_leakage.map_or(d, |m| m.max(d)));
        }
    }
    Ok((state, bit))
}

/// Checks every CTRL round and a uniformly chosen set of `sift_checks` SIFT
/// rounds; marks the remaining SIFT rounds for the key. Returns whether every
/// check passed.
fn run_checks<R: Rng + ?Sized>(
    records: &mut [RoundRecord],
    states: &[StateVector],
    sift_checks: usize,
    phase: Phase,
    rng: &mut R,
) -> Result<bool, ProtocolError> {
    let sift: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.action == BobAction::Sift)
        .map(|(i, _)| i)
        .collect();
    if sift_checks > sift.len() {
        return Err(ProtocolError::SurvivorCount {
            expected: sift_checks,
            found: sift.len(),
        });
    }
    for k in index::sample(rng, sift.len(), sift_checks) {
        records[sift[k]].checked = true;
    }
    let mut all_passed = true;
    for (rec, state) in records.iter_mut().zip(states) {
        let outcome: CheckOutcome = match (rec.action, rec.checked, phase) {
            (BobAction::Ctrl, _, Phase::One) => alice_check_ctrl_phase1(state, rng)?,
            (BobAction::Ctrl, _, Phase::Two) => alice_check_ctrl_phase2(state, rng)?,
            (BobAction::Sift, true, Phase::One) => {
                alice_check_sift_phase1(state, rec.bob_bit.unwrap_or(0), rng)?
            }
            (BobAction::Sift, true, Phase::Two) => {
                alice_check_sift_phase2(state, rec.bob_bit.unwrap_or(0), rng)?
            }
            (BobAction::Sift, false, _) => {
                rec.kept_for_key = true;
                continue;
            }
        };
        rec.checked = true;
        rec.check_passed = Some(outcome.passed);
        rec.alice_outcome = Some(outcome.label);
        all_passed &= outcome.passed;
    }
    Ok(all_passed)
}
