use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::AttackStrategy;
use crate::protocol::{
    alice_check_ctrl_phase1, alice_check_ctrl_phase2, alice_check_sift_phase1,
    alice_check_sift_phase2, bob_act, BobAction, Phase, ProtocolError, ProtocolParams, FLYING_QUBIT,
};
use crate::rng::substream;
use crate::states::{bell, ghz_like, BellLabel, GhzLikeLabel};

const CHUNK: usize = 4096;

/// Monte Carlo detection rate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectionEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub trials: usize,
    pub failures: usize,
}

/// Probability that a SIFT position is drawn for checking.
fn sift_check_weight(params: &ProtocolParams, phase: Phase) -> f64 {
    match phase {
        Phase::One => params.phase1_checked_sift() as f64 / (params.phase1_positions() - params.phase1_ctrl()) as f64,
        Phase::Two => params.phase2_checked_sift() as f64 / (params.phase2_positions() - params.phase2_ctrl()) as f64,
    }
}

/// Runs one attacked position through a full round trip and Alice's check.
///
/// Bob's action is a fair coin; CTRL positions are always checked and SIFT
/// positions with the protocol's sampling weight. Returns `true` when the
/// position is checked and fails.
pub fn simulate_attacked_position<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: &AttackStrategy,
    phase: Phase,
    rng: &mut R,
) -> Result<bool, ProtocolError> {
    let attack = strategy.active_in(phase);
    let start = match phase {
        Phase::One => ghz_like(GhzLikeLabel::G001),
        Phase::Two => bell(BellLabel::PhiPlus),
    };
    let mut state = start;
    if attack {
        state = strategy.attach_probe(&state)?;
        state = strategy.attack_forward(&state, FLYING_QUBIT, rng)?;
    }
    let action = if rng.random_bool(0.5) {
        BobAction::Ctrl
    } else {
        BobAction::Sift
    };
    let (mut state, bit) = bob_act(&state, FLYING_QUBIT, action, rng)?;
    if attack {
        state = strategy.attack_return(&state, FLYING_QUBIT, rng)?;
    }
    let outcome = match (action, phase) {
        (BobAction::Ctrl, Phase::One) => alice_check_ctrl_phase1(&state, rng)?,
        (BobAction::Ctrl, Phase::Two) => alice_check_ctrl_phase2(&state, rng)?,
        (BobAction::Sift, _) => {
            if !rng.random_bool(sift_check_weight(params, phase)) {
                return Ok(false);
            }
            let bit = bit.unwrap_or(0);
            match phase {
                Phase::One => alice_check_sift_phase1(&state, bit, rng)?,
                Phase::Two => alice_check_sift_phase2(&state, bit, rng)?,
            }
        }
    };
    Ok(!outcome.passed)
}

/// Fraction of `trials` independent attacked positions that fail Alice's
/// check in `phase`.
///
/// Trials run in parallel chunks, each on its own substream of `seed`, so the
/// result depends only on the arguments.
pub fn estimate_detection(
    params: &ProtocolParams,
    strategy: &AttackStrategy,
    phase: Phase,
    trials: usize,
    seed: u64,
) -> Result<DetectionEstimate, ProtocolError> {
    params.validate()?;
    strategy.validate()?;
    if trials == 0 {
        return Err(ProtocolError::InvalidParams("trials must be at least 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let failures = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut failed = 0usize;
            for _ in 0..len {
                if simulate_attacked_position(params, strategy, phase, &mut rng)? {
                    failed += 1;
                }
            }
            Ok::<usize, ProtocolError>(failed)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p_hat = failures as f64 / trials as f64;
    Ok(DetectionEstimate {
        p_hat,
        std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        trials,
        failures,
    })
}
