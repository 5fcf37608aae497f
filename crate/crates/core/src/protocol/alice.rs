use std::sync::OnceLock;

use rand::Rng;

use super::{BobAction, ProtocolError, RoundRecord};
use crate::bits::BitString;
use crate::qsim::{MeasurementBasis, QsimError, StateVector};
use crate::states::{bell_basis, ghz_like_basis, pauli, z_basis, BellLabel, GhzLikeLabel, PauliLabel};

fn ghz() -> &'static MeasurementBasis {
    static B: OnceLock<MeasurementBasis> = OnceLock::new();
    B.get_or_init(ghz_like_basis)
}

fn bell_b() -> &'static MeasurementBasis {
    static B: OnceLock<MeasurementBasis> = OnceLock::new();
    B.get_or_init(bell_basis)
}

fn z() -> &'static MeasurementBasis {
    static B: OnceLock<MeasurementBasis> = OnceLock::new();
    B.get_or_init(z_basis)
}

/// Verdict and observed label of one eavesdropping check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub label: String,
}

/// The pair state Alice infers from her Z result on the first particle.
pub fn expected_pair_for_bit(bit: u8) -> BellLabel {
    if bit == 0 {
        BellLabel::PsiPlus
    } else {
        BellLabel::PhiPlus
    }
}

/// GHZ-like measurement of qubits `0, 1, 2`; passes on `G001`.
pub fn alice_check_ctrl_phase1<R: Rng + ?Sized>(
    state: &StateVector,
    rng: &mut R,
) -> Result<CheckOutcome, QsimError> {
    let m = state.measure(&[0, 1, 2], ghz(), rng)?;
    Ok(CheckOutcome {
        passed: m.outcome == GhzLikeLabel::G001.index(),
        label: ghz().label(m.outcome).to_owned(),
    })
}

/// Z on qubit `0`, Bell on `(1, 2)`.
///
/// Passes when Alice's bit equals Bob's and the pair is `ψ+` for bit 0 or
/// `φ+` for bit 1. The label reads `"<bit>|<bell>"`.
pub fn alice_check_sift_phase1<R: Rng + ?Sized>(
    state: &StateVector,
    bob_bit: u8,
    rng: &mut R,
) -> Result<CheckOutcome, QsimError> {
    let first = state.measure(&[0], z(), rng)?;
    let bit = first.outcome as u8;
    let pair = first.state.measure(&[1, 2], bell_b(), rng)?;
    let expected = expected_pair_for_bit(bit);
    Ok(CheckOutcome {
        passed: bit == bob_bit && pair.outcome == expected.index(),
        label: format!("{bit}|{}", bell_b().label(pair.outcome)),
    })
}

/// Bell measurement of `(0, 1)`; passes on `φ+`.
pub fn alice_check_ctrl_phase2<R: Rng + ?Sized>(
    state: &StateVector,
    rng: &mut R,
) -> Result<CheckOutcome, QsimError> {
    let m = state.measure(&[0, 1], bell_b(), rng)?;
    Ok(CheckOutcome {
        passed: m.outcome == BellLabel::PhiPlus.index(),
        label: bell_b().label(m.outcome).to_owned(),
    })
}

/// Z on both qubits; passes when both equal Bob's bit. Label `"<b0><b1>"`.
pub fn alice_check_sift_phase2<R: Rng + ?Sized>(
    state: &StateVector,
    bob_bit: u8,
    rng: &mut R,
) -> Result<CheckOutcome, QsimError> {
    let a = state.measure(&[0], z(), rng)?;
    let b = a.state.measure(&[1], z(), rng)?;
    let (a, b) = (a.outcome as u8, b.outcome as u8);
    Ok(CheckOutcome {
        passed: a == bob_bit && b == bob_bit,
        label: format!("{a}{b}"),
    })
}

/// σ1 on the first qubit of the pair when Alice's sifted bit is 0, σ0
/// otherwise. For honest pairs the result is always `φ+`.
pub fn alice_apply_correction(pair_state: &StateVector, key_bit: u8) -> Result<StateVector, QsimError> {
    let op = if key_bit == 0 {
        PauliLabel::Sigma1
    } else {
        PauliLabel::Sigma0
    };
    pair_state.apply(&pauli(op), &[0])
}

/// Output of the phase-1 sifting step.
#[derive(Clone, Debug)]
pub struct Phase1Sift {
    pub m_a1: BitString,
    pub m_b1: BitString,
    /// Pair registers `(S2, S3)` for each surviving position, in order.
    pub pairs: Vec<StateVector>,
}

/// Sifts the rounds marked `kept_for_key`.
///
/// `M_B1` is Bob's recorded bit. Alice measures the returned first particle
/// in Z to obtain `M_A1`; that qubit and any qubits from `extra_qubits`
/// (an eavesdropper's phase-1 register, never touched again) are measured
/// out and removed, leaving the two-qubit pair.
pub fn sift_phase1<R: Rng + ?Sized>(
    records: &[RoundRecord],
    states: &[StateVector],
    extra_qubits: &[usize],
    expected_survivors: usize,
    rng: &mut R,
) -> Result<Phase1Sift, ProtocolError> {
    let mut out = Phase1Sift {
        m_a1: BitString::new(),
        m_b1: BitString::new(),
        pairs: Vec::with_capacity(expected_survivors),
    };
    let mut drop = vec![0usize];
    drop.extend_from_slice(extra_qubits);
    for (rec, state) in records.iter().zip(states) {
        if !rec.kept_for_key {
            continue;
        }
        debug_assert_eq!(rec.action, BobAction::Sift);
        out.m_b1.push(rec.bob_bit.unwrap_or(0) == 1);
        let (bits, pair) = state.measure_and_discard(&drop, rng)?;
        out.m_a1.push(bits[0] == 1);
        out.pairs.push(pair);
    }
    if out.pairs.len() != expected_survivors {
        return Err(ProtocolError::SurvivorCount {
            expected: expected_survivors,
            found: out.pairs.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{bob_act, Phase};
    use crate::rng::seeded;
    use crate::states::{bell, ghz_like};

    fn fraction<F: FnMut() -> bool>(trials: usize, mut f: F) -> f64 {
        (0..trials).filter(|_| f()).count() as f64 / trials as f64
    }

    #[test]
    fn honest_checks_always_pass() {
        let mut rng = seeded(11);
        let g = ghz_like(GhzLikeLabel::G001);
        for _ in 0..200 {
            assert!(alice_check_ctrl_phase1(&g, &mut rng).unwrap().passed);
            let (s, bit) = bob_act(&g, 0, BobAction::Sift, &mut rng).unwrap();
            let bit = bit.unwrap();
            let out = alice_check_sift_phase1(&s, bit, &mut rng).unwrap();
            assert!(out.passed);
            let want = if bit == 0 { "0|psi+" } else { "1|phi+" };
            assert_eq!(out.label, want);
        }
    }

    #[test]
    fn measure_resend_collapse_passes_ctrl_half_the_time() {
        let mut rng = seeded(12);
        let s = StateVector::basis(1, 0).unwrap().tensor(&bell(BellLabel::PsiPlus)).unwrap();
        let p = s.born_distribution(&[0, 1, 2], ghz()).unwrap();
        assert!((p[GhzLikeLabel::G001.index()] - 0.5).abs() < 1e-12);
        assert!((p[7] - 0.5).abs() < 1e-12);
        let f = fraction(4000, || alice_check_ctrl_phase1(&s, &mut rng).unwrap().passed);
        assert!((f - 0.5).abs() < 0.04, "{f}");
    }

    #[test]
    fn phase2_checks() {
        let mut rng = seeded(13);
        let phi = bell(BellLabel::PhiPlus);
        assert!(alice_check_ctrl_phase2(&phi, &mut rng).unwrap().passed);
        for b in 0..2u8 {
            let s = StateVector::basis(2, if b == 0 { 0 } else { 3 }).unwrap();
            assert!(alice_check_sift_phase2(&s, b, &mut rng).unwrap().passed);
        }
        let collapsed = StateVector::basis(2, 0).unwrap();
        let f = fraction(4000, || alice_check_ctrl_phase2(&collapsed, &mut rng).unwrap().passed);
        assert!((f - 0.5).abs() < 0.04, "{f}");
    }

    #[test]
    fn correction_maps_both_pairs_to_phi_plus() {
        let phi = bell(BellLabel::PhiPlus);
        let fixed = alice_apply_correction(&bell(BellLabel::PsiPlus), 0).unwrap();
        assert!(fixed.distance(&phi).unwrap() < 1e-12);
        assert_eq!(alice_apply_correction(&phi, 1).unwrap(), phi);
        let twice = alice_apply_correction(&fixed, 0).unwrap();
        assert!(twice.distance(&bell(BellLabel::PsiPlus)).unwrap() < 1e-12);
    }

    #[test]
    fn sifting_reads_out_bits_and_pairs() {
        let mut rng = seeded(14);
        let mut records = Vec::new();
        let mut states = Vec::new();
        for i in 0..40 {
            let (s, bit) = bob_act(&ghz_like(GhzLikeLabel::G001), 0, BobAction::Sift, &mut rng).unwrap();
            let mut r = RoundRecord::new(i, Phase::One, BobAction::Sift, bit);
            r.kept_for_key = i % 2 == 0;
            records.push(r);
            states.push(s);
        }
        let out = sift_phase1(&records, &states, &[], 20, &mut rng).unwrap();
        assert_eq!(out.m_a1, out.m_b1);
        for (bit, pair) in out.m_a1.iter().zip(&out.pairs) {
            let want = bell(expected_pair_for_bit(bit as u8));
            assert!(pair.distance(&want).unwrap() < 1e-12);
        }
        assert!(matches!(
            sift_phase1(&records, &states, &[], 21, &mut rng),
            Err(ProtocolError::SurvivorCount { expected: 21, found: 20 })
        ));
    }
}
