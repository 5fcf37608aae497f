use rand::seq::index;
use rand::Rng;

use super::{BobAction, ProtocolError};
use crate::qsim::{QsimError, StateVector};
use crate::states::z_basis;

/// Marks a uniformly random subset of exactly `ctrl_count` positions as CTRL.
pub fn plan_bob_actions<R: Rng + ?Sized>(
    total_positions: usize,
    ctrl_count: usize,
    rng: &mut R,
) -> Result<Vec<BobAction>, ProtocolError> {
    if ctrl_count > total_positions {
        return Err(ProtocolError::CtrlCountOutOfRange {
            ctrl: ctrl_count,
            total: total_positions,
        });
    }
    let mut plan = vec![BobAction::Sift; total_positions];
    for i in index::sample(rng, total_positions, ctrl_count) {
        plan[i] = BobAction::Ctrl;
    }
    Ok(plan)
}

/// Bob's operation on the flying qubit.
///
/// CTRL returns the state unchanged. SIFT measures in Z; the collapsed qubit
/// is already the computational-basis state Bob would re-prepare, so it is
/// returned as the fresh particle.
pub fn bob_act<R: Rng + ?Sized>(
    state: &StateVector,
    flying_qubit: usize,
    action: BobAction,
    rng: &mut R,
) -> Result<(StateVector, Option<u8>), QsimError> {
    match action {
        BobAction::Ctrl => Ok((state.clone(), None)),
        BobAction::Sift => {
            let m = state.measure(&[flying_qubit], &z_basis(), rng)?;
            Ok((m.state, Some(m.outcome as u8)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::states::{bell, ghz_like, BellLabel, GhzLikeLabel};

    #[test]
    fn plans_have_exact_counts() {
        let mut rng = seeded(1);
        let (n, d, v) = (3, 2, 1);
        let plan = plan_bob_actions(4 * (n + d + v), 2 * (n + d + v), &mut rng).unwrap();
        assert_eq!(plan.iter().filter(|a| **a == BobAction::Ctrl).count(), 12);
        let plan = plan_bob_actions(2 * (n + v), n + v, &mut rng).unwrap();
        assert_eq!(plan.iter().filter(|a| **a == BobAction::Ctrl).count(), 4);
        let plan = plan_bob_actions(5, 0, &mut rng).unwrap();
        assert!(plan.iter().all(|a| *a == BobAction::Sift));
        assert!(plan_bob_actions(2, 3, &mut rng).is_err());
    }

    #[test]
    fn ctrl_is_identity() {
        let mut rng = seeded(2);
        let g = ghz_like(GhzLikeLabel::G001);
        let (s, bit) = bob_act(&g, 0, BobAction::Ctrl, &mut rng).unwrap();
        assert_eq!(s, g);
        assert_eq!(bit, None);
    }

    #[test]
    fn sift_collapses_g001_into_its_branches() {
        let mut rng = seeded(3);
        let zero = StateVector::basis(1, 0).unwrap().tensor(&bell(BellLabel::PsiPlus)).unwrap();
        let one = StateVector::basis(1, 1).unwrap().tensor(&bell(BellLabel::PhiPlus)).unwrap();
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            let (s, bit) = bob_act(&ghz_like(GhzLikeLabel::G001), 0, BobAction::Sift, &mut rng).unwrap();
            let bit = bit.unwrap();
            seen[bit as usize] += 1;
            let want = if bit == 0 { &zero } else { &one };
            assert!(s.distance(want).unwrap() < 1e-12);
        }
        assert!(seen[0] > 60 && seen[1] > 60);
    }
}
