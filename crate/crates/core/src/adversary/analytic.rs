use super::{AdversaryError, AttackKind};
use crate::protocol::{Phase, ProtocolParams};

/// Closed-form probability that a single attacked position fails Alice's
/// check.
pub fn analytic_detection(
    kind: AttackKind,
    phase: Phase,
    params: &ProtocolParams,
) -> Result<f64, AdversaryError> {
    let (n, d, v) = (params.n as f64, params.delta as f64, params.nu as f64);
    match kind {
        AttackKind::None | AttackKind::DoubleCnot => Ok(0.0),
        AttackKind::MeasureResend => Ok(0.25),
        AttackKind::InterceptResend => Ok(match phase {
            Phase::One => 3.0 / 8.0 + d / (4.0 * (n + d + v)),
            Phase::Two => 3.0 / 8.0 + v / (4.0 * (n + v)),
        }),
        AttackKind::EntangleMeasure => Err(AdversaryError::Unsupported(kind)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let p = ProtocolParams::new(100, 50, 50, 0).unwrap();
        for phase in [Phase::One, Phase::Two] {
            assert_eq!(analytic_detection(AttackKind::MeasureResend, phase, &p).unwrap(), 0.25);
            assert_eq!(analytic_detection(AttackKind::DoubleCnot, phase, &p).unwrap(), 0.0);
            assert_eq!(analytic_detection(AttackKind::None, phase, &p).unwrap(), 0.0);
        }
        let ir1 = analytic_detection(AttackKind::InterceptResend, Phase::One, &p).unwrap();
        assert!((ir1 - 0.4375).abs() < 1e-15);
        let p2 = ProtocolParams::new(100, 50, 100, 0).unwrap();
        let ir2 = analytic_detection(AttackKind::InterceptResend, Phase::Two, &p2).unwrap();
        assert!((ir2 - 0.5).abs() < 1e-15);
        assert!(analytic_detection(AttackKind::EntangleMeasure, Phase::One, &p).is_err());
    }
}
