use serde::Serialize;

use super::{AdversaryError, EntangleMeasureConfig};
use crate::protocol::{expected_pair_for_bit, Phase, FLYING_QUBIT};
use crate::qsim::{
    trace_distance, DensityMatrix, MeasurementBasis, QsimError, StateVector, ZERO_PROBABILITY,
};
use crate::states::{bell, bell_basis, ghz_like, ghz_like_basis, z_basis, BellLabel, GhzLikeLabel};

/// Errors at or below this count as zero.
pub const ZERO_ERROR_TOL: f64 = 1e-9;

/// Numerical floor for probe distinguishability in the zero-error case.
pub const LEAKAGE_FLOOR: f64 = 1e-8;

/// Exact error rates and probe leakage of one entangle-measure configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LeakageReport {
    /// Probability that a CTRL round fails Alice's check.
    pub ctrl_error: f64,
    /// Probability that a checked SIFT round fails, averaged over Bob's bit.
    pub sift_error: f64,
    /// Largest trace distance between Eve's final probe states across all
    /// branches with non-negligible probability.
    pub probe_distinguishability: f64,
}

impl LeakageReport {
    pub fn max_error(&self) -> f64 {
        self.ctrl_error.max(self.sift_error)
    }
}

/// Largest probe distinguishability allowed at error level `error_tol`.
///
/// Only the zero-error statement is proven, so below [`ZERO_ERROR_TOL`] the
/// bound is the numeric floor and above it nothing is claimed.
pub fn leakage_tol(error_tol: f64) -> f64 {
    if error_tol <= ZERO_ERROR_TOL {
        LEAKAGE_FLOOR
    } else {
        1.0
    }
}

struct Branches {
    probe: Vec<usize>,
    states: Vec<DensityMatrix>,
}

impl Branches {
    fn record(&mut self, weight: f64, state: &StateVector) -> Result<(), QsimError> {
        if weight >= ZERO_PROBABILITY {
            self.states.push(state.reduced_density(&self.probe)?);
        }
        Ok(())
    }

    fn max_distance(&self) -> Result<f64, QsimError> {
        let mut worst = 0.0f64;
        for (i, a) in self.states.iter().enumerate() {
            for b in &self.states[i + 1..] {
                worst = worst.max(trace_distance(a, b)?);
            }
        }
        Ok(worst)
    }
}

/// Iterates the non-null outcomes of measuring `targets` in `basis`.
fn outcomes<'a>(
    state: &'a StateVector,
    targets: &'a [usize],
    basis: &'a MeasurementBasis,
) -> impl Iterator<Item = Result<(usize, f64, StateVector), QsimError>> + 'a {
    (0..basis.states().len()).filter_map(move |k| match state.project(targets, basis, k) {
        Ok((p, s)) => Some(Ok((k, p, s))),
        Err(QsimError::ZeroProbability) => None,
        Err(e) => Some(Err(e)),
    })
}

/// Propagates one round exactly through both legs of the attack and both of
/// Bob's actions. Bob's two actions are weighted equally in the branch
/// bookkeeping; the error rates are conditional on the action.
pub fn analyze_entangle_measure(
    config: &EntangleMeasureConfig,
    phase: Phase,
) -> Result<LeakageReport, AdversaryError> {
    let (start, protocol_qubits) = match phase {
        Phase::One => (ghz_like(GhzLikeLabel::G001), 3),
        Phase::Two => (bell(BellLabel::PhiPlus), 2),
    };
    let k = config.probe_qubits();
    let probe: Vec<usize> = (protocol_qubits..protocol_qubits + k).collect();
    let joint: Vec<usize> = std::iter::once(FLYING_QUBIT).chain(probe.iter().copied()).collect();

    let state = start.tensor(config.initial_probe())?;
    let sent = state.apply(config.forward(), &joint)?;
    let z = z_basis();
    let mut branches = Branches {
        probe,
        states: Vec::new(),
    };

    // CTRL: Bob reflects untouched.
    let reflected = sent.apply(config.ret(), &joint)?;
    let (ctrl_basis, ctrl_targets, ctrl_pass) = match phase {
        Phase::One => (ghz_like_basis(), vec![0, 1, 2], GhzLikeLabel::G001.index()),
        Phase::Two => (bell_basis(), vec![0, 1], BellLabel::PhiPlus.index()),
    };
    let mut ctrl_error = 0.0;
    for o in outcomes(&reflected, &ctrl_targets, &ctrl_basis) {
        let (k, p, s) = o?;
        if k != ctrl_pass {
            ctrl_error += p;
        }
        branches.record(0.5 * p, &s)?;
    }

    // SIFT: Bob measures Z and resends.
    let mut sift_error = 0.0;
    let pair_basis = bell_basis();
    for bob in outcomes(&sent, &[FLYING_QUBIT], &z) {
        let (b, pb, s) = bob?;
        let back = s.apply(config.ret(), &joint)?;
        for first in outcomes(&back, &[0], &z) {
            let (a, pa, s) = first?;
            let (rest_basis, rest_targets): (&MeasurementBasis, &[usize]) = match phase {
                Phase::One => (&pair_basis, &[1, 2]),
                Phase::Two => (&z, &[1]),
            };
            for second in outcomes(&s, rest_targets, rest_basis) {
                let (c, pc, s) = second?;
                let passed = match phase {
                    Phase::One => a == b && c == expected_pair_for_bit(a as u8).index(),
                    Phase::Two => a == b && c == b,
                };
                let w = pb * pa * pc;
                if !passed {
                    sift_error += w;
                }
                branches.record(0.5 * w, &s)?;
            }
        }
    }

    Ok(LeakageReport {
        ctrl_error: ctrl_error.clamp(0.0, 1.0),
        sift_error: sift_error.clamp(0.0, 1.0),
        probe_distinguishability: branches.max_distance()?.clamp(0.0, 1.0),
    })
}

/// Checks the zero-error statement for one configuration: if both error rates
/// are within `error_tol`, Eve's final probe must be independent of the branch
/// up to [`leakage_tol`]. Vacuously true when either error exceeds the
/// tolerance.
pub fn theorem1_certificate(
    config: &EntangleMeasureConfig,
    phase: Phase,
    error_tol: f64,
) -> Result<bool, AdversaryError> {
    if error_tol.is_nan() || error_tol < 0.0 {
        return Err(AdversaryError::InvalidConfig(format!(
            "error tolerance must be non-negative (got {error_tol})"
        )));
    }
    let r = analyze_entangle_measure(config, phase)?;
    Ok(r.max_error() > error_tol || r.probe_distinguishability <= leakage_tol(error_tol))
}
