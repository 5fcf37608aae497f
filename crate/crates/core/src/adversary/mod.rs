//! Eavesdropper strategies and detection analysis.
//!
//! An [`AttackStrategy`] may only touch the qubit in flight and its own
//! register, which is appended after the protocol qubits of each round.

mod analytic;
mod analyzer;
mod config;
mod em_file;
mod estimate;

pub use analytic::analytic_detection;
pub use analyzer::{
    analyze_entangle_measure, leakage_tol, theorem1_certificate, LeakageReport, LEAKAGE_FLOOR,
    ZERO_ERROR_TOL,
};
pub use config::EntangleMeasureConfig;
pub use em_file::{parse_em_file, read_em_file, write_em_file, EM_FILE_UNITARY_TOL};
pub use estimate::{estimate_detection, simulate_attacked_position, DetectionEstimate};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::protocol::Phase;
use crate::qsim::{trace_distance, DensityMatrix, QsimError, StateVector, Unitary};
use crate::states::{pauli, z_basis, PauliLabel};

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("no closed-form detection probability for {0}")]
    Unsupported(AttackKind),

    #[error("invalid entangle-measure configuration: {0}")]
    InvalidConfig(String),

    #[error("entangle-measure strategy requires a configuration")]
    MissingConfig,

    #[error("malformed unitary file: {0}")]
    Parse(String),

    #[error("cannot read unitary file: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Qsim(#[from] QsimError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    None,
    MeasureResend,
    InterceptResend,
    DoubleCnot,
    EntangleMeasure,
}

impl AttackKind {
    pub const ALL: [AttackKind; 5] = [
        AttackKind::None,
        AttackKind::MeasureResend,
        AttackKind::InterceptResend,
        AttackKind::DoubleCnot,
        AttackKind::EntangleMeasure,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::MeasureResend => "measure-resend",
            AttackKind::InterceptResend => "intercept-resend",
            AttackKind::DoubleCnot => "double-cnot",
            AttackKind::EntangleMeasure => "entangle-measure",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown attack '{s}'"))
    }
}

/// Which round trips the eavesdropper attacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseScope {
    Phase1,
    Phase2,
    Both,
}

impl PhaseScope {
    pub fn covers(self, phase: Phase) -> bool {
        matches!(
            (self, phase),
            (PhaseScope::Both, _) | (PhaseScope::Phase1, Phase::One) | (PhaseScope::Phase2, Phase::Two)
        )
    }

    pub fn only(phase: Phase) -> Self {
        match phase {
            Phase::One => PhaseScope::Phase1,
            Phase::Two => PhaseScope::Phase2,
        }
    }
}

/// How the intercept-resend attacker prepares her fake particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FakeParticle {
    /// `|0⟩` or `|1⟩` with equal probability.
    Random,
    /// Always `|0⟩`.
    Zero,
}

#[derive(Clone, Debug)]
pub struct AttackStrategy {
    kind: AttackKind,
    scope: PhaseScope,
    em: Option<EntangleMeasureConfig>,
    fake: FakeParticle,
}

impl AttackStrategy {
    pub fn none() -> Self {
        Self::plain(AttackKind::None, PhaseScope::Both)
    }

    /// Z-measures the particle on the way to Bob and forwards it.
    pub fn measure_resend(scope: PhaseScope) -> Self {
        Self::plain(AttackKind::MeasureResend, scope)
    }

    /// Keeps the genuine particle and sends Bob a Z-basis fake instead.
    pub fn intercept_resend(scope: PhaseScope) -> Self {
        Self::plain(AttackKind::InterceptResend, scope)
    }

    /// CNOT from the particle onto an ancilla `|0⟩` on both legs.
    pub fn double_cnot(scope: PhaseScope) -> Self {
        Self::plain(AttackKind::DoubleCnot, scope)
    }

    pub fn entangle_measure(config: EntangleMeasureConfig, scope: PhaseScope) -> Self {
        Self {
            em: Some(config),
            ..Self::plain(AttackKind::EntangleMeasure, scope)
        }
    }

    fn plain(kind: AttackKind, scope: PhaseScope) -> Self {
        Self {
            kind,
            scope,
            em: None,
            fake: FakeParticle::Random,
        }
    }

    pub fn with_fake(mut self, fake: FakeParticle) -> Self {
        self.fake = fake;
        self
    }

    pub fn with_scope(mut self, scope: PhaseScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn kind(&self) -> AttackKind {
        self.kind
    }

    pub fn scope(&self) -> PhaseScope {
        self.scope
    }

    pub fn em_config(&self) -> Option<&EntangleMeasureConfig> {
        self.em.as_ref()
    }

    pub fn validate(&self) -> Result<(), AdversaryError> {
        if self.kind == AttackKind::EntangleMeasure && self.em.is_none() {
            return Err(AdversaryError::MissingConfig);
        }
        Ok(())
    }

    pub fn active_in(&self, phase: Phase) -> bool {
        self.kind != AttackKind::None && self.scope.covers(phase)
    }

    /// Size of the eavesdropper register appended to each attacked round.
    pub fn probe_qubits(&self) -> usize {
        match self.kind {
            AttackKind::None | AttackKind::MeasureResend | AttackKind::InterceptResend => 0,
            AttackKind::DoubleCnot => 1,
            AttackKind::EntangleMeasure => self.em.as_ref().map_or(0, |c| c.probe_qubits()),
        }
    }

    /// Initial state of the eavesdropper register, if any.
    pub fn initial_probe(&self) -> Option<StateVector> {
        match self.kind {
            AttackKind::DoubleCnot => Some(StateVector::basis(1, 0).unwrap()),
            AttackKind::EntangleMeasure => self.em.as_ref().map(|c| c.initial_probe().clone()),
            AttackKind::None | AttackKind::MeasureResend | AttackKind::InterceptResend => None,
        }
    }

    /// Appends the initial eavesdropper register to a round.
    pub fn attach_probe(&self, state: &StateVector) -> Result<StateVector, AdversaryError> {
        match self.initial_probe() {
            Some(p) => Ok(state.tensor(&p)?),
            None => Ok(state.clone()),
        }
    }

    fn probe_targets(&self, state: &StateVector) -> Vec<usize> {
        let n = state.num_qubits();
        (n - self.probe_qubits()..n).collect()
    }

    /// Attack on the leg from Alice to Bob.
    pub fn attack_forward<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        flying_qubit: usize,
        rng: &mut R,
    ) -> Result<StateVector, AdversaryError> {
        let probe = self.probe_targets(state);
        match self.kind {
            AttackKind::None => Ok(state.clone()),
            AttackKind::MeasureResend => Ok(state.measure(&[flying_qubit], &z_basis(), rng)?.state),
            AttackKind::InterceptResend => {
                // Eve walks off with the genuine particle. Tracing it out is
                // the same as a Z measurement whose result nobody reads, after
                // which the slot is overwritten with the fake.
                let kept = state.measure(&[flying_qubit], &z_basis(), rng)?;
                let fake = match self.fake {
                    FakeParticle::Zero => 0,
                    FakeParticle::Random => rng.random_range(0..2),
                };
                if kept.outcome == fake {
                    Ok(kept.state)
                } else {
                    Ok(kept.state.apply(&pauli(PauliLabel::Sigma1), &[flying_qubit])?)
                }
            }
            AttackKind::DoubleCnot => Ok(state.apply(&Unitary::cnot(), &[flying_qubit, probe[0]])?),
            AttackKind::EntangleMeasure => {
                let cfg = self.em.as_ref().ok_or(AdversaryError::MissingConfig)?;
                Ok(state.apply(cfg.forward(), &joint_targets(flying_qubit, &probe))?)
            }
        }
    }

    /// Attack on the leg from Bob back to Alice.
    pub fn attack_return<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        flying_qubit: usize,
        _rng: &mut R,
    ) -> Result<StateVector, AdversaryError> {
        let probe = self.probe_targets(state);
        match self.kind {
            AttackKind::None | AttackKind::MeasureResend | AttackKind::InterceptResend => {
                Ok(state.clone())
            }
            AttackKind::DoubleCnot => Ok(state.apply(&Unitary::cnot(), &[flying_qubit, probe[0]])?),
            AttackKind::EntangleMeasure => {
                let cfg = self.em.as_ref().ok_or(AdversaryError::MissingConfig)?;
                Ok(state.apply(cfg.ret(), &joint_targets(flying_qubit, &probe))?)
            }
        }
    }

    /// Trace distance between the eavesdropper register of `state` and its
    /// initial state; `None` when the strategy has no register.
    pub fn probe_leakage(&self, state: &StateVector) -> Result<Option<f64>, AdversaryError> {
        let Some(initial) = self.initial_probe() else {
            return Ok(None);
        };
        let rho = state.reduced_density(&self.probe_targets(state))?;
        Ok(Some(trace_distance(&rho, &DensityMatrix::from_pure(&initial))?))
    }
}

fn joint_targets(flying: usize, probe: &[usize]) -> Vec<usize> {
    std::iter::once(flying).chain(probe.iter().copied()).collect()
}
