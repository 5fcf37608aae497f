use rand::Rng;

use super::AdversaryError;
use crate::qsim::{random_unitary, StateVector, Unitary, MAX_QUBITS};
use crate::states::{pauli, PauliLabel};

/// Largest supported probe dimension.
pub const MAX_PROBE_DIM: usize = 8;

/// A two-unitary entangle-measure attack with a shared probe.
///
/// Both unitaries act on `flying ⊗ probe`, with the flying qubit as the most
/// significant factor, so their dimension is `2 · probe_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntangleMeasureConfig {
    probe_dim: usize,
    forward: Unitary,
    ret: Unitary,
    initial_probe: StateVector,
}

impl EntangleMeasureConfig {
    pub fn new(
        probe_dim: usize,
        forward: Unitary,
        ret: Unitary,
        initial_probe: StateVector,
    ) -> Result<Self, AdversaryError> {
        if !(2..=MAX_PROBE_DIM).contains(&probe_dim) || !probe_dim.is_power_of_two() {
            return Err(AdversaryError::InvalidConfig(format!(
                "probe_dim must be 2, 4 or 8 (got {probe_dim})"
            )));
        }
        for (name, u) in [("forward", &forward), ("return", &ret)] {
            if u.dim() != 2 * probe_dim {
                return Err(AdversaryError::InvalidConfig(format!(
                    "{name} unitary has dimension {}, expected {}",
                    u.dim(),
                    2 * probe_dim
                )));
            }
        }
        if initial_probe.dim() != probe_dim {
            return Err(AdversaryError::InvalidConfig(format!(
                "initial probe has dimension {}, expected {probe_dim}",
                initial_probe.dim()
            )));
        }
        debug_assert!(3 + initial_probe.num_qubits() <= MAX_QUBITS);
        Ok(Self {
            probe_dim,
            forward,
            ret,
            initial_probe,
        })
    }

    /// No interaction: both unitaries are the identity, probe starts in `|0⟩`.
    pub fn identity(probe_dim: usize) -> Result<Self, AdversaryError> {
        Self::new(
            probe_dim,
            Unitary::identity(2 * probe_dim),
            Unitary::identity(2 * probe_dim),
            zero_probe(probe_dim)?,
        )
    }

    /// Forward leg rotates only the probe (`I ⊗ V`); return leg is the identity.
    pub fn probe_rotation(rotation: Unitary) -> Result<Self, AdversaryError> {
        let probe_dim = rotation.dim();
        Self::new(
            probe_dim,
            pauli(PauliLabel::Sigma0).kron(&rotation),
            Unitary::identity(2 * probe_dim),
            zero_probe(probe_dim)?,
        )
    }

    /// CNOT from the flying qubit onto a one-qubit probe on the forward leg
    /// only.
    pub fn single_cnot() -> Self {
        Self::new(2, Unitary::cnot(), Unitary::identity(4), zero_probe(2).unwrap()).unwrap()
    }

    /// Haar-random forward and return unitaries, probe starting in `|0⟩`.
    pub fn haar_random<R: Rng + ?Sized>(probe_dim: usize, rng: &mut R) -> Result<Self, AdversaryError> {
        let forward = random_unitary(2 * probe_dim, rng)?;
        let ret = random_unitary(2 * probe_dim, rng)?;
        Self::new(probe_dim, forward, ret, zero_probe(probe_dim)?)
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn probe_qubits(&self) -> usize {
        self.probe_dim.trailing_zeros() as usize
    }

    pub fn forward(&self) -> &Unitary {
        &self.forward
    }

    pub fn ret(&self) -> &Unitary {
        &self.ret
    }

    pub fn initial_probe(&self) -> &StateVector {
        &self.initial_probe
    }
}

fn zero_probe(probe_dim: usize) -> Result<StateVector, AdversaryError> {
    if probe_dim == 0 || !probe_dim.is_power_of_two() {
        return Err(AdversaryError::InvalidConfig(format!(
            "probe_dim must be a power of two (got {probe_dim})"
        )));
    }
    Ok(StateVector::basis(probe_dim.trailing_zeros() as usize, 0)?)
}
