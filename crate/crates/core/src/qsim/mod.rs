//! Minimal dense statevector kernel.
//!
//! Registers are small (at most [`MAX_QUBITS`] qubits) and every operation is
//! exact dense linear algebra. Qubits are addressed by zero-based position and
//! qubit `0` is the most significant bit of the amplitude index, so the
//! amplitude of `|q0 q1 q2⟩` sits at index `q0·4 + q1·2 + q2` and kets read
//! left to right exactly as written.

mod basis;
mod density;
mod random;
mod state;
mod unitary;

pub use basis::MeasurementBasis;
pub use density::{trace_distance, DensityMatrix};
pub use random::random_unitary;
pub use state::{Measurement, StateVector};
pub use unitary::Unitary;

pub use num_complex::Complex64;

use thiserror::Error;

/// Largest register the kernel will build.
pub const MAX_QUBITS: usize = 6;

/// Tolerance for algebraic identities (unitarity, orthonormality, normalization).
pub const ALGEBRA_TOL: f64 = 1e-10;

/// Born probabilities below this are treated as exactly zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { num_qubits: usize, index: usize },

    #[error("register of {0} qubits exceeds the kernel limit of {MAX_QUBITS}")]
    TooManyQubits(usize),

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { num_qubits: usize, qubit: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("basis states are not orthonormal (max deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),

    #[error("projection has zero probability")]
    ZeroProbability,

    #[error("empty qubit selection")]
    EmptySelection,
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize, QsimError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QsimError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Offsets into the full index space for each sub-index over `targets`.
///
/// `targets[0]` is the most significant bit of the sub-index.
pub(crate) fn target_offsets(num_qubits: usize, targets: &[usize]) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|sub| {
            targets.iter().enumerate().fold(0, |acc, (j, &q)| {
                let bit = (sub >> (k - 1 - j)) & 1;
                acc | (bit << (num_qubits - 1 - q))
            })
        })
        .collect()
}

/// All full indices whose target bits are zero, in increasing order.
pub(crate) fn rest_bases(num_qubits: usize, targets: &[usize]) -> Vec<usize> {
    let mask = targets
        .iter()
        .fold(0usize, |m, &q| m | (1 << (num_qubits - 1 - q)));
    (0..1usize << num_qubits).filter(|i| i & mask == 0).collect()
}

pub(crate) fn check_targets(num_qubits: usize, targets: &[usize]) -> Result<(), QsimError> {
    if targets.is_empty() {
        return Err(QsimError::EmptySelection);
    }
    for (i, &q) in targets.iter().enumerate() {
        if q >= num_qubits {
            return Err(QsimError::QubitOutOfRange { num_qubits, qubit: q });
        }
        if targets[..i].contains(&q) {
            return Err(QsimError::DuplicateTarget(q));
        }
    }
    Ok(())
}
