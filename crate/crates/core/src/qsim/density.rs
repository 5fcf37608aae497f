use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{QsimError, StateVector, ALGEBRA_TOL};

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and eigenvalues ≥ −[`ALGEBRA_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, QsimError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QsimError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let herm = (&matrix - matrix.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > ALGEBRA_TOL {
            return Err(QsimError::InvalidDensity("not Hermitian"));
        }
        if (matrix.trace() - Complex64::new(1.0, 0.0)).norm() > ALGEBRA_TOL {
            return Err(QsimError::InvalidDensity("trace is not 1"));
        }
        let rho = Self { matrix };
        if rho.eigenvalues().iter().any(|&l| l < -ALGEBRA_TOL) {
            return Err(QsimError::InvalidDensity("negative eigenvalue"));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            matrix: &v * v.adjoint(),
        }
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `½‖a − b‖₁`, computed from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QsimError> {
    if a.dim() != b.dim() {
        return Err(QsimError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = &a.matrix - &b.matrix;
    let d = 0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}
