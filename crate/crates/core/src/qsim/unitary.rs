use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{qubits_for_dim, QsimError, ALGEBRA_TOL};

/// A square unitary matrix acting on a power-of-two dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    /// Wraps `matrix`, checking `U†U = I` within [`ALGEBRA_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, QsimError> {
        Self::with_tolerance(matrix, ALGEBRA_TOL)
    }

    /// Wraps `matrix`, checking `U†U = I` entrywise within `tol`.
    pub fn with_tolerance(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self, QsimError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QsimError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        qubits_for_dim(matrix.nrows())?;
        let dev = unitarity_deviation(&matrix);
        if dev > tol {
            return Err(QsimError::NotUnitary(dev));
        }
        Ok(Self { matrix })
    }

    /// Builds from row-major real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self, QsimError> {
        if entries.len() != dim * dim {
            return Err(QsimError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_iterator(
            dim,
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Two-qubit CNOT; the first qubit controls, the second is the target.
    pub fn cnot() -> Self {
        Self::permutation(&[0, 1, 3, 2])
    }

    pub fn swap() -> Self {
        Self::permutation(&[0, 2, 1, 3])
    }

    /// Permutation matrix sending basis state `i` to `image[i]`.
    fn permutation(image: &[usize]) -> Self {
        let d = image.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &j) in image.iter().enumerate() {
            m[(j, i)] = Complex64::new(1.0, 0.0);
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Unitary) -> Result<Self, QsimError> {
        if self.dim() != other.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the high-order qubits.
    pub fn kron(&self, other: &Unitary) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }
}

fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m.adjoint() * m;
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    worst
}
