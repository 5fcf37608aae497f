use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{
    check_targets, qubits_for_dim, rest_bases, target_offsets, DensityMatrix, MeasurementBasis,
    QsimError, Unitary, ALGEBRA_TOL, MAX_QUBITS, ZERO_PROBABILITY,
};

/// A normalized pure state over an ordered qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Result of a projective measurement on a qubit subset.
#[derive(Clone, Debug)]
pub struct Measurement {
    /// Index of the observed basis state within the measurement basis.
    pub outcome: usize,
    /// Born probability of the observed outcome.
    pub probability: f64,
    /// Post-measurement state over the full register.
    pub state: StateVector,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QsimError> {
        if num_qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(num_qubits));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QsimError::IndexOutOfRange { num_qubits, index });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Builds a state from explicit amplitudes. The vector must already be
    /// normalized to within [`ALGEBRA_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let num_qubits = qubits_for_dim(amps.len())?;
        if num_qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(num_qubits));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ALGEBRA_TOL {
            return Err(QsimError::NotNormalized(norm_sqr));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self, QsimError> {
        Self::from_amplitudes(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < ZERO_PROBABILITY {
            return Err(QsimError::ZeroProbability);
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance `‖self − other‖` between amplitude vectors.
    pub fn distance(&self, other: &StateVector) -> Result<f64, QsimError> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Kronecker product; `self` supplies the high-order qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QsimError> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(num_qubits));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { num_qubits, amps })
    }

    /// Applies `u` to the ordered `targets`; `targets[0]` is the most
    /// significant qubit of `u`'s index space. Other qubits are untouched.
    pub fn apply(&self, u: &Unitary, targets: &[usize]) -> Result<StateVector, QsimError> {
        check_targets(self.num_qubits, targets)?;
        let k = targets.len();
        if u.dim() != 1 << k {
            return Err(QsimError::DimensionMismatch {
                expected: 1 << k,
                found: u.dim(),
            });
        }
        let offsets = target_offsets(self.num_qubits, targets);
        let m = u.matrix();
        let mut out = self.amps.clone();
        let mut local = vec![Complex64::new(0.0, 0.0); offsets.len()];
        for base in rest_bases(self.num_qubits, targets) {
            for (s, off) in offsets.iter().enumerate() {
                local[s] = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base + off] = (0..local.len()).map(|c| m[(r, c)] * local[c]).sum();
            }
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amps: out,
        })
    }

    /// Outcome probabilities of measuring `targets` in `basis`.
    ///
    /// Probabilities below [`ZERO_PROBABILITY`] are set to zero and the rest
    /// renormalized, so impossible outcomes are never sampled.
    pub fn born_distribution(
        &self,
        targets: &[usize],
        basis: &MeasurementBasis,
    ) -> Result<Vec<f64>, QsimError> {
        self.check_basis(targets, basis)?;
        let offsets = target_offsets(self.num_qubits, targets);
        let bases = rest_bases(self.num_qubits, targets);
        let mut probs: Vec<f64> = basis
            .states()
            .iter()
            .map(|b| {
                bases
                    .iter()
                    .map(|&base| Self::overlap(&self.amps, base, &offsets, b).norm_sqr())
                    .sum()
            })
            .collect();
        for p in probs.iter_mut() {
            if *p < ZERO_PROBABILITY {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= total;
        }
        Ok(probs)
    }

    /// Projects `targets` onto basis state `outcome` and renormalizes.
    ///
    /// Returns the (unthresholded) branch probability together with the
    /// collapsed state, or [`QsimError::ZeroProbability`] for a null branch.
    pub fn project(
        &self,
        targets: &[usize],
        basis: &MeasurementBasis,
        outcome: usize,
    ) -> Result<(f64, StateVector), QsimError> {
        self.check_basis(targets, basis)?;
        let b = basis.states().get(outcome).ok_or(QsimError::IndexOutOfRange {
            num_qubits: basis.qubit_count(),
            index: outcome,
        })?;
        let offsets = target_offsets(self.num_qubits, targets);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        let mut prob = 0.0;
        for base in rest_bases(self.num_qubits, targets) {
            let c = Self::overlap(&self.amps, base, &offsets, b);
            prob += c.norm_sqr();
            for (s, off) in offsets.iter().enumerate() {
                out[base + off] = b.amps[s] * c;
            }
        }
        if prob < ZERO_PROBABILITY {
            return Err(QsimError::ZeroProbability);
        }
        let scale = prob.sqrt();
        for a in out.iter_mut() {
            *a /= scale;
        }
        Ok((
            prob,
            StateVector {
                num_qubits: self.num_qubits,
                amps: out,
            },
        ))
    }

    /// Samples a projective measurement of `targets` in `basis` and collapses.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        targets: &[usize],
        basis: &MeasurementBasis,
        rng: &mut R,
    ) -> Result<Measurement, QsimError> {
        let probs = self.born_distribution(targets, basis)?;
        let outcome = sample_index(&probs, rng);
        let (_, state) = self.project(targets, basis, outcome)?;
        Ok(Measurement {
            outcome,
            probability: probs[outcome],
            state,
        })
    }

    /// Measures `qubits` in the computational basis and removes them from the
    /// register. Returns the observed bits (in `qubits` order) and the state of
    /// the remaining qubits, which keep their relative order.
    pub fn measure_and_discard<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(Vec<u8>, StateVector), QsimError> {
        check_targets(self.num_qubits, qubits)?;
        let basis = MeasurementBasis::computational(qubits.len())?;
        let m = self.measure(qubits, &basis, rng)?;
        let k = qubits.len();
        let bits: Vec<u8> = (0..k).map(|j| ((m.outcome >> (k - 1 - j)) & 1) as u8).collect();
        let keep: Vec<usize> = (0..self.num_qubits).filter(|q| !qubits.contains(q)).collect();
        if keep.is_empty() {
            return Err(QsimError::EmptySelection);
        }
        let fixed = target_offsets(self.num_qubits, qubits)[m.outcome];
        let keep_offsets = target_offsets(self.num_qubits, &keep);
        let amps = keep_offsets.iter().map(|off| m.state.amps[fixed + off]).collect();
        Ok((bits, StateVector::normalized(amps)?))
    }

    /// Partial trace onto the ordered qubit list `keep`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, QsimError> {
        check_targets(self.num_qubits, keep)?;
        let offsets = target_offsets(self.num_qubits, keep);
        let d = offsets.len();
        let mut rho = DMatrix::<Complex64>::zeros(d, d);
        for base in rest_bases(self.num_qubits, keep) {
            for i in 0..d {
                let ai = self.amps[base + offsets[i]];
                for j in 0..d {
                    rho[(i, j)] += ai * self.amps[base + offsets[j]].conj();
                }
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(rho))
    }

    fn overlap(
        amps: &[Complex64],
        base: usize,
        offsets: &[usize],
        b: &StateVector,
    ) -> Complex64 {
        offsets
            .iter()
            .zip(&b.amps)
            .map(|(off, bs)| bs.conj() * amps[base + off])
            .sum()
    }

    fn check_basis(&self, targets: &[usize], basis: &MeasurementBasis) -> Result<(), QsimError> {
        check_targets(self.num_qubits, targets)?;
        if basis.qubit_count() != targets.len() {
            return Err(QsimError::DimensionMismatch {
                expected: targets.len(),
                found: basis.qubit_count(),
            });
        }
        Ok(())
    }

    fn same_dim(&self, other: &StateVector) -> Result<(), QsimError> {
        if self.dim() != other.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
