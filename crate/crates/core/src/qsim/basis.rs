use super::{QsimError, StateVector, ALGEBRA_TOL};

/// An orthonormal family of `2^k` states over `k` qubits with outcome labels.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    qubit_count: usize,
    states: Vec<StateVector>,
    labels: Vec<String>,
}

impl MeasurementBasis {
    pub fn new(states: Vec<StateVector>, labels: Vec<String>) -> Result<Self, QsimError> {
        let first = states.first().ok_or(QsimError::EmptySelection)?;
        let qubit_count = first.num_qubits();
        let dim = first.dim();
        if states.len() != dim {
            return Err(QsimError::DimensionMismatch {
                expected: dim,
                found: states.len(),
            });
        }
        if labels.len() != states.len() {
            return Err(QsimError::DimensionMismatch {
                expected: states.len(),
                found: labels.len(),
            });
        }
        let mut worst = 0.0f64;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                let ip = a.inner(b)?;
                worst = worst.max((ip - expect).norm());
            }
        }
        if worst > ALGEBRA_TOL {
            return Err(QsimError::NotOrthonormal(worst));
        }
        Ok(Self {
            qubit_count,
            states,
            labels,
        })
    }

    /// The computational basis over `k` qubits, labelled by bit strings.
    pub fn computational(k: usize) -> Result<Self, QsimError> {
        let states = (0..1usize << k)
            .map(|i| StateVector::basis(k, i))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = (0..1usize << k).map(|i| format!("{i:0k$b}")).collect();
        Self::new(states, labels)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, outcome: usize) -> &str {
        &self.labels[outcome]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b).unwrap() - expect).norm());
            }
        }
        worst
    }
}
