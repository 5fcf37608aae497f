//! Named states, bases and single-qubit operations used by the protocol.
//!
//! Every state is built from its exact amplitudes (±1/2 for the GHZ-like
//! family, ±1/√2 for Bell states) rather than synthesized from gates.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qsim::{MeasurementBasis, StateVector, Unitary};

/// Label `abc` of a GHZ-like state `|G_abc⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GhzLikeLabel {
    pub a: u8,
    pub b: u8,
    pub c: u8,
}

impl GhzLikeLabel {
    /// The protocol's resource state `|G001⟩`.
    pub const G001: GhzLikeLabel = GhzLikeLabel { a: 0, b: 0, c: 1 };

    pub fn new(a: u8, b: u8, c: u8) -> Option<Self> {
        (a <= 1 && b <= 1 && c <= 1).then_some(Self { a, b, c })
    }

    /// Label for index `4a + 2b + c`.
    pub fn from_index(index: usize) -> Option<Self> {
        (index < 8).then_some(Self {
            a: (index >> 2) as u8 & 1,
            b: (index >> 1) as u8 & 1,
            c: index as u8 & 1,
        })
    }

    pub fn index(self) -> usize {
        (self.a as usize) << 2 | (self.b as usize) << 1 | self.c as usize
    }

    pub fn all() -> impl Iterator<Item = GhzLikeLabel> {
        (0..8).filter_map(Self::from_index)
    }
}

impl fmt::Display for GhzLikeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}{}{}", self.a, self.b, self.c)
    }
}

// Sign of the amplitude on |xyz⟩ for each |G_abc⟩, rows indexed by abc.
// Zero marks an absent term.
const GHZ_LIKE_SIGNS: [[i8; 8]; 8] = [
    // 000 001 010 011 100 101 110 111
    [1, 0, 0, 1, 0, 1, 1, 0],    // G000
    [0, 1, 1, 0, 1, 0, 0, 1],    // G001
    [1, 0, 0, -1, 0, -1, 1, 0],  // G010
    [0, 1, -1, 0, -1, 0, 0, 1],  // G011
    [1, 0, 0, -1, 0, 1, -1, 0],  // G100
    [0, 1, -1, 0, 1, 0, 0, -1],  // G101
    [1, 0, 0, 1, 0, -1, -1, 0],  // G110
    [0, 1, 1, 0, -1, 0, 0, -1],  // G111
];

/// `|G_abc⟩`; four amplitudes of magnitude ½.
pub fn ghz_like(label: GhzLikeLabel) -> StateVector {
    let amps: Vec<f64> = GHZ_LIKE_SIGNS[label.index()]
        .iter()
        .map(|&s| 0.5 * s as f64)
        .collect();
    StateVector::from_real(&amps).expect("GHZ-like table rows are normalized")
}

/// The eight GHZ-like states, ordered by label index, labelled `G000`…`G111`.
pub fn ghz_like_basis() -> MeasurementBasis {
    let labels: Vec<GhzLikeLabel> = GhzLikeLabel::all().collect();
    MeasurementBasis::new(
        labels.iter().map(|&l| ghz_like(l)).collect(),
        labels.iter().map(|l| l.to_string()).collect(),
    )
    .expect("GHZ-like states are orthonormal")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    /// Fixed measurement order: φ+, φ−, ψ+, ψ−.
    pub const ORDER: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn index(self) -> usize {
        Self::ORDER.iter().position(|&l| l == self).unwrap()
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ORDER.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn bell(label: BellLabel) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let amps = match label {
        BellLabel::PhiPlus => [h, 0.0, 0.0, h],
        BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
        BellLabel::PsiPlus => [0.0, h, h, 0.0],
        BellLabel::PsiMinus => [0.0, h, -h, 0.0],
    };
    StateVector::from_real(&amps).expect("Bell states are normalized")
}

pub fn bell_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        BellLabel::ORDER.iter().map(|&l| bell(l)).collect(),
        BellLabel::ORDER.iter().map(|l| l.to_string()).collect(),
    )
    .expect("Bell states are orthonormal")
}

/// The two single-qubit operations Alice applies before the second round trip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLabel {
    /// Identity.
    Sigma0,
    /// Bit flip `|0⟩⟨1| + |1⟩⟨0|`.
    Sigma1,
}

pub fn pauli(label: PauliLabel) -> Unitary {
    match label {
        PauliLabel::Sigma0 => Unitary::identity(2),
        PauliLabel::Sigma1 => Unitary::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
    }
}

/// `{|0⟩, |1⟩}` labelled `"0"` and `"1"`.
pub fn z_basis() -> MeasurementBasis {
    MeasurementBasis::computational(1).expect("one qubit")
}

/// `‖|G001⟩ − (|0⟩|zero_branch⟩ + |1⟩|one_branch⟩)/√2‖`.
pub fn g001_decomposition_residual(zero_branch: BellLabel, one_branch: BellLabel) -> f64 {
    let zero = StateVector::basis(1, 0).unwrap().tensor(&bell(zero_branch)).unwrap();
    let one = StateVector::basis(1, 1).unwrap().tensor(&bell(one_branch)).unwrap();
    let amps = zero
        .amplitudes()
        .iter()
        .zip(one.amplitudes())
        .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
        .collect::<Vec<_>>();
    // the sum need not be normalized when the branches are wrong
    ghz_like(GhzLikeLabel::G001)
        .amplitudes()
        .iter()
        .zip(&amps)
        .map(|(g, s)| (g - s).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Checks `|G001⟩ = (|0⟩|ψ+⟩ + |1⟩|φ+⟩)/√2` to within 1e-12.
pub fn verify_g001_decomposition() -> bool {
    g001_decomposition_residual(BellLabel::PsiPlus, BellLabel::PhiPlus) < 1e-12
}
