//! The two-phase protocol.
//!
//! Phase 1 sends the first particle of each `|G001⟩` to Bob and back; Alice
//! checks CTRL rounds in the GHZ-like basis and a sample of SIFT rounds with a
//! Z measurement plus a Bell measurement, then sifts the remaining SIFT rounds
//! into `M_A1`/`M_B1`. Phase 2 corrects each surviving pair to `|φ+⟩`, sends
//! its first qubit on a second round trip, checks CTRL rounds in the Bell basis
//! and sampled SIFT rounds in Z, and sifts `M_A2`/`M_B2`.
//!
//! Register layout: in phase 1 qubits `0, 1, 2` are the particles from
//! `S1, S2, S3`; in phase 2 qubits `0, 1` are the particles from `S2, S3`. In
//! both phases qubit `0` is the one in flight and any eavesdropper register
//! is appended after the protocol qubits.

mod alice;
mod bob;
mod session;

pub use alice::{
    alice_apply_correction, alice_check_ctrl_phase1, alice_check_ctrl_phase2,
    alice_check_sift_phase1, alice_check_sift_phase2, expected_pair_for_bit, sift_phase1,
    CheckOutcome, Phase1Sift,
};
pub use bob::{bob_act, plan_bob_actions};
pub use session::{run_session, run_session_with_rng, FinalKeys, KeyMaterial, SessionResult};

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::postproc::PostprocError;
use crate::qsim::QsimError;

/// Index of the travelling qubit in both phases.
pub const FLYING_QUBIT: usize = 0;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot mark {ctrl} of {total} positions as CTRL")]
    CtrlCountOutOfRange { ctrl: usize, total: usize },

    #[error("sifting expected {expected} surviving positions, found {found}")]
    SurvivorCount { expected: usize, found: usize },

    #[error(transparent)]
    Qsim(#[from] QsimError),

    #[error(transparent)]
    Adversary(#[from] AdversaryError),

    #[error(transparent)]
    Postproc(#[from] PostprocError),
}

/// Session sizing and seed.
///
/// Phase 1 uses `4(n+δ+ν)` GHZ-like states; phase 2 carries the `2(n+ν)`
/// sifted pairs; the session yields `3n+2ν` INFO bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolParams {
    pub n: usize,
    pub delta: usize,
    pub nu: usize,
    pub seed: u64,
}

impl ProtocolParams {
    pub fn new(n: usize, delta: usize, nu: usize, seed: u64) -> Result<Self, ProtocolError> {
        let p = Self { n, delta, nu, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n == 0 || self.delta == 0 || self.nu == 0 {
            return Err(ProtocolError::InvalidParams(format!(
                "n, delta and nu must be positive (got {}, {}, {})",
                self.n, self.delta, self.nu
            )));
        }
        Ok(())
    }

    pub fn phase1_positions(&self) -> usize {
        4 * (self.n + self.delta + self.nu)
    }

    pub fn phase1_ctrl(&self) -> usize {
        2 * (self.n + self.delta + self.nu)
    }

    pub fn phase1_checked_sift(&self) -> usize {
        2 * self.delta
    }

    /// Pairs surviving phase 1, i.e. `|M_A1|`.
    pub fn phase2_positions(&self) -> usize {
        2 * (self.n + self.nu)
    }

    pub fn phase2_ctrl(&self) -> usize {
        self.n + self.nu
    }

    pub fn phase2_checked_sift(&self) -> usize {
        self.nu
    }

    pub fn info_length(&self) -> usize {
        3 * self.n + 2 * self.nu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    One,
    Two,
}

impl Phase {
    pub fn number(self) -> u8 {
        match self {
            Phase::One => 1,
            Phase::Two => 2,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

/// Bob's choice for one received particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BobAction {
    /// Reflect undisturbed.
    #[serde(rename = "CTRL")]
    Ctrl,
    /// Measure in Z and resend a fresh particle in the observed state.
    #[serde(rename = "SIFT")]
    Sift,
}

/// One position of one phase, as seen in the public transcript.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundRecord {
    pub position: usize,
    pub phase: Phase,
    pub action: BobAction,
    /// Bob's Z result; present exactly for SIFT rounds.
    pub bob_bit: Option<u8>,
    pub checked: bool,
    /// Present exactly for checked rounds.
    pub check_passed: Option<bool>,
    pub alice_outcome: Option<String>,
    pub kept_for_key: bool,
}

impl RoundRecord {
    pub(crate) fn new(position: usize, phase: Phase, action: BobAction, bob_bit: Option<u8>) -> Self {
        Self {
            position,
            phase,
            action,
            bob_bit,
            checked: false,
            check_passed: None,
            alice_outcome: None,
            kept_for_key: false,
        }
    }

    /// Checks the record's field invariants.
    pub fn is_consistent(&self) -> bool {
        let bit_ok = self.bob_bit.is_some() == (self.action == BobAction::Sift);
        let check_ok = self.check_passed.is_some() == self.checked;
        let key_ok = !self.kept_for_key || (!self.checked && self.action == BobAction::Sift);
        bit_ok && check_ok && key_ok
    }
}
