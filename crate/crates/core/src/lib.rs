//! Simulation of two-party semiquantum key distribution over the GHZ-like
//! state `|G001⟩`.
//!
//! Alice holds full quantum abilities, Bob only reflects (CTRL) or measures
//! and resends in the computational basis (SIFT). The crate is layered:
//!
//! - [`qsim`]: a small dense statevector kernel.
//! - [`states`]: the GHZ-like family, Bell states and the σ0/σ1 operations.
//! - [`protocol`]: the two round trips, Alice's checks, sifting and a full session.
//! - [`adversary`]: eavesdropper strategies, closed-form and Monte Carlo
//!   detection rates, and the entangle-measure leakage analyzer.
//! - [`postproc`]: parity reconciliation, Toeplitz privacy amplification and
//!   qubit-efficiency accounting.

pub mod adversary;
pub mod bits;
pub mod postproc;
pub mod protocol;
pub mod qsim;
pub mod rng;
pub mod states;

pub use bits::BitString;
