//! Classical post-processing of the INFO bits and the qubit-efficiency
//! accounting.
//!
//! Reconciliation is a two-pass block-parity exchange and privacy
//! amplification is Toeplitz hashing over GF(2).

mod amplify;
mod efficiency;
mod reconcile;

pub use amplify::{privacy_amplify, toeplitz_column};
pub use efficiency::{count_consumed_qubits, qubit_efficiency, EfficiencyAccount, QubitTally};
pub use reconcile::reconcile;

use thiserror::Error;

use crate::bits::BitString;
use crate::protocol::FinalKeys;

/// Bits held back from the final key on top of the disclosed parities.
pub const SAFETY_MARGIN: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PostprocError {
    #[error("bit strings differ in length ({alice} vs {bob})")]
    LengthMismatch { alice: usize, bob: usize },

    #[error("block size must be positive")]
    InvalidBlockSize,

    #[error("reconciliation left {residual} mismatched bits")]
    ReconciliationFailed { residual: usize },

    #[error("requested {requested} output bits but only {available} are secret")]
    OutputTooLong { requested: usize, available: usize },

    #[error("n, delta and nu must be positive")]
    NonPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PostprocConfig {
    pub block_size: usize,
    /// Final key length; `None` keeps `len − leaked − SAFETY_MARGIN`.
    pub output_length: Option<usize>,
    pub hash_seed: u64,
}

impl Default for PostprocConfig {
    fn default() -> Self {
        Self {
            block_size: 8,
            output_length: None,
            hash_seed: 0,
        }
    }
}

/// Reconciles Bob's string to Alice's and hashes both down to the final key.
pub fn finalize(
    alice: &BitString,
    bob: &BitString,
    config: &PostprocConfig,
) -> Result<FinalKeys, PostprocError> {
    let (corrected, leaked) = reconcile(alice, bob, config)?;
    let m = config
        .output_length
        .unwrap_or_else(|| alice.len().saturating_sub(leaked + SAFETY_MARGIN));
    Ok(FinalKeys {
        alice: privacy_amplify(alice, leaked, m, config.hash_seed)?,
        bob: privacy_amplify(&corrected, leaked, m, config.hash_seed)?,
        leaked_bits: leaked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn random_bits(len: usize, seed: u64) -> BitString {
        let mut rng = seeded(seed);
        (0..len).map(|_| rng.random_bool(0.5)).collect()
    }

    #[test]
    fn honest_pipeline_agrees() {
        let a = random_bits(208, 1);
        let keys = finalize(&a, &a, &PostprocConfig::default()).unwrap();
        assert_eq!(keys.alice, keys.bob);
        assert_eq!(keys.leaked_bits, 26);
        assert_eq!(keys.alice.len(), 208 - 26 - SAFETY_MARGIN);
    }

    #[test]
    fn single_error_is_repaired() {
        let a = random_bits(208, 2);
        let mut b = a.clone();
        b.flip(100);
        let keys = finalize(&a, &b, &PostprocConfig::default()).unwrap();
        assert_eq!(keys.alice, keys.bob);
        assert_eq!(keys.leaked_bits, 26 + 3);
    }

    #[test]
    fn explicit_length_is_bounded() {
        let a = random_bits(64, 3);
        let cfg = PostprocConfig {
            output_length: Some(60),
            ..Default::default()
        };
        assert_eq!(
            finalize(&a, &a, &cfg),
            Err(PostprocError::OutputTooLong { requested: 60, available: 56 })
        );
    }

    #[test]
    fn short_input_yields_empty_key() {
        let a = random_bits(5, 4);
        let keys = finalize(&a, &a, &PostprocConfig::default()).unwrap();
        assert!(keys.alice.is_empty() && keys.bob.is_empty());
    }
}
