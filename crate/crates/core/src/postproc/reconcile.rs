use super::{PostprocConfig, PostprocError};
use crate::bits::BitString;

/// Two-pass block-parity reconciliation.
///
/// Pass 1 discloses the parity of every `block_size` block. Pass 2 bisects
/// each block whose parities differ, disclosing the parity of the left half
/// at every step, and flips the located bit in Bob's copy. Returns Bob's
/// corrected string and the number of parity bits disclosed.
///
/// Blocks holding an even number of errors pass unnoticed, so any mismatch
/// left afterwards is reported as [`PostprocError::ReconciliationFailed`].
pub fn reconcile(
    alice: &BitString,
    bob: &BitString,
    config: &PostprocConfig,
) -> Result<(BitString, usize), PostprocError> {
    if alice.len() != bob.len() {
        return Err(PostprocError::LengthMismatch {
            alice: alice.len(),
            bob: bob.len(),
        });
    }
    if config.block_size == 0 {
        return Err(PostprocError::InvalidBlockSize);
    }
    let mut out = bob.clone();
    let mut leaked = 0;
    let blocks: Vec<(usize, usize)> = (0..alice.len())
        .step_by(config.block_size)
        .map(|s| (s, (s + config.block_size).min(alice.len())))
        .collect();

    let mut differing = Vec::new();
    for &(lo, hi) in &blocks {
        leaked += 1;
        if alice.parity(lo..hi) != out.parity(lo..hi) {
            differing.push((lo, hi));
        }
    }

    for (mut lo, mut hi) in differing {
        while hi - lo > 1 {
            let mid = lo + (hi - lo).div_ceil(2);
            leaked += 1;
            if alice.parity(lo..mid) != out.parity(lo..mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.flip(lo);
    }

    let residual = alice.hamming(&out);
    if residual > 0 {
        return Err(PostprocError::ReconciliationFailed { residual });
    }
    Ok((out, leaked))
}
