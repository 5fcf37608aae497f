use rand::Rng;

use super::PostprocError;
use crate::bits::BitString;
use crate::rng::seeded;

/// Diagonal bits `r_0 .. r_{m+N-2}` of the Toeplitz matrix for `hash_seed`.
fn diagonals(m: usize, n: usize, hash_seed: u64) -> Vec<bool> {
    let mut rng = seeded(hash_seed);
    (0..(m + n).saturating_sub(1)).map(|_| rng.random_bool(0.5)).collect()
}

/// Compresses `bits` to `m` bits with a seeded `m × N` Toeplitz matrix over
/// GF(2), `T[i][j] = r[i − j + N − 1]`.
pub fn privacy_amplify(
    bits: &BitString,
    leaked: usize,
    m: usize,
    hash_seed: u64,
) -> Result<BitString, PostprocError> {
    let n = bits.len();
    let available = n.saturating_sub(leaked);
    if m > available {
        return Err(PostprocError::OutputTooLong { requested: m, available });
    }
    if m == 0 {
        return Ok(BitString::new());
    }
    let r = diagonals(m, n, hash_seed);
    Ok((0..m)
        .map(|i| (0..n).filter(|&j| bits.get(j)).fold(false, |acc, j| acc ^ r[i + n - 1 - j]))
        .collect())
}

/// Column `j` of the `m × n` Toeplitz matrix used by [`privacy_amplify`].
pub fn toeplitz_column(m: usize, n: usize, j: usize, hash_seed: u64) -> BitString {
    let r = diagonals(m, n, hash_seed);
    (0..m).map(|i| r[i + n - 1 - j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn xor(a: &BitString, b: &BitString) -> BitString {
        a.iter().zip(b.iter()).map(|(x, y)| x ^ y).collect()
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let bits: BitString = (0..100).map(|i| i % 3 == 0).collect();
        let a = privacy_amplify(&bits, 10, 50, 7).unwrap();
        assert_eq!(a, privacy_amplify(&bits, 10, 50, 7).unwrap());
        assert_ne!(a, privacy_amplify(&bits, 10, 50, 8).unwrap());
        assert_eq!(a.len(), 50);
    }

    #[test]
    fn bounds() {
        let bits = BitString::zeros(20);
        assert!(privacy_amplify(&bits, 0, 0, 1).unwrap().is_empty());
        assert!(privacy_amplify(&bits, 5, 15, 1).is_ok());
        assert_eq!(
            privacy_amplify(&bits, 5, 16, 1),
            Err(PostprocError::OutputTooLong { requested: 16, available: 15 })
        );
        assert!(privacy_amplify(&BitString::new(), 0, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn toeplitz_structure() {
        // constant along diagonals: T[i][j] == T[i+1][j+1]
        let (m, n) = (6, 9);
        let cols: Vec<BitString> = (0..n).map(|j| toeplitz_column(m, n, j, 3)).collect();
        for i in 0..m - 1 {
            for j in 0..n - 1 {
                assert_eq!(cols[j].get(i), cols[j + 1].get(i + 1));
            }
        }
    }

    proptest! {
        #[test]
        fn linear_over_gf2(
            x in proptest::collection::vec(any::<bool>(), 1..120),
            y_seed in any::<u64>(),
            seed in any::<u64>(),
        ) {
            let x: BitString = x.into_iter().collect();
            let n = x.len();
            let y: BitString = {
                let mut rng = seeded(y_seed);
                (0..n).map(|_| rng.random_bool(0.5)).collect()
            };
            let m = n / 2;
            let h = |v: &BitString| privacy_amplify(v, 0, m, seed).unwrap();
            prop_assert_eq!(h(&xor(&x, &y)), xor(&h(&x), &h(&y)));
        }

        #[test]
        fn single_flip_moves_by_one_column(
            x in proptest::collection::vec(any::<bool>(), 1..120),
            pick in any::<prop::sample::Index>(),
            seed in any::<u64>(),
        ) {
            let x: BitString = x.into_iter().collect();
            let n = x.len();
            let m = n.div_ceil(2);
            let j = pick.index(n);
            let mut flipped = x.clone();
            flipped.flip(j);
            let diff = xor(&privacy_amplify(&x, 0, m, seed).unwrap(), &privacy_amplify(&flipped, 0, m, seed).unwrap());
            prop_assert_eq!(diff, toeplitz_column(m, n, j, seed));
        }
    }
}
