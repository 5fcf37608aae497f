use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{qubits_for_dim, QsimError, Unitary};

/// Haar-distributed unitary of size `dim × dim`.
///
/// QR-factorizes a matrix of i.i.d. standard complex Gaussians and fixes the
/// phase freedom by rescaling each column of `Q` with `r_ii / |r_ii|`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Unitary, QsimError> {
    qubits_for_dim(dim)?;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Unitary::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let u = random_unitary(4, &mut rng).unwrap();
            assert!(u.deviation() < 1e-10);
        }
    }

    #[test]
    fn first_moment_matches_haar() {
        // ∫|u00|² dU = 1/dim
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 10_000;
        let mean: f64 = (0..trials)
            .map(|_| random_unitary(2, &mut rng).unwrap().matrix()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn deterministic_for_seed() {
        let a = random_unitary(4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = random_unitary(4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert!(random_unitary(3, &mut ChaCha8Rng::seed_from_u64(5)).is_err());
    }
}
