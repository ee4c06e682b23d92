use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// LeCun normal initialization: entries drawn from N(0, 1/fan_in).
/// The paired bias is initialized to zero by the model.
pub fn lecun_init<R: Rng>(fan_in: usize, fan_out: usize, rng: &mut R) -> Array2<f64> {
    assert!(fan_in > 0 && fan_out > 0);
    let normal = Normal::new(0.0, (1.0 / fan_in as f64).sqrt()).expect("valid std");
    Array2::from_shape_fn((fan_in, fan_out), |_| normal.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn variance_matches_one_over_fan_in() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let fan_in = 300;
        let w = lecun_init(fan_in, 334, &mut rng); // ≈ 100k samples
        let n = w.len() as f64;
        let mean = w.sum() / n;
        let var = w.mapv(|v| (v - mean) * (v - mean)).sum() / (n - 1.0);
        let expected = 1.0 / fan_in as f64;
        assert!((var - expected).abs() / expected < 0.05, "var {var} vs {expected}");
        // mean within 3σ/√n of zero
        let tol = 3.0 * (expected / n).sqrt();
        assert!(mean.abs() < tol, "mean {mean} tol {tol}");
    }

    #[test]
    fn fixed_seed_reproduces_matrix() {
        let a = lecun_init(10, 10, &mut ChaCha20Rng::seed_from_u64(42));
        let b = lecun_init(10, 10, &mut ChaCha20Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }
}
