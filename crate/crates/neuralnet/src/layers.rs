use crate::activation::{selu, selu_grad};
use crate::NetError;
use ndarray::{Array1, Array2, Axis};
use rand::Rng;

/// Fully connected layer, `y = x·W + b`, with optional SELU activation
/// applied by the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weights: Array2<f64>, // (in, out)
    pub bias: Array1<f64>,    // (out,)
}

impl Dense {
    pub fn forward(&self, x: &Array2<f64>) -> Array2<f64> {
        x.dot(&self.weights) + &self.bias
    }

    /// Given dL/dy and the forward input, returns (dW, db, dX).
    pub fn backward(
        &self,
        x: &Array2<f64>,
        dy: &Array2<f64>,
    ) -> (Array2<f64>, Array1<f64>, Array2<f64>) {
        let dw = x.t().dot(dy);
        let db = dy.sum_axis(Axis(0));
        let dx = dy.dot(&self.weights.t());
        (dw, db, dx)
    }
}

/// SELU applied elementwise to pre-activations; returns activations.
pub fn selu_forward(z: &Array2<f64>) -> Array2<f64> {
    z.mapv(selu)
}

/// dL/dz from dL/da and the saved pre-activations.
pub fn selu_backward(z: &Array2<f64>, da: &Array2<f64>) -> Array2<f64> {
    let mut dz = da.clone();
    dz.zip_mut_with(z, |d, &zv| *d *= selu_grad(zv));
    dz
}

/// Inverted dropout: surviving entries scaled by 1/(1-rate) so inference
/// is the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dropout {
    pub rate: f64,
}

impl Dropout {
    pub fn new(rate: f64) -> Dropout {
        assert!(rate > 0.0 && rate < 1.0, "dropout rate must be in (0,1)");
        Dropout { rate }
    }

    /// Training-mode forward; returns the output and the scaled mask.
    pub fn forward_train<R: Rng>(&self, x: &Array2<f64>, rng: &mut R) -> (Array2<f64>, Array2<f64>) {
        let keep = 1.0 - self.rate;
        let mask = Array2::from_shape_fn(x.raw_dim(), |_| {
            if rng.random_bool(keep) { 1.0 / keep } else { 0.0 }
        });
        (x * &mask, mask)
    }

    pub fn backward(&self, mask: &Array2<f64>, dy: &Array2<f64>) -> Array2<f64> {
        dy * mask
    }
}

#[derive(Debug, Clone)]
pub struct BatchNormCache {
    pub x_hat: Array2<f64>,
    pub centered: Array2<f64>,
    pub inv_std: Array1<f64>,
}

/// Per-feature batch normalization with running statistics for inference.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchNorm {
    pub gamma: Array1<f64>,
    pub beta: Array1<f64>,
    pub running_mean: Array1<f64>,
    pub running_var: Array1<f64>,
    pub eps: f64,
    pub momentum: f64,
}

impl BatchNorm {
    pub fn new(dim: usize) -> BatchNorm {
        BatchNorm {
            gamma: Array1::ones(dim),
            beta: Array1::zeros(dim),
            running_mean: Array1::zeros(dim),
            running_var: Array1::ones(dim),
            eps: 1e-3,
            momentum: 0.99,
        }
    }

    /// Training-mode forward using batch statistics (population variance).
    /// Updates the running stats. Requires at least 2 rows.
    pub fn forward_train(&mut self, x: &Array2<f64>) -> Result<(Array2<f64>, BatchNormCache), NetError> {
        let n = x.nrows();
        if n < 2 {
            return Err(NetError::BatchTooSmall(n));
        }
        let mean = x.mean_axis(Axis(0)).expect("n >= 2");
        let centered = x - &mean;
        let var = centered.mapv(|v| v * v).mean_axis(Axis(0)).expect("n >= 2");
        let inv_std = var.mapv(|v| 1.0 / (v + self.eps).sqrt());
        let x_hat = &centered * &inv_std;
        let y = &x_hat * &self.gamma + &self.beta;

        self.running_mean = &self.running_mean * self.momentum + &mean * (1.0 - self.momentum);
        self.running_var = &self.running_var * self.momentum + &var * (1.0 - self.momentum);

        Ok((y, BatchNormCache { x_hat, centered, inv_std }))
    }

    /// Inference-mode forward using running statistics.
    pub fn forward_eval(&self, x: &Array2<f64>) -> Array2<f64> {
        let inv_std = self.running_var.mapv(|v| 1.0 / (v + self.eps).sqrt());
        (x - &self.running_mean) * &inv_std * &self.gamma + &self.beta
    }

    /// Backward through the batch statistics; returns (dgamma, dbeta, dX).
    pub fn backward(
        &self,
        cache: &BatchNormCache,
        dy: &Array2<f64>,
    ) -> (Array1<f64>, Array1<f64>, Array2<f64>) {
        let n = dy.nrows() as f64;
        let dgamma = (dy * &cache.x_hat).sum_axis(Axis(0));
        let dbeta = dy.sum_axis(Axis(0));

        let dx_hat = dy * &self.gamma;
        // dX = inv_std/n * (n·dx̂ − Σdx̂ − x̂·Σ(dx̂·x̂))
        let sum_dx_hat = dx_hat.sum_axis(Axis(0));
        let sum_dx_hat_x_hat = (&dx_hat * &cache.x_hat).sum_axis(Axis(0));
        let dx = (dx_hat * n - &sum_dx_hat - &cache.x_hat * &sum_dx_hat_x_hat) * &cache.inv_std / n;
        (dgamma, dbeta, dx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn dense_identity() {
        let layer = Dense { weights: Array2::eye(3), bias: Array1::zeros(3) };
        let x = array![[1.0, 2.0, 3.0]];
        assert_eq!(layer.forward(&x), x);
    }

    #[test]
    fn dense_scalar_case() {
        let layer = Dense { weights: array![[2.0]], bias: array![3.0] };
        assert_eq!(layer.forward(&array![[5.0]]), array![[13.0]]);
    }

    #[test]
    fn dense_bias_grad_is_column_sum() {
        let layer = Dense { weights: Array2::eye(2), bias: Array1::zeros(2) };
        let x = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        // gradient of sum(Y) w.r.t. b is all-ones per row, summed over rows
        let dy = Array2::ones((3, 2));
        let (_, db, _) = layer.backward(&x, &dy);
        assert_eq!(db, array![3.0, 3.0]);
    }

    #[test]
    fn dropout_inference_is_identity() {
        // inference mode simply skips the layer; nothing to apply
        let x = array![[1.0, -2.0], [0.5, 3.0]];
        let d = Dropout::new(0.2);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let (y, mask) = d.forward_train(&x, &mut rng);
        assert_eq!(y, &x * &mask);
    }

    #[test]
    fn dropout_zero_fraction_near_rate() {
        let d = Dropout::new(0.2);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let x = Array2::ones((1000, 1000));
        let (y, _) = d.forward_train(&x, &mut rng);
        let zeros = y.iter().filter(|&&v| v == 0.0).count() as f64;
        let frac = zeros / 1e6;
        assert!((frac - 0.2).abs() < 0.002, "zero fraction {frac}");
    }

    #[test]
    fn dropout_preserves_expectation() {
        let d = Dropout::new(0.2);
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let x = Array2::from_elem((1, 100), 2.0);
        let mut acc = Array2::<f64>::zeros((1, 100));
        let trials = 10_000;
        for _ in 0..trials {
            let (y, _) = d.forward_train(&x, &mut rng);
            acc += &y;
        }
        acc /= trials as f64;
        let grand_mean = acc.sum() / acc.len() as f64;
        assert!((grand_mean - 2.0).abs() / 2.0 < 0.01, "E[y] drifted: {grand_mean}");
    }

    #[test]
    fn batchnorm_two_point_column() {
        let mut bn = BatchNorm::new(1);
        bn.eps = 1e-12;
        let x = array![[0.0], [2.0]];
        let (y, _) = bn.forward_train(&x).unwrap();
        assert_relative_eq!(y[[0, 0]], -1.0, epsilon = 1e-5);
        assert_relative_eq!(y[[1, 0]], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn batchnorm_output_standardized() {
        let mut bn = BatchNorm::new(3);
        let x = Array2::from_shape_fn((64, 3), |(i, j)| (i * 3 + j) as f64 * 0.37 + j as f64);
        let (y, _) = bn.forward_train(&x).unwrap();
        let n = y.nrows() as f64;
        for col in y.columns() {
            let mean = col.mean().unwrap();
            assert!(mean.abs() < 1e-6, "mean {mean}");
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            // ε shifts the normalized variance just below 1
            assert!((var - 1.0).abs() < 1e-4, "var {var}");
        }
    }

    #[test]
    fn batchnorm_single_row_rejected() {
        let mut bn = BatchNorm::new(2);
        let x = Array2::ones((1, 2));
        assert!(matches!(bn.forward_train(&x), Err(NetError::BatchTooSmall(1))));
    }

    #[test]
    fn batchnorm_running_var_stays_positive() {
        let mut bn = BatchNorm::new(2);
        let x = Array2::from_elem((8, 2), 5.0); // zero batch variance
        for _ in 0..100 {
            bn.forward_train(&x).unwrap();
        }
        assert!(bn.running_var.iter().all(|&v| v > 0.0));
    }
}
