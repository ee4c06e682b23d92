use crate::activation::softmax;
use crate::init::lecun_init;
use crate::layers::{selu_backward, selu_forward, BatchNorm, BatchNormCache, Dense, Dropout};
use crate::NetError;
use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const INPUT_DIM: usize = siren_url_features::FEATURE_DIM;
pub const HIDDEN_DIMS: [usize; 3] = [300, 200, 100];
pub const CLASS_COUNT: usize = 4;
pub const DROPOUT_RATE: f64 = 0.2;

/// The classifier:
/// Dense(68→300)+SELU → Dropout(0.2) → Dense(300→200)+SELU → Dropout(0.2)
/// → Dense(200→100)+SELU → BatchNorm → Dense(100→4) → Softmax.
/// Input standardization statistics live on the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub dense1: Dense,
    pub dense2: Dense,
    pub dense3: Dense,
    pub dense4: Dense,
    pub batchnorm: BatchNorm,
    pub dropout: Dropout,
    pub norm_mean: Array1<f64>,
    pub norm_std: Array1<f64>,
}

/// Intermediate values saved by a training-mode forward pass.
pub struct ForwardCache {
    pub x: Array2<f64>,
    pub z1: Array2<f64>,
    pub a1d: Array2<f64>,
    pub mask1: Option<Array2<f64>>,
    pub z2: Array2<f64>,
    pub a2d: Array2<f64>,
    pub mask2: Option<Array2<f64>>,
    pub z3: Array2<f64>,
    pub a3: Array2<f64>,
    pub bn: BatchNormCache,
    pub bn_out: Array2<f64>,
}

/// Gradients for every trainable tensor, shape-matched to `Mlp`.
pub struct Grads {
    pub dw1: Array2<f64>,
    pub db1: Array1<f64>,
    pub dw2: Array2<f64>,
    pub db2: Array1<f64>,
    pub dw3: Array2<f64>,
    pub db3: Array1<f64>,
    pub dgamma: Array1<f64>,
    pub dbeta: Array1<f64>,
    pub dw4: Array2<f64>,
    pub db4: Array1<f64>,
}

fn dense_with_zero_bias(fan_in: usize, fan_out: usize, rng: &mut impl Rng) -> Dense {
    Dense { weights: lecun_init(fan_in, fan_out, rng), bias: Array1::zeros(fan_out) }
}

impl Mlp {
    /// Fresh LeCun-initialized model; standardization starts as identity.
    pub fn new(seed: u64) -> Mlp {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let [h1, h2, h3] = HIDDEN_DIMS;
        Mlp {
            dense1: dense_with_zero_bias(INPUT_DIM, h1, &mut rng),
            dense2: dense_with_zero_bias(h1, h2, &mut rng),
            dense3: dense_with_zero_bias(h2, h3, &mut rng),
            dense4: dense_with_zero_bias(h3, CLASS_COUNT, &mut rng),
            batchnorm: BatchNorm::new(h3),
            dropout: Dropout::new(DROPOUT_RATE),
            norm_mean: Array1::zeros(INPUT_DIM),
            norm_std: Array1::ones(INPUT_DIM),
        }
    }

    /// Fit per-feature z-score statistics from the training split.
    /// σ is floored at 1e-8 so constant features stay finite.
    pub fn fit_standardization(&mut self, x_train: &Array2<f64>) {
        let n = x_train.nrows() as f64;
        let mean = x_train.sum_axis(ndarray::Axis(0)) / n;
        let centered = x_train - &mean;
        let var = centered.mapv(|v| v * v).sum_axis(ndarray::Axis(0)) / n;
        self.norm_mean = mean;
        self.norm_std = var.mapv(|v| v.sqrt().max(1e-8));
    }

    pub fn standardize(&self, x: &Array2<f64>) -> Array2<f64> {
        (x - &self.norm_mean) / &self.norm_std
    }

    /// Training-mode forward over already-standardized input. Dropout can
    /// be disabled for gradient checking while keeping batch-stat
    /// batchnorm in the path.
    pub fn forward_train(
        &mut self,
        x: &Array2<f64>,
        rng: &mut impl Rng,
        use_dropout: bool,
    ) -> Result<(Array2<f64>, ForwardCache), NetError> {
        let z1 = self.dense1.forward(x);
        let a1 = selu_forward(&z1);
        let (a1d, mask1) = if use_dropout {
            let (y, m) = self.dropout.forward_train(&a1, rng);
            (y, Some(m))
        } else {
            (a1, None)
        };
        let z2 = self.dense2.forward(&a1d);
        let a2 = selu_forward(&z2);
        let (a2d, mask2) = if use_dropout {
            let (y, m) = self.dropout.forward_train(&a2, rng);
            (y, Some(m))
        } else {
            (a2, None)
        };
        let z3 = self.dense3.forward(&a2d);
        let a3 = selu_forward(&z3);
        let (bn_out, bn) = self.batchnorm.forward_train(&a3)?;
        let logits = self.dense4.forward(&bn_out);
        let cache = ForwardCache {
            x: x.clone(),
            z1,
            a1d,
            mask1,
            z2,
            a2d,
            mask2,
            z3,
            a3,
            bn,
            bn_out,
        };
        Ok((logits, cache))
    }

    /// Inference-mode forward (dropout identity, running batchnorm stats).
    pub fn forward_eval(&self, x: &Array2<f64>) -> Array2<f64> {
        let a1 = selu_forward(&self.dense1.forward(x));
        let a2 = selu_forward(&self.dense2.forward(&a1));
        let a3 = selu_forward(&self.dense3.forward(&a2));
        let bn_out = self.batchnorm.forward_eval(&a3);
        self.dense4.forward(&bn_out)
    }

    /// Backpropagate dL/dlogits through the whole network.
    pub fn backward(&self, cache: &ForwardCache, dlogits: &Array2<f64>) -> Grads {
        let (dw4, db4, d_bn_out) = self.dense4.backward(&cache.bn_out, dlogits);
        let (dgamma, dbeta, da3) = self.batchnorm.backward(&cache.bn, &d_bn_out);
        let dz3 = selu_backward(&cache.z3, &da3);
        let (dw3, db3, mut da2) = self.dense3.backward(&cache.a2d, &dz3);
        if let Some(mask) = &cache.mask2 {
            da2 = self.dropout.backward(mask, &da2);
        }
        let dz2 = selu_backward(&cache.z2, &da2);
        let (dw2, db2, mut da1) = self.dense2.backward(&cache.a1d, &dz2);
        if let Some(mask) = &cache.mask1 {
            da1 = self.dropout.backward(mask, &da1);
        }
        let dz1 = selu_backward(&cache.z1, &da1);
        let (dw1, db1, _) = self.dense1.backward(&cache.x, &dz1);
        Grads { dw1, db1, dw2, db2, dw3, db3, dgamma, dbeta, dw4, db4 }
    }

    /// Class probabilities for one raw (unstandardized) feature vector,
    /// plus the argmax class index (lowest index wins ties).
    pub fn predict(&self, features: &[f64]) -> Result<([f64; CLASS_COUNT], usize), NetError> {
        if features.len() != INPUT_DIM {
            return Err(NetError::BadInputDim { expected: INPUT_DIM, got: features.len() });
        }
        let x = Array2::from_shape_vec((1, INPUT_DIM), features.to_vec()).expect("shape");
        let logits = self.forward_eval(&self.standardize(&x));
        let probs_row = softmax(&logits);
        let mut probs = [0.0; CLASS_COUNT];
        for (i, &p) in probs_row.row(0).iter().enumerate() {
            probs[i] = p;
        }
        let argmax = probs
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv { (i, v) } else { (bi, bv) }
            })
            .0;
        Ok((probs, argmax))
    }

    /// Round every stored value through f32. The on-disk format is f32,
    /// so a finalized model predicts bit-identically across save/load.
    pub fn quantize_f32(&mut self) {
        let q = |a: &mut Array1<f64>| a.mapv_inplace(|v| v as f32 as f64);
        let q2 = |a: &mut Array2<f64>| a.mapv_inplace(|v| v as f32 as f64);
        for dense in [&mut self.dense1, &mut self.dense2, &mut self.dense3, &mut self.dense4] {
            q2(&mut dense.weights);
            q(&mut dense.bias);
        }
        q(&mut self.batchnorm.gamma);
        q(&mut self.batchnorm.beta);
        q(&mut self.batchnorm.running_mean);
        q(&mut self.batchnorm.running_var);
        q(&mut self.norm_mean);
        q(&mut self.norm_std);
    }

    /// Named mutable views over all trainable tensors, for the optimizer
    /// and the gradient checker.
    pub fn matrices_mut(&mut self) -> [(&'static str, &mut Array2<f64>); 4] {
        [
            ("dense1.weights", &mut self.dense1.weights),
            ("dense2.weights", &mut self.dense2.weights),
            ("dense3.weights", &mut self.dense3.weights),
            ("dense4.weights", &mut self.dense4.weights),
        ]
    }

    pub fn vectors_mut(&mut self) -> [(&'static str, &mut Array1<f64>); 6] {
        [
            ("dense1.bias", &mut self.dense1.bias),
            ("dense2.bias", &mut self.dense2.bias),
            ("dense3.bias", &mut self.dense3.bias),
            ("batchnorm.gamma", &mut self.batchnorm.gamma),
            ("batchnorm.beta", &mut self.batchnorm.beta),
            ("dense4.bias", &mut self.dense4.bias),
        ]
    }
}

impl Grads {
    pub fn matrices(&self) -> [(&'static str, &Array2<f64>); 4] {
        [
            ("dense1.weights", &self.dw1),
            ("dense2.weights", &self.dw2),
            ("dense3.weights", &self.dw3),
            ("dense4.weights", &self.dw4),
        ]
    }

    pub fn vectors(&self) -> [(&'static str, &Array1<f64>); 6] {
        [
            ("dense1.bias", &self.db1),
            ("dense2.bias", &self.db2),
            ("dense3.bias", &self.db3),
            ("batchnorm.gamma", &self.dgamma),
            ("batchnorm.beta", &self.dbeta),
            ("dense4.bias", &self.db4),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predict_probabilities_sum_to_one() {
        let model = Mlp::new(3);
        let features = vec![1.0; INPUT_DIM];
        let (probs, argmax) = model.predict(&features).unwrap();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        assert!(argmax < CLASS_COUNT);
    }

    #[test]
    fn predict_is_deterministic() {
        let model = Mlp::new(5);
        let features: Vec<f64> = (0..INPUT_DIM).map(|i| i as f64 * 0.3).collect();
        assert_eq!(model.predict(&features).unwrap(), model.predict(&features).unwrap());
    }

    #[test]
    fn wrong_input_length_rejected() {
        let model = Mlp::new(0);
        assert!(matches!(
            model.predict(&[1.0, 2.0]),
            Err(NetError::BadInputDim { expected: 68, got: 2 })
        ));
    }

    #[test]
    fn same_seed_same_weights() {
        assert_eq!(Mlp::new(9), Mlp::new(9));
        assert_ne!(Mlp::new(9), Mlp::new(10));
    }

    #[test]
    fn argmax_ties_take_lowest_index() {
        let probs = [0.25, 0.25, 0.25, 0.25];
        let argmax = probs
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv { (i, v) } else { (bi, bv) }
            })
            .0;
        assert_eq!(argmax, 0);
    }
}
