use ndarray::{Array, Dimension};
use serde::{Deserialize, Serialize};

/// NAdam hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NAdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for NAdamConfig {
    fn default() -> Self {
        NAdamConfig { learning_rate: 0.001, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

impl NAdamConfig {
    pub fn validate(&self) -> bool {
        self.learning_rate > 0.0
            && self.epsilon > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
    }
}

/// Single-element NAdam update (Nesterov look-ahead blend of the
/// bias-corrected momentum and the bias-corrected current gradient).
/// Returns the new parameter; `m` and `v` are updated in place.
/// `t` is the 1-based step count.
pub fn nadam_update(param: f64, grad: f64, m: &mut f64, v: &mut f64, t: u64, cfg: &NAdamConfig) -> f64 {
    debug_assert!(t >= 1);
    let NAdamConfig { learning_rate, beta1, beta2, epsilon } = *cfg;
    *m = beta1 * *m + (1.0 - beta1) * grad;
    *v = beta2 * *v + (1.0 - beta2) * grad * grad;
    let m_hat = *m / (1.0 - beta1.powi(t as i32 + 1));
    let g_hat = grad / (1.0 - beta1.powi(t as i32));
    let v_hat = *v / (1.0 - beta2.powi(t as i32));
    let blend = beta1 * m_hat + (1.0 - beta1) * g_hat;
    param - learning_rate * blend / (v_hat.sqrt() + epsilon)
}

/// First/second-moment accumulators for one parameter tensor.
#[derive(Debug, Clone)]
pub struct NAdamState<D: Dimension> {
    pub m: Array<f64, D>,
    pub v: Array<f64, D>,
}

impl<D: Dimension> NAdamState<D> {
    pub fn zeros(shape: D) -> Self {
        NAdamState { m: Array::zeros(shape.clone()), v: Array::zeros(shape) }
    }

    /// Apply one NAdam step to a whole tensor.
    pub fn step(&mut self, param: &mut Array<f64, D>, grad: &Array<f64, D>, t: u64, cfg: &NAdamConfig) {
        ndarray::Zip::from(param)
            .and(grad)
            .and(&mut self.m)
            .and(&mut self.v)
            .for_each(|p, &g, m, v| {
                *p = nadam_update(*p, g, m, v, t, cfg);
            });
    }
}
