use ndarray::{Array1, Array2, Axis};

/// SELU constants from the self-normalizing network derivation.
pub const SELU_ALPHA: f64 = 1.673_263_242_354_377_2;
pub const SELU_LAMBDA: f64 = 1.050_700_987_355_480_5;

/// Scaled exponential linear unit.
pub fn selu(x: f64) -> f64 {
    if x >= 0.0 {
        SELU_LAMBDA * x
    } else {
        SELU_LAMBDA * SELU_ALPHA * (x.exp() - 1.0)
    }
}

/// d selu / dx at pre-activation x.
pub fn selu_grad(x: f64) -> f64 {
    if x >= 0.0 {
        SELU_LAMBDA
    } else {
        SELU_LAMBDA * SELU_ALPHA * x.exp()
    }
}

/// Row-wise softmax with log-sum-exp stabilization.
pub fn softmax(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

/// Mean categorical cross-entropy and its gradient w.r.t. the logits.
/// `onehot` rows must each contain exactly one 1.
pub fn softmax_xent(logits: &Array2<f64>, onehot: &Array2<f64>) -> (f64, Array2<f64>) {
    let n = logits.nrows() as f64;
    let probs = softmax(logits);
    let mut loss = 0.0;
    for (p_row, y_row) in probs.rows().into_iter().zip(onehot.rows()) {
        for (&p, &y) in p_row.iter().zip(y_row) {
            if y > 0.0 {
                // clamp keeps the limit p→0 finite rather than NaN
                loss -= y * p.max(1e-300).ln();
            }
        }
    }
    let grad = (&probs - onehot) / n;
    (loss / n, grad)
}

/// Log-probabilities needed for evaluation loss without re-deriving softmax.
pub fn log_softmax_rows(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = row.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + max;
        row.mapv_inplace(|v| v - lse);
    }
    out
}

#[allow(dead_code)]
pub fn column_means(x: &Array2<f64>) -> Array1<f64> {
    x.mean_axis(Axis(0)).expect("non-empty")
}
