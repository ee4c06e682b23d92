use crate::activation::log_softmax_rows;
use crate::model::{Mlp, CLASS_COUNT};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// Evaluation metrics derived from the confusion matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metrics {
    pub loss: f64,
    pub accuracy: f64,
    pub precision_per_class: [f64; CLASS_COUNT],
    pub recall_per_class: [f64; CLASS_COUNT],
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub precision_weighted: f64,
    pub recall_weighted: f64,
    pub support: [usize; CLASS_COUNT],
    pub confusion: [[usize; CLASS_COUNT]; CLASS_COUNT], // [true][predicted]
}

fn argmax_row(row: ndarray::ArrayView1<f64>) -> usize {
    let mut best = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &v) in row.iter().enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Metrics from predicted and true class indices plus a precomputed loss.
pub fn metrics_from_predictions(
    predicted: &[usize],
    truth: &[usize],
    loss: f64,
) -> Metrics {
    assert_eq!(predicted.len(), truth.len());
    let total = truth.len();
    let mut confusion = [[0usize; CLASS_COUNT]; CLASS_COUNT];
    for (&p, &t) in predicted.iter().zip(truth) {
        confusion[t][p] += 1;
    }

    let mut support = [0usize; CLASS_COUNT];
    let mut predicted_count = [0usize; CLASS_COUNT];
    let mut correct = 0usize;
    for t in 0..CLASS_COUNT {
        correct += confusion[t][t];
        for p in 0..CLASS_COUNT {
            support[t] += confusion[t][p];
            predicted_count[p] += confusion[t][p];
        }
    }

    let mut precision = [0.0; CLASS_COUNT];
    let mut recall = [0.0; CLASS_COUNT];
    for c in 0..CLASS_COUNT {
        precision[c] = if predicted_count[c] > 0 {
            confusion[c][c] as f64 / predicted_count[c] as f64
        } else {
            0.0
        };
        recall[c] = if support[c] > 0 {
            confusion[c][c] as f64 / support[c] as f64
        } else {
            0.0
        };
    }

    let macro_avg = |v: &[f64; CLASS_COUNT]| v.iter().sum::<f64>() / CLASS_COUNT as f64;
    let weighted_avg = |v: &[f64; CLASS_COUNT]| {
        v.iter()
            .zip(&support)
            .map(|(x, &s)| x * s as f64)
            .sum::<f64>()
            / total.max(1) as f64
    };

    Metrics {
        loss,
        accuracy: correct as f64 / total.max(1) as f64,
        precision_per_class: precision,
        recall_per_class: recall,
        precision_macro: macro_avg(&precision),
        recall_macro: macro_avg(&recall),
        precision_weighted: weighted_avg(&precision),
        recall_weighted: weighted_avg(&recall),
        support,
        confusion,
    }
}

/// Evaluate a finalized model on raw features `x` (n×68) against one-hot
/// labels `y` (n×4).
pub fn evaluate(model: &Mlp, x: &Array2<f64>, y: &Array2<f64>) -> Metrics {
    let logits = model.forward_eval(&model.standardize(x));
    let log_probs = log_softmax_rows(&logits);
    let n = x.nrows();

    let mut predicted = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    let mut loss = 0.0;
    for i in 0..n {
        predicted.push(argmax_row(logits.row(i)));
        let t = argmax_row(y.row(i));
        truth.push(t);
        loss -= log_probs[[i, t]];
    }
    metrics_from_predictions(&predicted, &truth, loss / n.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let truth: Vec<usize> = (0..100).map(|i| i % 4).collect();
        let m = metrics_from_predictions(&truth.clone(), &truth, 1e-6);
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.precision_per_class, [1.0; 4]);
        assert_eq!(m.recall_per_class, [1.0; 4]);
        assert_eq!(m.recall_weighted, 1.0);
        assert!(m.loss < 1e-3);
    }

    #[test]
    fn constant_predictor_on_balanced_data() {
        let truth: Vec<usize> = (0..100).map(|i| i % 4).collect();
        let predicted = vec![0usize; 100];
        let m = metrics_from_predictions(&predicted, &truth, 1.0);
        assert_eq!(m.accuracy, 0.25);
        assert_eq!(m.recall_per_class, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.precision_per_class[0], 0.25);
    }

    #[test]
    fn matches_bruteforce_confusion_recount() {
        // independent recount of the confusion matrix on pseudo-random predictions
        let mut predicted = Vec::new();
        let mut truth = Vec::new();
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 4) as usize
        };
        for _ in 0..1000 {
            predicted.push(next());
            truth.push(next());
        }
        let m = metrics_from_predictions(&predicted, &truth, 0.0);

        // brute force, entirely separate counting path
        for c in 0..4 {
            let tp = predicted
                .iter()
                .zip(&truth)
                .filter(|&(&p, &t)| p == c && t == c)
                .count() as f64;
            let pred_c = predicted.iter().filter(|&&p| p == c).count() as f64;
            let true_c = truth.iter().filter(|&&t| t == c).count() as f64;
            assert_eq!(m.precision_per_class[c], if pred_c > 0.0 { tp / pred_c } else { 0.0 });
            assert_eq!(m.recall_per_class[c], if true_c > 0.0 { tp / true_c } else { 0.0 });
        }
        let acc = predicted.iter().zip(&truth).filter(|&(&p, &t)| p == t).count() as f64 / 1000.0;
        assert_eq!(m.accuracy, acc);
        // rates live in [0,1]
        for v in m
            .precision_per_class
            .iter()
            .chain(&m.recall_per_class)
            .chain([&m.accuracy, &m.precision_weighted, &m.recall_weighted])
        {
            assert!((0.0..=1.0).contains(v));
        }
    }
}
