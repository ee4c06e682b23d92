use crate::activation::softmax_xent;
use crate::metrics::evaluate;
use crate::model::Mlp;
use crate::optim::{NAdamConfig, NAdamState};
use crate::NetError;
use ndarray::{Array2, Axis, Ix1, Ix2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub optimizer: NAdamConfig,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            optimizer: NAdamConfig::default(),
            batch_size: 512,
            max_epochs: 50,
            patience: 5,
            seed: 0,
        }
    }
}

/// One line of the training history file (the Fig.-4-style data).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_recall: f64,
    pub val_loss: f64,
    pub val_recall: f64,
}

pub struct TrainOutcome {
    /// Weights of the epoch with the best validation loss, f32-finalized.
    pub model: Mlp,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
}

struct OptimizerState {
    matrices: Vec<NAdamState<Ix2>>,
    vectors: Vec<NAdamState<Ix1>>,
}

impl OptimizerState {
    fn new(model: &mut Mlp) -> OptimizerState {
        OptimizerState {
            matrices: model
                .matrices_mut()
                .map(|(_, m)| NAdamState::zeros(m.raw_dim()))
                .into_iter()
                .collect(),
            vectors: model
                .vectors_mut()
                .map(|(_, v)| NAdamState::zeros(v.raw_dim()))
                .into_iter()
                .collect(),
        }
    }
}

/// Mini-batch training with NAdam and early stopping on validation loss.
/// `x_*` are raw (unstandardized) feature matrices; standardization
/// statistics are fit from the training split only.
pub fn train(
    mut model: Mlp,
    x_train: &Array2<f64>,
    y_train: &Array2<f64>,
    x_val: &Array2<f64>,
    y_val: &Array2<f64>,
    config: &TrainConfig,
) -> Result<TrainOutcome, NetError> {
    let n = x_train.nrows();
    if n < 2 {
        return Err(NetError::EmptyTrainingSet);
    }
    assert!(config.optimizer.validate(), "invalid optimizer config");
    assert!(config.batch_size >= 2 && config.max_epochs >= 1);

    model.fit_standardization(x_train);
    let x_std = model.standardize(x_train);

    let mut opt = OptimizerState::new(&mut model);
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut history: Vec<EpochRecord> = Vec::new();
    let mut best_val = f64::INFINITY;
    let mut best_model = model.clone();
    let mut best_epoch = 0usize;
    let mut no_improve = 0usize;
    let mut t: u64 = 0;

    let mut indices: Vec<usize> = (0..n).collect();
    for epoch in 0..config.max_epochs {
        indices.shuffle(&mut rng);
        for (batch_idx, batch) in indices.chunks(config.batch_size).enumerate() {
            if batch.len() < 2 {
                continue; // batchnorm needs at least two rows
            }
            let xb = x_std.select(Axis(0), batch);
            let yb = y_train.select(Axis(0), batch);
            let (logits, cache) = model.forward_train(&xb, &mut rng, true)?;
            let (loss, dlogits) = softmax_xent(&logits, &yb);
            if !loss.is_finite() {
                return Err(NetError::NonFiniteLoss { epoch, batch: batch_idx });
            }
            let grads = model.backward(&cache, &dlogits);
            t += 1;
            for (((_, param), (_, grad)), state) in model
                .matrices_mut()
                .into_iter()
                .zip(grads.matrices())
                .zip(&mut opt.matrices)
            {
                state.step(param, grad, t, &config.optimizer);
            }
            for (((_, param), (_, grad)), state) in model
                .vectors_mut()
                .into_iter()
                .zip(grads.vectors())
                .zip(&mut opt.vectors)
            {
                state.step(param, grad, t, &config.optimizer);
            }
        }

        let train_metrics = evaluate(&model, x_train, y_train);
        let val_metrics = evaluate(&model, x_val, y_val);
        history.push(EpochRecord {
            epoch,
            train_loss: train_metrics.loss,
            train_recall: train_metrics.recall_weighted,
            val_loss: val_metrics.loss,
            val_recall: val_metrics.recall_weighted,
        });

        if val_metrics.loss < best_val {
            best_val = val_metrics.loss;
            best_model = model.clone();
            best_epoch = epoch;
            no_improve = 0;
        } else {
            no_improve += 1;
        }
        if no_improve >= config.patience {
            break;
        }
    }

    best_model.quantize_f32();
    Ok(TrainOutcome { model: best_model, history, best_epoch })
}

/// Write the history as CSV: epoch, train loss, train recall, val loss, val recall.
pub fn save_history(path: &Path, history: &[EpochRecord]) -> Result<(), NetError> {
    let mut out = String::from("epoch,train_loss,train_recall,val_loss,val_recall\n");
    for r in history {
        out.push_str(&format!(
            "{},{:.9},{:.9},{:.9},{:.9}\n",
            r.epoch, r.train_loss, r.train_recall, r.val_loss, r.val_recall
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::INPUT_DIM;

    /// 4 well-separated Gaussian-ish clusters in feature space.
    pub fn toy_set(n: usize, seed: u64) -> (Array2<f64>, Array2<f64>) {
        use rand::Rng;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut x = Array2::zeros((n, INPUT_DIM));
        let mut y = Array2::zeros((n, 4));
        for i in 0..n {
            let class = i % 4;
            for j in 0..INPUT_DIM {
                let center = if j % 4 == class { 5.0 } else { 0.0 };
                x[[i, j]] = center + rng.random_range(-1.0..1.0);
            }
            y[[i, class]] = 1.0;
        }
        (x, y)
    }

    #[test]
    fn toy_set_reaches_high_accuracy() {
        let (x, y) = toy_set(400, 1);
        let (xv, yv) = toy_set(100, 2);
        let config = TrainConfig { max_epochs: 50, batch_size: 64, patience: 50, seed: 3, ..Default::default() };
        let outcome = train(Mlp::new(3), &x, &y, &xv, &yv, &config).unwrap();
        let metrics = evaluate(&outcome.model, &xv, &yv);
        assert!(metrics.accuracy >= 0.95, "val accuracy {}", metrics.accuracy);
        assert!(outcome.history.len() <= 50);
    }

    #[test]
    fn patience_zero_runs_exactly_one_epoch() {
        let (x, y) = toy_set(64, 4);
        let config = TrainConfig { max_epochs: 20, batch_size: 32, patience: 0, seed: 0, ..Default::default() };
        let outcome = train(Mlp::new(0), &x, &y, &x, &y, &config).unwrap();
        assert_eq!(outcome.history.len(), 1);
    }

    #[test]
    fn training_is_deterministic() {
        let (x, y) = toy_set(128, 5);
        let config = TrainConfig { max_epochs: 3, batch_size: 32, patience: 10, seed: 17, ..Default::default() };
        let a = train(Mlp::new(7), &x, &y, &x, &y, &config).unwrap();
        let b = train(Mlp::new(7), &x, &y, &x, &y, &config).unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn best_epoch_has_minimum_val_loss() {
        let (x, y) = toy_set(128, 6);
        let (xv, yv) = toy_set(64, 7);
        let config = TrainConfig { max_epochs: 10, batch_size: 32, patience: 10, seed: 1, ..Default::default() };
        let outcome = train(Mlp::new(1), &x, &y, &xv, &yv, &config).unwrap();
        let min = outcome
            .history
            .iter()
            .map(|r| r.val_loss)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(outcome.history[outcome.best_epoch].val_loss, min);
    }

    #[test]
    fn history_round_trips_through_file() {
        let history = vec![
            EpochRecord { epoch: 0, train_loss: 1.0, train_recall: 0.5, val_loss: 1.1, val_recall: 0.4 },
            EpochRecord { epoch: 1, train_loss: 0.5, train_recall: 0.8, val_loss: 0.6, val_recall: 0.7 },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("history.csv");
        save_history(&path, &history).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("epoch,train_loss"));
    }
}
