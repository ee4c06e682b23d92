//! From-scratch dense classifier: 68 → 300 → 200 → 100 → 4 with SELU
//! activations, two dropout layers, batch normalization before the
//! output layer, softmax + categorical cross-entropy, LeCun
//! initialization and the NAdam optimizer.

mod activation;
mod init;
mod io;
mod layers;
mod metrics;
mod model;
mod optim;
mod train;

pub use activation::{selu, selu_grad, softmax, softmax_xent, SELU_ALPHA, SELU_LAMBDA};
pub use init::lecun_init;
pub use io::{load_model, save_model, MODEL_MAGIC};
pub use layers::{BatchNorm, Dense, Dropout};
pub use metrics::{evaluate, metrics_from_predictions, Metrics};
pub use model::{ForwardCache, Grads, Mlp, CLASS_COUNT, DROPOUT_RATE, HIDDEN_DIMS, INPUT_DIM};
pub use optim::{nadam_update, NAdamConfig, NAdamState};
pub use train::{save_history, train, EpochRecord, TrainConfig, TrainOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("training batch must have at least 2 rows for batch normalization (got {0})")]
    BatchTooSmall(usize),
    #[error("non-finite loss at epoch {epoch}, batch {batch}; aborting")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("feature vector must have length {expected} (got {got})")]
    BadInputDim { expected: usize, got: usize },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("model io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad model file: {0}")]
    Format(String),
}
