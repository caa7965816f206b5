//! Losses, ADAM and the supervised training loop for a single QNN.

mod adam;
mod loss;
mod metrics;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use loss::{cce_loss, mse_loss, PROB_FLOOR};
pub use metrics::{accuracy, evaluate, predict_all, score, Metric};
pub(crate) use metrics::argmax;
pub use train::{config_for, fit, train, FitResult, GradientMethod, TrainConfig};
