use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Targets};
use crate::error::{Error, Result};
use crate::qnn::{Backend, QnnModel};

/// Test-set score: MSE for regression (lower is better), accuracy for
/// classification (higher is better).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", content = "value", rename_all = "snake_case")]
pub enum Metric {
    Mse(f64),
    Accuracy(f64),
}

impl Metric {
    pub fn value(&self) -> f64 {
        match self {
            Metric::Mse(v) | Metric::Accuracy(v) => *v,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Mse(_) => "mse",
            Metric::Accuracy(_) => "accuracy",
        }
    }
}

/// Index of the largest entry, lowest index on ties.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Fraction of predicted labels equal to the true labels.
pub fn accuracy(predicted: &[usize], labels: &[usize]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != labels.len() {
        return Err(Error::contract(format!(
            "accuracy over {} predictions and {} labels",
            predicted.len(),
            labels.len()
        )));
    }
    let hits = predicted.iter().zip(labels).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / labels.len() as f64)
}

/// Model predictions for every row. Stochastic backends use stream `i` for
/// row `i`.
pub fn predict_all(model: &QnnModel, data: &Dataset, backend: &Backend) -> Result<Vec<Vec<f64>>> {
    (0..data.n_samples())
        .map(|i| model.predict(data.row(i), &backend.derive(i as u64)))
        .collect()
}

/// Scores per-row predictions (values or class probabilities) against the
/// dataset's targets.
pub fn score(predictions: &[Vec<f64>], data: &Dataset) -> Result<Metric> {
    match data.targets() {
        Targets::Regression(y) => {
            let flat: Vec<f64> = predictions.iter().map(|p| p[0]).collect();
            super::mse_loss(&flat, y).map(Metric::Mse)
        }
        Targets::Classes { labels, .. } => {
            let predicted: Vec<usize> = predictions.iter().map(|p| argmax(p)).collect();
            accuracy(&predicted, labels).map(Metric::Accuracy)
        }
    }
}

pub fn evaluate(model: &QnnModel, data: &Dataset, backend: &Backend) -> Result<Metric> {
    score(&predict_all(model, data, backend)?, data)
}
