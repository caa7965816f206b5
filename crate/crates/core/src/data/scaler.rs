use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{Dataset, Targets};
use crate::error::{Error, Result};

/// Per-column min and max taken from training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub feature_min: Vec<f64>,
    pub feature_max: Vec<f64>,
    /// (min, max) of the regression target; `None` for classification.
    pub target: Option<(f64, f64)>,
}

fn forward(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (2.0 * (v - lo) / (hi - lo) - 1.0).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

fn inverse(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v + 1.0) * (hi - lo) / 2.0 + lo
    } else {
        lo
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

pub fn fit_scaler(train: &Dataset) -> ScalerParams {
    let (feature_min, feature_max) = train
        .features()
        .columns()
        .into_iter()
        .map(|c| min_max(c.iter().copied()))
        .unzip();
    let target = train.values().map(|y| min_max(y.iter().copied()));
    ScalerParams {
        feature_min,
        feature_max,
        target,
    }
}

/// Maps every column to 2(v − min)/(max − min) − 1, clamped to [−1, 1].
/// Constant columns map to 0.
pub fn apply_scaler(data: &Dataset, params: &ScalerParams) -> Result<Dataset> {
    let d = data.n_features();
    if params.feature_min.len() != d {
        return Err(Error::contract(format!(
            "scaler fitted on {} features, data has {d}",
            params.feature_min.len()
        )));
    }
    let mut features: Array2<f64> = data.features().clone();
    for (j, mut col) in features.columns_mut().into_iter().enumerate() {
        let (lo, hi) = (params.feature_min[j], params.feature_max[j]);
        col.mapv_inplace(|v| forward(v, lo, hi));
    }
    let targets = match (data.targets(), params.target) {
        (Targets::Regression(y), Some((lo, hi))) => {
            Targets::Regression(y.iter().map(|&v| forward(v, lo, hi)).collect())
        }
        (Targets::Classes { .. }, None) => data.targets().clone(),
        _ => return Err(Error::contract("scaler and dataset disagree on task kind")),
    };
    data.replace_parts(features, targets)
}

impl ScalerParams {
    pub fn inverse_features(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| inverse(v, self.feature_min[j], self.feature_max[j]))
            .collect()
    }

    /// Maps a scaled regression value back to original units.
    pub fn inverse_target(&self, v: f64) -> Option<f64> {
        self.target.map(|(lo, hi)| inverse(v, lo, hi))
    }
}
