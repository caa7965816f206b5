//! Datasets: synthetic linear regression, CSV ingestion, min-max scaling
//! and train/test splitting.

mod csv_io;
mod scaler;
mod split;
mod synthetic;

pub use csv_io::{load_csv, write_csv, CsvSchema, TargetColumn};
pub use scaler::{apply_scaler, fit_scaler, ScalerParams};
pub use split::{split_indices, train_test_split};
pub use synthetic::{generate_linear, LinearData};

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Regression,
    Classification,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Regression(Vec<f64>),
    /// Zero-based class indices below `n_classes`.
    Classes { labels: Vec<usize>, n_classes: usize },
}

impl Targets {
    pub fn len(&self) -> usize {
        match self {
            Targets::Regression(v) => v.len(),
            Targets::Classes { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn task(&self) -> TaskKind {
        match self {
            Targets::Regression(_) => TaskKind::Regression,
            Targets::Classes { .. } => TaskKind::Classification,
        }
    }

    fn select(&self, rows: &[usize]) -> Targets {
        match self {
            Targets::Regression(v) => Targets::Regression(rows.iter().map(|&i| v[i]).collect()),
            Targets::Classes { labels, n_classes } => Targets::Classes {
                labels: rows.iter().map(|&i| labels[i]).collect(),
                n_classes: *n_classes,
            },
        }
    }
}

/// N samples × d features with one target per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    targets: Targets,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(features: Array2<f64>, targets: Targets) -> Result<Self> {
        let (n, d) = features.dim();
        if n == 0 || d == 0 {
            return Err(Error::contract(format!("dataset shape {n}×{d} is empty")));
        }
        if targets.len() != n {
            return Err(Error::contract(format!(
                "{} targets for {n} samples",
                targets.len()
            )));
        }
        if let Targets::Classes { labels, n_classes } = &targets {
            if let Some(bad) = labels.iter().find(|&&l| l >= *n_classes) {
                return Err(Error::contract(format!(
                    "label {bad} out of range for {n_classes} classes"
                )));
            }
        }
        // Rows are handed out as slices, which needs row-major storage.
        let features = if features.is_standard_layout() {
            features
        } else {
            features.as_standard_layout().into_owned()
        };
        Ok(Dataset {
            features,
            targets,
            feature_names: None,
        })
    }

    /// Builds a dataset from row vectors.
    pub fn from_rows(rows: Vec<Vec<f64>>, targets: Targets) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::contract("ragged feature rows"));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let features = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| Error::contract(e.to_string()))?;
        Dataset::new(features, targets)
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features() {
            return Err(Error::contract(format!(
                "{} names for {} features",
                names.len(),
                self.n_features()
            )));
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn n_samples(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let start = i * self.n_features();
        &self.features.as_slice().expect("standard layout")[start..start + self.n_features()]
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn task(&self) -> TaskKind {
        self.targets.task()
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Regression targets, if this is a regression dataset.
    pub fn values(&self) -> Option<&[f64]> {
        match &self.targets {
            Targets::Regression(v) => Some(v),
            Targets::Classes { .. } => None,
        }
    }

    /// Class labels and class count, if this is a classification dataset.
    pub fn labels(&self) -> Option<(&[usize], usize)> {
        match &self.targets {
            Targets::Classes { labels, n_classes } => Some((labels, *n_classes)),
            Targets::Regression(_) => None,
        }
    }

    /// Rows in the given order; indices may repeat.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = rows.iter().find(|&&i| i >= self.n_samples()) {
            return Err(Error::contract(format!("row {bad} out of range")));
        }
        let mut out = Dataset::new(self.features.select(Axis(0), rows), self.targets.select(rows))?;
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }

    /// Keeps the given feature columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = cols.iter().find(|&&j| j >= self.n_features()) {
            return Err(Error::contract(format!("column {bad} out of range")));
        }
        let mut out = Dataset::new(self.features.select(Axis(1), cols), self.targets.clone())?;
        out.feature_names = self
            .feature_names
            .as_ref()
            .map(|names| cols.iter().map(|&j| names[j].clone()).collect());
        Ok(out)
    }

    pub(crate) fn replace_parts(&self, features: Array2<f64>, targets: Targets) -> Result<Dataset> {
        let mut out = Dataset::new(features, targets)?;
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Dataset {
        Dataset::from_rows(
            vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            Targets::Regression(vec![0.1, 0.2, 0.3]),
        )
        .unwrap()
    }

    #[test]
    fn row_and_selection() {
        let d = toy();
        assert_eq!(d.row(1), &[3.0, 4.0]);
        let r = d.select_rows(&[2, 2, 0]).unwrap();
        assert_eq!(r.row(1), &[5.0, 6.0]);
        assert_eq!(r.values().unwrap(), &[0.3, 0.3, 0.1]);
        let c = d.select_columns(&[1]).unwrap();
        assert_eq!(c.row(2), &[6.0]);
        assert!(d.select_rows(&[3]).is_err());
        assert!(d.select_columns(&[2]).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(Dataset::from_rows(vec![vec![1.0]], Targets::Regression(vec![])).is_err());
        let bad = Targets::Classes { labels: vec![0, 3], n_classes: 3 };
        assert!(Dataset::from_rows(vec![vec![1.0], vec![2.0]], bad).is_err());
    }
}
