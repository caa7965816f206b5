//! Dataset loading, splitting and scaling for a run.

use anyhow::Context;
use qensemble::data::{apply_scaler, fit_scaler, generate_linear, load_csv, train_test_split, Dataset, ScalerParams};

use crate::config::{DataSource, DatasetSpec};

/// Scaled train and test partitions of one dataset.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub name: String,
    pub train: Dataset,
    pub test: Dataset,
    pub scaler: ScalerParams,
}

pub fn load_raw(spec: &DatasetSpec) -> anyhow::Result<Dataset> {
    match &spec.source {
        DataSource::Linear { n, d, sigma, seed } => Ok(generate_linear(*n, *d, *sigma, *seed)?.dataset),
        DataSource::Csv { path, .. } => {
            let schema = spec.source.schema().expect("csv source");
            load_csv(path, &schema).with_context(|| format!("dataset {:?} at {}", spec.name, path.display()))
        }
    }
}

/// Split with `split_seed`, fit the scaler on the train part only, scale
/// both parts.
pub fn prepare(spec: &DatasetSpec) -> anyhow::Result<Prepared> {
    let raw = load_raw(spec)?;
    prepare_dataset(&spec.name, &raw, spec.train_fraction, spec.split_seed)
}

pub fn prepare_dataset(name: &str, raw: &Dataset, train_fraction: f64, split_seed: u64) -> anyhow::Result<Prepared> {
    let (train, test) = train_test_split(raw, train_fraction, split_seed)?;
    let scaler = fit_scaler(&train);
    Ok(Prepared {
        name: name.to_owned(),
        train: apply_scaler(&train, &scaler)?,
        test: apply_scaler(&test, &scaler)?,
        scaler,
    })
}
