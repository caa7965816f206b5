//! Resource footprint of a config, computed without training.

use qensemble::data::Targets;
use qensemble::qnn::{resource_report, QnnConfig};

use crate::config::ExperimentConfig;
use crate::prepare::load_raw;
use crate::report::ResourceRow;
use crate::spec::ModelSpec;

/// Qubits per member and member count for a model on `d` features.
/// AdaBoost may stop early, so its member count is an upper bound.
pub fn member_shape(model: ModelSpec, d: usize, cfg: &ExperimentConfig) -> (usize, usize) {
    match model {
        ModelSpec::Fm => (d, 1),
        ModelSpec::Bagging { feature_ratio, .. } => {
            let q = if feature_ratio >= 1.0 {
                d
            } else {
                cfg.ensemble.rounding.count(d, feature_ratio)
            };
            (q, cfg.ensemble.n_estimators)
        }
        ModelSpec::AdaBoost => (d, cfg.ensemble.n_estimators),
    }
}

pub fn planned_resources(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ResourceRow>> {
    let raw = load_raw(&cfg.dataset)?;
    let d = raw.n_features();
    let heads = match raw.targets() {
        Targets::Regression(_) => 1,
        Targets::Classes { n_classes, .. } => *n_classes,
    };
    let mut rows = Vec::new();
    for &model in &cfg.models {
        for &layers in &cfg.layers {
            let (q, members) = member_shape(model, d, cfg);
            let mut qc = QnnConfig::regression(q, layers);
            qc.head_qubits = (0..heads.min(q)).collect();
            let r = resource_report(&qc);
            rows.push(ResourceRow {
                dataset: cfg.dataset.name.clone(),
                model: model.id(),
                layers,
                members,
                qubits: r.n_qubits,
                params: r.trainable_params,
                cnots: r.cnot_gates,
                total_params: members * r.trainable_params,
            });
        }
    }
    Ok(rows)
}
