use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boosting::{adaboost_r2, samme_r};
use super::combine::{combine, CombinationRule};
use super::sampling::{bootstrap_indices, check_ratio, subspace_indices, RoundingMode};
use crate::data::{Dataset, TaskKind};
use crate::error::{Error, Result};
use crate::optim::{config_for, fit, predict_all, score, Metric, TrainConfig};
use crate::qnn::{Backend, QnnModel, ResourceReport};
use crate::seed::{derive_path, derive_seed};

/// Spacing between member training seeds; member 0 keeps the base seed.
const MEMBER_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

const SAMPLING_SALT: u64 = 0x5A4D_504C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Bagging,
    AdaboostR2,
    AdaboostSammeR,
}

impl Scheme {
    pub fn default_rule(self) -> CombinationRule {
        match self {
            Scheme::Bagging => CombinationRule::Average,
            Scheme::AdaboostR2 => CombinationRule::WeightedAverage,
            Scheme::AdaboostSammeR => CombinationRule::SammeR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleConfig {
    pub scheme: Scheme,
    pub n_estimators: usize,
    /// r_n: fraction of training rows per member.
    pub sample_ratio: f64,
    /// r_f: fraction of features per member.
    pub feature_ratio: f64,
    /// `None` picks the scheme's default.
    pub rule: Option<CombinationRule>,
    pub seed: u64,
    pub rounding: RoundingMode,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            scheme: Scheme::Bagging,
            n_estimators: 10,
            sample_ratio: 1.0,
            feature_ratio: 1.0,
            rule: None,
            seed: 0,
            rounding: RoundingMode::default(),
        }
    }
}

impl EnsembleConfig {
    pub fn bagging(feature_ratio: f64, sample_ratio: f64) -> Self {
        EnsembleConfig {
            feature_ratio,
            sample_ratio,
            ..EnsembleConfig::default()
        }
    }

    pub fn rule(&self) -> CombinationRule {
        self.rule.unwrap_or(self.scheme.default_rule())
    }

    pub fn validate(&self, task: TaskKind) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::config("ensemble needs at least one estimator"));
        }
        check_ratio("sample ratio", self.sample_ratio)?;
        check_ratio("feature ratio", self.feature_ratio)?;
        match (self.scheme, task) {
            (Scheme::AdaboostR2, TaskKind::Classification) => {
                return Err(Error::config("AdaBoost.R2 is a regression scheme"))
            }
            (Scheme::AdaboostSammeR, TaskKind::Regression) => {
                return Err(Error::config("SAMME.R is a classification scheme"))
            }
            _ => {}
        }
        self.rule().check(task)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub model: QnnModel,
    /// Columns of the full feature vector this member sees, increasing.
    pub features: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    pub members: Vec<Member>,
    pub rule: CombinationRule,
    pub task: TaskKind,
}

impl EnsembleModel {
    /// Combined output for one full-width feature row: `[value]` for
    /// regression, class scores for classification. On stochastic backends
    /// member j uses stream j of `backend`.
    pub fn predict_row(&self, x: &[f64], backend: &Backend) -> Result<Vec<f64>> {
        let outputs = self
            .members
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let sub: Vec<f64> = m.features.iter().map(|&c| x[c]).collect();
                m.model.predict(&sub, &backend.derive(j as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        let weights: Vec<f64> = self.members.iter().map(|m| m.weight).collect();
        combine(&outputs, self.rule, &weights, self.task)
    }

    /// Row `i` uses stream `i` of `backend`.
    pub fn predict(&self, data: &Dataset, backend: &Backend) -> Result<Vec<Vec<f64>>> {
        let width = self.members.iter().flat_map(|m| m.features.iter()).max().map_or(0, |m| m + 1);
        if data.n_features() < width {
            return Err(Error::contract(format!(
                "ensemble reads feature {} but data has {}",
                width - 1,
                data.n_features()
            )));
        }
        (0..data.n_samples())
            .into_par_iter()
            .map(|i| self.predict_row(data.row(i), &backend.derive(i as u64)))
            .collect()
    }

    pub fn evaluate(&self, data: &Dataset, backend: &Backend) -> Result<Metric> {
        score(&self.predict(data, backend)?, data)
    }

    /// Sum of member footprints.
    pub fn resources(&self) -> ResourceReport {
        self.members.iter().map(|m| m.model.resources()).sum()
    }
}

fn member_config(tr: &TrainConfig, i: usize) -> TrainConfig {
    TrainConfig {
        seed: tr.seed.wrapping_add((i as u64).wrapping_mul(MEMBER_SEED_STRIDE)),
        ..tr.clone()
    }
}

fn tag(member: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Member {
        member,
        source: Box::new(e),
    }
}

/// Bagging with optional random subspaces. Members train in parallel.
///
/// With r_n = 1 every member sees each training row exactly once, so a
/// single full-ratio member reproduces the plain model bit for bit.
pub fn fit_bagging(train: &Dataset, layers: usize, ens: &EnsembleConfig, tr: &TrainConfig) -> Result<EnsembleModel> {
    ens.validate(train.task())?;
    tr.validate()?;
    let n = train.n_samples();
    let d = train.n_features();
    let members = (0..ens.n_estimators)
        .into_par_iter()
        .map(|i| -> Result<Member> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_path(ens.seed, &[SAMPLING_SALT, i as u64]));
            let rows: Vec<usize> = if ens.sample_ratio >= 1.0 {
                (0..n).collect()
            } else {
                bootstrap_indices(n, ens.sample_ratio, &mut rng)?
            };
            let features: Vec<usize> = if ens.feature_ratio >= 1.0 {
                (0..d).collect()
            } else {
                subspace_indices(d, ens.feature_ratio, ens.rounding, &mut rng)?
            };
            let subset = train.select_rows(&rows)?.select_columns(&features)?;
            let (model, _) = fit(config_for(&subset, layers), &subset, &member_config(tr, i), None)?;
            Ok(Member {
                model,
                features,
                weight: 1.0,
            })
        })
        .enumerate()
        .map(|(i, r)| r.map_err(tag(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleModel {
        members,
        rule: ens.rule(),
        task: train.task(),
    })
}

/// AdaBoost.R2 over full-feature QNNs trained on weighted bootstraps.
pub fn fit_adaboost_r2(train: &Dataset, layers: usize, ens: &EnsembleConfig, tr: &TrainConfig) -> Result<EnsembleModel> {
    let ens = EnsembleConfig {
        scheme: Scheme::AdaboostR2,
        ..ens.clone()
    };
    ens.validate(train.task())?;
    tr.validate()?;
    let targets = train.values().expect("validated regression task");
    let features: Vec<usize> = (0..train.n_features()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ens.seed, SAMPLING_SALT));
    let (fitted, _) = adaboost_r2(targets, ens.n_estimators, &mut rng, |t, rows| {
        let subset = train.select_rows(rows).map_err(tag(t))?;
        let cfg = member_config(tr, t);
        let (model, _) = fit(config_for(train, layers), &subset, &cfg, None).map_err(tag(t))?;
        let pred = predict_all(&model, train, &cfg.backend.derive(u64::MAX)).map_err(tag(t))?;
        Ok((model, pred.into_iter().map(|p| p[0]).collect()))
    })?;
    Ok(EnsembleModel {
        members: fitted
            .into_iter()
            .map(|(model, weight)| Member {
                model,
                features: features.clone(),
                weight,
            })
            .collect(),
        rule: ens.rule(),
        task: TaskKind::Regression,
    })
}

/// SAMME.R over full-feature softmax-head QNNs trained with weighted
/// cross entropy.
pub fn fit_adaboost_samme_r(
    train: &Dataset,
    layers: usize,
    ens: &EnsembleConfig,
    tr: &TrainConfig,
) -> Result<EnsembleModel> {
    let ens = EnsembleConfig {
        scheme: Scheme::AdaboostSammeR,
        ..ens.clone()
    };
    ens.validate(train.task())?;
    tr.validate()?;
    let (labels, k) = train.labels().expect("validated classification task");
    let features: Vec<usize> = (0..train.n_features()).collect();
    let (fitted, _) = samme_r(labels, k, ens.n_estimators, |t, weights| {
        let cfg = member_config(tr, t);
        let (model, _) = fit(config_for(train, layers), train, &cfg, Some(weights)).map_err(tag(t))?;
        let probs = predict_all(&model, train, &cfg.backend.derive(u64::MAX)).map_err(tag(t))?;
        Ok((model, probs))
    })?;
    Ok(EnsembleModel {
        members: fitted
            .into_iter()
            .map(|model| Member {
                model,
                features: features.clone(),
                weight: 1.0,
            })
            .collect(),
        rule: ens.rule(),
        task: TaskKind::Classification,
    })
}

/// Dispatches on `ens.scheme`.
pub fn fit_ensemble(train: &Dataset, layers: usize, ens: &EnsembleConfig, tr: &TrainConfig) -> Result<EnsembleModel> {
    match ens.scheme {
        Scheme::Bagging => fit_bagging(train, layers, ens, tr),
        Scheme::AdaboostR2 => fit_adaboost_r2(train, layers, ens, tr),
        Scheme::AdaboostSammeR => fit_adaboost_samme_r(train, layers, ens, tr),
    }
}
