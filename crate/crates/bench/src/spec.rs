//! Textual model and backend identifiers.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use qensemble::qnn::Backend;
use qensemble::simcore::NoiseModel;
use serde::{Deserialize, Serialize};

/// A row of the model grid: the full model, a bagging configuration, or
/// AdaBoost (R2 for regression, SAMME.R for classification).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModelSpec {
    Fm,
    /// `Bag_{r_f}_{r_n}`.
    Bagging { feature_ratio: f64, sample_ratio: f64 },
    AdaBoost,
}

impl ModelSpec {
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Fm => f.write_str("FM"),
            ModelSpec::Bagging {
                feature_ratio,
                sample_ratio,
            } => write!(f, "Bag_{feature_ratio:?}_{sample_ratio:?}"),
            ModelSpec::AdaBoost => f.write_str("AdaBoost"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "FM" => return Ok(ModelSpec::Fm),
            "AdaBoost" => return Ok(ModelSpec::AdaBoost),
            _ => {}
        }
        let rest = s
            .strip_prefix("Bag_")
            .ok_or_else(|| anyhow!("unknown model {s:?}; expected FM, AdaBoost or Bag_<rf>_<rn>"))?;
        let (rf, rn) = rest
            .split_once('_')
            .ok_or_else(|| anyhow!("model {s:?}: expected Bag_<rf>_<rn>"))?;
        let feature_ratio: f64 = rf.parse().with_context(|| format!("model {s:?}: feature ratio"))?;
        let sample_ratio: f64 = rn.parse().with_context(|| format!("model {s:?}: sample ratio"))?;
        for r in [feature_ratio, sample_ratio] {
            if !(r > 0.0 && r <= 1.0) {
                bail!("model {s:?}: ratio {r} not in (0, 1]");
            }
        }
        Ok(ModelSpec::Bagging {
            feature_ratio,
            sample_ratio,
        })
    }
}

impl TryFrom<String> for ModelSpec {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

impl From<ModelSpec> for String {
    fn from(m: ModelSpec) -> String {
        m.to_string()
    }
}

/// Default trajectory count for `noisy:<model>` without an explicit count.
pub const DEFAULT_TRAJECTORIES: u32 = 100;

/// Parses `exact`, `shots:N` or `noisy:lagos[:T]` / `noisy:ideal[:T]`.
/// The seed is filled in per run.
pub fn parse_backend(s: &str) -> anyhow::Result<Backend> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["exact"] => Ok(Backend::Exact),
        ["shots", n] => {
            let shots: u64 = n.parse().with_context(|| format!("backend {s:?}: shot count"))?;
            if shots == 0 {
                bail!("backend {s:?}: need at least one shot");
            }
            Ok(Backend::Shots { shots, seed: 0 })
        }
        ["noisy", model, rest @ ..] => {
            let noise = match *model {
                "lagos" => NoiseModel::lagos(),
                "ideal" => NoiseModel::noiseless(),
                other => bail!("backend {s:?}: unknown noise model {other:?} (lagos, ideal)"),
            };
            let trajectories = match rest {
                [] => DEFAULT_TRAJECTORIES,
                [t] => t.parse().with_context(|| format!("backend {s:?}: trajectory count"))?,
                _ => bail!("backend {s:?}: too many fields"),
            };
            if trajectories == 0 {
                bail!("backend {s:?}: need at least one trajectory");
            }
            Ok(Backend::Noisy {
                noise,
                trajectories,
                seed: 0,
            })
        }
        _ => bail!("unknown backend {s:?}; expected exact, shots:N or noisy:lagos[:T]"),
    }
}

/// Replaces the sampling seed of a stochastic backend.
pub fn with_seed(backend: &Backend, seed: u64) -> Backend {
    match backend {
        Backend::Exact => Backend::Exact,
        Backend::Shots { shots, .. } => Backend::Shots { shots: *shots, seed },
        Backend::Noisy {
            noise,
            trajectories,
            ..
        } => Backend::Noisy {
            noise: noise.clone(),
            trajectories: *trajectories,
            seed,
        },
    }
}
