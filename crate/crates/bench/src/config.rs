//! Experiment configuration files (TOML).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use qensemble::data::{CsvSchema, TargetColumn, TaskKind};
use qensemble::ensemble::RoundingMode;
use qensemble::optim::{GradientMethod, TrainConfig};
use qensemble::qnn::Backend;
use qensemble::simcore::NoiseModel;
use serde::{Deserialize, Serialize};

use crate::spec::{ModelSpec, DEFAULT_TRAJECTORIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Every model × layer × repeat.
    #[default]
    Grid,
    /// Two models compared repeat by repeat.
    NoiseComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub kind: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    pub layers: Vec<usize>,
    pub models: Vec<ModelSpec>,
    /// Relative paths resolve against the config file's directory.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub training: TrainingSpec,
    #[serde(default)]
    pub backend: BackendSpec,
    #[serde(default)]
    pub ensemble: EnsembleSpec,
}

fn default_repeats() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    /// Label used in records and file names.
    pub name: String,
    #[serde(flatten)]
    pub source: DataSource,
    /// Fixed across repeats.
    #[serde(default)]
    pub split_seed: u64,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
}

fn default_train_fraction() -> f64 {
    0.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataSource {
    /// y = w·x + ε.
    Linear {
        n: usize,
        d: usize,
        sigma: f64,
        #[serde(default)]
        seed: u64,
    },
    Csv {
        path: PathBuf,
        task: TaskKind,
        #[serde(default = "default_target")]
        target: TargetColumn,
        #[serde(default = "default_true")]
        has_header: bool,
        #[serde(default)]
        n_features: Option<usize>,
    },
}

fn default_target() -> TargetColumn {
    TargetColumn::Last
}

fn default_true() -> bool {
    true
}

impl DataSource {
    pub fn schema(&self) -> Option<CsvSchema> {
        match self {
            DataSource::Csv {
                task,
                target,
                has_header,
                n_features,
                ..
            } => Some(CsvSchema {
                target: target.clone(),
                task: *task,
                has_header: *has_header,
                n_features: *n_features,
            }),
            DataSource::Linear { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSpec {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Unset: adjoint on the exact backend, parameter shift otherwise.
    pub gradient_method: Option<GradientMethod>,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for TrainingSpec {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainingSpec {
            epochs: t.epochs,
            learning_rate: t.learning_rate,
            gradient_method: None,
            adam_beta1: t.adam_beta1,
            adam_beta2: t.adam_beta2,
            adam_eps: t.adam_eps,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackendSpec {
    #[default]
    Exact,
    Shots {
        shots: u64,
    },
    Noisy {
        #[serde(default)]
        noise: NoiseSpec,
        #[serde(default = "default_trajectories")]
        trajectories: u32,
    },
}

fn default_trajectories() -> u32 {
    DEFAULT_TRAJECTORIES
}

/// `"lagos"` or explicit rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Named(String),
    Custom(NoiseModel),
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec::Named("lagos".into())
    }
}

impl BackendSpec {
    /// Backend with seed 0; runs substitute their own seed.
    pub fn to_backend(&self) -> anyhow::Result<Backend> {
        Ok(match self {
            BackendSpec::Exact => Backend::Exact,
            BackendSpec::Shots { shots } => Backend::Shots { shots: *shots, seed: 0 },
            BackendSpec::Noisy {
                noise,
                trajectories,
            } => {
                let noise = match noise {
                    NoiseSpec::Named(n) if n == "lagos" => NoiseModel::lagos(),
                    NoiseSpec::Named(n) if n == "ideal" => NoiseModel::noiseless(),
                    NoiseSpec::Named(n) => bail!("unknown noise model {n:?} (lagos, ideal)"),
                    NoiseSpec::Custom(m) => m.clone(),
                };
                Backend::Noisy {
                    noise,
                    trajectories: *trajectories,
                    seed: 0,
                }
            }
        })
    }

    pub fn from_backend(b: &Backend) -> Self {
        match b {
            Backend::Exact => BackendSpec::Exact,
            Backend::Shots { shots, .. } => BackendSpec::Shots { shots: *shots },
            Backend::Noisy {
                noise,
                trajectories,
                ..
            } => BackendSpec::Noisy {
                noise: NoiseSpec::Custom(noise.clone()),
                trajectories: *trajectories,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_estimators: usize,
    pub rounding: RoundingMode,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            n_estimators: 10,
            rounding: RoundingMode::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config; relative dataset and output paths are
    /// made relative to the file's directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let DataSource::Csv { path: p, .. } = &mut cfg.dataset.source {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(out) = &mut cfg.output_dir {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.models.is_empty() {
            bail!("config {:?}: empty model list", self.name);
        }
        if self.layers.is_empty() || self.layers.contains(&0) {
            bail!("config {:?}: layer list must be nonempty and >= 1", self.name);
        }
        if self.repeats == 0 {
            bail!("config {:?}: repeats must be >= 1", self.name);
        }
        if self.ensemble.n_estimators == 0 {
            bail!("config {:?}: n_estimators must be >= 1", self.name);
        }
        if self.kind == ExperimentKind::NoiseComparison && (self.models.len() != 2 || self.layers.len() != 1) {
            bail!(
                "config {:?}: a noise comparison needs exactly two models and one layer count",
                self.name
            );
        }
        self.train_config(0)?.validate()?;
        Ok(())
    }

    pub fn backend(&self) -> anyhow::Result<Backend> {
        self.backend.to_backend()
    }

    /// Training settings for one run.
    pub fn train_config(&self, seed: u64) -> anyhow::Result<TrainConfig> {
        let backend = crate::spec::with_seed(&self.backend()?, seed);
        let gradient_method = self.training.gradient_method.unwrap_or(if backend.is_exact() {
            GradientMethod::Adjoint
        } else {
            GradientMethod::ParameterShift
        });
        Ok(TrainConfig {
            learning_rate: self.training.learning_rate,
            epochs: self.training.epochs,
            seed,
            gradient_method,
            adam_beta1: self.training.adam_beta1,
            adam_beta2: self.training.adam_beta2,
            adam_eps: self.training.adam_eps,
            backend,
        })
    }
}
