//! Grid execution and the records file.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::Context;
use qensemble::data::TaskKind;
use qensemble::ensemble::{
    fit_adaboost_r2, fit_adaboost_samme_r, fit_bagging, CombinationRule, EnsembleConfig, EnsembleModel, Member,
};
use qensemble::optim::{config_for, fit};
use qensemble::seed::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::prepare::{prepare, Prepared};
use crate::seeds::run_seed;
use crate::spec::{with_seed, ModelSpec};

pub const RECORDS_FILE: &str = "records.csv";
pub const CONFIG_COPY: &str = "config.toml";

const EVAL_SALT: u64 = 0xE7A1;

/// One line of `records.csv`. Column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: String,
    pub dataset: String,
    pub layers: usize,
    pub repeat: usize,
    pub seed: u64,
    /// `mse` or `accuracy`.
    pub metric: String,
    pub train_metric: Option<f64>,
    pub test_metric: Option<f64>,
    pub wall_time_s: f64,
    pub members: usize,
    /// Per member (all members of a configuration share the width).
    pub qubits: usize,
    pub params: usize,
    pub cnots: usize,
    pub rotations: usize,
    /// Summed over members.
    pub total_params: usize,
    pub total_cnots: usize,
    /// `ok` or `failed`.
    pub status: String,
    pub message: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn key(&self) -> (String, usize, usize, u64) {
        (self.model.clone(), self.layers, self.repeat, self.seed)
    }
}

fn metric_name(task: TaskKind) -> &'static str {
    match task {
        TaskKind::Regression => "mse",
        TaskKind::Classification => "accuracy",
    }
}

/// Trains one model configuration. FM is returned as a one-member ensemble
/// so every model is evaluated through the same path.
pub fn fit_model(
    data: &Prepared,
    model: ModelSpec,
    layers: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> anyhow::Result<EnsembleModel> {
    let tr = cfg.train_config(seed)?;
    let ens = EnsembleConfig {
        n_estimators: cfg.ensemble.n_estimators,
        rounding: cfg.ensemble.rounding,
        seed,
        ..EnsembleConfig::default()
    };
    let train = &data.train;
    Ok(match model {
        ModelSpec::Fm => {
            let (m, _) = fit(config_for(train, layers), train, &tr, None)?;
            EnsembleModel {
                members: vec![Member {
                    model: m,
                    features: (0..train.n_features()).collect(),
                    weight: 1.0,
                }],
                rule: CombinationRule::Average,
                task: train.task(),
            }
        }
        ModelSpec::Bagging {
            feature_ratio,
            sample_ratio,
        } => fit_bagging(
            train,
            layers,
            &EnsembleConfig {
                feature_ratio,
                sample_ratio,
                ..ens
            },
            &tr,
        )?,
        ModelSpec::AdaBoost => match train.task() {
            TaskKind::Regression => fit_adaboost_r2(train, layers, &ens, &tr)?,
            TaskKind::Classification => fit_adaboost_samme_r(train, layers, &ens, &tr)?,
        },
    })
}

/// Trains and scores one grid cell. Failures become `failed` records.
pub fn run_cell(data: &Prepared, model: ModelSpec, layers: usize, repeat: usize, cfg: &ExperimentConfig) -> RunRecord {
    let id = model.id();
    let seed = run_seed(cfg.seed, &id, layers, repeat);
    let mut record = RunRecord {
        model: id,
        dataset: data.name.clone(),
        layers,
        repeat,
        seed,
        metric: metric_name(data.train.task()).into(),
        train_metric: None,
        test_metric: None,
        wall_time_s: 0.0,
        members: 0,
        qubits: 0,
        params: 0,
        cnots: 0,
        rotations: 0,
        total_params: 0,
        total_cnots: 0,
        status: "ok".into(),
        message: String::new(),
    };
    let start = Instant::now();
    let outcome = (|| -> anyhow::Result<()> {
        let fitted = fit_model(data, model, layers, seed, cfg)?;
        let eval = with_seed(&cfg.backend()?, derive_seed(seed, EVAL_SALT));
        let train_metric = fitted.evaluate(&data.train, &eval.derive(0))?.value();
        let test_metric = fitted.evaluate(&data.test, &eval.derive(1))?.value();
        if !(train_metric.is_finite() && test_metric.is_finite()) {
            anyhow::bail!("non-finite metric");
        }
        let first = fitted.members[0].model.resources();
        let total = fitted.resources();
        record.train_metric = Some(train_metric);
        record.test_metric = Some(test_metric);
        record.members = fitted.members.len();
        record.qubits = first.n_qubits;
        record.params = first.trainable_params;
        record.cnots = first.cnot_gates;
        record.rotations = first.rotation_gates;
        record.total_params = total.trainable_params;
        record.total_cnots = total.cnot_gates;
        Ok(())
    })();
    record.wall_time_s = start.elapsed().as_secs_f64();
    if let Err(e) = outcome {
        record.status = "failed".into();
        record.message = format!("{e:#}");
    }
    record
}

pub fn read_records(path: &Path) -> anyhow::Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    reader
        .deserialize()
        .map(|r| r.with_context(|| format!("parsing {}", path.display())))
        .collect()
}

/// Appends records one at a time, flushing after each.
struct RecordSink {
    writer: csv::Writer<File>,
}

impl RecordSink {
    fn open(path: &Path) -> anyhow::Result<Self> {
        let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        let writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        Ok(RecordSink { writer })
    }

    fn push(&mut self, record: &RunRecord) -> anyhow::Result<()> {
        self.writer.serialize(record)?;
        self.writer.flush()?;
        Ok(())
    }
}

pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub progress: bool,
}

/// Runs every missing (model, layers, repeat) cell, appending to
/// `records.csv` as cells finish. Successful records with a matching seed
/// from an earlier interrupted run are kept and not recomputed. Returns all
/// records for this config in grid order.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> anyhow::Result<Vec<RunRecord>> {
    cfg.validate()?;
    let data = prepare(&cfg.dataset)?;
    std::fs::create_dir_all(&opts.out_dir).with_context(|| format!("creating {}", opts.out_dir.display()))?;
    std::fs::write(opts.out_dir.join(CONFIG_COPY), toml::to_string(cfg)?)?;

    let records_path = opts.out_dir.join(RECORDS_FILE);
    let previous = if records_path.exists() {
        read_records(&records_path)?
    } else {
        Vec::new()
    };
    let done: HashSet<_> = previous
        .iter()
        .filter(|r| r.is_ok() && r.dataset == data.name)
        .map(RunRecord::key)
        .collect();

    let mut cells = Vec::new();
    for model in &cfg.models {
        for &layers in &cfg.layers {
            for repeat in 0..cfg.repeats {
                let seed = run_seed(cfg.seed, &model.id(), layers, repeat);
                if !done.contains(&(model.id(), layers, repeat, seed)) {
                    cells.push((*model, layers, repeat));
                }
            }
        }
    }
    let total = cells.len();
    let sink = Mutex::new(RecordSink::open(&records_path)?);
    let finished = Mutex::new(0usize);

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build()?;
    pool.install(|| {
        cells.par_iter().try_for_each(|&(model, layers, repeat)| -> anyhow::Result<()> {
            let record = run_cell(&data, model, layers, repeat, cfg);
            sink.lock().expect("sink poisoned").push(&record)?;
            if opts.progress {
                let mut n = finished.lock().expect("counter poisoned");
                *n += 1;
                eprintln!(
                    "[{}/{}] {} layers={} repeat={} {}={} ({:.1}s){}",
                    *n,
                    total,
                    record.model,
                    layers,
                    repeat,
                    record.metric,
                    record.test_metric.map_or("-".into(), |v| format!("{v:.4}")),
                    record.wall_time_s,
                    if record.is_ok() { String::new() } else { format!(" FAILED: {}", record.message) }
                );
            }
            Ok(())
        })
    })?;

    let mut all = read_records(&records_path)?;
    let order = |r: &RunRecord| {
        (
            cfg.models.iter().position(|m| m.id() == r.model).unwrap_or(usize::MAX),
            r.layers,
            r.repeat,
        )
    };
    all.retain(|r| {
        r.dataset == data.name
            && cfg.models.iter().any(|m| m.id() == r.model)
            && cfg.layers.contains(&r.layers)
            && r.repeat < cfg.repeats
            && r.seed == run_seed(cfg.seed, &r.model, r.layers, r.repeat)
    });
    // A failed cell that later succeeded keeps only the success.
    all.sort_by_key(|r| (order(r), !r.is_ok()));
    all.dedup_by_key(|r| order(r));
    Ok(all)
}
