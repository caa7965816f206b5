//! Summaries and plot-ready files derived from run records.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::runner::{read_records, RunRecord, CONFIG_COPY, RECORDS_FILE};

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Aggregate of one (dataset, model, layers) group. Wall time is left out
/// so reruns produce identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub model: String,
    pub layers: usize,
    pub metric: String,
    pub n: usize,
    pub failed: usize,
    pub test_mean: f64,
    pub test_std: f64,
    pub train_mean: f64,
    pub train_std: f64,
    pub members: usize,
    pub qubits: usize,
    pub params: usize,
    pub cnots: usize,
}

/// Groups successful records; rows are sorted by dataset, model, layers.
pub fn summarize(records: &[RunRecord]) -> anyhow::Result<Vec<SummaryRow>> {
    if records.is_empty() {
        bail!("no records to summarize");
    }
    let mut groups: BTreeMap<(String, String, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.dataset.clone(), r.model.clone(), r.layers)).or_default().push(r);
    }
    let mut rows = Vec::new();
    for ((dataset, model, layers), mut group) in groups {
        group.sort_by_key(|r| r.repeat);
        let ok: Vec<&RunRecord> = group.iter().copied().filter(|r| r.is_ok()).collect();
        let failed = group.len() - ok.len();
        let Some(first) = ok.first() else {
            continue;
        };
        let test: Vec<f64> = ok.iter().filter_map(|r| r.test_metric).collect();
        let train: Vec<f64> = ok.iter().filter_map(|r| r.train_metric).collect();
        let (test_mean, test_std) = mean_std(&test);
        let (train_mean, train_std) = mean_std(&train);
        rows.push(SummaryRow {
            dataset,
            model,
            layers,
            metric: first.metric.clone(),
            n: ok.len(),
            failed,
            test_mean,
            test_std,
            train_mean,
            train_std,
            members: first.members,
            qubits: first.qubits,
            params: first.params,
            cnots: first.cnots,
        });
    }
    if rows.is_empty() {
        bail!("every run failed; nothing to summarize");
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisePair {
    pub repeat: usize,
    pub baseline: f64,
    pub candidate: f64,
}

/// Repeat-by-repeat comparison of two models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseComparison {
    pub dataset: String,
    pub layers: usize,
    pub baseline_model: String,
    pub candidate_model: String,
    pub pairs: Vec<NoisePair>,
    pub baseline_mean: f64,
    pub candidate_mean: f64,
    /// Sample variances.
    pub baseline_variance: f64,
    pub candidate_variance: f64,
    /// candidate / baseline.
    pub mean_ratio: f64,
    pub variance_ratio: f64,
}

pub fn noise_comparison(records: &[RunRecord], baseline: &str, candidate: &str) -> anyhow::Result<NoiseComparison> {
    let find = |model: &str, repeat: usize| {
        records
            .iter()
            .find(|r| r.model == model && r.repeat == repeat && r.is_ok())
            .and_then(|r| r.test_metric)
    };
    let mut repeats: Vec<usize> = records.iter().map(|r| r.repeat).collect();
    repeats.sort_unstable();
    repeats.dedup();
    let pairs: Vec<NoisePair> = repeats
        .into_iter()
        .filter_map(|k| {
            Some(NoisePair {
                repeat: k,
                baseline: find(baseline, k)?,
                candidate: find(candidate, k)?,
            })
        })
        .collect();
    if pairs.len() < 2 {
        bail!("noise comparison needs at least two complete pairs, found {}", pairs.len());
    }
    let b: Vec<f64> = pairs.iter().map(|p| p.baseline).collect();
    let c: Vec<f64> = pairs.iter().map(|p| p.candidate).collect();
    let (bm, bs) = mean_std(&b);
    let (cm, cs) = mean_std(&c);
    let first = &records[0];
    Ok(NoiseComparison {
        dataset: first.dataset.clone(),
        layers: first.layers,
        baseline_model: baseline.into(),
        candidate_model: candidate.into(),
        pairs,
        baseline_mean: bm,
        candidate_mean: cm,
        baseline_variance: bs * bs,
        candidate_variance: cs * cs,
        mean_ratio: cm / bm,
        variance_ratio: (cs * cs) / (bs * bs),
    })
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub dataset: String,
    pub model: String,
    pub layers: usize,
    pub members: usize,
    pub qubits: usize,
    pub params: usize,
    pub cnots: usize,
    pub total_params: usize,
}

fn resource_rows(summary: &[SummaryRow]) -> Vec<ResourceRow> {
    summary
        .iter()
        .map(|s| ResourceRow {
            dataset: s.dataset.clone(),
            model: s.model.clone(),
            layers: s.layers,
            members: s.members,
            qubits: s.qubits,
            params: s.params,
            cnots: s.cnots,
            total_params: s.members * s.params,
        })
        .collect()
}

/// Wide table: one row per layer count, mean and std columns per model.
fn figure_table(summary: &[SummaryRow], dataset: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let rows: Vec<&SummaryRow> = summary.iter().filter(|s| s.dataset == dataset).collect();
    let mut models: Vec<&str> = rows.iter().map(|s| s.model.as_str()).collect();
    models.dedup();
    models.sort_unstable();
    models.dedup();
    let mut layers: Vec<usize> = rows.iter().map(|s| s.layers).collect();
    layers.sort_unstable();
    layers.dedup();
    let mut header = vec!["layers".to_string()];
    for m in &models {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    let body = layers
        .iter()
        .map(|&l| {
            let mut line = vec![l.to_string()];
            for m in &models {
                match rows.iter().find(|s| s.model == *m && s.layers == l) {
                    Some(s) => {
                        line.push(format!("{:?}", s.test_mean));
                        line.push(format!("{:?}", s.test_std));
                    }
                    None => line.extend([String::new(), String::new()]),
                }
            }
            line
        })
        .collect();
    (header, body)
}

/// Files written by [`emit_report`], relative to the output directory.
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const RESOURCES_CSV: &str = "resources.csv";
pub const NOISE_CSV: &str = "noise_comparison.csv";
pub const NOISE_JSON: &str = "noise_comparison.json";

/// Writes summary.csv, summary.json, resources.csv and, per dataset,
/// `<dataset>_<metric>_vs_layers.csv` plus an SVG of the same data.
/// Noise-comparison runs also get noise_comparison.{csv,json}.
pub fn emit_report(records: &[RunRecord], out_dir: &Path, config: Option<&ExperimentConfig>) -> anyhow::Result<Vec<PathBuf>> {
    let summary = summarize(records)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let p = out_dir.join(SUMMARY_CSV);
    write_csv(&p, &summary)?;
    written.push(p);
    let p = out_dir.join(SUMMARY_JSON);
    std::fs::write(&p, serde_json::to_string_pretty(&summary)? + "\n")?;
    written.push(p);
    let p = out_dir.join(RESOURCES_CSV);
    write_csv(&p, &resource_rows(&summary))?;
    written.push(p);

    let mut datasets: Vec<&str> = summary.iter().map(|s| s.dataset.as_str()).collect();
    datasets.sort_unstable();
    datasets.dedup();
    for ds in datasets {
        let metric = &summary.iter().find(|s| s.dataset == ds).expect("nonempty").metric;
        let stem = format!("{ds}_{metric}_vs_layers");
        let (header, body) = figure_table(&summary, ds);
        let p = out_dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(&header)?;
        for line in &body {
            w.write_record(line)?;
        }
        w.flush()?;
        written.push(p);
        let p = out_dir.join(format!("{stem}.svg"));
        let rows: Vec<&SummaryRow> = summary.iter().filter(|s| s.dataset == ds).collect();
        std::fs::write(&p, crate::svg::line_plot(&format!("{ds}: test {metric}"), metric, &rows))?;
        written.push(p);
    }

    if let Some(cfg) = config.filter(|c| c.kind == ExperimentKind::NoiseComparison) {
        let cmp = noise_comparison(records, &cfg.models[0].id(), &cfg.models[1].id())?;
        let p = out_dir.join(NOISE_CSV);
        write_csv(&p, &cmp.pairs)?;
        written.push(p);
        let p = out_dir.join(NOISE_JSON);
        std::fs::write(&p, serde_json::to_string_pretty(&cmp)? + "\n")?;
        written.push(p);
    }
    Ok(written)
}

/// `report` subcommand: re-derives every report file from a records
/// directory, using its config copy when present.
pub fn report_dir(dir: &Path, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let records = read_records(&dir.join(RECORDS_FILE))?;
    let cfg_path = dir.join(CONFIG_COPY);
    let cfg = if cfg_path.exists() {
        let text = std::fs::read_to_string(&cfg_path)?;
        Some(toml::from_str::<ExperimentConfig>(&text).with_context(|| format!("parsing {}", cfg_path.display()))?)
    } else {
        None
    };
    emit_report(&records, out_dir, cfg.as_ref())
}
