use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use qensemble_bench::config::{BackendSpec, ExperimentConfig};
use qensemble_bench::plan::planned_resources;
use qensemble_bench::report::{emit_report, report_dir};
use qensemble_bench::spec::parse_backend;
use qensemble_bench::{run_experiment, RunOptions};

#[derive(Parser)]
#[command(name = "qensemble", version, about = "Train and compare ensembles of simulated quantum neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every model × layers × repeat cell of an experiment config.
    Run {
        config: PathBuf,
        /// Root seed; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// exact | shots:N | noisy:lagos[:T]; overrides the config.
        #[arg(long)]
        backend: Option<String>,
        /// Output directory (default: the config's output_dir, else
        /// $QENSEMBLE_OUT_DIR/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "QENSEMBLE_OUT_DIR", default_value = "results", hide_env_values = true)]
        out_root: PathBuf,
        /// No per-cell progress lines.
        #[arg(long)]
        quiet: bool,
    },
    /// Rebuild summaries and figure data from a records directory.
    Report {
        records_dir: PathBuf,
        /// Where to write (default: the records directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print qubit and parameter counts per model and depth.
    Resources {
        config: PathBuf,
        /// Also write resources.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn print_table(rows: &[qensemble_bench::report::ResourceRow]) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<12} {:<14} {:>6} {:>7} {:>6} {:>7} {:>6} {:>12}",
        "dataset", "model", "layers", "members", "qubits", "params", "cnots", "total_params"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<12} {:<14} {:>6} {:>7} {:>6} {:>7} {:>6} {:>12}",
            r.dataset, r.model, r.layers, r.members, r.qubits, r.params, r.cnots, r.total_params
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            jobs,
            backend,
            out,
            out_root,
            quiet,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(b) = backend {
                cfg.backend = BackendSpec::from_backend(&parse_backend(&b)?);
                cfg.validate()?;
            }
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| out_root.join(&cfg.name));
            let records = run_experiment(
                &cfg,
                &RunOptions {
                    out_dir: out_dir.clone(),
                    jobs,
                    progress: !quiet,
                },
            )?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            let files = emit_report(&records, &out_dir, Some(&cfg))?;
            println!("{} records ({failed} failed) in {}", records.len(), out_dir.display());
            for f in files {
                println!("  {}", f.display());
            }
        }
        Command::Report { records_dir, out } => {
            let out = out.unwrap_or_else(|| records_dir.clone());
            for f in report_dir(&records_dir, &out)? {
                println!("{}", f.display());
            }
        }
        Command::Resources { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = planned_resources(&cfg)?;
            print_table(&rows)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                let path = Path::new(&dir).join("resources.csv");
                let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
                for r in &rows {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
