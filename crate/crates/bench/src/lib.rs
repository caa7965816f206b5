//! Experiment harness: config files, grid runs, records and reports.

pub mod config;
pub mod plan;
pub mod prepare;
pub mod report;
pub mod runner;
pub mod seeds;
pub mod spec;
pub mod svg;

pub use config::ExperimentConfig;
pub use runner::{run_experiment, RunOptions, RunRecord};
