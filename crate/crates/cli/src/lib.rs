//! Experiment configuration, sweep execution and dataset export on top of
//! `mmwave-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use config::{Engine, ExperimentConfig, Format, SweepConfig, SweepParameter};
pub use error::CliError;
pub use experiment::{run_experiment, ResultRow};
