//! Single-shot commands that do not fit the grid-of-rows shape.

use mmwave_core::emulator::{generate_deployment, SlotTrace};
use mmwave_core::{
    derive_geometry, find_optimal_density, optimal_transmission_prob, DensitySearch, Emulator,
    LinkLengthMode, LinkPlacement, OptimalActivity, OptimalDensity, Region, Scheduler,
    ThroughputReport,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use crate::output::{write_atomic, write_json};

/// Engine failures outside a sweep are reported against the base point.
fn engine_err(source: mmwave_core::Error) -> CliError {
    CliError::Engine {
        index: 0,
        parameter: "base".into(),
        value: 0.0,
        source,
    }
}

/// ALOHA transmission probability maximizing per-link throughput at the base
/// network of `config`.
pub fn optimize_rho_a(config: &ExperimentConfig) -> Result<OptimalActivity, CliError> {
    let params = config.network.to_params();
    let geom = derive_geometry(&params).map_err(engine_err)?;
    optimal_transmission_prob(&geom, params.lambda_o).map_err(engine_err)
}

/// Transmitter density maximizing ALOHA ASE at the base network of `config`.
pub fn optimize_density(
    config: &ExperimentConfig,
    search: DensitySearch,
) -> Result<OptimalDensity, CliError> {
    let params = config.network.to_params();
    let geom = derive_geometry(&params).map_err(engine_err)?;
    find_optimal_density(&geom, params.lambda_o, config.scheduler_area, search).map_err(engine_err)
}

#[derive(Debug, Clone, Serialize)]
pub struct EmulationRun {
    pub seed: u64,
    pub links: usize,
    pub obstacles: usize,
    pub core_links: usize,
    pub report: ThroughputReport,
    pub trace: SlotTrace,
}

/// One deployment drawn from `config.seed`, run under `scheduler`.
pub fn emulate(
    config: &ExperimentConfig,
    scheduler: Scheduler,
    full_trace: bool,
) -> Result<EmulationRun, CliError> {
    let params = config.network.to_params();
    let geom = derive_geometry(&params).map_err(engine_err)?;
    let region = Region::for_range(config.scheduler_area, config.budgets.core_cells, geom.d_max)
        .map_err(engine_err)?;
    let placement = match params.link_length {
        LinkLengthMode::Fixed { length } => LinkPlacement::Fixed { length },
        LinkLengthMode::RandomInDisk { d_max } => LinkPlacement::RandomInDisk { d_max },
    };
    let deployment = generate_deployment(
        region,
        params.lambda_t,
        params.lambda_o,
        placement,
        config.seed,
    )
    .map_err(engine_err)?;
    let emu = Emulator::new(&deployment, &params, config.budgets.traffic())
        .map_err(engine_err)?
        .with_full_trace(full_trace);
    let (report, trace) = match scheduler {
        Scheduler::Aloha => emu.run_aloha(config.seed.wrapping_add(1)),
        Scheduler::Tdma => emu.run_tdma(),
    };
    Ok(EmulationRun {
        seed: config.seed,
        links: deployment.links.len(),
        obstacles: deployment.obstacles.len(),
        core_links: trace.links.len(),
        report,
        trace,
    })
}

/// CSV form of an emulation: one row per slot record when a full trace was
/// kept, otherwise one row of counters per tracked link.
pub fn emulation_csv(run: &EmulationRun) -> Result<Vec<u8>, CliError> {
    let err = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    match &run.trace.records {
        Some(records) => {
            w.write_record(["slot", "link", "outcome"]).map_err(err)?;
            for r in records {
                let outcome =
                    serde_json::to_value(r.outcome).map_err(|e| CliError::Output(e.to_string()))?;
                w.write_record([
                    r.slot.to_string(),
                    r.link.to_string(),
                    outcome.as_str().unwrap_or_default().to_owned(),
                ])
                .map_err(err)?;
            }
        }
        None => {
            w.write_record([
                "link",
                "offered",
                "attempted",
                "blocked",
                "collided",
                "delivered",
                "idle",
            ])
            .map_err(err)?;
            for (link, c) in run.trace.links.iter().zip(&run.trace.counters) {
                w.write_record(
                    [
                        *link as u64,
                        c.offered,
                        c.attempted,
                        c.blocked,
                        c.collided,
                        c.delivered,
                        c.idle,
                    ]
                    .map(|v| v.to_string()),
                )
                .map_err(err)?;
            }
        }
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

/// Writes any serializable result as JSON to the configured destination.
pub fn emit_value<T: Serialize>(config: &ExperimentConfig, value: &T) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    emit_bytes(config, &buf)
}

pub fn emit_bytes(config: &ExperimentConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &config.output.path {
        Some(path) => write_atomic(path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(bytes)?;
            Ok(())
        }
    }
}

pub fn emit_emulation(config: &ExperimentConfig, run: &EmulationRun) -> Result<(), CliError> {
    match config.output.format {
        Format::Json => emit_value(config, run),
        Format::Csv => emit_bytes(config, &emulation_csv(run)?),
    }
}
