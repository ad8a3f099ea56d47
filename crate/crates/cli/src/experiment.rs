//! Evaluates every grid point of an experiment with the requested engines.

use mmwave_core::emulator::{run_ensemble, Region};
use mmwave_core::{
    aloha_ase, classify_regime, collision_prob, collision_prob_bounds, derive_geometry, tdma_ase,
    MonteCarlo, RegimeLabel, Scheduler,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Engine, ExperimentConfig, GridPoint};
use crate::error::CliError;

/// Offset separating emulator seeds from Monte Carlo seeds.
const EMULATOR_SEED_OFFSET: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticResult {
    pub d_max: f64,
    pub k: u32,
    pub lambda_i: f64,
    pub collision_prob: f64,
    pub collision_lower: f64,
    pub collision_upper: f64,
    pub regime: RegimeLabel,
    pub aloha_throughput: f64,
    pub aloha_ase: f64,
    pub tdma_throughput: f64,
    pub tdma_ase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub collision_prob: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub regime: RegimeLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmulatorResult {
    pub runs: u64,
    pub link_slots: u64,
    /// Collided share of unblocked attempts; `None` if nothing was attempted.
    pub collision_freq: Option<f64>,
    pub aloha_throughput: f64,
    pub aloha_ase: f64,
    pub tdma_throughput: f64,
    pub tdma_ase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub index: usize,
    pub parameter: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub montecarlo: Option<MonteCarloResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emulator: Option<EmulatorResult>,
}

/// Monte Carlo seed of grid point `index`.
pub fn montecarlo_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Emulator base seed of grid point `index`. Run `i` of the ensemble uses
/// `base + 2i` and `base + 2i + 1`, so points never share a stream.
pub fn emulator_seed(seed: u64, index: usize, runs: u64) -> u64 {
    seed.wrapping_add(EMULATOR_SEED_OFFSET)
        .wrapping_add((index as u64).wrapping_mul(2 * runs))
}

/// Runs the experiment; rows come back in grid order regardless of threading.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>, CliError> {
    config.validate()?;
    let engines = config.engine_set();
    let parameter = config.sweep_name();
    config
        .points()?
        .into_par_iter()
        .map(|p| {
            evaluate(config, &engines, &p).map_err(|source| CliError::Engine {
                index: p.index,
                parameter: parameter.to_owned(),
                value: p.value,
                source,
            })
        })
        .collect()
}

fn evaluate(
    config: &ExperimentConfig,
    engines: &[Engine],
    p: &GridPoint,
) -> mmwave_core::Result<ResultRow> {
    let params = p.network.to_params();
    let geom = derive_geometry(&params)?;
    let area = config.scheduler_area;
    let mut row = ResultRow {
        index: p.index,
        parameter: config.sweep_name().to_owned(),
        value: p.value,
        analytic: None,
        montecarlo: None,
        emulator: None,
    };
    for engine in engines {
        match engine {
            Engine::Analytic => {
                let rho_c = collision_prob(&geom, params.lambda_o)?;
                let bounds = collision_prob_bounds(&geom, params.lambda_o);
                let aloha = aloha_ase(&geom, params.lambda_o, params.rho_a, area)?;
                let tdma = tdma_ase(&geom, params.lambda_o, area)?;
                row.analytic = Some(AnalyticResult {
                    d_max: geom.d_max,
                    k: geom.k,
                    lambda_i: geom.lambda_i,
                    collision_prob: rho_c,
                    collision_lower: bounds.lower,
                    collision_upper: bounds.upper,
                    regime: classify_regime(rho_c, config.regime).label,
                    aloha_throughput: aloha.per_link_throughput,
                    aloha_ase: aloha.ase.unwrap_or_default(),
                    tdma_throughput: tdma.per_link_throughput,
                    tdma_ase: tdma.ase.unwrap_or_default(),
                });
            }
            Engine::Montecarlo => {
                let est = MonteCarlo::new(&params)?.marginal(
                    0..config.budgets.mc_trials,
                    montecarlo_seed(config.seed, p.index),
                )?;
                row.montecarlo = Some(MonteCarloResult {
                    collision_prob: est.mean,
                    std_error: est.std_error,
                    ci_low: est.confidence_interval_95.0,
                    ci_high: est.confidence_interval_95.1,
                    trials: est.trials,
                    regime: classify_regime(est.mean, config.regime).label,
                });
            }
            Engine::Emulator => {
                let b = &config.budgets;
                let region = Region::for_range(area, b.core_cells, geom.d_max)?;
                let traffic = b.traffic();
                let seed = emulator_seed(config.seed, p.index, b.emulator_runs);
                let aloha = run_ensemble(
                    &params,
                    region,
                    traffic,
                    Scheduler::Aloha,
                    0..b.emulator_runs,
                    seed,
                )?;
                let tdma = run_ensemble(
                    &params,
                    region,
                    traffic,
                    Scheduler::Tdma,
                    0..b.emulator_runs,
                    seed,
                )?;
                row.emulator = Some(EmulatorResult {
                    runs: aloha.runs,
                    link_slots: aloha.link_slots,
                    collision_freq: aloha.collision_frequency(),
                    aloha_throughput: aloha.per_link_throughput(),
                    aloha_ase: aloha.ase(),
                    tdma_throughput: tdma.per_link_throughput(),
                    tdma_ase: tdma.ase(),
                });
            }
        }
    }
    Ok(row)
}
