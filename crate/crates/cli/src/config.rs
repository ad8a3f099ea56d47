//! TOML experiment description. Angles are in degrees, powers in milliwatts,
//! densities per square meter, lengths in meters.

use std::path::{Path, PathBuf};

use mmwave_core::emulator::TrafficConfig;
use mmwave_core::{derive_geometry, LinkLengthMode, NetworkParams, RegimeThresholds};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Missing fields take the [`NetworkParams`] defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub lambda_t: f64,
    pub lambda_o: f64,
    pub rho_a: f64,
    pub theta_deg: f64,
    pub theta_c_deg: f64,
    pub power_mw: f64,
    /// Average channel attenuation at 1 m (linear).
    pub attenuation: f64,
    pub alpha: f64,
    /// SINR threshold (linear).
    pub beta: f64,
    pub noise_mw: f64,
    pub link_length: LinkLengthMode,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self::from_params(&NetworkParams::default())
    }
}

impl NetworkConfig {
    pub fn from_params(p: &NetworkParams) -> Self {
        Self {
            lambda_t: p.lambda_t,
            lambda_o: p.lambda_o,
            rho_a: p.rho_a,
            theta_deg: p.theta.to_degrees(),
            theta_c_deg: p.theta_c.to_degrees(),
            power_mw: p.power * 1e3,
            attenuation: p.attenuation,
            alpha: p.alpha,
            beta: p.beta,
            noise_mw: p.noise * 1e3,
            link_length: p.link_length,
        }
    }

    pub fn to_params(&self) -> NetworkParams {
        NetworkParams {
            lambda_t: self.lambda_t,
            lambda_o: self.lambda_o,
            rho_a: self.rho_a,
            theta: self.theta_deg.to_radians(),
            theta_c: self.theta_c_deg.to_radians(),
            power: self.power_mw * 1e-3,
            attenuation: self.attenuation,
            alpha: self.alpha,
            beta: self.beta,
            noise: self.noise_mw * 1e-3,
            link_length: self.link_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    LambdaT,
    LambdaO,
    RhoA,
    ThetaDeg,
    ThetaCDeg,
    PowerMw,
    Beta,
    NoiseMw,
    /// Interference range; switches to random link lengths.
    DMax,
    /// Fixed link length; switches to fixed-length links.
    LinkLength,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::LambdaT => "lambda_t",
            SweepParameter::LambdaO => "lambda_o",
            SweepParameter::RhoA => "rho_a",
            SweepParameter::ThetaDeg => "theta_deg",
            SweepParameter::ThetaCDeg => "theta_c_deg",
            SweepParameter::PowerMw => "power_mw",
            SweepParameter::Beta => "beta",
            SweepParameter::NoiseMw => "noise_mw",
            SweepParameter::DMax => "d_max",
            SweepParameter::LinkLength => "link_length",
        }
    }

    pub fn apply(self, base: &NetworkConfig, value: f64) -> NetworkConfig {
        let mut c = *base;
        match self {
            SweepParameter::LambdaT => c.lambda_t = value,
            SweepParameter::LambdaO => c.lambda_o = value,
            SweepParameter::RhoA => c.rho_a = value,
            SweepParameter::ThetaDeg => c.theta_deg = value,
            SweepParameter::ThetaCDeg => c.theta_c_deg = value,
            SweepParameter::PowerMw => c.power_mw = value,
            SweepParameter::Beta => c.beta = value,
            SweepParameter::NoiseMw => c.noise_mw = value,
            SweepParameter::DMax => c.link_length = LinkLengthMode::RandomInDisk { d_max: value },
            SweepParameter::LinkLength => c.link_length = LinkLengthMode::Fixed { length: value },
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// One swept parameter, given either as explicit `values` or as a `range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<GridRange>,
}

impl SweepConfig {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let grid = match (&self.values[..], self.range) {
            ([], Some(r)) => {
                if r.points == 0 {
                    return Err(CliError::Config(
                        "sweep range needs at least one point".into(),
                    ));
                }
                if r.spacing == Spacing::Log && !(r.start > 0.0 && r.stop > 0.0) {
                    return Err(CliError::Config("log spacing needs positive bounds".into()));
                }
                let t = |i: usize| {
                    if r.points == 1 {
                        0.0
                    } else {
                        i as f64 / (r.points - 1) as f64
                    }
                };
                (0..r.points)
                    .map(|i| match r.spacing {
                        Spacing::Linear => r.start + (r.stop - r.start) * t(i),
                        Spacing::Log => r.start * (r.stop / r.start).powf(t(i)),
                    })
                    .collect()
            }
            ([_, ..], None) => self.values.clone(),
            ([], None) => return Err(CliError::Config("sweep grid is empty".into())),
            (_, Some(_)) => {
                return Err(CliError::Config(
                    "give either sweep.values or sweep.range, not both".into(),
                ))
            }
        };
        if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(format!(
                "sweep grid for {} must be finite and strictly increasing",
                self.parameter.name()
            )));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Analytic,
    Montecarlo,
    Emulator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Monte Carlo trials per grid point.
    pub mc_trials: u64,
    /// Slots per emulator run.
    pub emulator_slots: u64,
    /// Independent deployments per grid point.
    pub emulator_runs: u64,
    /// Side of the statistics core, in scheduler cells.
    pub core_cells: usize,
    /// Always-backlogged transmitters instead of constant-bit-rate traffic.
    pub saturated: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            mc_trials: 100_000,
            emulator_slots: 10_000,
            emulator_runs: 10,
            core_cells: 3,
            saturated: true,
        }
    }
}

impl Budgets {
    pub fn traffic(&self) -> TrafficConfig {
        if self.saturated {
            TrafficConfig::saturated(self.emulator_slots)
        } else {
            let base = TrafficConfig::default();
            TrafficConfig {
                emulation_time: self.emulator_slots as f64 * base.slot_duration,
                ..base
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Destination file; standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Also write `<path>.manifest.json` with the full config and seed.
    pub manifest: bool,
}

fn default_engines() -> Vec<Engine> {
    vec![Engine::Analytic]
}

fn default_area() -> f64 {
    100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_engines")]
    pub engines: Vec<Engine>,
    /// TDMA scheduler area and ALOHA ASE area (m^2).
    #[serde(default = "default_area")]
    pub scheduler_area: f64,
    #[serde(default)]
    pub network: NetworkConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub regime: RegimeThresholds,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            engines: default_engines(),
            scheduler_area: default_area(),
            network: NetworkConfig::default(),
            sweep: None,
            budgets: Budgets::default(),
            regime: RegimeThresholds::default(),
            output: OutputConfig::default(),
        }
    }
}

/// One evaluation point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub value: f64,
    pub network: NetworkConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Requested engines, deduplicated in canonical order.
    pub fn engine_set(&self) -> Vec<Engine> {
        let mut e = self.engines.clone();
        e.sort();
        e.dedup();
        e
    }

    pub fn sweep_name(&self) -> &'static str {
        self.sweep.as_ref().map_or("base", |s| s.parameter.name())
    }

    /// Grid points in order; a config without a sweep is a single point with
    /// value 0.
    pub fn points(&self) -> Result<Vec<GridPoint>, CliError> {
        let Some(sweep) = &self.sweep else {
            return Ok(vec![GridPoint {
                index: 0,
                value: 0.0,
                network: self.network,
            }]);
        };
        Ok(sweep
            .grid()?
            .into_iter()
            .enumerate()
            .map(|(index, value)| GridPoint {
                index,
                value,
                network: sweep.parameter.apply(&self.network, value),
            })
            .collect())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.engines.is_empty() {
            return Err(CliError::Config("no engines requested".into()));
        }
        if !(self.scheduler_area.is_finite() && self.scheduler_area > 0.0) {
            return Err(CliError::Config(format!(
                "scheduler_area must be > 0, got {}",
                self.scheduler_area
            )));
        }
        let b = &self.budgets;
        if b.mc_trials == 0 || b.emulator_slots == 0 || b.emulator_runs == 0 || b.core_cells == 0 {
            return Err(CliError::Config("budgets must all be positive".into()));
        }
        self.regime
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        for p in self.points()? {
            derive_geometry(&p.network.to_params()).map_err(|e| {
                CliError::Config(format!(
                    "{} = {} gives invalid parameters: {e}",
                    self.sweep_name(),
                    p.value
                ))
            })?;
        }
        Ok(())
    }
}
