use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmwave_cli::commands::{emit_emulation, emit_value, emulate, optimize_density, optimize_rho_a};
use mmwave_cli::output::emit;
use mmwave_cli::{run_experiment, CliError, Engine, ExperimentConfig, Format};
use mmwave_core::{DensitySearch, Scheduler};

#[derive(Parser)]
#[command(
    name = "mmwave",
    version,
    about = "Collision and throughput experiments for directional mmWave networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML experiment file. Built-in defaults are used without one.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.output.path = Some(out.clone());
        }
        if let Some(format) = self.format {
            cfg.output.format = format;
        }
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Montecarlo,
    Emulator,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Montecarlo => Engine::Montecarlo,
            EngineArg::Emulator => Engine::Emulator,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Transmission probability maximizing per-link ALOHA throughput.
    RhoA,
    /// Transmitter density maximizing ALOHA ASE.
    Density,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedulerArg {
    Aloha,
    Tdma,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the base network of the config, ignoring any sweep.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Engines to run; overrides the config.
        #[arg(long, value_enum, value_delimiter = ',')]
        engines: Vec<EngineArg>,
    },
    /// Evaluate every point of the configured sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, value_delimiter = ',')]
        engines: Vec<EngineArg>,
    },
    /// Optimize the ALOHA operating point of the base network.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        target: Target,
        #[arg(long, default_value_t = 0.05)]
        min_density: f64,
        #[arg(long, default_value_t = 20.0)]
        max_density: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Emulate one deployment of the base network.
    Emulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "aloha")]
        scheduler: SchedulerArg,
        /// Record every link outcome of every slot.
        #[arg(long)]
        full_trace: bool,
    },
}

fn with_engines(mut cfg: ExperimentConfig, engines: &[EngineArg]) -> ExperimentConfig {
    if !engines.is_empty() {
        cfg.engines = engines.iter().map(|&e| e.into()).collect();
    }
    cfg
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { common, engines } => {
            let mut cfg = with_engines(common.load()?, &engines);
            cfg.sweep = None;
            let rows = run_experiment(&cfg)?;
            emit(&cfg, &rows)
        }
        Command::Sweep { common, engines } => {
            let cfg = with_engines(common.load()?, &engines);
            if cfg.sweep.is_none() {
                return Err(CliError::Config(
                    "sweep needs a [sweep] table in the config".into(),
                ));
            }
            let rows = run_experiment(&cfg)?;
            emit(&cfg, &rows)
        }
        Command::Optimize {
            common,
            target,
            min_density,
            max_density,
            points,
        } => {
            let cfg = common.load()?;
            match target {
                Target::RhoA => emit_value(&cfg, &optimize_rho_a(&cfg)?),
                Target::Density => {
                    let search = DensitySearch {
                        min: min_density,
                        max: max_density,
                        points,
                    };
                    emit_value(&cfg, &optimize_density(&cfg, search)?)
                }
            }
        }
        Command::Emulate {
            common,
            scheduler,
            full_trace,
        } => {
            let cfg = common.load()?;
            let scheduler = match scheduler {
                SchedulerArg::Aloha => Scheduler::Aloha,
                SchedulerArg::Tdma => Scheduler::Tdma,
            };
            emit_emulation(&cfg, &emulate(&cfg, scheduler, full_trace)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
