use std::path::Path;

use mmwave_cli::config::{Budgets, GridRange, Spacing};
use mmwave_cli::{Engine, ExperimentConfig, Format, SweepConfig, SweepParameter};
use mmwave_core::LinkLengthMode;
use proptest::prelude::*;

fn shipped(name: &str) -> ExperimentConfig {
    ExperimentConfig::load(
        &Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("configs")
            .join(name),
    )
    .unwrap()
}

#[test]
fn shipped_configs_parse() {
    let c = shipped("collision_vs_density.toml");
    assert_eq!(c.engine_set(), [Engine::Analytic, Engine::Montecarlo]);
    assert_eq!(c.points().unwrap().len(), 10);
    assert_eq!(
        c.network.link_length,
        LinkLengthMode::RandomInDisk { d_max: 17.0 }
    );

    let c = shipped("ase_vs_density.toml");
    assert_eq!(c.points().unwrap().len(), 400);
    assert_eq!(c.output.format, Format::Json);

    let c = shipped("aloha_vs_tdma.toml");
    assert_eq!(c.budgets.emulator_runs, 4);
}

#[test]
fn empty_document_is_the_default() {
    assert_eq!(
        ExperimentConfig::from_toml_str("").unwrap(),
        ExperimentConfig::default()
    );
}

#[test]
fn unknown_keys_are_rejected() {
    let err = ExperimentConfig::from_toml_str("[network]\nlambda = 0.1\n").unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn values_and_range_are_exclusive() {
    let toml = "[sweep]\nparameter = \"rho_a\"\nvalues = [0.1]\nrange = { start = 0.1, stop = 1.0, points = 3 }\n";
    assert!(ExperimentConfig::from_toml_str(toml).is_err());
}

#[test]
fn d_max_sweep_switches_to_random_lengths() {
    let toml = "[network]\nlink_length = { mode = \"fixed\", length = 3.0 }\n\
                [sweep]\nparameter = \"d_max\"\nvalues = [5.0, 8.0]\n";
    let c = ExperimentConfig::from_toml_str(toml).unwrap();
    let p = c.points().unwrap();
    assert_eq!(
        p[1].network.link_length,
        LinkLengthMode::RandomInDisk { d_max: 8.0 }
    );
}

fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
    (
        any::<u64>(),
        1e-3..5.0f64,
        1e-4..0.5f64,
        0.0..=1.0f64,
        5.0..90.0f64,
        1.0..40.0f64,
        2usize..30,
        prop::bool::ANY,
        prop::sample::subsequence(
            vec![Engine::Analytic, Engine::Montecarlo, Engine::Emulator],
            1..=3,
        ),
    )
        .prop_map(|(seed, lt, lo, rho, theta, d, points, log, engines)| {
            let mut c = ExperimentConfig {
                seed,
                engines,
                budgets: Budgets {
                    mc_trials: 1 + seed % 1000,
                    ..Budgets::default()
                },
                ..ExperimentConfig::default()
            };
            c.network.lambda_t = lt;
            c.network.lambda_o = lo;
            c.network.rho_a = rho;
            c.network.theta_deg = theta;
            c.network.link_length = LinkLengthMode::RandomInDisk { d_max: d };
            c.sweep = Some(SweepConfig {
                parameter: SweepParameter::LambdaT,
                values: vec![],
                range: Some(GridRange {
                    start: lt,
                    stop: lt * 4.0,
                    points,
                    spacing: if log { Spacing::Log } else { Spacing::Linear },
                }),
            });
            c
        })
}

proptest! {
    #[test]
    fn toml_round_trip(c in arb_config()) {
        let text = c.to_toml_string().unwrap();
        let back = ExperimentConfig::from_toml_str(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.points().unwrap(), c.points().unwrap());
    }
}
