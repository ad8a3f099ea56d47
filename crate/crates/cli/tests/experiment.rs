use std::path::Path;

use mmwave_cli::output::{csv_header, render};
use mmwave_cli::{run_experiment, Engine, ExperimentConfig, Format};
use mmwave_core::{collision_prob, derive_geometry};

const SWEEP: &str = r#"
seed = 11
engines = ["analytic"]

[network]
lambda_o = 0.0025
theta_deg = 20.0
theta_c_deg = 5.0
link_length = { mode = "random_in_disk", d_max = 17.0 }

[sweep]
parameter = "lambda_t"
range = { start = 0.1, stop = 10.0, points = 20, spacing = "log" }
"#;

fn config(engines: &[Engine]) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_toml_str(SWEEP).unwrap();
    c.engines = engines.to_vec();
    c.budgets.mc_trials = 20_000;
    c.budgets.emulator_slots = 200;
    c.budgets.emulator_runs = 2;
    c
}

/// Emulator deployments grow with density times range squared; keep them small.
fn small_emulator_grid(c: &mut ExperimentConfig, values: Vec<f64>) {
    let sweep = c.sweep.as_mut().unwrap();
    sweep.range = None;
    sweep.values = values;
    c.budgets.core_cells = 1;
}

#[test]
fn analytic_sweep_has_no_stochastic_columns() {
    let c = config(&[Engine::Analytic]);
    let rows = run_experiment(&c).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().enumerate().all(|(i, r)| r.index == i));
    assert!(rows
        .iter()
        .all(|r| r.analytic.is_some() && r.montecarlo.is_none() && r.emulator.is_none()));

    let csv = String::from_utf8(render(&rows, &c.engine_set(), Format::Csv).unwrap()).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, csv_header(&[Engine::Analytic]).join(","));
    assert!(!header.contains("mc_") && !header.contains("emu_"));
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn collision_probability_increases_along_the_density_sweep() {
    let rows = run_experiment(&config(&[Engine::Analytic])).unwrap();
    let rho: Vec<f64> = rows
        .iter()
        .map(|r| r.analytic.as_ref().unwrap().collision_prob)
        .collect();
    assert!(rho.windows(2).all(|w| w[1] > w[0]), "{rho:?}");
    for r in &rows {
        let a = r.analytic.as_ref().unwrap();
        assert!(
            a.collision_lower <= a.collision_prob + 1e-9
                && a.collision_prob <= a.collision_upper + 1e-9
        );
    }
}

#[test]
fn shipped_collision_sweep_agrees_across_engines() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/collision_vs_density.toml");
    let mut c = ExperimentConfig::load(&path).unwrap();
    assert_eq!(c.budgets.mc_trials, 100_000);
    for lambda_o in [1.0 / 400.0, 1.0 / 9.0] {
        c.network.lambda_o = lambda_o;
        let rows = run_experiment(&c).unwrap();
        let rho: Vec<f64> = rows
            .iter()
            .map(|r| r.analytic.as_ref().unwrap().collision_prob)
            .collect();
        assert!(
            rho.windows(2).all(|w| w[1] > w[0]),
            "lambda_o {lambda_o}: {rho:?}"
        );
        for (r, a) in rows.iter().zip(&rho) {
            let m = r.montecarlo.as_ref().unwrap();
            let z = (m.collision_prob - a).abs() / m.std_error;
            assert!(
                z <= 3.0,
                "lambda_o {lambda_o}, lambda_t {}: {} vs {a} (z = {z:.2})",
                r.value,
                m.collision_prob
            );
        }
    }
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let mut c = config(&[Engine::Analytic, Engine::Montecarlo, Engine::Emulator]);
    small_emulator_grid(&mut c, vec![0.05, 0.1, 0.2, 0.4]);
    let engines = c.engine_set();
    let render_all = |rows: &[mmwave_cli::ResultRow]| {
        (
            render(rows, &engines, Format::Csv).unwrap(),
            render(rows, &engines, Format::Json).unwrap(),
        )
    };
    let first = render_all(&run_experiment(&c).unwrap());
    let second = render_all(&run_experiment(&c).unwrap());
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let third = render_all(&single.install(|| run_experiment(&c)).unwrap());
    assert_eq!(first, second);
    assert_eq!(first, third);

    c.seed += 1;
    assert_ne!(first.0, render_all(&run_experiment(&c).unwrap()).0);
}

#[test]
fn rows_match_direct_core_calls() {
    let c = config(&[Engine::Analytic]);
    let rows = run_experiment(&c).unwrap();
    for (r, p) in rows.iter().zip(c.points().unwrap()) {
        let params = p.network.to_params();
        let expected = collision_prob(&derive_geometry(&params).unwrap(), params.lambda_o).unwrap();
        assert_eq!(r.analytic.as_ref().unwrap().collision_prob, expected);
        assert_eq!(r.value, params.lambda_t);
    }
}

#[test]
fn emulator_columns_are_filled() {
    let mut c = config(&[Engine::Emulator]);
    small_emulator_grid(&mut c, vec![0.1, 0.3]);
    let rows = run_experiment(&c).unwrap();
    for r in rows {
        let e = r.emulator.unwrap();
        assert_eq!(e.runs, 2);
        assert!(e.link_slots > 0);
        assert!(
            (0.0..=1.0).contains(&e.aloha_throughput) && (0.0..=1.0).contains(&e.tdma_throughput)
        );
    }
}
