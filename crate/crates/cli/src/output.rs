//! CSV and JSON writers. Files are written to a temporary sibling and renamed
//! into place, so a failed run never leaves a truncated dataset.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Engine, ExperimentConfig, Format};
use crate::error::CliError;
use crate::experiment::ResultRow;

const ANALYTIC_COLUMNS: [&str; 11] = [
    "d_max",
    "k",
    "lambda_i",
    "collision_prob",
    "collision_lower",
    "collision_upper",
    "regime",
    "aloha_throughput",
    "aloha_ase",
    "tdma_throughput",
    "tdma_ase",
];
const MONTECARLO_COLUMNS: [&str; 6] = [
    "mc_collision_prob",
    "mc_std_error",
    "mc_ci_low",
    "mc_ci_high",
    "mc_trials",
    "mc_regime",
];
const EMULATOR_COLUMNS: [&str; 7] = [
    "emu_runs",
    "emu_link_slots",
    "emu_collision_freq",
    "emu_aloha_throughput",
    "emu_aloha_ase",
    "emu_tdma_throughput",
    "emu_tdma_ase",
];

/// CSV header for a set of engines. It depends only on the engines, never on
/// the values.
pub fn csv_header(engines: &[Engine]) -> Vec<&'static str> {
    let mut h = vec!["index", "parameter", "value"];
    for e in engines {
        h.extend_from_slice(match e {
            Engine::Analytic => &ANALYTIC_COLUMNS[..],
            Engine::Montecarlo => &MONTECARLO_COLUMNS[..],
            Engine::Emulator => &EMULATOR_COLUMNS[..],
        });
    }
    h
}

fn csv_record(row: &ResultRow, engines: &[Engine]) -> Vec<String> {
    let mut r = vec![
        row.index.to_string(),
        row.parameter.clone(),
        row.value.to_string(),
    ];
    for e in engines {
        match e {
            Engine::Analytic => match &row.analytic {
                Some(a) => r.extend([
                    a.d_max.to_string(),
                    a.k.to_string(),
                    a.lambda_i.to_string(),
                    a.collision_prob.to_string(),
                    a.collision_lower.to_string(),
                    a.collision_upper.to_string(),
                    a.regime.to_string(),
                    a.aloha_throughput.to_string(),
                    a.aloha_ase.to_string(),
                    a.tdma_throughput.to_string(),
                    a.tdma_ase.to_string(),
                ]),
                None => r.extend(ANALYTIC_COLUMNS.iter().map(|_| String::new())),
            },
            Engine::Montecarlo => match &row.montecarlo {
                Some(m) => r.extend([
                    m.collision_prob.to_string(),
                    m.std_error.to_string(),
                    m.ci_low.to_string(),
                    m.ci_high.to_string(),
                    m.trials.to_string(),
                    m.regime.to_string(),
                ]),
                None => r.extend(MONTECARLO_COLUMNS.iter().map(|_| String::new())),
            },
            Engine::Emulator => match &row.emulator {
                Some(m) => r.extend([
                    m.runs.to_string(),
                    m.link_slots.to_string(),
                    m.collision_freq.map(|v| v.to_string()).unwrap_or_default(),
                    m.aloha_throughput.to_string(),
                    m.aloha_ase.to_string(),
                    m.tdma_throughput.to_string(),
                    m.tdma_ase.to_string(),
                ]),
                None => r.extend(EMULATOR_COLUMNS.iter().map(|_| String::new())),
            },
        }
    }
    r
}

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow], engines: &[Engine]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(engines)).map_err(err)?;
    for row in rows {
        w.write_record(csv_record(row, engines)).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn render(rows: &[ResultRow], engines: &[Engine], format: Format) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, rows, engines)?,
        Format::Json => write_json(&mut buf, rows)?,
    }
    Ok(buf)
}

/// Replaces `path` with `bytes` in one rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    seed: u64,
    rows: usize,
    config: &'a ExperimentConfig,
}

/// Writes the rows where the config says, plus the manifest if requested.
/// Without an output path the rows go to standard output.
pub fn emit(config: &ExperimentConfig, rows: &[ResultRow]) -> Result<(), CliError> {
    let bytes = render(rows, &config.engine_set(), config.output.format)?;
    let Some(path) = &config.output.path else {
        std::io::stdout().lock().write_all(&bytes)?;
        return Ok(());
    };
    write_atomic(path, &bytes)?;
    if config.output.manifest {
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            rows: rows.len(),
            config,
        };
        let mut buf = Vec::new();
        write_json(&mut buf, &manifest)?;
        write_atomic(&manifest_path(path), &buf)?;
    }
    Ok(())
}
