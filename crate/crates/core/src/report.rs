use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheduler {
    Aloha,
    Tdma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Analytic,
    MonteCarlo,
    Emulator,
}

/// Throughput of one scheduler, in packets per slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    /// Average delivered packets per slot of one link, in `[0, 1]`.
    pub per_link_throughput: f64,
    /// Delivered packets per slot per square meter. `None` when no scheduler
    /// area was involved in the evaluation.
    pub ase: Option<f64>,
    pub scheduler: Scheduler,
    pub source: Source,
}
