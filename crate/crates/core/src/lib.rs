//! Collision and throughput models for directional mmWave networks with
//! random obstacles: closed-form analysis, Monte Carlo sampling of the
//! sectored model, and a planar slot-level emulator.

pub mod analytic;
pub mod emulator;
pub mod error;
pub mod montecarlo;
pub mod params;
pub mod quad;
pub mod regime;
pub mod report;

pub use analytic::{
    aloha_ase, aloha_per_link_throughput, collision_prob, collision_prob_bounds,
    conditional_collision_prob, find_optimal_density, optimal_transmission_prob, tdma_ase,
    tdma_per_link_throughput, CollisionBounds, DensitySearch, OptimalActivity, OptimalDensity,
};
pub use emulator::{Deployment, Emulator, LinkPlacement, Region, TrafficConfig};
pub use error::{Error, Result};
pub use montecarlo::{
    estimate_collision_prob, estimate_conditional_collision_prob, CollisionEstimate, MonteCarlo,
};
pub use params::{derive_geometry, DerivedGeometry, LinkLengthMode, NetworkParams};
pub use quad::QuadConfig;
pub use regime::{classify_regime, Regime, RegimeLabel, RegimeThresholds};
pub use report::{Scheduler, Source, ThroughputReport};
