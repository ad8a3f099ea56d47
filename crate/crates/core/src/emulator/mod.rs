//! Planar discrete-event emulation of a directional mmWave network.
//!
//! Transmitters and obstacle centers are Poisson on a square region. Obstacles
//! are line segments; a path is blocked iff it crosses one. Statistics are
//! taken over links whose receivers lie in the inner core of the region.

mod deployment;
mod engine;
pub mod geometry;
mod traffic;

pub use deployment::{generate_deployment, Deployment, Link, LinkPlacement, Region};
pub use engine::{
    omni_power_factor, omnidirectional_benchmark, omnidirectional_params, run_ensemble,
    run_slotted_aloha, run_tdma, slot_outcome, EmulationTally, Emulator, InterferenceMap,
    LinkCounters, LinkOutcome, SlotRecord, SlotTrace,
};
pub use geometry::{Point, Segment};
pub use traffic::TrafficConfig;
