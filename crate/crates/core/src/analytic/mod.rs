//! Closed-form collision analysis of the sectored blockage model.
//!
//! The beam of the typical receiver is split into `k` coherence sectors. Within
//! a sector the nearest obstacle blocks everything behind it; sectors are
//! independent. The typical transmitter sits in the last sector at distance
//! `l`, so that sector holds no obstacle in `(0, l]`. A collision occurs iff
//! some sector contains an interferer within `d_max` that is nearer than the
//! sector's first obstacle.

mod optimize;
mod throughput;

pub use optimize::{
    find_optimal_density, golden_section_max, optimal_transmission_prob, DensitySearch,
    OptimalActivity, OptimalDensity,
};
pub use throughput::{
    aloha_ase, aloha_per_link_throughput, one_minus_exp_ratio, tdma_ase, tdma_per_link_throughput,
    unblocked_link_prob,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DerivedGeometry, LinkLengthMode};
use crate::quad::{integrate, QuadConfig};

/// Relative slack when checking `l <= d_max`.
const RANGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionBounds {
    pub lower: f64,
    pub upper: f64,
}

impl CollisionBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, p: f64, slack: f64) -> bool {
        self.lower - slack <= p && p <= self.upper + slack
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

fn check_ell(geom: &DerivedGeometry, ell: f64) -> Result<()> {
    if ell.is_nan() || ell < 0.0 || ell > geom.d_max * (1.0 + RANGE_EPS) {
        return Err(Error::OutOfRange {
            ell,
            d_max: geom.d_max,
        });
    }
    Ok(())
}

/// Probability that a sector away from the typical link receives no LoS
/// interference.
fn regular_sector_clear(geom: &DerivedGeometry, lambda_o: f64) -> f64 {
    let total = lambda_o + geom.lambda_i;
    if total <= 0.0 || geom.lambda_i == 0.0 {
        return 1.0;
    }
    let a_max = geom.sector_area_d_max();
    (lambda_o + geom.lambda_i * (-total * a_max).exp()) / total
}

/// Probability that the typical sector receives no LoS interference, written
/// as `(lo/s) e^{-lI A_l} + (lI/s) e^{lo A_l - s A_dmax}` so that a large
/// obstacle density never overflows `e^{lo A_l}`.
fn typical_sector_clear(geom: &DerivedGeometry, lambda_o: f64, ell: f64) -> f64 {
    let lambda_i = geom.lambda_i;
    if lambda_i == 0.0 {
        return 1.0;
    }
    let total = lambda_o + lambda_i;
    let a_ell = geom.sector_area(ell);
    let a_max = geom.sector_area_d_max();
    (lambda_o / total) * (-lambda_i * a_ell).exp()
        + (lambda_i / total) * (lambda_o * a_ell - total * a_max).exp()
}

/// Probability of LoS interference from one sector that does not hold the
/// typical transmitter: `lI/(lo+lI) (1 - e^{-(lo+lI) A_dmax})`.
///
/// Defined as 0 when there are no interferers at all.
pub fn los_interference_prob_regular_sector(geom: &DerivedGeometry, lambda_o: f64) -> f64 {
    let total = lambda_o + geom.lambda_i;
    if total <= 0.0 || geom.lambda_i == 0.0 {
        return 0.0;
    }
    clamp_prob(geom.lambda_i / total * -(-total * geom.sector_area_d_max()).exp_m1())
}

/// Probability of LoS interference from the sector holding the typical
/// transmitter at distance `ell`, given that no obstacle lies in `(0, ell]`.
pub fn los_interference_prob_typical_sector(
    geom: &DerivedGeometry,
    lambda_o: f64,
    ell: f64,
) -> Result<f64> {
    check_ell(geom, ell)?;
    Ok(clamp_prob(1.0 - typical_sector_clear(geom, lambda_o, ell)))
}

/// Collision probability of a typical link of length `ell`.
pub fn conditional_collision_prob(geom: &DerivedGeometry, lambda_o: f64, ell: f64) -> Result<f64> {
    check_ell(geom, ell)?;
    Ok(conditional_unchecked(geom, lambda_o, ell))
}

fn conditional_unchecked(geom: &DerivedGeometry, lambda_o: f64, ell: f64) -> f64 {
    let regular = regular_sector_clear(geom, lambda_o).powi(geom.k as i32 - 1);
    clamp_prob(1.0 - regular * typical_sector_clear(geom, lambda_o, ell))
}

/// Averages `integrand(l)` over the link-length law of `geom`.
///
/// With random lengths this is `int_0^dmax integrand(l) 2l/dmax^2 dl`; with a
/// fixed length it is the integrand at that length.
pub(crate) fn average_over_link_length<F: Fn(f64) -> f64>(
    geom: &DerivedGeometry,
    integrand: F,
    cfg: QuadConfig,
) -> Result<f64> {
    match geom.link_length {
        LinkLengthMode::Fixed { length } => {
            check_ell(geom, length)?;
            Ok(integrand(length))
        }
        LinkLengthMode::RandomInDisk { .. } => {
            let d_max = geom.d_max;
            let norm = 2.0 / (d_max * d_max);
            let r = integrate(|l| integrand(l) * l * norm, 0.0, d_max, cfg)?;
            Ok(r.value)
        }
    }
}

/// Collision probability averaged over the link-length law.
pub fn collision_prob(geom: &DerivedGeometry, lambda_o: f64) -> Result<f64> {
    collision_prob_with(geom, lambda_o, QuadConfig::default())
}

pub fn collision_prob_with(geom: &DerivedGeometry, lambda_o: f64, cfg: QuadConfig) -> Result<f64> {
    if geom.lambda_i == 0.0 {
        return Ok(0.0);
    }
    average_over_link_length(geom, |l| conditional_unchecked(geom, lambda_o, l), cfg)
        .map(clamp_prob)
}

/// Closed-form bounds from the extreme link lengths `l = 0` and `l = d_max`.
pub fn collision_prob_bounds(geom: &DerivedGeometry, lambda_o: f64) -> CollisionBounds {
    let clear = regular_sector_clear(geom, lambda_o);
    let k = geom.k as i32;
    let lower = 1.0 - clear.powi(k);
    let upper = 1.0 - (-geom.lambda_i * geom.sector_area_d_max()).exp() * clear.powi(k - 1);
    let lower = clamp_prob(lower);
    CollisionBounds {
        lower,
        upper: clamp_prob(upper).max(lower),
    }
}
