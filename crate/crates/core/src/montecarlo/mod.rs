//! Direct sampling of the sectored blockage model.
//!
//! Each trial draws independent Poisson interferer and obstacle processes in
//! every coherence sector of the receiving beam, conditions the typical
//! sector on an obstacle-free stretch `(0, l]`, and checks whether any sector
//! has an interferer within range that is nearer than its first obstacle.
//!
//! Trial `i` under seed `s` always uses ChaCha8 stream `i` of seed `s`, so
//! estimates over disjoint trial ranges merge exactly into the estimate over
//! their union, whatever the thread count.

mod estimate;
pub mod stats;

pub use estimate::CollisionEstimate;

use std::ops::Range;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{derive_geometry, DerivedGeometry, LinkLengthMode, NetworkParams};

/// The RNG of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    /// Radius of the sampled sectors; `None` samples up to `d_max`, beyond
    /// which no point can influence a collision.
    pub radius: Option<f64>,
    /// Redraws of the typical sector before giving up on rejection.
    pub rejection_cap: u32,
    /// After `rejection_cap` failures, sample the obstacles of the typical
    /// sector directly on `(l, R]` instead of failing.
    pub fallback_truncated: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            radius: None,
            rejection_cap: 10_000,
            fallback_truncated: true,
        }
    }
}

/// One draw of the sectored model around the typical receiver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorTopology {
    /// Sorted interferer distances, one list per sector.
    pub interferers: Vec<Vec<f64>>,
    /// Sorted obstacle distances, one list per sector.
    pub obstacles: Vec<Vec<f64>>,
    pub ell: f64,
    pub typical_sector: usize,
}

impl SectorTopology {
    pub fn nearest_interferer(&self, sector: usize) -> Option<f64> {
        self.interferers[sector].first().copied()
    }

    pub fn nearest_obstacle(&self, sector: usize) -> Option<f64> {
        self.obstacles[sector].first().copied()
    }
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive mean");
    dist.sample(rng) as usize
}

/// Poisson points uniform in area over the annular sector `(inner, outer]`,
/// returned as sorted radial distances.
fn sample_radial<R: Rng>(
    rng: &mut R,
    density: f64,
    theta_c: f64,
    inner: f64,
    outer: f64,
) -> Vec<f64> {
    let (a2, b2) = (inner * inner, outer * outer);
    let n = poisson_count(rng, density * theta_c * (b2 - a2) / 2.0);
    let mut r: Vec<f64> = (0..n)
        .map(|_| (a2 + rng.random::<f64>() * (b2 - a2)).sqrt())
        .collect();
    r.sort_by(f64::total_cmp);
    r
}

/// Samples one topology with the caller's RNG.
pub fn sample_sector_topology_with<R: Rng>(
    rng: &mut R,
    geom: &DerivedGeometry,
    lambda_o: f64,
    ell: f64,
    cfg: &SamplerConfig,
) -> Result<SectorTopology> {
    if !(0.0..=geom.d_max * (1.0 + 1e-12)).contains(&ell) {
        return Err(Error::OutOfRange {
            ell,
            d_max: geom.d_max,
        });
    }
    let radius = cfg.radius.unwrap_or(geom.d_max).max(geom.d_max);
    let k = geom.k as usize;
    let typical = k - 1;
    let mut interferers = Vec::with_capacity(k);
    let mut obstacles = Vec::with_capacity(k);
    for sector in 0..k {
        interferers.push(sample_radial(rng, geom.lambda_i, geom.theta_c, 0.0, radius));
        if sector != typical {
            obstacles.push(sample_radial(rng, lambda_o, geom.theta_c, 0.0, radius));
            continue;
        }
        let mut attempts = 0;
        let conditioned = loop {
            let draw = sample_radial(rng, lambda_o, geom.theta_c, 0.0, radius);
            if draw.first().is_none_or(|&d| d > ell) {
                break draw;
            }
            attempts += 1;
            if attempts >= cfg.rejection_cap {
                if !cfg.fallback_truncated {
                    return Err(Error::RejectionOverflow { attempts });
                }
                break sample_radial(rng, lambda_o, geom.theta_c, ell, radius);
            }
        };
        obstacles.push(conditioned);
    }
    Ok(SectorTopology {
        interferers,
        obstacles,
        ell,
        typical_sector: typical,
    })
}

/// Samples one topology from `seed` alone.
pub fn sample_sector_topology(
    geom: &DerivedGeometry,
    lambda_o: f64,
    ell: f64,
    seed: u64,
) -> Result<SectorTopology> {
    sample_sector_topology_with(
        &mut trial_rng(seed, 0),
        geom,
        lambda_o,
        ell,
        &SamplerConfig::default(),
    )
}

/// True iff some sector has an interferer within `d_max` strictly nearer than
/// that sector's first obstacle.
pub fn trial_has_collision(topology: &SectorTopology, d_max: f64) -> bool {
    (0..topology.interferers.len()).any(|s| match topology.nearest_interferer(s) {
        Some(d) if d <= d_max => topology.nearest_obstacle(s).is_none_or(|o| d < o),
        _ => false,
    })
}

/// Sector-model Monte Carlo engine for one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    pub geom: DerivedGeometry,
    pub lambda_o: f64,
    pub sampler: SamplerConfig,
}

impl MonteCarlo {
    pub fn new(params: &NetworkParams) -> Result<Self> {
        Ok(Self {
            geom: derive_geometry(params)?,
            lambda_o: params.lambda_o,
            sampler: SamplerConfig::default(),
        })
    }

    fn count<F>(&self, trials: Range<u64>, seed: u64, draw_ell: F) -> Result<CollisionEstimate>
    where
        F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    {
        if trials.is_empty() {
            return Err(Error::invalid("trials", "need at least one trial"));
        }
        let collisions = trials
            .clone()
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, t);
                let ell = draw_ell(&mut rng);
                let topo = sample_sector_topology_with(
                    &mut rng,
                    &self.geom,
                    self.lambda_o,
                    ell,
                    &self.sampler,
                )?;
                Ok(u64::from(trial_has_collision(&topo, self.geom.d_max)))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        Ok(CollisionEstimate::from_counts(
            collisions,
            trials.end - trials.start,
        ))
    }

    /// Collision frequency at a fixed link length over the given trial indices.
    pub fn conditional(
        &self,
        ell: f64,
        trials: Range<u64>,
        seed: u64,
    ) -> Result<CollisionEstimate> {
        if !(0.0..=self.geom.d_max).contains(&ell) {
            return Err(Error::OutOfRange {
                ell,
                d_max: self.geom.d_max,
            });
        }
        self.count(trials, seed, |_| ell)
    }

    /// Collision frequency with the link length drawn per trial from the
    /// link-length law (`l = d_max sqrt(u)` for random lengths).
    pub fn marginal(&self, trials: Range<u64>, seed: u64) -> Result<CollisionEstimate> {
        match self.geom.link_length {
            LinkLengthMode::Fixed { length } => self.conditional(length, trials, seed),
            LinkLengthMode::RandomInDisk { .. } => {
                let d_max = self.geom.d_max;
                self.count(trials, seed, move |rng| sample_link_length(rng, d_max))
            }
        }
    }
}

/// Inverse-transform draw from `f_L(l) = 2l/d_max^2` on `(0, d_max]`.
pub fn sample_link_length<R: Rng>(rng: &mut R, d_max: f64) -> f64 {
    d_max * rng.random::<f64>().sqrt()
}

pub fn estimate_conditional_collision_prob(
    params: &NetworkParams,
    ell: f64,
    trials: u64,
    seed: u64,
) -> Result<CollisionEstimate> {
    MonteCarlo::new(params)?.conditional(ell, 0..trials, seed)
}

pub fn estimate_collision_prob(
    params: &NetworkParams,
    trials: u64,
    seed: u64,
) -> Result<CollisionEstimate> {
    MonteCarlo::new(params)?.marginal(0..trials, seed)
}
