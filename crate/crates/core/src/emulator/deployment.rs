use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::trial_rng;

use super::geometry::{Point, Segment};

/// Square deployment area tiled by square scheduler cells of area `A`.
///
/// The inner `core_cells x core_cells` block is where statistics are taken;
/// it is surrounded by `margin_cells` rings of cells so that every receiver
/// in the core sees a complete interference neighbourhood. Coordinates run
/// over `[0, side]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub cell_side: f64,
    pub core_cells: usize,
    pub margin_cells: usize,
}

impl Region {
    pub fn new(scheduler_area: f64, core_cells: usize, min_margin: f64) -> Result<Self> {
        if !(scheduler_area.is_finite() && scheduler_area > 0.0) {
            return Err(Error::invalid(
                "scheduler_area",
                format!("must be > 0, got {scheduler_area}"),
            ));
        }
        if core_cells == 0 {
            return Err(Error::invalid("core_cells", "need at least one core cell"));
        }
        if min_margin.is_nan() || min_margin < 0.0 {
            return Err(Error::invalid(
                "margin",
                format!("must be >= 0, got {min_margin}"),
            ));
        }
        let cell_side = scheduler_area.sqrt();
        Ok(Self {
            cell_side,
            core_cells,
            margin_cells: (min_margin / cell_side).ceil() as usize,
        })
    }

    /// Region whose margin covers an interference range of `d_max` plus one
    /// obstacle length.
    pub fn for_range(scheduler_area: f64, core_cells: usize, d_max: f64) -> Result<Self> {
        Self::new(scheduler_area, core_cells, d_max + 1.0)
    }

    pub fn cells_per_side(&self) -> usize {
        self.core_cells + 2 * self.margin_cells
    }

    pub fn side(&self) -> f64 {
        self.cells_per_side() as f64 * self.cell_side
    }

    pub fn area(&self) -> f64 {
        self.side() * self.side()
    }

    pub fn scheduler_area(&self) -> f64 {
        self.cell_side * self.cell_side
    }

    pub fn core_area(&self) -> f64 {
        let s = self.core_cells as f64 * self.cell_side;
        s * s
    }

    pub fn contains(&self, p: Point) -> bool {
        let s = self.side();
        (0.0..=s).contains(&p.x) && (0.0..=s).contains(&p.y)
    }

    pub fn in_core(&self, p: Point) -> bool {
        let lo = self.margin_cells as f64 * self.cell_side;
        let hi = lo + self.core_cells as f64 * self.cell_side;
        p.x >= lo && p.x < hi && p.y >= lo && p.y < hi
    }

    /// Scheduler cell holding `p`, row-major.
    pub fn cell_of(&self, p: Point) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let n = self.cells_per_side();
        let ix = ((p.x / self.cell_side) as usize).min(n - 1);
        let iy = ((p.y / self.cell_side) as usize).min(n - 1);
        Some(iy * n + ix)
    }
}

/// How a receiver is placed around its transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LinkPlacement {
    /// Distance with density `2r/d_max^2` on `(0, d_max]`, uniform direction.
    RandomInDisk { d_max: f64 },
    /// Fixed distance, uniform direction.
    Fixed { length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub tx: Point,
    pub rx: Point,
}

impl Link {
    pub fn path(&self) -> Segment {
        Segment::new(self.tx, self.rx)
    }

    pub fn length(&self) -> f64 {
        self.tx.distance(self.rx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub links: Vec<Link>,
    pub obstacles: Vec<Segment>,
    pub region: Region,
}

impl Deployment {
    /// Builds a deployment after checking that every node lies in the region
    /// and every obstacle has length in `(0, 1]`.
    pub fn new(links: Vec<Link>, obstacles: Vec<Segment>, region: Region) -> Result<Self> {
        for (i, link) in links.iter().enumerate() {
            if !region.contains(link.tx) || !region.contains(link.rx) {
                return Err(Error::invalid(
                    "links",
                    format!("link {i} leaves the region"),
                ));
            }
            if link.length() == 0.0 {
                return Err(Error::invalid("links", format!("link {i} has zero length")));
            }
        }
        for (i, o) in obstacles.iter().enumerate() {
            let len = o.length();
            if !(len > 0.0 && len <= 1.0 + 1e-12) {
                return Err(Error::invalid(
                    "obstacles",
                    format!("obstacle {i} has length {len}"),
                ));
            }
        }
        Ok(Self {
            links,
            obstacles,
            region,
        })
    }

    pub fn scheduler_area(&self) -> f64 {
        self.region.scheduler_area()
    }

    /// Indices of links whose receiver lies in the core.
    pub fn core_links(&self) -> Vec<usize> {
        (0..self.links.len())
            .filter(|&i| self.region.in_core(self.links[i].rx))
            .collect()
    }
}

fn poisson<R: Rng>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        0
    } else {
        Poisson::new(mean).expect("finite mean").sample(rng) as usize
    }
}

fn uniform_point<R: Rng>(rng: &mut R, side: f64) -> Point {
    Point::new(rng.random::<f64>() * side, rng.random::<f64>() * side)
}

/// Poisson transmitters and obstacle centers on the region. Each receiver is
/// placed by `placement`, redrawn until it falls inside the region; obstacles
/// get a uniform orientation in `[0, pi)` and a length uniform on `(0, 1]`.
pub fn generate_deployment(
    region: Region,
    lambda_t: f64,
    lambda_o: f64,
    placement: LinkPlacement,
    seed: u64,
) -> Result<Deployment> {
    if !(lambda_t >= 0.0 && lambda_o >= 0.0) {
        return Err(Error::invalid("density", "densities must be >= 0"));
    }
    let max_len = match placement {
        LinkPlacement::RandomInDisk { d_max } => d_max,
        LinkPlacement::Fixed { length } => length,
    };
    if !(max_len > 0.0 && max_len < region.side()) {
        return Err(Error::invalid(
            "link_placement",
            format!("link length {max_len} does not fit the region"),
        ));
    }
    let mut rng = trial_rng(seed, 0);
    let side = region.side();
    let n_links = poisson(&mut rng, lambda_t * region.area());
    let mut links = Vec::with_capacity(n_links);
    for _ in 0..n_links {
        let tx = uniform_point(&mut rng, side);
        let rx = loop {
            let r = match placement {
                LinkPlacement::RandomInDisk { d_max } => d_max * (1.0 - rng.random::<f64>()).sqrt(),
                LinkPlacement::Fixed { length } => length,
            };
            let rx = tx + Point::from_polar(r, rng.random::<f64>() * TAU);
            if region.contains(rx) {
                break rx;
            }
        };
        links.push(Link { tx, rx });
    }
    let n_obstacles = poisson(&mut rng, lambda_o * region.area());
    let obstacles = (0..n_obstacles)
        .map(|_| {
            let center = uniform_point(&mut rng, side);
            let angle = rng.random::<f64>() * PI;
            let length = 1.0 - rng.random::<f64>();
            Segment::centered(center, angle, length)
        })
        .collect();
    Ok(Deployment {
        links,
        obstacles,
        region,
    })
}
