//! Slot-by-slot emulation of slotted ALOHA and TDMA over a planar deployment.
//!
//! Link geometry is static for a run, so the set of transmitters able to
//! collide with each receiver is computed once. A transmitter `j` can collide
//! with link `i` iff it is within `d_max` of receiver `i`, the two are inside
//! each other's main lobes, and no obstacle crosses the path `j -> rx_i`.

use std::f64::consts::TAU;

use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::trial_rng;
use crate::params::{derive_geometry, DerivedGeometry, LinkLengthMode, NetworkParams};
use crate::report::{Scheduler, Source, ThroughputReport};

use super::deployment::{generate_deployment, Deployment, LinkPlacement, Region};
use super::geometry::{beam_covers, is_blocked, Point, Segment};
use super::traffic::TrafficConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkOutcome {
    /// Not transmitting this slot.
    Idle,
    /// Transmitting over an obstructed link.
    Blocked,
    /// Transmitting, unobstructed, hit by an aligned LoS interferer.
    Collided,
    Delivered,
}

/// Uniform bucket grid over point or segment positions.
struct Grid {
    cell: f64,
    n: usize,
    buckets: Vec<Vec<u32>>,
}

impl Grid {
    fn new(side: f64, cell: f64) -> Self {
        let n = ((side / cell).ceil() as usize).max(1) + 2;
        Self {
            cell,
            n,
            buckets: vec![Vec::new(); n * n],
        }
    }

    /// Bucket coordinate with one guard cell on each side for points that
    /// stick slightly out of the region.
    fn coord(&self, v: f64) -> usize {
        ((v / self.cell).floor() as isize + 1).clamp(0, self.n as isize - 1) as usize
    }

    fn insert_box(&mut self, id: u32, min: Point, max: Point) {
        for iy in self.coord(min.y)..=self.coord(max.y) {
            for ix in self.coord(min.x)..=self.coord(max.x) {
                self.buckets[iy * self.n + ix].push(id);
            }
        }
    }

    fn visit_box(&self, min: Point, max: Point, mut f: impl FnMut(u32) -> bool) -> bool {
        for iy in self.coord(min.y)..=self.coord(max.y) {
            for ix in self.coord(min.x)..=self.coord(max.x) {
                for &id in &self.buckets[iy * self.n + ix] {
                    if f(id) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

struct ObstacleIndex<'a> {
    obstacles: &'a [Segment],
    grid: Grid,
}

impl<'a> ObstacleIndex<'a> {
    fn new(obstacles: &'a [Segment], side: f64) -> Self {
        let mut grid = Grid::new(side, 1.0);
        for (i, o) in obstacles.iter().enumerate() {
            grid.insert_box(
                i as u32,
                Point::new(o.min_x(), o.min_y()),
                Point::new(o.max_x(), o.max_y()),
            );
        }
        Self { obstacles, grid }
    }

    fn blocks(&self, path: &Segment) -> bool {
        self.grid.visit_box(
            Point::new(path.min_x(), path.min_y()),
            Point::new(path.max_x(), path.max_y()),
            |i| is_blocked(path, &self.obstacles[i as usize]),
        )
    }
}

/// Static blockage and interference relations of a deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMap {
    /// Whether each link's own path is obstructed.
    pub blocked: Vec<bool>,
    /// For each link, the transmitters that collide with it when active.
    pub interferers: Vec<Vec<u32>>,
}

impl InterferenceMap {
    pub fn build(deployment: &Deployment, theta: f64, d_max: f64) -> Self {
        let links = &deployment.links;
        let side = deployment.region.side();
        let obstacles = ObstacleIndex::new(&deployment.obstacles, side);
        let mut tx_grid = Grid::new(side, d_max.max(1e-3));
        for (j, l) in links.iter().enumerate() {
            tx_grid.insert_box(j as u32, l.tx, l.tx);
        }
        let blocked = links.iter().map(|l| obstacles.blocks(&l.path())).collect();
        let interferers = links
            .iter()
            .enumerate()
            .map(|(i, victim)| {
                let reach = Point::new(d_max, d_max);
                let mut found = Vec::new();
                tx_grid.visit_box(victim.rx - reach, victim.rx + reach, |j| {
                    let other = &links[j as usize];
                    if j as usize != i
                        && other.tx.distance(victim.rx) <= d_max
                        && beam_covers(other.tx, other.rx - other.tx, theta, victim.rx)
                        && beam_covers(victim.rx, victim.tx - victim.rx, theta, other.tx)
                        && !obstacles.blocks(&Segment::new(other.tx, victim.rx))
                    {
                        found.push(j);
                    }
                    false
                });
                found.sort_unstable();
                found
            })
            .collect();
        Self {
            blocked,
            interferers,
        }
    }

    pub fn outcome(&self, link: usize, active: &[bool]) -> LinkOutcome {
        if !active[link] {
            LinkOutcome::Idle
        } else if self.blocked[link] {
            LinkOutcome::Blocked
        } else if self.interferers[link].iter().any(|&j| active[j as usize]) {
            LinkOutcome::Collided
        } else {
            LinkOutcome::Delivered
        }
    }
}

/// Outcome of every link for one slot in which exactly the links flagged in
/// `active` transmit.
pub fn slot_outcome(
    deployment: &Deployment,
    params: &NetworkParams,
    active: &[bool],
) -> Result<Vec<LinkOutcome>> {
    if active.len() != deployment.links.len() {
        return Err(Error::invalid("active_set", "one flag per link required"));
    }
    let geom = derive_geometry(params)?;
    let map = InterferenceMap::build(deployment, geom.theta, geom.d_max);
    Ok((0..active.len()).map(|i| map.outcome(i, active)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LinkCounters {
    pub offered: u64,
    pub attempted: u64,
    pub blocked: u64,
    pub collided: u64,
    pub delivered: u64,
    pub idle: u64,
}

impl LinkCounters {
    fn record(&mut self, outcome: LinkOutcome) {
        match outcome {
            LinkOutcome::Idle => self.idle += 1,
            LinkOutcome::Blocked => {
                self.attempted += 1;
                self.blocked += 1;
            }
            LinkOutcome::Collided => {
                self.attempted += 1;
                self.collided += 1;
            }
            LinkOutcome::Delivered => {
                self.attempted += 1;
                self.delivered += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlotRecord {
    pub slot: u64,
    pub link: u32,
    pub outcome: LinkOutcome,
}

/// Per-link tallies of one run over the links whose receivers lie in the
/// core, plus every slot event when full tracing is on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotTrace {
    pub slots: u64,
    pub links: Vec<u32>,
    pub counters: Vec<LinkCounters>,
    pub records: Option<Vec<SlotRecord>>,
}

impl SlotTrace {
    pub fn total(&self) -> LinkCounters {
        self.counters
            .iter()
            .fold(LinkCounters::default(), |mut acc, c| {
                acc.offered += c.offered;
                acc.attempted += c.attempted;
                acc.blocked += c.blocked;
                acc.collided += c.collided;
                acc.delivered += c.delivered;
                acc.idle += c.idle;
                acc
            })
    }

    /// Share of unobstructed transmissions that collided.
    pub fn collision_frequency(&self) -> Option<f64> {
        let t = self.total();
        let exposed = t.collided + t.delivered;
        (exposed > 0).then(|| t.collided as f64 / exposed as f64)
    }
}

/// Pooled statistics over independent runs: ratios of sums, i.e. averages
/// over every tracked link-slot of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EmulationTally {
    pub link_slots: u64,
    pub totals: LinkCounters,
    /// Sum over runs of `slots * core_area`.
    pub area_slots: f64,
    pub runs: u64,
}

impl EmulationTally {
    pub fn add(&mut self, trace: &SlotTrace, core_area: f64) {
        let t = trace.total();
        self.link_slots += trace.slots * trace.links.len() as u64;
        self.totals.offered += t.offered;
        self.totals.attempted += t.attempted;
        self.totals.blocked += t.blocked;
        self.totals.collided += t.collided;
        self.totals.delivered += t.delivered;
        self.totals.idle += t.idle;
        self.area_slots += trace.slots as f64 * core_area;
        self.runs += 1;
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.link_slots += other.link_slots;
        self.totals.offered += other.totals.offered;
        self.totals.attempted += other.totals.attempted;
        self.totals.blocked += other.totals.blocked;
        self.totals.collided += other.totals.collided;
        self.totals.delivered += other.totals.delivered;
        self.totals.idle += other.totals.idle;
        self.area_slots += other.area_slots;
        self.runs += other.runs;
        self
    }

    pub fn per_link_throughput(&self) -> f64 {
        if self.link_slots == 0 {
            0.0
        } else {
            self.totals.delivered as f64 / self.link_slots as f64
        }
    }

    pub fn ase(&self) -> f64 {
        if self.area_slots == 0.0 {
            0.0
        } else {
            self.totals.delivered as f64 / self.area_slots
        }
    }

    pub fn collision_frequency(&self) -> Option<f64> {
        let exposed = self.totals.collided + self.totals.delivered;
        (exposed > 0).then(|| self.totals.collided as f64 / exposed as f64)
    }
}

/// A deployment prepared for emulation under one parameter set.
pub struct Emulator<'a> {
    deployment: &'a Deployment,
    geom: DerivedGeometry,
    traffic: TrafficConfig,
    map: InterferenceMap,
    tracked: Vec<usize>,
    full_trace: bool,
}

impl<'a> Emulator<'a> {
    pub fn new(
        deployment: &'a Deployment,
        params: &NetworkParams,
        traffic: TrafficConfig,
    ) -> Result<Self> {
        traffic.validate()?;
        let geom = derive_geometry(params)?;
        Ok(Self {
            map: InterferenceMap::build(deployment, geom.theta, geom.d_max),
            tracked: deployment.core_links(),
            deployment,
            geom,
            traffic,
            full_trace: false,
        })
    }

    pub fn with_full_trace(mut self, on: bool) -> Self {
        self.full_trace = on;
        self
    }

    pub fn interference_map(&self) -> &InterferenceMap {
        &self.map
    }

    fn new_trace(&self) -> SlotTrace {
        SlotTrace {
            slots: self.traffic.slots(),
            links: self.tracked.iter().map(|&i| i as u32).collect(),
            counters: vec![LinkCounters::default(); self.tracked.len()],
            records: self.full_trace.then(Vec::new),
        }
    }

    fn report(&self, trace: &SlotTrace, scheduler: Scheduler) -> ThroughputReport {
        let delivered = trace.total().delivered as f64;
        let per_link = if trace.links.is_empty() {
            0.0
        } else {
            delivered / (trace.slots as f64 * trace.links.len() as f64)
        };
        ThroughputReport {
            per_link_throughput: per_link,
            ase: Some(delivered / (trace.slots as f64 * self.deployment.region.core_area())),
            scheduler,
            source: Source::Emulator,
        }
    }

    fn log(trace: &mut SlotTrace, slot: u64, pos: usize, outcome: LinkOutcome) {
        trace.counters[pos].record(outcome);
        if let Some(records) = trace.records.as_mut() {
            records.push(SlotRecord {
                slot,
                link: trace.links[pos],
                outcome,
            });
        }
    }

    /// Slotted ALOHA: in every slot each backlogged transmitter transmits
    /// with probability `rho_a`, drawn from the slot's own RNG stream.
    pub fn run_aloha(&self, seed: u64) -> (ThroughputReport, SlotTrace) {
        let n = self.deployment.links.len();
        let rho_a = self.geom.rho_a;
        let saturated = self.traffic.saturated;
        let mut trace = self.new_trace();
        let mut buffers = vec![0u64; n];
        let mut active = vec![false; n];
        for slot in 0..trace.slots {
            let arrivals = self.traffic.arrivals_before(slot);
            let mut rng = trial_rng(seed, slot);
            for (j, flag) in active.iter_mut().enumerate() {
                buffers[j] += arrivals;
                let draw = rng.random::<f64>() < rho_a;
                *flag = (saturated || buffers[j] > 0) && draw;
            }
            for (pos, &i) in self.tracked.iter().enumerate() {
                trace.counters[pos].offered += arrivals;
                Self::log(&mut trace, slot, pos, self.map.outcome(i, &active));
            }
            if !saturated {
                for (b, &on) in buffers.iter_mut().zip(&active) {
                    *b -= u64::from(on);
                }
            }
        }
        (self.report(&trace, Scheduler::Aloha), trace)
    }

    /// Round-robin TDMA inside each scheduler cell (by receiver position).
    /// One link per cell transmits per slot; it delivers iff unobstructed.
    pub fn run_tdma(&self) -> (ThroughputReport, SlotTrace) {
        let region = &self.deployment.region;
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); region.cells_per_side().pow(2)];
        let mut cell_of = vec![None; self.deployment.links.len()];
        for (i, l) in self.deployment.links.iter().enumerate() {
            if let Some(c) = region.cell_of(l.rx) {
                cell_of[i] = Some((c, cells[c].len()));
                cells[c].push(i);
            }
        }
        let saturated = self.traffic.saturated;
        let mut trace = self.new_trace();
        let mut buffers = vec![0u64; self.tracked.len()];
        for slot in 0..trace.slots {
            let arrivals = self.traffic.arrivals_before(slot);
            for (pos, &i) in self.tracked.iter().enumerate() {
                buffers[pos] += arrivals;
                trace.counters[pos].offered += arrivals;
                let (cell, rank) = cell_of[i].expect("core links lie in a cell");
                let scheduled = slot % cells[cell].len() as u64 == rank as u64;
                let outcome = if !scheduled || (!saturated && buffers[pos] == 0) {
                    LinkOutcome::Idle
                } else {
                    if !saturated {
                        buffers[pos] -= 1;
                    }
                    if self.map.blocked[i] {
                        LinkOutcome::Blocked
                    } else {
                        LinkOutcome::Delivered
                    }
                };
                Self::log(&mut trace, slot, pos, outcome);
            }
        }
        (self.report(&trace, Scheduler::Tdma), trace)
    }
}

pub fn run_slotted_aloha(
    deployment: &Deployment,
    params: &NetworkParams,
    traffic: TrafficConfig,
    seed: u64,
) -> Result<(ThroughputReport, SlotTrace)> {
    Ok(Emulator::new(deployment, params, traffic)?.run_aloha(seed))
}

/// TDMA is deterministic; `seed` is accepted for interface symmetry.
pub fn run_tdma(
    deployment: &Deployment,
    params: &NetworkParams,
    traffic: TrafficConfig,
    _seed: u64,
) -> Result<(ThroughputReport, SlotTrace)> {
    Ok(Emulator::new(deployment, params, traffic)?.run_tdma())
}

/// Runs one fresh deployment per index in `runs` and pools the tallies.
///
/// Run `i` draws its deployment from seed `seed + 2i` and its slot streams
/// from seed `seed + 2i + 1`, so any partition of `runs` pools to the same
/// tally. Receivers follow the link-length law of `params`.
pub fn run_ensemble(
    params: &NetworkParams,
    region: Region,
    traffic: TrafficConfig,
    scheduler: Scheduler,
    runs: Range<u64>,
    seed: u64,
) -> Result<EmulationTally> {
    let placement = match params.link_length {
        LinkLengthMode::Fixed { length } => LinkPlacement::Fixed { length },
        LinkLengthMode::RandomInDisk { d_max } => LinkPlacement::RandomInDisk { d_max },
    };
    derive_geometry(params)?;
    traffic.validate()?;
    runs.into_par_iter()
        .map(|i| {
            let base = seed.wrapping_add(i.wrapping_mul(2));
            let deployment =
                generate_deployment(region, params.lambda_t, params.lambda_o, placement, base)?;
            let emu = Emulator::new(&deployment, params, traffic)?;
            let (_, trace) = match scheduler {
                Scheduler::Aloha => emu.run_aloha(base.wrapping_add(1)),
                Scheduler::Tdma => emu.run_tdma(),
            };
            let mut tally = EmulationTally::default();
            tally.add(&trace, region.core_area());
            Ok(tally)
        })
        .try_reduce(EmulationTally::default, |a, b| Ok(a.merge(&b)))
}

/// Transmit-power multiplier that keeps the interference range unchanged when
/// both antennas drop from main-lobe gain `2 pi / theta` to omnidirectional.
pub fn omni_power_factor(theta: f64) -> f64 {
    (TAU / theta).powi(2)
}

/// The omnidirectional counterpart of `params`: full-circle beams, power
/// raised so that the interference range is unchanged.
pub fn omnidirectional_params(params: &NetworkParams) -> Result<NetworkParams> {
    let directional = derive_geometry(params)?;
    let omni = NetworkParams {
        theta: TAU,
        power: params.power * omni_power_factor(params.theta),
        ..*params
    };
    let g = derive_geometry(&omni)?;
    debug_assert!((g.d_max - directional.d_max).abs() <= 1e-9 * directional.d_max);
    Ok(omni)
}

pub fn omnidirectional_benchmark(
    deployment: &Deployment,
    params: &NetworkParams,
    traffic: TrafficConfig,
    seed: u64,
) -> Result<(ThroughputReport, SlotTrace)> {
    run_slotted_aloha(deployment, &omnidirectional_params(params)?, traffic, seed)
}
