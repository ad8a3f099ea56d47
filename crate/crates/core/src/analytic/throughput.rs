//! Per-link throughput and area spectral efficiency of slotted ALOHA and TDMA.

use crate::error::{Error, Result};
use crate::params::DerivedGeometry;
use crate::quad::QuadConfig;
use crate::report::{Scheduler, Source, ThroughputReport};

use super::{average_over_link_length, conditional_unchecked};

/// `(1 - e^{-x}) / x`, continued to 1 at the origin.
pub fn one_minus_exp_ratio(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

fn check_area(area: f64) -> Result<()> {
    if area.is_finite() && area > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "scheduler_area",
            format!("must be > 0, got {area}"),
        ))
    }
}

/// Probability that a link drawn from `f_L` has no obstacle in its own
/// coherence sector: `(1 - e^{-lo A_dmax}) / (lo A_dmax)`.
pub fn unblocked_link_prob(geom: &DerivedGeometry, lambda_o: f64) -> f64 {
    one_minus_exp_ratio(lambda_o * geom.sector_area_d_max())
}

/// Success probability of a link per slot under slotted ALOHA: active, not
/// blocked, not collided, averaged over the link-length law.
fn aloha_success(geom: &DerivedGeometry, lambda_o: f64) -> Result<f64> {
    let rho_a = geom.rho_a;
    if rho_a == 0.0 {
        return Ok(0.0);
    }
    let r = average_over_link_length(
        geom,
        |l| {
            rho_a
                * (-lambda_o * geom.sector_area(l)).exp()
                * (1.0 - conditional_unchecked(geom, lambda_o, l))
        },
        QuadConfig {
            abs_tol: 1e-12,
            ..QuadConfig::default()
        },
    )?;
    Ok(r.clamp(0.0, 1.0))
}

/// Average per-link slotted-ALOHA throughput at transmission probability
/// `rho_a` (packets/slot). No scheduler area is involved, so `ase` is `None`.
pub fn aloha_per_link_throughput(
    geom: &DerivedGeometry,
    lambda_o: f64,
    rho_a: f64,
) -> Result<ThroughputReport> {
    let geom = geom.with_activity(rho_a);
    Ok(ThroughputReport {
        per_link_throughput: aloha_success(&geom, lambda_o)?,
        ase: None,
        scheduler: Scheduler::Aloha,
        source: Source::Analytic,
    })
}

/// Slotted-ALOHA ASE over a scheduler area `area`: the typical link plus a
/// Poisson number of others share the area, `(1 + A lt)/A * r_aloha`.
pub fn aloha_ase(
    geom: &DerivedGeometry,
    lambda_o: f64,
    rho_a: f64,
    area: f64,
) -> Result<ThroughputReport> {
    check_area(area)?;
    let report = aloha_per_link_throughput(geom, lambda_o, rho_a)?;
    let links = 1.0 + area * geom.lambda_t;
    Ok(ThroughputReport {
        ase: Some(links / area * report.per_link_throughput),
        ..report
    })
}

/// TDMA per-link throughput: one slot in `1 + Poisson(lt A)` goes to the link,
/// and it delivers iff unblocked.
pub fn tdma_per_link_throughput(
    geom: &DerivedGeometry,
    lambda_o: f64,
    area: f64,
) -> Result<ThroughputReport> {
    check_area(area)?;
    let share = one_minus_exp_ratio(geom.lambda_t * area);
    let unblocked = unblocked_link_prob(geom, lambda_o);
    Ok(ThroughputReport {
        per_link_throughput: share * unblocked,
        ase: Some(geom.lambda_t * share * unblocked),
        scheduler: Scheduler::Tdma,
        source: Source::Analytic,
    })
}

/// TDMA ASE: one scheduled link per slot per area, delivered iff unblocked.
/// Independent of the transmitter density; tends to `1/A` without obstacles.
pub fn tdma_ase(geom: &DerivedGeometry, lambda_o: f64, area: f64) -> Result<ThroughputReport> {
    let per_link = tdma_per_link_throughput(geom, lambda_o, area)?;
    Ok(ThroughputReport {
        ase: Some(unblocked_link_prob(geom, lambda_o) / area),
        ..per_link
    })
}
