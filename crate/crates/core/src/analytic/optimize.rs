use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DerivedGeometry;

use super::{aloha_ase, aloha_per_link_throughput};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns `(argmax, max)`.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Best argument, best value, and every `(x, f(x))` of the scan.
type Scan = (f64, f64, Vec<(f64, f64)>);

/// Scans `grid`, then refines around the best grid point. The refined point is
/// kept only if it beats the grid maximum.
fn scan_then_refine<F>(grid: &[f64], mut f: F, tol: f64) -> Result<Scan>
where
    F: FnMut(f64) -> Result<f64>,
{
    let scanned = grid
        .iter()
        .map(|&x| f(x).map(|y| (x, y)))
        .collect::<Result<Vec<_>>>()?;
    let (best, &(bx, by)) = scanned
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty grid");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (rx, ry) = if hi > lo {
        golden_section_max(&mut f, lo, hi, tol)?
    } else {
        (bx, by)
    };
    Ok(if ry > by {
        (rx, ry, scanned)
    } else {
        (bx, by, scanned)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalActivity {
    pub rho_a: f64,
    pub throughput: f64,
}

/// Transmission probability maximizing the per-link ALOHA throughput:
/// 101-point grid on `[0, 1]`, then golden-section refinement to `1e-4`.
pub fn optimal_transmission_prob(geom: &DerivedGeometry, lambda_o: f64) -> Result<OptimalActivity> {
    let grid: Vec<f64> = (0..=100).map(|i| f64::from(i) / 100.0).collect();
    let (rho_a, throughput, _) = scan_then_refine(
        &grid,
        |rho| aloha_per_link_throughput(geom, lambda_o, rho).map(|r| r.per_link_throughput),
        1e-4,
    )?;
    Ok(OptimalActivity { rho_a, throughput })
}

/// Uniform transmitter-density grid for [`find_optimal_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySearch {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for DensitySearch {
    fn default() -> Self {
        Self {
            min: 0.05,
            max: 20.0,
            points: 400,
        }
    }
}

impl DensitySearch {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max > self.min && self.points >= 2) {
            return Err(Error::invalid("density_search", format!("{self:?}")));
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.min + step * i as f64)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalDensity {
    pub lambda_t: f64,
    pub ase: f64,
    /// `(lambda_t, ase)` at every grid point, in grid order.
    pub scanned: Vec<(f64, f64)>,
}

/// Transmitter density maximizing the slotted-ALOHA ASE at the transmission
/// probability of `geom`.
pub fn find_optimal_density(
    geom: &DerivedGeometry,
    lambda_o: f64,
    area: f64,
    search: DensitySearch,
) -> Result<OptimalDensity> {
    let grid = search.grid()?;
    let rho_a = geom.rho_a;
    let (lambda_t, ase, scanned) = scan_then_refine(
        &grid,
        |lt| {
            aloha_ase(&geom.with_lambda_t(lt), lambda_o, rho_a, area)
                .map(|r| r.ase.expect("aloha_ase sets ase"))
        },
        1e-4,
    )?;
    Ok(OptimalDensity {
        lambda_t,
        ase,
        scanned,
    })
}
