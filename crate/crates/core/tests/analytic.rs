use mmwave_core::analytic::{
    los_interference_prob_regular_sector, los_interference_prob_typical_sector, one_minus_exp_ratio,
};
use mmwave_core::montecarlo::trial_rng;
use mmwave_core::*;
use rand::Rng;

const LO_SPARSE: f64 = 1.0 / 400.0;
const LO_DENSE: f64 = 1.0 / 9.0;

fn geom(lambda_t: f64, rho_a: f64, theta_deg: f64, d_max: f64) -> DerivedGeometry {
    derive_geometry(
        &NetworkParams::default()
            .with_densities(lambda_t, LO_SPARSE)
            .with_rho_a(rho_a)
            .with_beamwidth_deg(theta_deg, 5.0)
            .with_d_max(d_max),
    )
    .unwrap()
}

/// Geometry with a prescribed interferer density, via `rho_a = 1`, `theta = 2 pi`.
fn geom_with_lambda_i(lambda_i: f64, d_max: f64) -> DerivedGeometry {
    let g = derive_geometry(
        &NetworkParams::default()
            .with_densities(lambda_i, LO_SPARSE)
            .with_beamwidth_deg(360.0, 5.0)
            .with_d_max(d_max),
    )
    .unwrap();
    assert!((g.lambda_i - lambda_i).abs() < 1e-15);
    g
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Nearest of a Poisson process of `density` in a sector of angle `theta_c`,
/// by inverse transform of `P(R > r) = exp(-density theta_c r^2 / 2)`.
fn nearest<R: Rng>(rng: &mut R, density: f64, theta_c: f64) -> f64 {
    if density == 0.0 {
        return f64::INFINITY;
    }
    let e = -(1.0 - rng.random::<f64>()).ln();
    (2.0 * e / (density * theta_c)).sqrt()
}

#[test]
fn regular_sector_matches_nearest_point_race() {
    let g = geom_with_lambda_i(0.01, 10.0);
    let lambda_o = 0.02;
    let n = 1_000_000u64;
    let mut rng = trial_rng(11, 0);
    let hits = (0..n)
        .filter(|_| {
            let i = nearest(&mut rng, g.lambda_i, g.theta_c);
            let o = nearest(&mut rng, lambda_o, g.theta_c);
            i <= g.d_max && i < o
        })
        .count();
    let p = los_interference_prob_regular_sector(&g, lambda_o);
    let mean = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!(
        (mean - p).abs() < 4.0 * se,
        "race {mean} vs closed form {p}"
    );
}

#[test]
fn regular_sector_symmetric_race_tends_to_half() {
    let g = geom_with_lambda_i(0.05, 1e4);
    assert!((los_interference_prob_regular_sector(&g, 0.05) - 0.5).abs() < 1e-12);
    assert_eq!(
        los_interference_prob_regular_sector(&g.with_activity(0.0), 0.05),
        0.0
    );
}

#[test]
fn typical_sector_matches_conditioned_race() {
    // No obstacle in (0, l]: the nearest obstacle is drawn beyond l through the
    // memoryless radial law.
    let g = geom_with_lambda_i(0.01, 10.0);
    let (lambda_o, ell) = (0.02, 5.0);
    let n = 1_000_000u64;
    let mut rng = trial_rng(12, 0);
    let a_ell = g.sector_area(ell);
    let hits = (0..n)
        .filter(|_| {
            let i = nearest(&mut rng, g.lambda_i, g.theta_c);
            let e = -(1.0 - rng.random::<f64>()).ln();
            let o = (2.0 * (a_ell + e / lambda_o) / g.theta_c).sqrt();
            i <= g.d_max && i < o
        })
        .count();
    let p = los_interference_prob_typical_sector(&g, lambda_o, ell).unwrap();
    let mean = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!(
        (mean - p).abs() < 4.0 * se,
        "race {mean} vs closed form {p}"
    );
}

#[test]
fn typical_sector_agrees_with_textbook_form() {
    for &(lambda_i, lambda_o, ell) in &[
        (0.01, 0.02, 5.0),
        (0.3, 0.1, 2.0),
        (0.02, 1e-4, 9.0),
        (0.1, 0.5, 0.3),
    ] {
        let g = geom_with_lambda_i(lambda_i, 10.0);
        let (a_l, a_d) = (g.sector_area(ell), g.sector_area_d_max());
        let s = lambda_o + lambda_i;
        let textbook = 1.0 - (-lambda_i * a_l).exp()
            + lambda_i * (lambda_o * a_l).exp() / s * ((-s * a_l).exp() - (-s * a_d).exp());
        let p = los_interference_prob_typical_sector(&g, lambda_o, ell).unwrap();
        assert!((p - textbook).abs() < 1e-12, "{p} vs {textbook}");
    }
}

#[test]
fn typical_sector_at_full_range_ignores_obstacles() {
    let g = geom_with_lambda_i(0.02, 10.0);
    let expected = 1.0 - (-g.lambda_i * g.sector_area_d_max()).exp();
    for lambda_o in [0.0, 0.01, 1.0, 50.0] {
        let p = los_interference_prob_typical_sector(&g, lambda_o, g.d_max).unwrap();
        assert!((p - expected).abs() < 1e-12);
    }
}

#[test]
fn typical_sector_survives_huge_obstacle_density() {
    let g = geom(1.0, 1.0, 20.0, 10.0);
    let p = los_interference_prob_typical_sector(&g, 1e4, 9.0).unwrap();
    assert!(p.is_finite() && (0.0..=1.0).contains(&p));
}

#[test]
fn single_sector_beam_has_only_typical_term() {
    let g = geom(0.3, 1.0, 5.0, 10.0);
    assert_eq!(g.k, 1);
    for ell in [0.0, 3.0, 10.0] {
        let c = conditional_collision_prob(&g, LO_SPARSE, ell).unwrap();
        let t = los_interference_prob_typical_sector(&g, LO_SPARSE, ell).unwrap();
        assert!((c - t).abs() < 1e-15);
    }
}

#[test]
fn collision_prob_matches_simpson() {
    for &(lt, lo, theta, d) in &[
        (1.0 / 9.0, LO_SPARSE, 20.0, 17.0),
        (1.0 / 9.0, LO_DENSE, 20.0, 17.0),
        (2.0, 0.05, 30.0, 8.0),
    ] {
        let g = geom(lt, 1.0, theta, d);
        let oracle = simpson(
            |l| conditional_collision_prob(&g, lo, l).unwrap() * 2.0 * l / (d * d),
            0.0,
            d,
            2_000,
        );
        let p = collision_prob(&g, lo).unwrap();
        assert!((p - oracle).abs() < 1e-9, "{p} vs {oracle}");
    }
}

#[test]
fn headline_collision_probabilities() {
    let g = geom(1.0 / 9.0, 1.0, 20.0, 17.0);
    let sparse = collision_prob(&g, LO_SPARSE).unwrap();
    let dense = collision_prob(&g, LO_DENSE).unwrap();
    assert!((sparse - 0.26).abs() <= 0.02, "{sparse}");
    assert!((dense - 0.17).abs() <= 0.02, "{dense}");
    let bounds = collision_prob_bounds(&g, LO_SPARSE);
    assert!(bounds.gap() <= 0.005 + 1e-3, "{bounds:?}");
}

#[test]
fn bounds_are_the_endpoint_conditionals() {
    let g = geom(0.7, 0.6, 25.0, 12.0);
    let b = collision_prob_bounds(&g, 0.03);
    assert!((b.lower - conditional_collision_prob(&g, 0.03, 0.0).unwrap()).abs() < 1e-12);
    assert!((b.upper - conditional_collision_prob(&g, 0.03, g.d_max).unwrap()).abs() < 1e-12);
    let silent = collision_prob_bounds(&g.with_activity(0.0), 0.03);
    assert_eq!((silent.lower, silent.upper), (0.0, 0.0));
}

#[test]
fn aloha_throughput_matches_simpson() {
    let g = geom(0.44, 0.7, 20.0, 10.0);
    let lo = 0.05;
    let oracle = simpson(
        |l| {
            let unblocked = (-lo * g.sector_area(l)).exp();
            0.7 * unblocked * (1.0 - conditional_collision_prob(&g, lo, l).unwrap()) * 2.0 * l
                / 100.0
        },
        0.0,
        10.0,
        2_000,
    );
    let r = aloha_per_link_throughput(&g, lo, 0.7).unwrap();
    assert!((r.per_link_throughput - oracle).abs() < 1e-9);
    assert_eq!(r.scheduler, Scheduler::Aloha);
    assert_eq!(r.source, Source::Analytic);
    let ase = aloha_ase(&g, lo, 0.7, 100.0).unwrap().ase.unwrap();
    assert!((ase - (1.0 + 100.0 * 0.44) / 100.0 * oracle).abs() < 1e-9);
}

#[test]
fn tdma_first_factor_is_poisson_share() {
    // E[1 / (1 + N)] for N ~ Poisson(m), summed directly.
    for m in [0.3, 4.0, 44.0] {
        let mut term = f64::exp(-m);
        let mut sum = 0.0;
        for n in 0..400 {
            sum += term / (n as f64 + 1.0);
            term *= m / (n as f64 + 1.0);
        }
        assert!((one_minus_exp_ratio(m) - sum).abs() < 1e-12, "{m}");
    }
}

#[test]
fn tdma_closed_forms() {
    let area = 100.0;
    let g = geom(0.44, 1.0, 20.0, 10.0);
    let r = tdma_per_link_throughput(&g, LO_DENSE, area)
        .unwrap()
        .per_link_throughput;
    let a_d = g.sector_area_d_max();
    let expected = (1.0 - (-0.44 * area).exp()) / (0.44 * area) * (1.0 - (-LO_DENSE * a_d).exp())
        / (LO_DENSE * a_d);
    assert!((r - expected).abs() < 1e-14);

    let ase = |lt: f64, lo: f64| {
        tdma_ase(&g.with_lambda_t(lt), lo, area)
            .unwrap()
            .ase
            .unwrap()
    };
    assert!((ase(0.1, LO_DENSE) - ase(5.0, LO_DENSE)).abs() < 1e-15);
    assert!((ase(1.0, 1e-12) - 1.0 / area).abs() < 1e-12);
    assert!((ase(1.0, 0.0) - 1.0 / area).abs() < 1e-15);

    let sparse = tdma_per_link_throughput(&g.with_lambda_t(1e-12), 0.0, area).unwrap();
    assert!((sparse.per_link_throughput - 1.0).abs() < 1e-9);
    let crowded = tdma_per_link_throughput(&g.with_lambda_t(1e6), LO_SPARSE, area).unwrap();
    assert!(crowded.per_link_throughput < 1e-7);
}

#[test]
fn aloha_beats_tdma_at_fifteen_degrees() {
    let search = |lt: f64| {
        let g = geom(lt, 1.0, 15.0, 10.0);
        let opt = optimal_transmission_prob(&g, LO_SPARSE).unwrap();
        let tdma = tdma_per_link_throughput(&g, LO_SPARSE, 100.0)
            .unwrap()
            .per_link_throughput;
        (opt.rho_a, opt.throughput / tdma)
    };
    let (rho_sparse, gain_sparse) = search(1.0 / 16.0);
    let (rho_dense, gain_dense) = search(1.0 / 4.0);
    assert_eq!((rho_sparse, rho_dense), (1.0, 1.0));
    assert!((gain_sparse / 5.97 - 1.0).abs() < 0.15, "{gain_sparse}");
    assert!((gain_dense / 21.5 - 1.0).abs() < 0.15, "{gain_dense}");
}

#[test]
fn wider_beam_collides_more() {
    let mut prev = 0.0;
    for theta in [5.0, 10.0, 20.0, 40.0, 90.0, 180.0, 360.0] {
        let p = collision_prob(&geom(0.2, 1.0, theta, 12.0), LO_SPARSE).unwrap();
        assert!(p >= prev, "theta {theta}: {p} < {prev}");
        prev = p;
    }
    assert!(prev > 0.9);
}
