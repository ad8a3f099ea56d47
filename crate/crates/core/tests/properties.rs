use mmwave_core::*;
use proptest::prelude::*;

/// Quadrature tolerance plus rounding.
const SLACK: f64 = 1e-9;

fn params(
    lambda_t: f64,
    lambda_o: f64,
    rho_a: f64,
    theta: f64,
    theta_c: f64,
    d_max: f64,
) -> NetworkParams {
    NetworkParams::default()
        .with_densities(lambda_t, lambda_o)
        .with_rho_a(rho_a)
        .with_beamwidth_deg(theta, theta_c)
        .with_d_max(d_max)
}

prop_compose! {
    fn valid_params()(
        lambda_t in 1e-3f64..10.0,
        lambda_o in 0.0f64..1.0,
        rho_a in 0.0f64..=1.0,
        theta in 5.0f64..=360.0,
        theta_c_frac in 0.05f64..=1.0,
        d_max in 1.0f64..40.0,
    ) -> NetworkParams {
        let theta_c = (theta * theta_c_frac).min(10.0);
        params(lambda_t, lambda_o, rho_a, theta, theta_c, d_max)
    }
}

fn rho_c(p: &NetworkParams) -> f64 {
    collision_prob(&derive_geometry(p).unwrap(), p.lambda_o).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bounds_sandwich_collision_prob(p in valid_params()) {
        let g = derive_geometry(&p).unwrap();
        let b = collision_prob_bounds(&g, p.lambda_o);
        let c = collision_prob(&g, p.lambda_o).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.contains(c, SLACK), "{c} outside {b:?}");
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn conditional_nondecreasing_in_length(p in valid_params(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let g = derive_geometry(&p).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = conditional_collision_prob(&g, p.lambda_o, lo * g.d_max).unwrap();
        let c_hi = conditional_collision_prob(&g, p.lambda_o, hi * g.d_max).unwrap();
        prop_assert!(c_lo <= c_hi + 1e-12, "{c_lo} > {c_hi}");
    }

    #[test]
    fn collision_nondecreasing_in_density(p in valid_params(), a in 1e-3f64..10.0, b in 1e-3f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = rho_c(&NetworkParams { lambda_t: lo, ..p });
        let c_hi = rho_c(&NetworkParams { lambda_t: hi, ..p });
        prop_assert!(c_lo <= c_hi + SLACK, "{c_lo} > {c_hi}");
    }

    #[test]
    fn collision_nondecreasing_in_activity(p in valid_params(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = rho_c(&p.with_rho_a(lo));
        let c_hi = rho_c(&p.with_rho_a(hi));
        prop_assert!(c_lo <= c_hi + SLACK, "{c_lo} > {c_hi}");
    }

    #[test]
    fn collision_nonincreasing_in_obstacles(p in valid_params(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = rho_c(&NetworkParams { lambda_o: lo, ..p });
        let c_hi = rho_c(&NetworkParams { lambda_o: hi, ..p });
        prop_assert!(c_hi <= c_lo + SLACK, "{c_hi} > {c_lo}");
    }

    #[test]
    fn regime_follows_collision_prob(p in valid_params()) {
        let c = rho_c(&p);
        let r = classify_regime(c, RegimeThresholds::default());
        prop_assert_eq!(r.collision_prob, c);
        let expected = if c < 0.05 {
            RegimeLabel::NoiseLimited
        } else if c <= 0.5 {
            RegimeLabel::Transitional
        } else {
            RegimeLabel::InterferenceLimited
        };
        prop_assert_eq!(r.label, expected);
    }

    #[test]
    fn aloha_never_exceeds_activity(p in valid_params()) {
        let g = derive_geometry(&p).unwrap();
        let r = aloha_per_link_throughput(&g, p.lambda_o, p.rho_a).unwrap().per_link_throughput;
        prop_assert!(r >= -SLACK && r <= p.rho_a + SLACK);
        let t = tdma_per_link_throughput(&g, p.lambda_o, 100.0).unwrap().per_link_throughput;
        prop_assert!((0.0..=1.0).contains(&t));
    }
}
