//! Goodness-of-fit helpers for validating samplers.

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and
/// `cdf`, restricted to `[0, window]`.
///
/// `total` is the full sample count. Draws that landed beyond the window (or
/// were absent, e.g. an empty sector) are omitted from `samples` but still
/// count towards `total`, so the empirical CDF stays correctly normalized.
pub fn ks_distance_censored<F: Fn(f64) -> f64>(
    samples: &[f64],
    total: usize,
    window: f64,
    cdf: F,
) -> f64 {
    assert!(samples.len() <= total && total > 0);
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|&x| x <= window).collect();
    sorted.sort_by(f64::total_cmp);
    let n = total as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d
            .max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    d.max((cdf(window) - sorted.len() as f64 / n).abs())
}

/// Kolmogorov–Smirnov distance for uncensored samples.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    ks_distance_censored(samples, samples.len(), f64::INFINITY, cdf)
}
