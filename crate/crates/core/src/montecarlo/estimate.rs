use serde::Serialize;

/// Binomial estimate of a collision probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionEstimate {
    pub mean: f64,
    pub trials: u64,
    pub collisions: u64,
    /// `sqrt(mean (1 - mean) / trials)`.
    pub std_error: f64,
    /// Normal-approximation interval, clipped to `[0, 1]`.
    pub confidence_interval_95: (f64, f64),
}

impl CollisionEstimate {
    pub fn from_counts(collisions: u64, trials: u64) -> Self {
        assert!(trials > 0 && collisions <= trials);
        let mean = collisions as f64 / trials as f64;
        let std_error = (mean * (1.0 - mean) / trials as f64).sqrt();
        let half = 1.96 * std_error;
        Self {
            mean,
            trials,
            collisions,
            std_error,
            confidence_interval_95: ((mean - half).max(0.0), (mean + half).min(1.0)),
        }
    }

    /// Pools two estimates over disjoint trial sets.
    pub fn merge(&self, other: &Self) -> Self {
        Self::from_counts(
            self.collisions + other.collisions,
            self.trials + other.trials,
        )
    }

    /// Whether `value` lies within `sigmas` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.std_error
    }
}
