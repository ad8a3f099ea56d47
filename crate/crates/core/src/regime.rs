//! Operating-regime labels derived from the collision probability.
//!
//! The thresholds are configuration, not physics: there is no accepted
//! boundary for the transitional region. Defaults are 0.05 and 0.5.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeLabel {
    NoiseLimited,
    Transitional,
    InterferenceLimited,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeLabel::NoiseLimited => "noise_limited",
            RegimeLabel::Transitional => "transitional",
            RegimeLabel::InterferenceLimited => "interference_limited",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub label: RegimeLabel,
    pub collision_prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub t_low: f64,
    pub t_high: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            t_low: 0.05,
            t_high: 0.5,
        }
    }
}

impl RegimeThresholds {
    pub fn new(t_low: f64, t_high: f64) -> Result<Self> {
        Self { t_low, t_high }.validate()
    }

    pub fn validate(self) -> Result<Self> {
        if 0.0 < self.t_low && self.t_low < self.t_high && self.t_high < 1.0 {
            Ok(self)
        } else {
            Err(Error::invalid(
                "regime_thresholds",
                format!(
                    "need 0 < t_low < t_high < 1, got {} and {}",
                    self.t_low, self.t_high
                ),
            ))
        }
    }
}

pub fn classify_regime(collision_prob: f64, thresholds: RegimeThresholds) -> Regime {
    let label = if collision_prob < thresholds.t_low {
        RegimeLabel::NoiseLimited
    } else if collision_prob > thresholds.t_high {
        RegimeLabel::InterferenceLimited
    } else {
        RegimeLabel::Transitional
    };
    Regime {
        label,
        collision_prob,
    }
}
