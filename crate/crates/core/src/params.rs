//! Network parameters and the geometric quantities derived from them.
//!
//! All quantities are SI internally: densities per square meter, angles in
//! radians, powers in watts. Degree-based setters exist because beamwidths are
//! usually quoted in degrees.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used when comparing angles that went through a degree conversion.
const ANGLE_EPS: f64 = 1e-9;

/// Law of the typical link length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LinkLengthMode {
    /// Every link has the same length `length` (meters); the interference
    /// range follows from the SINR threshold.
    Fixed { length: f64 },
    /// Transmitter uniform in the receiving sector: `f_L(l) = 2l / d_max^2` on
    /// `(0, d_max]`. The interference range must be given explicitly.
    RandomInDisk { d_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Transmitter density (m^-2).
    pub lambda_t: f64,
    /// Obstacle-center density (m^-2).
    pub lambda_o: f64,
    /// Per-slot transmission probability.
    pub rho_a: f64,
    /// Operating beamwidth (rad).
    pub theta: f64,
    /// Coherence angle of the blockage model (rad).
    pub theta_c: f64,
    /// Transmit power (W).
    pub power: f64,
    /// Average channel attenuation at 1 m.
    pub attenuation: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Minimum SINR threshold (linear).
    pub beta: f64,
    /// Noise power (W).
    pub noise: f64,
    pub link_length: LinkLengthMode,
}

impl Default for NetworkParams {
    /// A 60 GHz setup: 2.5 mW transmit power, free-space attenuation at 1 m,
    /// 20 degree beams over 5 degree coherence sectors, explicit 10 m range.
    fn default() -> Self {
        let wavelength = 299_792_458.0 / 60e9;
        let attenuation = (wavelength / (4.0 * std::f64::consts::PI)).powi(2);
        Self {
            lambda_t: 0.1,
            lambda_o: 1.0 / 400.0,
            rho_a: 1.0,
            theta: 20f64.to_radians(),
            theta_c: 5f64.to_radians(),
            power: 2.5e-3,
            attenuation,
            alpha: 2.0,
            beta: 10.0,
            noise: 0.0,
            link_length: LinkLengthMode::RandomInDisk { d_max: 10.0 },
        }
    }
}

impl NetworkParams {
    pub fn with_beamwidth_deg(mut self, theta_deg: f64, theta_c_deg: f64) -> Self {
        self.theta = theta_deg.to_radians();
        self.theta_c = theta_c_deg.to_radians();
        self
    }

    pub fn with_densities(mut self, lambda_t: f64, lambda_o: f64) -> Self {
        self.lambda_t = lambda_t;
        self.lambda_o = lambda_o;
        self
    }

    pub fn with_rho_a(mut self, rho_a: f64) -> Self {
        self.rho_a = rho_a;
        self
    }

    pub fn with_d_max(mut self, d_max: f64) -> Self {
        self.link_length = LinkLengthMode::RandomInDisk { d_max };
        self
    }

    pub fn with_link_length(mut self, length: f64) -> Self {
        self.link_length = LinkLengthMode::Fixed { length };
        self
    }

    /// Checks every parameter invariant and hands the parameters back unchanged.
    ///
    /// The `L <= d_max` requirement of fixed-length mode is checked by
    /// [`derive_geometry`], since `d_max` is not known before then.
    pub fn validate(self) -> Result<Self> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(
                    field,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }

        positive("lambda_t", self.lambda_t)?;
        positive("lambda_o", self.lambda_o)?;
        positive("power", self.power)?;
        positive("attenuation", self.attenuation)?;
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::invalid(
                "noise",
                format!("must be >= 0, got {}", self.noise),
            ));
        }
        if !(0.0..=1.0).contains(&self.rho_a) {
            return Err(Error::invalid(
                "rho_a",
                format!("must lie in [0, 1], got {}", self.rho_a),
            ));
        }
        positive("theta_c", self.theta_c)?;
        if self.theta_c > self.theta + ANGLE_EPS {
            return Err(Error::invalid(
                "theta_c",
                format!("theta_c > theta ({} > {} rad)", self.theta_c, self.theta),
            ));
        }
        if self.theta > TAU + ANGLE_EPS {
            return Err(Error::invalid(
                "theta",
                format!("must be <= 2*pi, got {}", self.theta),
            ));
        }
        match self.link_length {
            LinkLengthMode::Fixed { length } => positive("link_length", length)?,
            LinkLengthMode::RandomInDisk { d_max } => positive("d_max", d_max)?,
        }
        Ok(self)
    }
}

/// Quantities shared by every engine, derived once from validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedGeometry {
    /// Number of coherence sectors inside one beam, `ceil(theta / theta_c)`.
    pub k: u32,
    /// Density of potential interferers: active and pointing at the receiver.
    pub lambda_i: f64,
    /// Interference range (m).
    pub d_max: f64,
    pub theta: f64,
    pub theta_c: f64,
    pub lambda_t: f64,
    pub rho_a: f64,
    pub link_length: LinkLengthMode,
}

impl DerivedGeometry {
    /// Area of a coherence sector of radius `d`.
    pub fn sector_area(&self, d: f64) -> f64 {
        sector_area(self.theta_c, d)
    }

    pub fn sector_area_d_max(&self) -> f64 {
        self.sector_area(self.d_max)
    }

    /// Same geometry with a different transmission probability.
    pub fn with_activity(mut self, rho_a: f64) -> Self {
        self.rho_a = rho_a;
        self.lambda_i = interferer_density(self.lambda_t, rho_a, self.theta);
        self
    }

    /// Same geometry with a different transmitter density.
    pub fn with_lambda_t(mut self, lambda_t: f64) -> Self {
        self.lambda_t = lambda_t;
        self.lambda_i = interferer_density(lambda_t, self.rho_a, self.theta);
        self
    }
}

pub fn sector_area(theta_c: f64, d: f64) -> f64 {
    theta_c * d * d / 2.0
}

fn interferer_density(lambda_t: f64, rho_a: f64, theta: f64) -> f64 {
    rho_a * lambda_t * theta / TAU
}

/// `ceil(theta / theta_c)`. A partial last sector counts as a whole one.
pub fn sector_count(theta: f64, theta_c: f64) -> u32 {
    ((theta / theta_c) - ANGLE_EPS).ceil().max(1.0) as u32
}

/// Interference range from the SINR threshold for a link of length `length`.
///
/// An aligned LoS interferer at distance `d` causes outage iff the SINR
/// `p G^2 a L^-alpha / (p G^2 a d^-alpha + sigma)` drops below `beta`, where
/// `G = 2 pi / theta` is the main-lobe gain.
pub fn interference_range(params: &NetworkParams, length: f64) -> Result<f64> {
    let beam = params.theta / TAU;
    let margin = length.powf(-params.alpha) / params.beta
        - params.noise / (params.attenuation * params.power) * beam * beam;
    if margin <= 0.0 {
        return Err(Error::NoiseOutage { margin });
    }
    Ok(margin.powf(-1.0 / params.alpha))
}

pub fn derive_geometry(params: &NetworkParams) -> Result<DerivedGeometry> {
    let params = params.validate()?;
    let d_max = match params.link_length {
        LinkLengthMode::Fixed { length } => {
            let d_max = interference_range(&params, length)?;
            if length > d_max {
                return Err(Error::invalid(
                    "link_length",
                    format!("link length {length} exceeds interference range {d_max}"),
                ));
            }
            d_max
        }
        LinkLengthMode::RandomInDisk { d_max } => d_max,
    };
    Ok(DerivedGeometry {
        k: sector_count(params.theta, params.theta_c),
        lambda_i: interferer_density(params.lambda_t, params.rho_a, params.theta),
        d_max,
        theta: params.theta,
        theta_c: params.theta_c,
        lambda_t: params.lambda_t,
        rho_a: params.rho_a,
        link_length: params.link_length,
    })
}
