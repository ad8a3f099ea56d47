use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The typical link fails on SNR alone, so no interference range exists.
    #[error("noise outage: L^-alpha/beta - noise term = {margin:e} <= 0, no interference range")]
    NoiseOutage { margin: f64 },

    #[error("link length {ell} outside [0, d_max = {d_max}]")]
    OutOfRange { ell: f64, d_max: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} > tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },

    #[error("typical-sector conditioning exceeded {attempts} rejection attempts")]
    RejectionOverflow { attempts: u32 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
