use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent window [{lo}, {hi}] exceeds the supported size")]
    WindowTooLarge { lo: i64, hi: i64 },

    #[error("series tolerance {requested:e} not met after {terms} terms (tail bound {achieved:e})")]
    ToleranceNotMet {
        requested: f64,
        achieved: f64,
        terms: usize,
    },

    #[error("contour radius {radius} too large: integrand is not finite")]
    RadiusTooLarge { radius: f64 },

    #[error("point {z} lies inside the excluded disk |z| < {rmin}")]
    Domain { z: Complex64, rmin: f64 },

    #[error("Gauss map overflows at z = {z}")]
    Overflow { z: Complex64 },

    #[error("quadrature did not reach {target:e} (estimate {achieved:e}, {panels} panels)")]
    Quadrature {
        target: f64,
        achieved: f64,
        panels: usize,
    },

    #[error("no root bracket found in [{lo}, {hi}]")]
    SearchRange { lo: f64, hi: f64 },

    #[error("root {value} has residual {residual:e} above {tolerance:e}")]
    Residual {
        value: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported descriptor: {0}")]
    Unsupported(String),

    #[error("{path}: field `{field}`: {message}")]
    Schema {
        path: String,
        field: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("at grid point t = {t}, alpha = {alpha}: {source}")]
    Grid {
        t: f64,
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of numerical tolerance (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        if let Error::Grid { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::ToleranceNotMet { .. }
                | Error::RadiusTooLarge { .. }
                | Error::Overflow { .. }
                | Error::Quadrature { .. }
                | Error::Residual { .. }
        )
    }
}
