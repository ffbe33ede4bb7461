use thiserror::Error;

/// Errors raised by the approximation core, the oracles and the analysis tools.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DvError {
    #[error("invalid approximation parameters: {0}")]
    InvalidParams(String),

    #[error("{op}: non-finite input (x = {x}, y = {y})")]
    NonFinite { op: &'static str, x: f64, y: f64 },

    #[error("{op}: negative y = {y} is outside the upper half-plane")]
    NegativeY { op: &'static str, y: f64 },

    #[error("{op}: result overflows at (x = {x}, y = {y})")]
    Overflow { op: &'static str, x: f64, y: f64 },

    #[error("{op}: input outside the supported domain: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("laplace_cf: no convergence at z = {x} + {y}i up to depth {depth}")]
    NoConvergence { x: f64, y: f64, depth: usize },

    #[error("{op}: requested precision not reached at (x = {x}, y = {y}): {detail}")]
    PrecisionUnreachable {
        op: &'static str,
        x: f64,
        y: f64,
        detail: String,
    },

    #[error("relative error undefined: reference value is zero")]
    ZeroReference,

    #[error("no cached reference value for (x = {x}, y = {y})")]
    MissingReference { x: f64, y: f64 },

    #[error("unknown benchmark operation '{0}' (expected kappa, lambda, voigt_small_y, voigt_K or dawson_real)")]
    UnknownSelector(String),

    #[error("oracle cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, DvError>;
