use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at x = {0}")]
    Pole(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument {value} outside the domain of {what}: {reason}")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("input `{label}` is not finite at t = {t}")]
    NonFiniteInput { label: String, t: f64 },

    #[error("{what} did not reach the requested accuracy (error estimate {estimate:e})")]
    NonConvergence { what: &'static str, estimate: f64 },

    #[error("{what} overflows the double-precision range")]
    Overflow { what: &'static str },

    #[error("step h = {h} too large: gamma * Omega_1 = {product} >= 1; use h <= {suggested}")]
    StepTooLarge {
        h: f64,
        product: f64,
        suggested: f64,
    },

    #[error("s * h = {product} exceeds {limit}; per-panel transform is unstable")]
    Unstable { product: f64, limit: f64 },

    #[error("horizon T = {horizon} too short for s = {s}: s * T = {product} < {required}")]
    InsufficientHorizon {
        s: f64,
        horizon: f64,
        product: f64,
        required: f64,
    },

    #[error("malformed curve file at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_order(name: &'static str, nu: f64) -> Result<()> {
    if nu.is_finite() && nu > 0.0 && nu <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: nu,
            reason: "order must lie in (0, 1]",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}
