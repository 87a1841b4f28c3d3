use thiserror::Error;

/// Errors raised by distribution construction, measure evaluation and the
/// proposition harness.
///
/// Divergent integrals are not errors: they are reported through
/// [`IntegralResult::diverged`](crate::quad::IntegralResult).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("{what} is not available for {dist}")]
    Capability { what: String, dist: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty truncation window ({t1}, {t2}) for {dist}")]
    EmptyWindow { t1: f64, t2: f64, dist: String },

    #[error("integrand is not finite at x = {x} (value {value})")]
    NonFinite { x: f64, value: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    Bracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field: field.to_string(),
        reason: reason.into(),
    }
}
