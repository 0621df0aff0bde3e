use thiserror::Error;

/// Errors raised by the model, allocation and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid array geometry: {0}")]
    Geometry(String),

    #[error("power split alpha1={alpha1} alpha2={alpha2} is not an interior partition of unity")]
    InvalidSplit { alpha1: f64, alpha2: f64 },

    #[error("pair ordering violated: strong SINR {strong} < weak SINR {weak}")]
    InvalidOrdering { strong: f64, weak: f64 },

    #[error("pair is infeasible: upper bound alpha1={alpha1} is not in (0, 1)")]
    Infeasible { alpha1: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("weak-user threshold undefined: alpha2 - alpha1*(2^R2 - 1) = {0} <= 0")]
    WeakThreshold(f64),

    #[error("duplicate user id {0}")]
    DuplicateUser(u64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
