use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// The micro parameters map onto a GARCH process with alpha + beta >= 1.
    #[error("non-stationary parameters: alpha + beta = {alpha} + {beta} = {} >= 1", alpha + beta)]
    NonStationary { alpha: f64, beta: f64 },

    #[error("volatility must be non-negative and finite, got {0}")]
    NegativeSigma(f64),

    #[error("total order volume is zero")]
    ZeroVolume,

    #[error("sample too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("degenerate sample: {0}")]
    Degenerate(&'static str),

    #[error("lag {lag} out of range for a series of length {len}")]
    LagOutOfRange { lag: usize, len: usize },

    #[error("duplicate seed {0} in batch")]
    DuplicateSeed(u64),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("utility `{0}` is not strictly increasing and strictly concave")]
    NotRiskAverse(String),

    #[error("utility `{utility}` undefined at mu = {mu}, sigma = {sigma}: {reason}")]
    Domain {
        utility: String,
        mu: f64,
        sigma: f64,
        reason: String,
    },

    #[error("expected {expected} to be zero, got {got}")]
    RatioNotZero { expected: &'static str, got: f64 },
}
