use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZlabError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dyadic band N={n} lies above the largest lattice frequency {max_freq}")]
    BandAboveNyquist { n: u64, max_freq: f64 },

    #[error("band is empty on this grid: {0}")]
    EmptyBand(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("regime hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("blow-up guard tripped at t={t}: H1 norm {h1} exceeds {factor} x initial {h1_initial}")]
    BlowUp {
        t: f64,
        h1: f64,
        h1_initial: f64,
        factor: f64,
    },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, ZlabError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ZlabError {
    ZlabError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
