use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure categories shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("spectrum not in [0,1): Takagi value {value} at index {index}")]
    Spectrum { value: f64, index: usize },

    #[error("enumeration guard exceeded: {count} patterns requested, limit is {limit}")]
    Guard { count: u128, limit: u128 },

    #[error("pattern too large: {total} photons exceeds the kernel limit of {limit}")]
    PatternTooLarge { total: usize, limit: usize },

    #[error("captured probability mass {mass:.4} is below 0.5; raise the photon cutoff")]
    LowCapturedMass { mass: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("no samples qualify for post-processing (need at least {min_photons} photons)")]
    EmptyReport { min_photons: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors raised by size guards or numerics rather than by
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Spectrum { .. }
                | Error::Guard { .. }
                | Error::PatternTooLarge { .. }
                | Error::LowCapturedMass { .. }
                | Error::Numerical(_)
        )
    }
}
