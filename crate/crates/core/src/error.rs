use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameters outside the supported regime: {0}")]
    Regime(String),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("point on the singular set: {0}")]
    SingularPoint(String),
    #[error("singular {size}x{size} system (pivot ratio {pivot_ratio:.3e})")]
    SingularSystem { size: usize, pivot_ratio: f64 },
    #[error("non-finite lattice state at t = {last_good_t}")]
    NonFinite { last_good_t: f64 },
    #[error("analysis failed: {0}")]
    Analysis(String),
}

impl Error {
    /// Short machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Regime(_) => "REGIME",
            Error::Domain(_) => "DOMAIN",
            Error::SingularPoint(_) => "SINGULAR_POINT",
            Error::SingularSystem { .. } => "SINGULAR_SYSTEM",
            Error::NonFinite { .. } => "NON_FINITE",
            Error::Analysis(_) => "ANALYSIS",
        }
    }

    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Regime(_) | Error::Domain(_) | Error::SingularPoint(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
