use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    #[error("did not converge; best estimate {best} (error estimate {error_estimate:e})")]
    Convergence { best: f64, error_estimate: f64 },
    #[error("ill-conditioned system, condition estimate {condition:e}")]
    IllConditioned { condition: f64 },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("not computable: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
