use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("halley iteration did not converge after {iterations} iterations (x = {x})")]
    Convergence { x: f64, iterations: usize },

    /// A source produced no detected block, so there is no level to average.
    #[error("no detected blocks to average")]
    NoObservation,

    #[error("node cannot be localized: {0}")]
    Unlocalizable(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid config: `{key}` {message}")]
    Constraint { key: String, message: String },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
