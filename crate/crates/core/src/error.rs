use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {requested} exceeds the configured limit {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("layout error: {0}")]
    Layout(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("invalid probabilities: {0}")]
    Probability(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid channel: {0}")]
    Channel(String),

    #[error("channel is not covariant (max deviation {deviation:.3e})")]
    NonCovariantChannel { deviation: f64 },

    #[error("optimizer did not converge in any of {restarts} restarts")]
    OptimizerDiverged { restarts: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
