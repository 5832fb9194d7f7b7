use thiserror::Error;

/// Errors raised by filter construction, estimation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical rank deficiency: {0}")]
    NumericalRank(String),

    #[error("invalid filter specification: {0}")]
    InvalidSpec(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("degenerate filter: {0}")]
    DegenerateFilter(String),

    #[error("too many outliers at {period}: augmented design is rank deficient")]
    TooManyOutliers { period: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that come from the numerics rather than from the
    /// caller's inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalRank(_)
                | Error::InvalidSpec(_)
                | Error::DegenerateSeries(_)
                | Error::DegenerateFilter(_)
                | Error::TooManyOutliers { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
