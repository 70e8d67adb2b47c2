use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("control parameter {name} = {value} is outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("invalid testbed configuration: {0}")]
    InvalidTestbed(String),

    #[error("degenerate trajectory: {0} sample(s), need at least 2")]
    DegenerateTrajectory(usize),

    #[error("trajectory sampling mismatch: {0}")]
    SamplingMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("regression model has no samples")]
    EmptyModel,

    #[error("sample dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular kriging system: {0}")]
    SingularSystem(String),

    #[error("objective vectors have different lengths ({0} vs {1})")]
    ObjectiveLength(usize, usize),

    #[error("empty population")]
    EmptyPopulation,

    #[error("unknown treatment `{0}`")]
    UnknownTreatment(String),

    #[error("real-evaluation budget exhausted: {used} of {max} used")]
    BudgetExceeded { used: usize, max: usize },

    #[error("degenerate variance: both samples are constant and differ")]
    DegenerateVariance,

    #[error("need at least 2 samples per group, got {0} and {1}")]
    TooFewSamples(usize, usize),

    /// The message already carries the io error, so it is not exposed
    /// again as a source.
    #[error("{path}: {cause}")]
    Io {
        path: PathBuf,
        cause: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            cause: source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
