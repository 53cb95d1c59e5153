use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at {0}")]
    Pole(f64),

    #[error("parameter pole: b = {0} is a non-positive integer")]
    ParameterPole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error("loss of precision in {what}: value {value:e}, error estimate {estimate:e}")]
    PrecisionLoss {
        what: String,
        value: f64,
        estimate: f64,
    },

    #[error("series did not converge within {0} terms")]
    SeriesNotConverged(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no sign change of the boundary function in E ∈ [{lo}, {hi}] for root index {n}")]
    NoBracket { n: u32, lo: f64, hi: f64 },

    #[error("state {state} sits on a level crossing (|γ| = {distance:e})")]
    Crossing { state: String, distance: f64 },

    #[error("grid too coarse: eigenvalue {index} changed by {change:e} on refinement (budget {budget:e})")]
    GridTooCoarse {
        index: usize,
        change: f64,
        budget: f64,
    },

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { need: usize, got: usize },

    #[error("ring radius R is required for ring problems")]
    MissingRadius,

    #[error("row {row} ({state}): {source}")]
    Row {
        row: usize,
        state: String,
        source: Box<Error>,
    },

    #[error("{} rows failed; first: {}", .0.len(), .0[0])]
    Aggregate(Vec<Error>),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) | Error::MissingRadius | Error::Io(_) => 2,
            Error::Crossing { .. } => 4,
            Error::Row { source, .. } => source.exit_code(),
            Error::Aggregate(errs) => errs.iter().map(Error::exit_code).max().unwrap_or(3),
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
