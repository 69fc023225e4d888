use thiserror::Error;

use crate::quantum::InputState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    Unnormalized { norm_sqr: f64 },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("contamination probability eta = {0} outside [0, 1)")]
    EtaOutOfRange(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("probability table does not sum to 1 (sum = {sum})")]
    UnnormalizedTable { sum: f64 },

    #[error("{input} requires the {channel} channel")]
    MissingChannel {
        input: InputState,
        channel: &'static str,
    },

    #[error("time grid is not uniform or has gaps: {0}")]
    NonUniformGrid(String),

    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),

    #[error("no oscillation detected in the spectrum")]
    NoOscillation,

    #[error(
        "frequency set is inconsistent with a Heisenberg coupling: \
         residual {residual:e} exceeds tolerance {tolerance:e}"
    )]
    InconsistentFrequencies { residual: f64, tolerance: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error at line {line}, column {column}: {message}")]
    Config {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the `entmap` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidArgument(_) | Error::InvalidPlan(_) => 2,
            Error::InconsistentFrequencies { .. } => 3,
            Error::Io(_) => 4,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            let text = e.to_string();
            let message = match text.rsplit_once(" at line ") {
                Some((head, _)) if e.line() > 0 => head.to_string(),
                _ => text,
            };
            Error::Config {
                line: e.line(),
                column: e.column(),
                message,
            }
        }
    }
}

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
