use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("bandwidth {bandwidth:e} Hz exceeds the grid limit {limit:e} Hz")]
    BandwidthExceedsGrid { bandwidth: f64, limit: f64 },

    #[error("time {time:e} s outside represented span [{start:e}, {end:e}] s")]
    TimeOutOfRange { time: f64, start: f64, end: f64 },

    #[error("grid steps differ: {left:e} s vs {right:e} s")]
    GridMismatch { left: f64, right: f64 },

    #[error("degenerate channel parameters: {0}")]
    DegenerateParams(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported CIR file version `{0}`")]
    UnsupportedVersion(String),

    #[error("timing offset {offset:e} s outside [0, {period:e}) s")]
    OffsetOutOfRange { offset: f64, period: f64 },

    #[error("acquisition window is empty")]
    EmptyWindow,

    #[error("input length {len} exceeds the direct-evaluation guard of {limit}")]
    SizeGuardExceeded { len: usize, limit: usize },

    #[error("input has zero energy")]
    ZeroEnergyInput,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
