use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("non-finite sample in frame {frame} at ({k}, {l})")]
    NonFiniteSample { frame: usize, k: usize, l: usize },

    #[error("invalid radar configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("length {0} is not a power of two")]
    NonPowerOfTwo(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("need at least {needed} frames, got {got}")]
    TooFewFrames { needed: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("cannot keep {target} Doppler cells out of {available}")]
    TooFewBins { target: usize, available: usize },

    #[error("empty window")]
    EmptyWindow,

    #[error("envelope has no interior extremum")]
    NoExtremum,

    #[error("inconsistent model shape: {0}")]
    ShapeInconsistent(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("loss diverged at epoch {epoch}: {loss}")]
    DivergedLoss { epoch: usize, loss: f64 },

    #[error("recording too short: {frames} frames, need {needed}")]
    TooShort { frames: usize, needed: usize },

    #[error("invalid walker profile: {0}")]
    InvalidProfile(String),

    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),

    #[error("sample starting at frame {start_frame} has no label")]
    Unlabeled { start_frame: usize },
}

impl Error {
    /// Attaches a file path to an error raised while reading or writing it.
    pub fn at(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with path context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::File { source, .. } => source.root(),
            other => other,
        }
    }
}
