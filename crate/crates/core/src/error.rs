use thiserror::Error;

use crate::model::{IntervalId, MachineId, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interval {id}: end {end} must be greater than start {start}")]
    EmptySpan { id: IntervalId, start: i64, end: i64 },

    #[error("interval {id}: size {size} is outside (0, 1]")]
    SizeOutOfRange { id: IntervalId, size: Rational },

    #[error("interval id {0} appears more than once")]
    DuplicateInterval(IntervalId),

    #[error("size denominators are too fine to share a common unit")]
    UnitOverflow,

    #[error("machine {machine}: activity segments overlap or are unsorted")]
    OverlappingSegments { machine: MachineId },

    #[error("static item of size {0} does not fit in a unit bin")]
    ItemTooLarge(Rational),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance has {len} intervals, brute force is capped at {cap}")]
    TooLarge { len: usize, cap: usize },

    #[error("interval {0} has no length prediction")]
    MissingPrediction(IntervalId),

    #[error("load forecast does not cover time {time} (window ends at {window_end})")]
    ForecastWindow { time: i64, window_end: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
