use std::fmt;

use thiserror::Error;

/// Which of the two orderings produced an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineId {
    DefuzzifyFirst,
    DefuzzifyLast,
}

impl fmt::Display for PipelineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineId::DefuzzifyFirst => f.write_str("defuzzify-first"),
            PipelineId::DefuzzifyLast => f.write_str("defuzzify-last"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid triangular fuzzy number ({lower}, {medium}, {upper}): components must be finite and ordered lower <= medium <= upper")]
    InvalidTfn { lower: f64, medium: f64, upper: f64 },

    #[error("negative scale factor {0}")]
    NegativeScaleFactor(f64),

    #[error("scale must have at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("duplicate or empty level label {0:?}")]
    DuplicateLabel(String),

    #[error("non-monotone scale: {0}")]
    NonMonotoneScale(String),

    #[error("invalid level matrix: {0}")]
    InvalidLevelMatrix(String),

    #[error("cell ({row}, {col}) has level index {index}, but the scale has {levels} levels")]
    LevelIndexOutOfRange {
        row: usize,
        col: usize,
        index: usize,
        levels: usize,
    },

    #[error("invalid direct-influence matrix: {0}")]
    InvalidMatrix(String),

    #[error("all entries are zero, normalization factor undefined")]
    ZeroMatrix,

    #[error("total-relation matrix does not converge: {0}")]
    NonConvergent(String),

    #[error("invalid search spec: {0}")]
    InvalidSearchSpec(String),

    #[error("search space of {levels}^{cells} instances exceeds the exhaustive limit of {limit}")]
    SearchSpaceTooLarge {
        levels: usize,
        cells: usize,
        limit: u64,
    },

    #[error("{pipeline} pipeline: {source}")]
    Pipeline {
        pipeline: PipelineId,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical core (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::ZeroMatrix | Error::NonConvergent(_) => true,
            Error::Pipeline { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn in_pipeline(self, pipeline: PipelineId) -> Self {
        Error::Pipeline {
            pipeline,
            source: Box::new(self),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
