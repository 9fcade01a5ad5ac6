use thiserror::Error;

use crate::space::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("subset has width {found}, but the space has {expected} points")]
    WidthMismatch { expected: usize, found: usize },

    #[error("{what} needs exhaustive enumeration over {points} points, above the cap of {cap}")]
    CapExceeded { what: String, points: usize, cap: usize },

    #[error("space violates the consistency-space axioms:\n{0}")]
    Invalid(ValidationReport),

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("{0}")]
    Malformed(String),

    #[error("{what} must be in {min}..={max}, got {got}")]
    OutOfRange {
        what: &'static str,
        min: usize,
        max: usize,
        got: usize,
    },

    #[error(transparent)]
    Parse(#[from] crate::formula::ParseError),

    #[error("variable `{0}` is not in the variable list")]
    UnknownVariable(String),

    #[error("{0} variables requested; truth tables support at most {max}", max = crate::formula::MAX_VARS)]
    TooManyVariables(usize),

    #[error("formula `{label}` is unsatisfiable, so its point would be inconsistent on its own")]
    UnsatisfiableFormula { label: String },

    #[error("random generation failed: {0}")]
    Generation(String),

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
