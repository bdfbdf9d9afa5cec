use thiserror::Error;

use crate::mask::SetMask;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("element {element} outside the ground set 1..={n}")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("ground-set size {0} outside 1..=16")]
    GroundSizeOutOfRange(u32),

    #[error("family has no members")]
    EmptyFamily,

    #[error("family has no nonempty member")]
    NoNonemptyMember,

    #[error("permutation is not a bijection on 1..={0}")]
    NotABijection(u32),

    #[error("canonical form limited to n <= {limit}, got n = {n}")]
    CanonicalBound { n: u32, limit: u32 },

    #[error("family is not union-closed: {a} ∪ {b} = {union} is missing")]
    NotUnionClosed {
        a: SetMask,
        b: SetMask,
        union: SetMask,
    },

    #[error("T(F) = {t} is below the required minimum {min}")]
    TValueTooSmall { t: u32, min: u32 },

    #[error("family does not contain the empty set")]
    MissingEmptySet,

    #[error("union of members is {universe}, expected the whole ground set 1..={n}")]
    UniverseMismatch { universe: SetMask, n: u32 },

    #[error("enumeration supports n in {min}..={max}, got {n}")]
    EnumerationBound { n: u32, min: u32, max: u32 },

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("checkpoint order version {found:?} does not match {expected:?}")]
    CheckpointVersion { found: String, expected: String },

    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),

    #[error("checkpoint prefix is infeasible at decision {0}")]
    InfeasiblePrefix(usize),

    #[error("partition depth {depth} exceeds the {max} decisions available")]
    PartitionDepth { depth: usize, max: usize },

    #[error("invalid search parameters: {0}")]
    InvalidSearch(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
