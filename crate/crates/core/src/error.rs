use thiserror::Error;

/// Errors raised while building, transforming or analysing networks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid species name `{0}`")]
    InvalidSpeciesName(String),

    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),

    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("reaction label `{0}` used more than once")]
    DuplicateLabel(String),

    #[error("reaction `{0}` has identical source and product")]
    SelfLoop(String),

    #[error("species `{0}` is not closed (a flow reaction for it already exists)")]
    NotClosed(String),

    #[error("species set must not be empty")]
    EmptySpeciesSet,

    #[error("projection would remove every species")]
    EmptyProjection,

    #[error("rate assignment: {0}")]
    InvalidRates(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not a steady state (scaled residual {residual:e} > {tolerance:e})")]
    NotSteadyState { residual: f64, tolerance: f64 },

    #[error("species set is not independently conserved: {0}")]
    NotIndependentlyConserved(String),

    #[error("totals admit no positive point in the compatibility class")]
    InfeasibleTotals,

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
