//! Crate-wide error type.
//!
//! Every fallible operation returns [`enum@Error`]; the [`Error::kind`] string is
//! stable and is what the CLI surfaces in its machine-readable error JSON.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} sums to {sum}; the matrix is not row-stochastic")]
    NonStochastic { row: usize, sum: f64 },

    #[error("negative transition probability {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("invalid probability measure: {context}")]
    InvalidMeasure { context: String },

    #[error("stationary measure is not unique (null space of dimension {null_dim})")]
    NonUnique { null_dim: usize },

    #[error("power iteration did not converge within {cap} iterations")]
    NoConvergence { cap: usize },

    #[error("state {state} carries zero (or negative) stationary mass")]
    ZeroMassState { state: usize },

    #[error("Lyapunov function must satisfy V >= 1 everywhere; V[{state}] = {value}")]
    InvalidLyapunov { state: usize, value: f64 },

    #[error("drift fails outside K for every lambda in the grid; first offender is state {state}")]
    NoDriftOutsideK { state: usize },

    #[error("the rows of K share no common support (fitted alpha = 0)")]
    ZeroOverlap,

    #[error("no state satisfies V <= {r}")]
    EmptyLevelSet { r: f64 },

    #[error("certificates disagree on the small set K")]
    SetMismatch,

    #[error("certificate constants differ between the chain and its adjoint: {context}")]
    ConstantsMismatch { context: String },

    #[error("operator is not positive semi-definite (witness was false)")]
    NotPsd,

    #[error("minorization set K must be the full state space for the Doeblin route")]
    NotFullSpace,

    #[error("K is not a level set of V admitting a radius R > 2b/lambda: {context}")]
    LevelSetCondition { context: String },

    #[error("chain is not reversible: {context}")]
    NotReversible { context: String },

    #[error("eigendecomposition failed: {context}")]
    EigenFailure { context: String },

    #[error("the set K is empty")]
    EmptyK,

    #[error("the stationary measure puts zero mass on K")]
    ZeroMassOnK,

    #[error("grid too narrow: row {row} loses mass {mass} beyond the domain (tolerance {tol})")]
    GridTooNarrow { row: usize, mass: f64, tol: f64 },

    #[error("grid too coarse: spacing {spacing} exceeds sqrt(epsilon)/3 = {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("epsilon = {epsilon} outside the admissible range (0, {limit})")]
    EpsilonOutOfRange { epsilon: f64, limit: f64 },

    #[error("dissipativity condition fails: {context}")]
    Dissipativity { context: String },

    #[error("eps = {eps} outside the admissible range (0, 1/4]")]
    EpsOutOfRange { eps: f64 },

    #[error("invalid input: {context}")]
    InvalidInput { context: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable kind, used by the CLI error envelope.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonStochastic { .. } => "NonStochastic",
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidMeasure { .. } => "InvalidMeasure",
            Error::NonUnique { .. } => "NonUnique",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::ZeroMassState { .. } => "ZeroMassState",
            Error::InvalidLyapunov { .. } => "InvalidLyapunov",
            Error::NoDriftOutsideK { .. } => "NoDriftOutsideK",
            Error::ZeroOverlap => "ZeroOverlap",
            Error::EmptyLevelSet { .. } => "EmptyLevelSet",
            Error::SetMismatch => "SetMismatch",
            Error::ConstantsMismatch { .. } => "ConstantsMismatch",
            Error::NotPsd => "NotPSD",
            Error::NotFullSpace => "NotFullSpace",
            Error::LevelSetCondition { .. } => "LevelSetCondition",
            Error::NotReversible { .. } => "NotReversible",
            Error::EigenFailure { .. } => "EigenFailure",
            Error::EmptyK => "EmptyK",
            Error::ZeroMassOnK => "ZeroMassOnK",
            Error::GridTooNarrow { .. } => "GridTooNarrow",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::EpsilonOutOfRange { .. } => "EpsilonOutOfRange",
            Error::Dissipativity { .. } => "Dissipativity",
            Error::EpsOutOfRange { .. } => "EpsOutOfRange",
            Error::InvalidInput { .. } => "InvalidInput",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
