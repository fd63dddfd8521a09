//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or scenario value violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An operation received an argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An interaction degenerates to no force (zero charge, j = 0, empty
    /// composite, ...).
    #[error("degenerate interaction: {0}")]
    DegenerateInteraction(String),

    /// A covariance matrix violates the uncertainty relation beyond
    /// tolerance; entanglement measures refuse to silently return zero.
    #[error("non-physical covariance: {0}")]
    NonPhysicalCovariance(String),

    /// The pentadiagonal LU factorization hit a vanishing pivot.
    #[error("pentadiagonal LU breakdown at row {row}: |pivot| = {pivot_abs:.3e}")]
    SolverBreakdown { row: usize, pivot_abs: f64 },

    /// A wave-function grid does not cover the requested support.
    #[error("grid too small: {0}")]
    GridTooSmall(String),

    /// A bipartite window misses too much probability.
    #[error("window coverage error: {0}")]
    Coverage(String),

    /// The Schmidt rank limit was reached before the norm was recovered.
    #[error("Schmidt capture failure: 1 - sum(lambda) = {deficit:.3e} at rank {rank}")]
    SchmidtCapture { deficit: f64, rank: usize },

    /// Dynamic grid extension would exceed the configured memory budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A scenario file failed to parse.
    #[error("scenario parse error (line {line}): {msg}")]
    ScenarioParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
