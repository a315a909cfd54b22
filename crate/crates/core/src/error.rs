use thiserror::Error;

/// Errors raised by every fallible operation in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid genotype: {0}")]
    InvalidGenotype(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("phenotype out of range: {0}")]
    OutOfRange(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("equivalence relation is not transitive on ({0}, {1}, {2})")]
    InvalidRelation(String, String, String),
    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("simplices are not in general position: {0}")]
    NotInGeneralPosition(String),
    #[error("apex is not in the relative interior of the target simplex")]
    InvalidApex,
    #[error("feasible set is unbounded")]
    UnboundedFeasibleSet,
    #[error("feasible set is empty")]
    EmptyFeasibleSet,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("degenerate triangle #{index} {vertices:?}")]
    DegenerateTriangle { index: usize, vertices: [usize; 3] },
    #[error("illegal swap of edge ({0}, {1})")]
    IllegalSwap(usize, usize),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
