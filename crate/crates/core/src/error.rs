use std::fmt;

use crate::laplacian::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location-tagged failure while reading one of the text formats.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column, 0 when the error concerns the whole line.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column == 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn list_one_based(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(", ")
}

fn list_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {} out of range 1..={n}", .index + 1)]
    VertexOutOfRange { index: usize, n: usize },

    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(usize),

    #[error("duplicate edge {}-{}", .0 + 1, .1 + 1)]
    DuplicateEdge(usize, usize),

    #[error("edge {}-{} has non-positive weight {w}", .u + 1, .v + 1)]
    NonPositiveWeight { u: usize, v: usize, w: f64 },

    #[error("graph is disconnected: vertices {{{}}} are unreachable from vertex 1", list_one_based(.unreachable))]
    Disconnected { unreachable: Vec<usize> },

    #[error("{what} needs at least {min} vertices, got {n}")]
    TooSmall { what: &'static str, n: usize, min: usize },

    #[error("{what}: expected dimension {expected}, got {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },

    #[error("invalid conductance matrix: {}", list_violations(.0))]
    InvalidMatrix(Vec<Violation>),

    #[error("load must sum to zero before elimination, got f·1 = {total:e}")]
    UnbalancedLoad { total: f64 },

    #[error("underlying graph is not a triangle: conductance opposite vertex {} is zero", .0 + 1)]
    NotTriangle(usize),

    #[error("indices must be pairwise distinct, got {}", list_one_based(.0))]
    NotDistinct(Vec<usize>),

    #[error("cycle needs at least 3 vertices, got {0}")]
    SequenceTooShort(usize),

    #[error("start and target must differ, both are vertex {}", .0 + 1)]
    SameEndpoints(usize),

    #[error("trial count must be positive")]
    NoTrials,

    #[error("all {trials} trials exceeded the step cap of {max_steps}")]
    AllTrialsCapped { trials: u64, max_steps: u64 },

    #[error("Cholesky factorization of the pinned submatrix broke down")]
    FactorizationFailed,

    #[error("pinned solve residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("{what} disagree: {left} vs {right} at vertex {}", .index + 1)]
    RouteMismatch { what: &'static str, index: usize, left: f64, right: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn check_vertex(index: usize, n: usize) -> Result<()> {
        if index < n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { index, n })
        }
    }
}
