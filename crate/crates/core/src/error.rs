use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("graph is not 2-edge-connected{}", detail(.0))]
    NotTwoEdgeConnected(Option<String>),

    #[error("graph is not connected")]
    NotConnected,

    #[error("vertex weights do not sum to zero")]
    NonZeroWeightSum,

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("no labelling satisfies the boundary target (component of vertex {component_vertex})")]
    Infeasible { component_vertex: usize },

    #[error("enumeration budget of {budget} coset members exceeded (coset has {coset_size})")]
    BudgetExceeded { budget: u128, coset_size: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("suppression target has a component that is a cycle of degree-2 vertices (vertex {0})")]
    CycleComponent(usize),

    #[error("input is Eulerian; lifting to a subcubic graph is not applicable")]
    EulerianInput,

    #[error("no qualifying vertex set: {0}")]
    NoQualifyingCut(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn detail(d: &Option<String>) -> String {
    match d {
        Some(s) => format!(" ({s})"),
        None => String::new(),
    }
}
