use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("coverage error: table spans [{first}, {last}] but grid needs [0, {t_end}]")]
    Coverage { first: f64, last: f64, t_end: f64 },

    #[error("index {index} out of range 0..{bound}")]
    Range { index: usize, bound: usize },

    #[error("invalid orders: {0}")]
    InvalidOrders(String),

    #[error("{0}")]
    Validation(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singular step at node {node}: diagonal coefficient vanishes")]
    SingularStep { node: usize },

    #[error("unknown reference case '{0}'")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
