use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("subspace prefix of length {keep} is not representable")]
    UnsupportedTruncation { keep: usize },
    #[error("gate `{0}` cannot be exported without lowering")]
    UnsupportedGate(String),
    #[error("node encodes a {rows}x{cols} matrix, not a vector")]
    NotAVector { rows: usize, cols: usize },
    #[error("phase solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    Solver { residual: f64, iterations: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("graph error: {0}")]
    Graph(String),
}
