use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid weight family: {0}")]
    InvalidFamily(String),
    #[error("index {0} lies outside the table domain and no tail rule is given")]
    OutsideDomain(i64),
    #[error("beta({k}, {n}) is undefined: need k <= n + 1")]
    BetaRange { k: i64, n: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("window {window} cannot certify the maximum over Z; need at least {required}")]
    WindowTooSmall { window: u64, required: u64 },
    #[error("maximum over the window is attained only on its boundary")]
    MaxOnBoundary,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigenvalue iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("rejection budget of {0} draws exhausted")]
    RejectionBudget(usize),
    #[error("lambda = {lambda} is not grid-aligned for N = {n}")]
    NotGridAligned { lambda: String, n: usize },
    #[error("infeasible probe: {0}")]
    Infeasible(String),
}
