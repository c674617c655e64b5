use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the operation's domain (bad vertex id, loop, parity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The input exceeds a size cap of the data structure or of an exhaustive routine.
    #[error("capacity exceeded: {what} is {got}, limit {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("graph6 parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("graph is disconnected; take the maximum over components explicitly")]
    Disconnected,

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no sign change of the cubic on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// Broken internal invariant. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
