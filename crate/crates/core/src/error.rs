use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Data whose sums of squares make a log term diverge.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("quadrature did not converge after {panels} panels (estimated relative error {rel_err:.3e})")]
    NoConvergence { panels: usize, rel_err: f64 },

    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
