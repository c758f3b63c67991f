use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no integral solution")]
    NoSolution,

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid lattice: {}", .0.join("; "))]
    InvalidLattice(Vec<String>),

    #[error("invalid module: {}", .0.join("; "))]
    InvalidModule(Vec<String>),

    #[error("invalid diagram: {}", .0.join("; "))]
    InvalidDiagram(Vec<String>),

    /// A sublattice expected to be stable under the group is not.
    #[error("sublattice is not stable under the group action: {0}")]
    NotStable(String),

    #[error("sublattice is not saturated")]
    NotSaturated,

    #[error("lattice is not reduced: {0}")]
    NotReduced(String),

    #[error("sum of idempotent components is not direct")]
    DirectnessViolation,

    /// Internal consistency check failed; indicates a bug or violated precondition.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
