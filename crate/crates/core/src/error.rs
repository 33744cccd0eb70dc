use thiserror::Error;

/// Errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation at position {position}: {reason}")]
    Permutation { position: usize, reason: String },

    #[error("invalid height {height} for {count} strands")]
    HeightOutOfRange { height: u32, count: usize },

    #[error("position {position} is not a trivial petal")]
    NotTrivialPetal { position: usize },

    #[error("a 3-petal diagram is already the unknot; no petal can be removed")]
    PetalFloor,

    #[error("invalid diagram: {0}")]
    Diagram(String),

    #[error("invalid planar diagram: {0}")]
    PlanarDiagram(String),

    #[error("degenerate perturbation: {0}")]
    DegenerateSchedule(String),

    #[error("ribbons have the same handedness")]
    HandednessConflict,

    #[error("crossing budget exceeded: {crossings} crossings > {budget}")]
    BudgetExceeded { crossings: usize, budget: usize },

    #[error("out of supported range: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn perm(position: usize, reason: impl Into<String>) -> Self {
        Error::Permutation { position, reason: reason.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Verification(_) => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
