use thiserror::Error;

use crate::building_set::Violation;

/// Coarse classification used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Input,
    ResourceLimit,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid building set: {}", format_violations(.0))]
    InvalidBuildingSet(Vec<Violation>),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("unbounded system: direction {direction:?} satisfies every homogeneous inequality")]
    Unbounded { direction: Vec<i64> },

    #[error("simplicity violation: vertex {vertex} lies on {active} facets in dimension {dimension}")]
    NonSimple {
        vertex: usize,
        active: usize,
        dimension: usize,
    },

    #[error("resource limit exceeded: {what} is {value}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    /// A certificate failed its own re-check. Reaching this means either a
    /// bug or a counterexample to one of the underlying lemmas.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceLimit { .. } => ErrorKind::ResourceLimit,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
