use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("tableau node budget of {budget} expansions exhausted")]
    ResourceLimit { budget: u64 },
    #[error("base enumeration exceeded {budget} candidate prefixes")]
    CandidateBudget { budget: usize },
    #[error("concept `{0}` has infinite rank")]
    InfiniteRank(String),
    #[error("knowledge base exceeds oracle bounds: {0}")]
    BoundsExceeded(String),
    #[error("oracle bounds too small for a complete answer: {0}")]
    BoundsInsufficient(String),
    #[error("canonical-model oracle needs a role-free knowledge base")]
    NotRoleFree,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
