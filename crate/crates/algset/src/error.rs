use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("element {0} is not in the object")]
    NotAnElement(String),
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("family is not displayed: {0}")]
    NotDisplayed(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("equivalence relation is not bounded: {0}")]
    NotBounded(String),
    #[error("no covering square found: {0}")]
    NoCoveringSquare(String),
    #[error("not a function encoding: {0}")]
    NotFunction(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("rank {rank} of `{what}` exceeds the bound {bound}")]
    RankExceeded { what: String, rank: usize, bound: usize },
    #[error("ill-typed parameters: {0}")]
    IllTyped(String),
}

pub type Result<T> = std::result::Result<T, Error>;
