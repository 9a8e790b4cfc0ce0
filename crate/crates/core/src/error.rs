use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative exponent {0}; use series inversion instead")]
    NegativePower(i64),
    #[error("not a unit: constant term is zero")]
    NotUnit,
    #[error("not rational at these degrees")]
    NotRational,
    #[error("need >= {needed} terms (num+den+1), got {got}")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable mismatch: {0}")]
    Variables(String),
    #[error("essential singularity: {0}")]
    EssentialSingularity(String),
    #[error("degenerate FI vector: {0}")]
    DegenerateFi(String),
    #[error("non-projective arrangement")]
    NonProjective,
    #[error("non-generic parameters: {0}")]
    NonGeneric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coincident equivariant parameters")]
    CoincidentLambda,
    #[error("insertion is not Weyl invariant")]
    NotWeylInvariant,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("non-invertible at this z, lambda")]
    NonInvertible,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
