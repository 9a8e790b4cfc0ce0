use serde::Serialize;

/// Outcome of an identity check: both sides as exact strings and a pass flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub identity: String,
    pub degree: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}
