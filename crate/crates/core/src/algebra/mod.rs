//! Exact scalars, sparse polynomials, truncated series and rational reconstruction.

pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;
pub mod unipoly;

pub use poly::{truncated_exp, MultiPoly, Poly};
pub use ratfunc::{pade_reconstruct, PadeResult, RationalFunction};
pub use scalar::{Field, GaussianRational, Rational, Scalar};
pub use series::QSeries;
pub use unipoly::UniPoly;
