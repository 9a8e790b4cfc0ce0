//! Residue operators: univariate Laurent residues, iterated residues, sums over
//! pole sets, and the Jeffrey–Kirwan residue.

pub mod jk;
pub mod ratexpr;

pub use jk::{jk_residue, jk_total, Arrangement, Integrand, LinearFactor};
pub use ratexpr::{univariate_residue, AffineForm, PoleAssignment, RatExpr, RatTerm};
