//! Exact A-twisted GLSM correlators.
//!
//! Correlators are truncated q-series computed from Jeffrey-Kirwan residues of
//! one-loop integrands, cross-checked against presented cohomology rings,
//! localization sums, I-function factorization and rational reconstruction.

pub mod algebra;
pub mod cohomology;
pub mod engines;
pub mod error;
pub mod glsm;
pub mod ifunctions;
pub mod potentials;
pub mod report;
pub mod residue;

pub use error::{Error, Result};
