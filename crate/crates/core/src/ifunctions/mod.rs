//! I-function coefficients and the per-degree factorization and Hori–Vafa identities.

mod factorization;
mod float;

pub use factorization::{factorization_check, hori_vafa_shift_check, FactorizationReport, FactorizationTerm};
pub use float::{factorization_check_float, FloatReport, FloatStatus};

use itertools::Itertools;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::cohomology::QuotientRing;
use crate::error::{Error, Result};

/// `value / ∏_{(i,j) ∈ vandermonde} (x_i - x_j)` with `value` in the normal form
/// of `ring`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ICoefficient {
    pub degree: Vec<i64>,
    pub value: Poly,
    /// Pairs `i < j` whose root factor was not cancelled.
    pub vandermonde: Vec<(usize, usize)>,
    ring: QuotientRing<Rational>,
}

impl ICoefficient {
    pub fn ring(&self) -> &QuotientRing<Rational> {
        &self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.vandermonde.is_empty() && self.value == Poly::one(self.ring.vars())
    }

    /// Relabels `x_k ↦ x_{perm[k]}` and `d_k ↦ d_{perm[k]}` in slot `k`, keeping
    /// every root factor oriented as `x_i - x_j` with `i < j`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let r = self.degree.len();
        if perm.len() != r || !perm.iter().all_unique() || perm.iter().any(|&p| p >= r) {
            return Err(Error::InvalidModel("not a permutation".into()));
        }
        // old index i now sits in slot pos[i]
        let mut pos = vec![0; r];
        for (k, &p) in perm.iter().enumerate() {
            pos[p] = k;
        }
        let mut value = self.value.permute(perm);
        let mut pairs = Vec::new();
        for &(i, j) in &self.vandermonde {
            let (a, b) = (pos[i], pos[j]);
            if a < b {
                pairs.push((a, b));
            } else {
                pairs.push((b, a));
                value = value.scale(&-Rational::one());
            }
        }
        pairs.sort();
        let degree = perm.iter().map(|&p| self.degree[p]).collect();
        Ok(ICoefficient { degree, value, vandermonde: pairs, ring: self.ring.clone() })
    }
}

pub(crate) fn gauge_vars(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["x".into()]
    } else {
        (1..=r).map(|i| format!("x{i}")).collect()
    }
}

fn ring_for(r: usize, n: usize, lambda: Option<&[Rational]>) -> Result<QuotientRing<Rational>> {
    let vars = gauge_vars(r);
    match lambda {
        None => QuotientRing::nilpotent(&vars, &vec![n; r]),
        Some(l) => {
            if l.len() != n {
                return Err(Error::InvalidModel("one λ per homogeneous coordinate".into()));
            }
            if !l.iter().all_unique() {
                return Err(Error::CoincidentLambda);
            }
            QuotientRing::equivariant(&vars, l)
        }
    }
}

/// `1 / ∏_i ∏_{l=1}^{d} (x - λ_i + l z)` in the cohomology of `P^{n-1}`.
pub fn i_coeff_projective(n: usize, d: i64, z: &Rational, lambda: Option<&[Rational]>) -> Result<ICoefficient> {
    i_coeff_grassmannian(1, n, &[d], z, lambda, &[])
}

/// `∏_{i<j}(x_i - x_j + (d_i - d_j) z) / ∏_{i<j}(x_i - x_j)
///  · ∏_δ ∏_{l=1}^{⟨δ,d⟩} (⟨δ,x⟩ + l z) / ∏_i ∏_j ∏_{l=1}^{d_i} (x_i - λ_j + l z)`
/// on `(P^{n-1})^r`. Root factors with `d_i = d_j` cancel exactly.
pub fn i_coeff_grassmannian(
    r: usize,
    n: usize,
    d: &[i64],
    z: &Rational,
    lambda: Option<&[Rational]>,
    bundle: &[Vec<i64>],
) -> Result<ICoefficient> {
    if r == 0 || d.len() != r || d.iter().any(|&c| c < 0) {
        return Err(Error::InvalidModel("degree must be a nonnegative vector of length r".into()));
    }
    if z.is_zero() {
        return Err(Error::InvalidModel("z must be nonzero".into()));
    }
    let ring = ring_for(r, n, lambda)?;
    let vars = ring.vars().to_vec();
    let zeros = vec![Rational::zero(); n];
    let shifts = lambda.unwrap_or(&zeros);
    let mut value = Poly::one(&vars);
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            if d[i] != d[j] {
                pairs.push((i, j));
                value = ring.mul(&value, &root_shift(&vars, i, j, &(z * &Rational::from(d[i] - d[j]))))?;
            }
        }
    }
    for delta in bundle {
        if delta.len() != r {
            return Err(Error::InvalidModel("bundle weights must have length r".into()));
        }
        let k: i64 = delta.iter().zip(d).map(|(a, b)| a * b).sum();
        if k < 0 {
            return Err(Error::InvalidModel("degree is not effective for the bundle".into()));
        }
        let coeffs: Vec<Rational> = delta.iter().map(|&a| Rational::from(a)).collect();
        for l in 1..=k {
            value = ring.mul(&value, &Poly::linear(&vars, &coeffs, z * &Rational::from(l)))?;
        }
    }
    for (i, &di) in d.iter().enumerate() {
        for s in shifts {
            for l in 1..=di {
                let inv = ring.inverse_linear(i, &(z * &Rational::from(l) - s.clone()))?;
                value = ring.mul(&value, &inv)?;
            }
        }
    }
    Ok(ICoefficient { degree: d.to_vec(), value, vandermonde: pairs, ring })
}

/// `x_i - x_j + c`.
fn root_shift(vars: &[String], i: usize, j: usize, c: &Rational) -> Poly {
    let mut coeffs = vec![Rational::zero(); vars.len()];
    coeffs[i] = Rational::one();
    coeffs[j] = -Rational::one();
    Poly::linear(vars, &coeffs, c.clone())
}

/// `∏_{i<j} (x_i - x_j + (d_i - d_j) z)`.
pub fn vandermonde_shift(d: &[i64], z: &Rational) -> Poly {
    let r = d.len();
    let vars = gauge_vars(r);
    let mut out = Poly::one(&vars);
    for i in 0..r {
        for j in i + 1..r {
            out = out.mul_poly(&root_shift(&vars, i, j, &(z * &Rational::from(d[i] - d[j]))));
        }
    }
    out
}
