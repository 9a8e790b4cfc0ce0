use std::collections::BTreeMap;

use itertools::Itertools;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::cohomology::QuotientRing;
use crate::engines::TargetSpec;
use crate::error::{Error, Result};
use crate::glsm::{correlator_degree, Variant};
use crate::report::EqualityReport;

use super::{gauge_vars, i_coeff_grassmannian, vandermonde_shift, ICoefficient};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationTerm {
    pub d1: Vec<i64>,
    pub d2: Vec<i64>,
    pub value: Rational,
}

/// Both sides of the degree-`d` factorization of the `G_m`-equivariant correlator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub degree: u32,
    pub lhs: Rational,
    pub rhs: Rational,
    pub terms: Vec<FactorizationTerm>,
    pub pass: bool,
}

impl FactorizationReport {
    pub fn to_report(&self, identity: &str) -> EqualityReport {
        EqualityReport {
            identity: identity.to_string(),
            degree: vec![self.degree as i64],
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            pass: self.pass,
        }
    }
}

fn sign(e: i64) -> Rational {
    Rational::from(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn degree_vectors(r: usize, d: u32) -> Vec<Vec<i64>> {
    (0..r)
        .map(|_| 0..=d as i64)
        .multi_cartesian_product()
        .filter(|v| v.iter().sum::<i64>() == d as i64)
        .collect()
}

/// `∫_{Gr(r,n)} value_a value_b / (root factors of a and b)` through Martin's
/// formula: the root product `∏_{i≠j}(x_i - x_j)` cancels the Vandermonde
/// denominators pairwise.
fn integrate_pair(ring: &QuotientRing<Rational>, r: usize, a: &ICoefficient, b: &ICoefficient, insertion: &Poly) -> Result<Rational> {
    let vars = ring.vars().to_vec();
    let mut root = Poly::one(&vars);
    for i in 0..r {
        for j in i + 1..r {
            let m = [a, b].iter().filter(|c| c.vandermonde.contains(&(i, j))).count();
            let mut coeffs = vec![Rational::zero(); r];
            coeffs[i] = Rational::one();
            coeffs[j] = -Rational::one();
            root = root.mul_poly(&Poly::linear(&vars, &coeffs, Rational::zero()).pow(2 - m as u32));
        }
    }
    let mut f = ring.mul(&root, insertion)?;
    f = ring.mul(&f, &a.value)?;
    f = ring.mul(&f, &b.value)?;
    let v = ring.top_coefficient(&f)?;
    Ok(v * sign((r * (r - 1) / 2) as i64) / Rational::factorial(r as u64))
}

/// Verifies, for the `G_m` (or `H × G_m` when `lambda` is given) correlator of
/// `P^{n-1}` (`r = 1`) or `Gr(r,n)`,
/// `⟨P⟩_d = Σ_{d_1+d_2=d} (-1)^{(r-1)d} ∫ P(x + d_1 z) I_{d_1}(z) I_{d_2}(-z)`.
pub fn factorization_check(
    r: usize,
    n: usize,
    p: &Poly,
    d: u32,
    z: &Rational,
    lambda: Option<&[Rational]>,
) -> Result<FactorizationReport> {
    let spec = if r == 1 { TargetSpec::Projective { n } } else { TargetSpec::Grassmannian { r, n } };
    let mut params: BTreeMap<String, Rational> = BTreeMap::new();
    params.insert("z".into(), z.clone());
    let variant = match lambda {
        Some(l) => {
            if l.len() != n {
                return Err(Error::InvalidModel("one λ per homogeneous coordinate".into()));
            }
            for (j, v) in l.iter().enumerate() {
                params.insert(format!("lambda{}", j + 1), v.clone());
            }
            Variant::HGm
        }
        None => Variant::Gm,
    };
    let model = spec.glsm_model()?.with_params(params);
    let p = p.with_vars(&gauge_vars(r))?;
    model.check_weyl_invariant(&p)?;

    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    let mut terms = Vec::new();
    let overall = sign((r as i64 - 1) * d as i64);
    let minus_z = -z.clone();
    for dv in degree_vectors(r, d) {
        lhs += correlator_degree(&model, &p, &dv, variant)?;
        for d1 in dv.iter().map(|&c| 0..=c).multi_cartesian_product() {
            let d2: Vec<i64> = dv.iter().zip(&d1).map(|(a, b)| a - b).collect();
            let a = i_coeff_grassmannian(r, n, &d1, z, lambda, &[])?;
            let b = i_coeff_grassmannian(r, n, &d2, &minus_z, lambda, &[])?;
            let shift: Vec<Rational> = d1.iter().map(|&c| z * &Rational::from(c)).collect();
            let value = overall.clone() * integrate_pair(a.ring(), r, &a, &b, &p.shift(&shift))?;
            rhs += value.clone();
            terms.push(FactorizationTerm { d1, d2, value });
        }
    }
    let pass = lhs == rhs;
    Ok(FactorizationReport { degree: d, lhs, rhs, terms, pass })
}

/// Applies `∏_{i<j} (z ∂_{t_i} - z ∂_{t_j})` to `e^{Σ (d_i + x_i/z) t_i}` and
/// compares the resulting prefactor with `∏_{i<j} (x_i - x_j + (d_i - d_j) z)`.
pub fn hori_vafa_shift_check(r: usize, d: &[i64], z: &Rational) -> Result<EqualityReport> {
    if r == 0 || d.len() != r {
        return Err(Error::InvalidModel("degree must have length r".into()));
    }
    if z.is_zero() {
        return Err(Error::InvalidModel("z must be nonzero".into()));
    }
    let x = gauge_vars(r);
    let mut vars = x.clone();
    vars.extend((1..=r).map(|i| format!("t{i}")));
    // z ∂_{t_k} (Q e^E) = (z ∂_{t_k} Q + (z d_k + x_k) Q) e^E
    let apply = |q: &Poly, k: usize| -> Poly {
        let mut coeffs = vec![Rational::zero(); 2 * r];
        coeffs[k] = Rational::one();
        let weight = Poly::linear(&vars, &coeffs, z * &Rational::from(d[k]));
        q.derivative(r + k).scale(z).add_poly(&q.mul_poly(&weight))
    };
    let mut q = Poly::one(&vars);
    for i in 0..r {
        for j in i + 1..r {
            q = apply(&q, i).sub_poly(&apply(&q, j));
        }
    }
    let expected = vandermonde_shift(d, z);
    let lhs = q.with_vars(&x).unwrap_or_else(|_| q.clone());
    Ok(EqualityReport {
        identity: "hori-vafa".into(),
        degree: d.to_vec(),
        lhs: lhs.to_string(),
        rhs: expected.to_string(),
        pass: lhs == expected,
    })
}
