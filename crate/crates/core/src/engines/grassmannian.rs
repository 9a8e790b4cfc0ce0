use std::collections::BTreeMap;

use itertools::Itertools;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::cohomology::{is_symmetric, root_product};
use crate::error::{Error, Result};
use crate::glsm::Variant;
use crate::residue::{AffineForm, PoleAssignment, RatExpr};

use super::{gauge_vars, linear_form, nonneg, pair};

fn sign(e: i64) -> Rational {
    Rational::from(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn symmetric_insertion(r: usize, p: &Poly) -> Result<Poly> {
    let p = p.with_vars(&gauge_vars(r))?;
    if !is_symmetric(&p) {
        return Err(Error::NotWeylInvariant);
    }
    Ok(p)
}

/// Multi-degrees `d ∈ Z_{≥0}^r` with `|d| ≤ cutoff`.
fn degrees(r: usize, cutoff: u32) -> Vec<Vec<i64>> {
    (0..r)
        .map(|_| 0..=cutoff as i64)
        .multi_cartesian_product()
        .filter(|d| d.iter().sum::<i64>() <= cutoff as i64)
        .collect()
}

fn affine(w: &[i64], c: Rational) -> AffineForm {
    AffineForm::new(w.iter().map(|&a| Rational::from(a)).collect(), c)
}

fn e(r: usize, i: usize) -> Vec<i64> {
    (0..r).map(|k| i64::from(k == i)).collect()
}

fn e_diff(r: usize, i: usize, j: usize) -> Vec<i64> {
    (0..r).map(|k| i64::from(k == i) - i64::from(k == j)).collect()
}

fn lambdas(n: usize, params: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
    (1..=n)
        .map(|j| {
            params
                .get(&format!("lambda{j}"))
                .cloned()
                .ok_or_else(|| Error::InvalidModel(format!("parameter `lambda{j}` is not bound")))
        })
        .collect()
}

/// Sum of iterated residues at every distinct point of the given per-variable pole sets.
fn residue_sum(expr: &RatExpr, poles: &[Vec<Rational>]) -> Result<Rational> {
    let mut points: Vec<Vec<Rational>> = poles.iter().cloned().multi_cartesian_product().collect();
    points.sort();
    points.dedup();
    let assignments: Vec<PoleAssignment> = points.iter().map(|p| PoleAssignment::at_point(p)).collect();
    expr.sum_residues(&assignments)
}

/// Abelianized correlator of `Gr(r,n)`:
/// `(1/r!) Σ_d ((-1)^{r-1} q)^{|d|} Res[∏_{i≠j}(x_i - x_j) P / ∏_i x_i^{n(d_i+1)}]`.
/// Equivariant variants replace `x_i^{n(d_i+1)}` by `∏_j ∏_{l=0}^{d_i} (x_i - λ_j - l z)`
/// and the root factor by `∏_{i<j} (x_j - x_i)(x_i - x_j - (d_i - d_j) z)`.
pub fn grassmannian_ab_correlator(
    r: usize,
    n: usize,
    p: &Poly,
    cutoff: u32,
    variant: Variant,
    params: &BTreeMap<String, Rational>,
) -> Result<QSeries> {
    grassmannian_with_bundle(r, n, &[], false, p, cutoff, variant, params)
}

/// Zero locus of the bundle with weights `bundle`: inserts `∏_δ δ(x)^{⟨δ,d⟩+1}`.
pub fn grassmannian_ci_correlator(r: usize, n: usize, bundle: &[Vec<i64>], p: &Poly, cutoff: u32) -> Result<QSeries> {
    grassmannian_with_bundle(r, n, bundle, true, p, cutoff, Variant::Plain, &BTreeMap::new())
}

#[allow(clippy::too_many_arguments)]
fn grassmannian_with_bundle(
    r: usize,
    n: usize,
    bundle: &[Vec<i64>],
    euler: bool,
    p: &Poly,
    cutoff: u32,
    variant: Variant,
    params: &BTreeMap<String, Rational>,
) -> Result<QSeries> {
    if r == 0 || r > n {
        return Err(Error::InvalidModel(format!("need 0 < r <= n, got r = {r}, n = {n}")));
    }
    let x = gauge_vars(r);
    let p = symmetric_insertion(r, &p)?;
    let lambda = if variant.equivariant_h() { Some(lambdas(n, params)?) } else { None };
    let z = if variant.equivariant_gm() {
        params.get("z").cloned().ok_or_else(|| Error::InvalidModel("parameter `z` is not bound".into()))?
    } else {
        Rational::zero()
    };
    let rfact = Rational::factorial(r as u64);
    let mut out = QSeries::zero(&["q"], vec![cutoff]);
    let zero = Rational::zero();
    for d in degrees(r, cutoff) {
        let total: i64 = d.iter().sum();
        let prefactor = sign((r as i64 - 1) * total) / rfact.clone();
        let top: Vec<u32> = d.iter().map(|&di| (n as i64 * (di + 1) - 1) as u32).collect();
        let mut num = p.clone();
        for delta in bundle {
            let k = nonneg(pair(delta, &d))? + u32::from(euler);
            num = num.mul_bounded(&linear_form(&x, delta, &zero).pow_bounded(k, &top), &top);
        }
        let value = if variant == Variant::Plain {
            root_product(&x).mul_bounded(&num, &top).coefficient(&top)
        } else {
            for i in 0..r {
                for j in i + 1..r {
                    let a = e_diff(r, i, j);
                    let c = -(&z * &Rational::from(d[i] - d[j]));
                    num = num
                        .mul_poly(&linear_form(&x, &e_diff(r, j, i), &zero))
                        .mul_poly(&linear_form(&x, &a, &c));
                }
            }
            let shifts: Vec<Rational> = match &lambda {
                Some(l) => l.clone(),
                None => vec![zero.clone(); n],
            };
            let mut factors = Vec::new();
            let mut poles = vec![Vec::new(); r];
            for i in 0..r {
                for s in &shifts {
                    for l in 0..=d[i] {
                        let pole = s + &(&z * &Rational::from(l));
                        factors.push((affine(&e(r, i), -pole.clone()), 1));
                        poles[i].push(pole);
                    }
                }
            }
            let expr = RatExpr::new(&x, num, factors)?;
            residue_sum(&expr, &poles)?
        };
        out.add_coeff(vec![total as u32], prefactor * value);
    }
    Ok(out)
}

/// `T^*Gr(r,n)`: `(1/r!) Σ_d ((-1)^{r-1} q)^{|d|}` times the sum of residues at
/// `x_i ∈ {λ_j}` of
/// `∏_{i≠j}(x_i - x_j) ∏_{i,j}(x_i - x_j + μ)^{1-d_i+d_j}
///  ∏_{i,j}(-x_i + λ_j - μ)^{d_i-1} / ∏_{i,j}(x_i - λ_j)^{d_i+1} P`.
pub fn tstar_gr_correlator(r: usize, n: usize, lambda: &[Rational], mu: &Rational, p: &Poly, cutoff: u32) -> Result<QSeries> {
    if r == 0 || r > n || lambda.len() != n {
        return Err(Error::InvalidModel("need 0 < r <= n and one λ per flavor".into()));
    }
    if !lambda.iter().all_unique() {
        return Err(Error::CoincidentLambda);
    }
    let x = gauge_vars(r);
    let p = symmetric_insertion(r, p)?;
    let rfact = Rational::factorial(r as u64);
    let mut out = QSeries::zero(&["q"], vec![cutoff]);
    let poles: Vec<Vec<Rational>> = vec![lambda.to_vec(); r];
    let grid: Vec<Vec<Rational>> = poles.iter().cloned().multi_cartesian_product().collect();
    // Y and adjoint denominators must stay away from the X poles
    let push = |num: &mut Poly, factors: &mut Vec<(AffineForm, u32)>, w: &[i64], c: Rational, k: i64| -> Result<()> {
        if k >= 0 {
            *num = num.mul_poly(&linear_form(&x, w, &c).pow(k as u32));
        } else {
            let f = affine(w, c);
            if let Some(pt) = grid.iter().find(|pt| f.eval(pt).is_zero()) {
                return Err(Error::NonGeneric(format!("non-generic λ, μ: a denominator vanishes at {pt:?}")));
            }
            factors.push((f, (-k) as u32));
        }
        Ok(())
    };
    for d in degrees(r, cutoff) {
        let total: i64 = d.iter().sum();
        let mut num = p.mul_poly(&root_product(&x));
        let mut factors = Vec::new();
        for i in 0..r {
            for j in 0..r {
                push(&mut num, &mut factors, &e_diff(r, i, j), mu.clone(), 1 - d[i] + d[j])?;
            }
        }
        for i in 0..r {
            let minus: Vec<i64> = e(r, i).iter().map(|c| -c).collect();
            for l in lambda {
                push(&mut num, &mut factors, &minus, l - mu, d[i] - 1)?;
                factors.push((affine(&e(r, i), -l.clone()), (d[i] + 1) as u32));
            }
        }
        let expr = RatExpr::new(&x, num, factors)?;
        let value = residue_sum(&expr, &poles).map_err(|err| match err {
            Error::NonGeneric(m) => Error::NonGeneric(format!("non-generic λ, μ: {m}")),
            other => other,
        })?;
        out.add_coeff(vec![total as u32], sign((r as i64 - 1) * total) / rfact.clone() * value);
    }
    Ok(out)
}
