//! Jeffrey–Kirwan residues.
//!
//! A local form `N(u) / ∏ ρ_j(u)^{k_j}` is reduced by partial fractions until
//! every term has linearly independent denominators. A basis term contributes
//! `coeff_{y^{k-1}} N(M^{-1} y) / |det M|` when `η ∈ Cone(S)`, and zero otherwise.
//! Global integrands are handled by enumerating the intersection points of the
//! singular hyperplanes and expanding the non-vanishing factors around each.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::error::{Error, Result};

/// Hyperplane data and FI vector for a rank-`r` arrangement at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    rank: usize,
    weights: Vec<(Vec<i64>, u32)>,
    eta: Vec<Rational>,
}

impl Arrangement {
    pub fn new(rank: usize, weights: Vec<(Vec<i64>, u32)>, eta: Vec<Rational>) -> Result<Self> {
        if eta.len() != rank {
            return Err(Error::InvalidModel("FI vector length differs from rank".into()));
        }
        let mut dirs = Vec::new();
        for (w, _) in &weights {
            if w.len() != rank {
                return Err(Error::InvalidModel("weight length differs from rank".into()));
            }
            if w.iter().all(|&c| c == 0) {
                return Err(Error::InvalidModel("zero weight in arrangement".into()));
            }
            let d = primitive(&to_q(w)).1;
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
        if !is_projective(&dirs) {
            return Err(Error::NonProjective);
        }
        check_eta_generic(&dirs, &eta)?;
        Ok(Arrangement { rank, weights, eta })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eta(&self) -> &[Rational] {
        &self.eta
    }

    pub fn weights(&self) -> &[(Vec<i64>, u32)] {
        &self.weights
    }
}

/// JK residue at the origin of `numerator / ∏ ⟨w, x⟩^power`.
pub fn jk_residue(arr: &Arrangement, numerator: &Poly, denominators: &[(Vec<i64>, u32)]) -> Result<Rational> {
    let r = arr.rank;
    if numerator.nvars() != r {
        return Err(Error::Variables(format!("numerator must have {r} variables")));
    }
    let mut dens: Vec<(Vec<Rational>, u32)> = Vec::new();
    let mut scale = Rational::one();
    for (w, k) in denominators {
        if w.len() != r || w.iter().all(|&c| c == 0) {
            return Err(Error::InvalidModel("bad denominator weight".into()));
        }
        let (g, d) = primitive(&to_q(w));
        scale = scale * g.powi(-(*k as i64))?;
        push_direction(&mut dens, d, *k);
    }
    let num = LocalNumerator { factors: vec![NumFactor::Poly(numerator.clone())] };
    Ok(scale * local_jk(r, &arr.eta, &num, &dens)?)
}

/// A numerator factor in local coordinates `u`.
#[derive(Clone, Debug)]
pub enum NumFactor {
    Poly(Poly),
    /// `(Σ coeffs_i u_i + constant)^power`; a negative power needs a nonzero constant
    /// and is expanded as a power series.
    Linear { coeffs: Vec<Rational>, constant: Rational, power: i64 },
}

#[derive(Clone, Debug, Default)]
pub struct LocalNumerator {
    pub factors: Vec<NumFactor>,
}

fn to_q(w: &[i64]) -> Vec<Rational> {
    w.iter().map(|&c| Rational::from(c)).collect()
}

/// Splits `w = g·p` with `p` a primitive integer direction and `g > 0`.
/// The input must have rational entries; the content is taken over Q.
fn primitive(w: &[Rational]) -> (Rational, Vec<Rational>) {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut lcm_den = BigInt::from(1);
    for c in w {
        lcm_den = lcm_den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = w.iter().map(|c| c.numer() * (&lcm_den / c.denom())).collect();
    let mut g = BigInt::from(0);
    for c in &ints {
        g = g.gcd(c);
    }
    let scale = Rational::from_big(g.clone(), lcm_den).expect("nonzero");
    let p = ints
        .iter()
        .map(|c| Rational::from_integer(c / &g))
        .collect();
    (scale, p)
}

fn push_direction(dens: &mut Vec<(Vec<Rational>, u32)>, d: Vec<Rational>, k: u32) {
    match dens.iter_mut().find(|(e, _)| *e == d) {
        Some(slot) => slot.1 += k,
        None => dens.push((d, k)),
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// True when all directions lie in an open half-space.
fn is_projective(dirs: &[Vec<Rational>]) -> bool {
    if dirs.is_empty() {
        return true;
    }
    let r = dirs[0].len();
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            if a.iter().zip(b).all(|(x, y)| *x == -y.clone()) {
                return false;
            }
        }
    }
    let positive = |xi: &[Rational]| dirs.iter().all(|d| dot(xi, d).is_positive());
    let sum: Vec<Rational> = (0..r).map(|i| dirs.iter().map(|d| d[i].clone()).sum()).collect();
    if positive(&sum) {
        return true;
    }
    // Interior of the dual cone: sum of its extreme rays, which are normals
    // to (r-1)-subsets of the directions.
    let span = linalg::rank(&dirs.to_vec());
    if span < r {
        // restrict to the span: complete with a basis of the orthogonal complement
        return projective_in_span(dirs);
    }
    let mut acc = vec![Rational::zero(); r];
    for subset in (0..dirs.len()).combinations(r - 1) {
        let m: Matrix<Rational> = subset.iter().map(|&i| dirs[i].clone()).collect();
        let ker = linalg::kernel(&m, r);
        if ker.len() != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            let n: Vec<Rational> = ker[0].iter().map(|c| c * &Rational::from(sign)).collect();
            if dirs.iter().all(|d| !dot(&n, d).is_negative()) {
                for (a, b) in acc.iter_mut().zip(&n) {
                    *a += b;
                }
            }
        }
    }
    positive(&acc)
}

fn projective_in_span(dirs: &[Vec<Rational>]) -> bool {
    // choose coordinates on the span and retry there
    let basis = span_basis(dirs);
    let coords: Vec<Vec<Rational>> = dirs
        .iter()
        .map(|d| linalg::coordinates(&basis, d).expect("in span"))
        .collect();
    if basis.len() == dirs[0].len() {
        return false;
    }
    is_projective(&coords)
}

fn span_basis(dirs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for d in dirs {
        let mut trial = basis.clone();
        trial.push(d.clone());
        if linalg::rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Rejects η lying in the cone of some independent (r-1)-subset of directions.
fn check_eta_generic(dirs: &[Vec<Rational>], eta: &[Rational]) -> Result<()> {
    let r = eta.len();
    if eta.iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateFi("zero FI vector".into()));
    }
    if r < 2 {
        return Ok(());
    }
    for subset in (0..dirs.len()).combinations(r - 1) {
        let basis: Vec<Vec<Rational>> = subset.iter().map(|&i| dirs[i].clone()).collect();
        if linalg::rank(&basis) < r - 1 {
            continue;
        }
        if let Some(c) = linalg::coordinates(&basis, eta) {
            if c.iter().all(|x| !x.is_negative()) {
                return Err(Error::DegenerateFi(format!("η lies on the cone of {basis:?}")));
            }
        }
    }
    Ok(())
}

/// JK residue at the origin of `N(u) / ∏ ρ_j(u)^{k_j}` with primitive directions `ρ_j`.
pub fn local_jk(
    rank: usize,
    eta: &[Rational],
    num: &LocalNumerator,
    dens: &[(Vec<Rational>, u32)],
) -> Result<Rational> {
    let dirs: Vec<Vec<Rational>> = dens.iter().map(|(d, _)| d.clone()).collect();
    if linalg::rank(&dirs) < rank {
        return Ok(Rational::zero());
    }
    if rank == 1 && !is_projective(&dirs) {
        // All factors cut out the same point. The pole is selected when a factor
        // of the η-sign charge vanishes there; opposite-charge factors are folded in.
        let s = if eta[0].is_positive() { Rational::one() } else { -Rational::one() };
        if !dirs.iter().any(|d| d[0] == s) {
            return Ok(Rational::zero());
        }
        let mut sign = Rational::one();
        let mut k = 0;
        for (d, m) in dens {
            k += m;
            if d[0] != s && m % 2 == 1 {
                sign = -sign;
            }
        }
        return Ok(sign * local_jk(rank, eta, num, &[(vec![s], k)])?);
    }
    if !is_projective(&dirs) {
        return Err(Error::NonProjective);
    }
    let basis_terms = partial_fractions(rank, &dirs, dens.iter().map(|(_, k)| *k).collect())?;
    let mut acc = Rational::zero();
    for ((subset, ks), coef) in basis_terms {
        let m: Matrix<Rational> = subset.iter().map(|&i| dirs[i].clone()).collect();
        let cone = linalg::coordinates(&m, eta).expect("basis spans");
        if cone.iter().any(|c| c.is_zero()) {
            return Err(Error::DegenerateFi(format!(
                "η on the boundary of the cone spanned by {m:?}"
            )));
        }
        if cone.iter().any(|c| c.is_negative()) {
            continue;
        }
        let det = linalg::determinant(&m).abs();
        let minv = linalg::inverse(&m).expect("invertible");
        let target: Vec<u32> = ks.iter().map(|k| k - 1).collect();
        let c = coefficient_after_substitution(num, &minv, &target)?;
        if !c.is_zero() {
            acc += coef * c / det;
        }
    }
    Ok(acc)
}

type BasisKey = (Vec<usize>, Vec<u32>);

/// Rewrites `1/∏ ρ_j^{k_j}` as `Σ c · 1/∏_{j∈S} ρ_j^{k'_j}` over independent subsets `S`.
fn partial_fractions(rank: usize, dirs: &[Vec<Rational>], ks: Vec<u32>) -> Result<BTreeMap<BasisKey, Rational>> {
    let mut out: BTreeMap<BasisKey, Rational> = BTreeMap::new();
    let mut work: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    work.insert(ks, Rational::from(1));
    while let Some((state, coef)) = pop_last(&mut work) {
        if coef.is_zero() {
            continue;
        }
        let support: Vec<usize> = (0..dirs.len()).filter(|&i| state[i] > 0).collect();
        let mut basis: Vec<usize> = Vec::new();
        for &i in &support {
            let mut trial: Vec<Vec<Rational>> = basis.iter().map(|&b| dirs[b].clone()).collect();
            trial.push(dirs[i].clone());
            if linalg::rank(&trial) == trial.len() {
                basis.push(i);
            }
        }
        if basis.len() < rank {
            continue;
        }
        let extra = support.iter().copied().find(|i| !basis.contains(i));
        match extra {
            None => {
                let key = (basis.clone(), basis.iter().map(|&i| state[i]).collect());
                *out.entry(key).or_insert_with(Rational::zero) += coef;
            }
            Some(e) => {
                // ρ_e = Σ a_b ρ_b  ⇒  1 = Σ a_b ρ_b / ρ_e
                let bvecs: Vec<Vec<Rational>> = basis.iter().map(|&b| dirs[b].clone()).collect();
                let a = linalg::coordinates(&bvecs, &dirs[e])
                    .ok_or_else(|| Error::Internal("direction outside basis span".into()))?;
                for (ai, &b) in a.iter().zip(&basis) {
                    if ai.is_zero() {
                        continue;
                    }
                    let mut next = state.clone();
                    next[b] -= 1;
                    next[e] += 1;
                    *work.entry(next).or_insert_with(Rational::zero) += &(&coef * ai);
                }
            }
        }
    }
    Ok(out)
}

fn pop_last<K: Ord + Clone, V>(m: &mut BTreeMap<K, V>) -> Option<(K, V)> {
    let k = m.keys().next_back()?.clone();
    let v = m.remove(&k)?;
    Some((k, v))
}

/// Coefficient of `y^target` in `N(minv · y)`.
fn coefficient_after_substitution(num: &LocalNumerator, minv: &Matrix<Rational>, target: &[u32]) -> Result<Rational> {
    let r = target.len();
    let yvars: Vec<String> = (0..r).map(|i| format!("y{i}")).collect();
    let total: u32 = target.iter().sum();
    // u_i = Σ_j minv[i][j] y_j
    let images: Vec<Poly> = (0..r)
        .map(|i| Poly::linear(&yvars, &minv[i], Rational::zero()))
        .collect();
    let mut acc = Poly::one(&yvars);
    // expand the cheapest factors first so pruning bites early
    for f in &num.factors {
        let g = match f {
            NumFactor::Poly(p) => compose_bounded(p, &images, &yvars, target),
            NumFactor::Linear { coeffs, constant, power } => {
                let c: Vec<Rational> = (0..r)
                    .map(|j| (0..r).map(|i| &coeffs[i] * &minv[i][j]).sum())
                    .collect();
                let lin = Poly::linear(&yvars, &c, Rational::zero());
                linear_power_bounded(&lin, constant, *power, target, total)?
            }
        };
        acc = acc.mul_bounded(&g, target);
        if acc.is_zero() {
            return Ok(Rational::zero());
        }
    }
    Ok(acc.coefficient(target))
}

/// `p(images)` keeping only exponents `<= bound`.
fn compose_bounded(p: &Poly, images: &[Poly], vars: &[String], bound: &[u32]) -> Poly {
    let mut cache: Vec<Vec<Poly>> = images.iter().map(|im| vec![Poly::one(vars), im.clone()]).collect();
    let mut out = Poly::zero(vars);
    for (e, c) in p.terms() {
        let mut t = Poly::constant(vars, c.clone());
        for (k, &ek) in e.iter().enumerate() {
            if ek == 0 {
                continue;
            }
            while cache[k].len() <= ek as usize {
                let next = cache[k].last().unwrap().mul_bounded(&images[k], bound);
                cache[k].push(next);
            }
            t = t.mul_bounded(&cache[k][ek as usize], bound);
            if t.is_zero() {
                break;
            }
        }
        out = out.add_poly(&t);
    }
    out
}

/// `(lin + constant)^power` truncated to the box `bound` (and total degree `total`
/// for negative powers).
fn linear_power_bounded(lin: &Poly, constant: &Rational, power: i64, bound: &[u32], total: u32) -> Result<Poly> {
    let vars = lin.vars().to_vec();
    if power >= 0 {
        let mut base = lin.clone();
        base.add_term(vec![0; vars.len()], constant.clone());
        return Ok(base.pow_bounded(power as u32, bound));
    }
    if constant.is_zero() {
        return Err(Error::Internal("negative power of a vanishing factor in a numerator".into()));
    }
    let k = -power;
    let cinv = constant.inv().expect("nonzero");
    // (c + l)^{-k} = Σ_m C(-k, m) c^{-k-m} l^m
    let mut out = Poly::zero(&vars);
    let mut lpow = Poly::one(&vars);
    for m in 0..=total {
        let coef = Rational::binomial(-k, m as u64) * cinv.powi(k + m as i64)?;
        out = out.add_poly(&lpow.scale(&coef));
        lpow = lpow.mul_bounded(lin, bound);
        if lpow.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// Factor `(⟨weight, x⟩ + constant)^exponent` of a global integrand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub weight: Vec<i64>,
    pub constant: Rational,
    pub exponent: i64,
}

/// `∏ polys · ∏ linear factors` in rank-`r` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrand {
    pub rank: usize,
    pub polys: Vec<Poly>,
    pub linear: Vec<LinearFactor>,
}

/// Sum of local JK residues over every intersection point of the singular
/// hyperplanes of the integrand.
pub fn jk_total(integrand: &Integrand, eta: &[Rational]) -> Result<Rational> {
    let r = integrand.rank;
    let mut scale = Rational::from(1);
    let mut factors: Vec<&LinearFactor> = Vec::new();
    for f in &integrand.linear {
        if f.exponent == 0 {
            continue;
        }
        if f.weight.iter().all(|&c| c == 0) {
            scale = scale
                * f.constant
                    .powi(f.exponent)
                    .map_err(|_| Error::NonGeneric("constant denominator factor vanishes".into()))?;
        } else {
            factors.push(f);
        }
    }
    if scale.is_zero() {
        return Ok(scale);
    }
    // distinct singular hyperplanes, normalized up to sign
    let mut planes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for f in factors.iter().filter(|f| f.exponent < 0) {
        let w = to_q(&f.weight);
        let (g, d) = primitive(&w);
        let mut c = &f.constant / &g;
        let mut d = d;
        if d.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            d = d.iter().map(|x| -x).collect();
            c = -c;
        }
        if !planes.contains(&(d.clone(), c.clone())) {
            planes.push((d, c));
        }
    }
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for subset in (0..planes.len()).combinations(r) {
        let m: Matrix<Rational> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| -planes[i].1.clone()).collect();
        if linalg::determinant(&m).is_zero() {
            continue;
        }
        let (pt, _) = linalg::solve(&m, &rhs).expect("invertible");
        if !points.contains(&pt) {
            points.push(pt);
        }
    }
    points.sort();
    let mut acc = Rational::zero();
    for pt in &points {
        acc += jk_at_point(r, eta, &integrand.polys, &factors, pt)?;
    }
    Ok(scale * acc)
}

fn jk_at_point(
    r: usize,
    eta: &[Rational],
    polys: &[Poly],
    factors: &[&LinearFactor],
    pt: &[Rational],
) -> Result<Rational> {
    let mut dens: Vec<(Vec<Rational>, u32)> = Vec::new();
    let mut num = LocalNumerator::default();
    let mut scale = Rational::from(1);
    for f in factors {
        let w = to_q(&f.weight);
        let v = dot(&w, pt) + &f.constant;
        if v.is_zero() {
            if f.exponent < 0 {
                let (g, d) = primitive(&w);
                scale = scale * g.powi(f.exponent)?;
                push_direction(&mut dens, d, (-f.exponent) as u32);
            } else {
                num.factors.push(NumFactor::Linear { coeffs: w, constant: v, power: f.exponent });
            }
        } else {
            num.factors.push(NumFactor::Linear { coeffs: w, constant: v, power: f.exponent });
        }
    }
    for p in polys {
        num.factors.push(NumFactor::Poly(p.shift(pt)));
    }
    // polynomial factors first: they are usually the sparsest
    num.factors.sort_by_key(|f| match f {
        NumFactor::Poly(_) => 0,
        NumFactor::Linear { power, .. } if *power > 0 => 1,
        _ => 2,
    });
    Ok(scale * local_jk(r, eta, &num, &dens)?)
}
