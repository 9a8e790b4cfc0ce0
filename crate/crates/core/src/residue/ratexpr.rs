//! Rational expressions whose denominators are products of affine forms, and
//! the univariate / iterated residue operators on them.
//!
//! The class is closed under taking a residue in one variable: the remaining
//! factors are re-expanded around the pole, which keeps them affine.

use std::fmt;

use crate::algebra::poly::MultiPoly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::unipoly::UniPoly;
use crate::algebra::linalg;
use crate::error::{Error, Result};

/// `Σ coeffs[k]·x_k + constant`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineForm<F: Field = Rational> {
    pub coeffs: Vec<F>,
    pub constant: F,
}

impl<F: Field> AffineForm<F> {
    pub fn new(coeffs: Vec<F>, constant: F) -> Self {
        AffineForm { coeffs, constant }
    }

    /// `x_k - value` over `n` variables.
    pub fn var_minus(n: usize, k: usize, value: &F) -> Self {
        let mut coeffs = vec![F::zero(); n];
        coeffs[k] = F::one();
        AffineForm { coeffs, constant: -value.clone() }
    }

    pub fn from_ints(coeffs: &[i64], constant: F) -> Self {
        AffineForm { coeffs: coeffs.iter().map(|&c| F::from_i64(c)).collect(), constant }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc += c.mul_ref(x);
            }
        }
        acc
    }

    pub fn scale(&self, s: &F) -> Self {
        AffineForm {
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(s)).collect(),
            constant: self.constant.mul_ref(s),
        }
    }

    pub fn to_poly(&self, vars: &[String]) -> MultiPoly<F> {
        MultiPoly::linear(vars, &self.coeffs, self.constant.clone())
    }

    /// Splits off the scalar making the first nonzero variable coefficient 1.
    fn normalized(&self) -> Option<(F, Self)> {
        let lead = self.coeffs.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.inv().expect("nonzero");
        Some((lead, self.scale(&inv)))
    }

    /// Substitutes `x_k = value`, leaving slot `k` with a zero coefficient.
    fn substitute(&self, k: usize, value: &F) -> Self {
        let mut out = self.clone();
        out.constant += self.coeffs[k].mul_ref(value);
        out.coeffs[k] = F::zero();
        out
    }

    fn fmt_with(&self, vars: &[String]) -> String {
        self.to_poly(vars).to_string()
    }
}

/// `numerator / ∏ factor^power`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatTerm<F: Field = Rational> {
    pub numerator: MultiPoly<F>,
    pub factors: Vec<(AffineForm<F>, u32)>,
}

/// A finite sum of [`RatTerm`]s over a fixed list of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct RatExpr<F: Field = Rational> {
    vars: Vec<String>,
    terms: Vec<RatTerm<F>>,
}

impl<F: Field> RatExpr<F> {
    pub fn new(vars: &[impl AsRef<str>], numerator: MultiPoly<F>, factors: Vec<(AffineForm<F>, u32)>) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let numerator = numerator.with_vars(&vars)?;
        for (f, _) in &factors {
            if f.coeffs.len() != vars.len() {
                return Err(Error::Variables("affine form length mismatch".into()));
            }
        }
        let mut e = RatExpr { vars, terms: Vec::new() };
        e.push_term(RatTerm { numerator, factors })?;
        Ok(e)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &[RatTerm<F>] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::Variables("expressions over different variables".into()));
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push_term(t.clone())?;
        }
        Ok(out)
    }

    /// Canonicalizes the factor list (constant factors folded in, forms
    /// normalized, equal forms merged) and merges with an existing term when
    /// the factor lists agree.
    fn push_term(&mut self, term: RatTerm<F>) -> Result<()> {
        let mut scale = F::one();
        let mut merged: Vec<(AffineForm<F>, u32)> = Vec::new();
        for (f, k) in term.factors {
            if k == 0 {
                continue;
            }
            match f.normalized() {
                None => {
                    let c = f.constant.powi(k as i64).expect("nonnegative power");
                    scale = scale.mul_ref(&c.inv().ok_or_else(|| {
                        Error::NonGeneric("a denominator factor vanishes identically".into())
                    })?);
                }
                Some((lead, nf)) => {
                    scale = scale.mul_ref(&lead.powi(-(k as i64))?);
                    match merged.iter_mut().find(|(g, _)| *g == nf) {
                        Some(slot) => slot.1 += k,
                        None => merged.push((nf, k)),
                    }
                }
            }
        }
        let numerator = term.numerator.scale(&scale);
        if numerator.is_zero() {
            return Ok(());
        }
        let vars = self.vars.clone();
        merged.sort_by_cached_key(|(f, k)| (f.fmt_with(&vars), *k));
        if let Some(existing) = self.terms.iter_mut().find(|t| t.factors == merged) {
            existing.numerator = existing.numerator.add_poly(&numerator);
            self.terms.retain(|t| !t.numerator.is_zero());
        } else {
            self.terms.push(RatTerm { numerator, factors: merged });
        }
        Ok(())
    }

    /// Residue in variable `k` at `x_k = pole`. The result no longer depends on `x_k`.
    pub fn residue_at(&self, k: usize, pole: &F) -> Result<Self> {
        let mut out = RatExpr { vars: self.vars.clone(), terms: Vec::new() };
        for term in &self.terms {
            let mut pole_order = 0u32;
            let mut pole_scale = F::one();
            let mut regular: Vec<(F, AffineForm<F>, u32)> = Vec::new();
            let mut independent: Vec<(AffineForm<F>, u32)> = Vec::new();
            for (f, p) in &term.factors {
                let a = &f.coeffs[k];
                if a.is_zero() {
                    independent.push((f.clone(), *p));
                    continue;
                }
                let m = f.substitute(k, pole);
                if m.is_constant() && m.constant.is_zero() {
                    pole_order += p;
                    pole_scale = pole_scale.mul_ref(&a.powi(-(*p as i64))?);
                } else {
                    regular.push((a.clone(), m, *p));
                }
            }
            if pole_order == 0 {
                continue;
            }
            let target = pole_order - 1;
            let taylor = taylor_in(&term.numerator, k, pole, target);
            let mut picks = vec![0u32; regular.len()];
            distribute(target, &mut picks, 0, &mut |picks, rest| {
                let numer = match taylor.get(rest as usize) {
                    Some(n) if !n.is_zero() => n,
                    _ => return Ok(()),
                };
                let mut coef = pole_scale.clone();
                let mut factors = independent.clone();
                for ((a, m, p), &mj) in regular.iter().zip(picks.iter()) {
                    if mj > 0 {
                        coef = coef
                            .mul_ref(&Rational::binomial(-(*p as i64), mj as u64).to_field::<F>())
                            .mul_ref(&a.powi(mj as i64)?);
                    }
                    factors.push((m.clone(), p + mj));
                }
                out.push_term(RatTerm { numerator: numer.scale(&coef), factors })
            })?;
        }
        Ok(out)
    }

    /// The value of an expression with no remaining variable dependence.
    pub fn as_scalar(&self) -> Result<F> {
        let mut acc = F::zero();
        for t in &self.terms {
            if !t.factors.is_empty() {
                return Err(Error::Internal("expression still has poles".into()));
            }
            acc += t
                .numerator
                .as_constant()
                .ok_or_else(|| Error::Internal("expression still depends on variables".into()))?;
        }
        Ok(acc)
    }

    /// Applies `residue_at` for each `(variable, pole)` entry, last entry first.
    pub fn iterated_residue(&self, order: &[(usize, F)]) -> Result<F> {
        let mut cur = self.clone();
        for (k, p) in order.iter().rev() {
            cur = cur.residue_at(*k, p)?;
        }
        cur.as_scalar()
    }

    /// Local check that the denominators vanishing at `point` cross normally
    /// (independent normals), so that the iterated residue is well defined.
    pub fn check_generic_at(&self, point: &[F]) -> Result<()> {
        for t in &self.terms {
            let mut normals: Vec<Vec<F>> = Vec::new();
            for (f, _) in &t.factors {
                if f.eval(point).is_zero() && !normals.contains(&f.coeffs) {
                    normals.push(f.coeffs.clone());
                }
            }
            if linalg::rank(&normals) < normals.len() {
                return Err(Error::NonGeneric(format!(
                    "{} denominator hyperplanes meet at one pole",
                    normals.len()
                )));
            }
        }
        Ok(())
    }

    /// Sum of iterated residues over the given pole assignments.
    pub fn sum_residues(&self, poles: &[PoleAssignment<F>]) -> Result<F> {
        let n = self.vars.len();
        let mut points: Vec<Vec<F>> = Vec::with_capacity(poles.len());
        for pa in poles {
            if pa.entries.len() != n {
                return Err(Error::Variables("pole assignment must cover every variable".into()));
            }
            let mut pt = vec![F::zero(); n];
            for (k, p) in &pa.entries {
                pt[*k] = p.clone();
            }
            if points.contains(&pt) {
                return Err(Error::NonGeneric("coincident poles among distinct assignments".into()));
            }
            self.check_generic_at(&pt)?;
            points.push(pt);
        }
        let mut acc = F::zero();
        for pa in poles {
            acc += self.iterated_residue(&pa.entries)?;
        }
        Ok(acc)
    }
}

/// One pole per integration variable, listed in operator order (the last
/// entry is taken first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleAssignment<F: Field = Rational> {
    pub entries: Vec<(usize, F)>,
}

impl<F: Field> PoleAssignment<F> {
    pub fn new(entries: Vec<(usize, F)>) -> Self {
        PoleAssignment { entries }
    }

    /// Assignment `x_k = point[k]` for every k, taken in the order x_n, …, x_1.
    pub fn at_point(point: &[F]) -> Self {
        PoleAssignment { entries: point.iter().cloned().enumerate().collect() }
    }
}

/// Taylor coefficients `N_m` with `N(x_k = pole + u) = Σ_m N_m u^m`, for `m <= max`.
fn taylor_in<F: Field>(n: &MultiPoly<F>, k: usize, pole: &F, max: u32) -> Vec<MultiPoly<F>> {
    let mut out = vec![MultiPoly::zero(n.vars()); max as usize + 1];
    for (e, c) in n.terms() {
        let ek = e[k];
        let mut rest = e.clone();
        rest[k] = 0;
        for m in 0..=ek.min(max) {
            let coef = c
                .mul_ref(&Rational::binomial(ek as i64, m as u64).to_field::<F>())
                .mul_ref(&pole.powi((ek - m) as i64).expect("nonnegative"));
            out[m as usize].add_term(rest.clone(), coef);
        }
    }
    out
}

/// Calls `f(picks, rest)` for every split of `total` into `picks` (one slot per
/// regular factor) plus a remainder `rest` for the numerator.
fn distribute(
    total: u32,
    picks: &mut Vec<u32>,
    slot: usize,
    f: &mut dyn FnMut(&[u32], u32) -> Result<()>,
) -> Result<()> {
    if slot == picks.len() {
        return f(picks, total);
    }
    for m in 0..=total {
        picks[slot] = m;
        distribute(total - m, picks, slot + 1, f)?;
    }
    picks[slot] = 0;
    Ok(())
}

impl<F: Field> fmt::Display for RatExpr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.numerator)?;
            for (g, k) in &t.factors {
                write!(f, "/({})^{}", g.fmt_with(&self.vars), k)?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for RatExpr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Residue of `num/den` (one variable) at `pole` by Laurent expansion:
/// `den(pole + u) = u^m·E(u)` with `E(0) != 0`.
pub fn univariate_residue<F: Field>(num: &UniPoly<F>, den: &UniPoly<F>, pole: &F) -> Result<F> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let shift = |p: &UniPoly<F>| -> Vec<F> {
        let d = p.degree().map_or(0, |d| d + 1);
        (0..d)
            .map(|m| {
                let mut acc = F::zero();
                for (e, c) in p.coeffs().iter().enumerate().skip(m) {
                    acc += c
                        .mul_ref(&Rational::binomial(e as i64, m as u64).to_field::<F>())
                        .mul_ref(&pole.powi((e - m) as i64).expect("nonnegative"));
                }
                acc
            })
            .collect()
    };
    let ds = shift(den);
    let order = ds.iter().position(|c| !c.is_zero()).expect("nonzero denominator");
    if order == 0 {
        return Ok(F::zero());
    }
    let ns = shift(num);
    let e: Vec<F> = ds[order..].to_vec();
    // coefficient of u^{order-1} in N(u)/E(u)
    let target = order - 1;
    let e0inv = e[0].inv().expect("nonzero");
    let mut inv = vec![e0inv.clone()];
    for m in 1..=target {
        let mut acc = F::zero();
        for j in 1..=m.min(e.len() - 1) {
            acc += e[j].mul_ref(&inv[m - j]);
        }
        inv.push(-(acc.mul_ref(&e0inv)));
    }
    let mut acc = F::zero();
    for (j, nj) in ns.iter().enumerate().take(target + 1) {
        acc += nj.mul_ref(&inv[target - j]);
    }
    Ok(acc)
}
