//! A-twisted GLSM correlators from Jeffrey–Kirwan residues of one-loop factors.

mod model;

pub use model::{GlsmModel, Matter, Variant};

use rayon::prelude::*;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};
use crate::residue::{jk_total, Integrand, LinearFactor};

fn sign_factor(rank: usize, negative: bool) -> LinearFactor {
    LinearFactor { weight: vec![0; rank], constant: Rational::from(if negative { -1 } else { 1 }), exponent: 1 }
}

fn pair(a: &[i64], d: &[i64]) -> i64 {
    a.iter().zip(d).map(|(x, y)| x * y).sum()
}

/// Merges equal factors, folds constants, and sorts.
pub fn canonical(integrand: &Integrand) -> Integrand {
    let r = integrand.rank;
    let mut scale = Rational::one();
    let mut merged: Vec<LinearFactor> = Vec::new();
    for f in &integrand.linear {
        if f.weight.iter().all(|&c| c == 0) {
            scale = scale * f.constant.powi(f.exponent).unwrap_or_else(|_| Rational::zero());
            continue;
        }
        match merged.iter_mut().find(|g| g.weight == f.weight && g.constant == f.constant) {
            Some(g) => g.exponent += f.exponent,
            None => merged.push(f.clone()),
        }
    }
    merged.retain(|f| f.exponent != 0);
    merged.sort_by(|a, b| (&a.weight, &a.constant, a.exponent).cmp(&(&b.weight, &b.constant, b.exponent)));
    let mut linear = Vec::with_capacity(merged.len() + 1);
    if !scale.is_one() {
        linear.push(LinearFactor { weight: vec![0; r], constant: scale, exponent: 1 });
    }
    linear.extend(merged);
    Integrand { rank: r, polys: integrand.polys.clone(), linear }
}

/// `Z_d(x)`: root factors `(-1)^{α(d)+1} α(x)^2` and matter factors
/// `(ρ_i(x) + ν_i)^{r_i - ρ_i(d) - 1}` with the masses taken as zero.
pub fn z_factor(model: &GlsmModel, d: &[i64]) -> Result<Integrand> {
    let r = model.rank();
    check_degree(model, d)?;
    let mut linear = Vec::new();
    for a in model.roots() {
        linear.push(sign_factor(r, (pair(a, d) + 1) % 2 != 0));
        linear.push(LinearFactor { weight: a.clone(), constant: Rational::zero(), exponent: 2 });
    }
    for m in model.matter() {
        let e = m.r_charge - pair(&m.weight, d) - 1;
        linear.push(LinearFactor { weight: m.weight.clone(), constant: Rational::zero(), exponent: e });
    }
    Ok(Integrand { rank: r, polys: Vec::new(), linear })
}

/// `Z_d(x; z)` in finite form with explicit masses. Root factors are
/// `(-1)^{α(d)+1} α(x) α(x - d z)`; matter factors keep the window of
/// `(ρ_i(x) + ν_i - (l + r_i/2) z)` between `l = -1` and `l = ρ_i(d) - r_i`.
pub fn z_factor_equivariant(model: &GlsmModel, d: &[i64], masses: &[Rational], z: &Rational) -> Result<Integrand> {
    let r = model.rank();
    check_degree(model, d)?;
    if masses.len() != model.matter().len() {
        return Err(Error::InvalidModel("one mass per matter field".into()));
    }
    let mut linear = Vec::new();
    for a in model.roots() {
        let ad = pair(a, d);
        linear.push(sign_factor(r, (ad + 1) % 2 != 0));
        linear.push(LinearFactor { weight: a.clone(), constant: Rational::zero(), exponent: 1 });
        linear.push(LinearFactor { weight: a.clone(), constant: -(z * &Rational::from(ad)), exponent: 1 });
    }
    for (m, nu) in model.matter().iter().zip(masses) {
        let h = m.r_charge / 2;
        let top = pair(&m.weight, d) - m.r_charge;
        let (range, exponent) = if top >= 0 { (0..=top, -1) } else { (top + 1..=-1, 1) };
        for l in range {
            let c = nu - &(z * &Rational::from(l + h));
            linear.push(LinearFactor { weight: m.weight.clone(), constant: c, exponent });
        }
    }
    Ok(Integrand { rank: r, polys: Vec::new(), linear })
}

fn check_degree(model: &GlsmModel, d: &[i64]) -> Result<()> {
    if d.len() != model.rank() {
        return Err(Error::InvalidModel("degree has wrong length".into()));
    }
    Ok(())
}

/// The integrand of one degree for the chosen variant, with the insertion attached.
pub fn integrand(model: &GlsmModel, p: &Poly, d: &[i64], variant: Variant) -> Result<Integrand> {
    let p = p.with_vars(&model.vars())?;
    let mut f = match variant {
        Variant::Plain => z_factor(model, d)?,
        _ => {
            let masses = if variant.equivariant_h() {
                model.masses()?
            } else {
                vec![Rational::zero(); model.matter().len()]
            };
            let z = if variant.equivariant_gm() { model.param("z")? } else { Rational::zero() };
            z_factor_equivariant(model, d, &masses, &z)?
        }
    };
    f.polys.push(p);
    Ok(f)
}

/// `JK_η(Z_d P) / |W|` for a single degree.
pub fn correlator_degree(model: &GlsmModel, p: &Poly, d: &[i64], variant: Variant) -> Result<Rational> {
    let f = integrand(model, p, d, variant)?;
    let v = jk_total(&f, model.eta())?;
    Ok(v / Rational::from(model.weyl_order() as i64))
}

/// `(1/|W|) Σ_d q^{deg d} JK_η(Z_d P)` over the degree cone, truncated at `cutoff`
/// in every series variable.
pub fn correlator(model: &GlsmModel, p: &Poly, cutoff: u32, variant: Variant) -> Result<QSeries> {
    let p = p.with_vars(&model.vars())?;
    model.check_weyl_invariant(&p)?;
    let degrees = model.degrees(cutoff);
    let values: Vec<Result<(Vec<u32>, Rational)>> = degrees
        .par_iter()
        .map(|d| {
            let v = correlator_degree(model, &p, d, variant)?;
            let s = model.series_degree(d).iter().map(|&c| c as u32).collect();
            Ok((s, v))
        })
        .collect();
    let mut out = QSeries::zero(model.series_vars(), vec![cutoff; model.series_vars().len()]);
    for item in values {
        let (s, v) = item?;
        out.add_coeff(s, v);
    }
    Ok(out)
}
