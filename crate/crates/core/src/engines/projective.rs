use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};

fn x_poly(p: &Poly) -> Result<Poly> {
    p.with_vars(&["x"])
}

/// `⟨P⟩_d = coeff_{x^{n(d+1)-1}} P` on `P^{n-1}`.
pub fn projective_correlator(n: usize, p: &Poly, cutoff: u32) -> Result<QSeries> {
    ci_correlator(n, &[], p, cutoff)
}

/// `coeff_{x^{n(d+1)-1}} P ∏_i (l_i x)^{l_i d + 1}` for a complete intersection.
pub fn ci_correlator(n: usize, degrees: &[i64], p: &Poly, cutoff: u32) -> Result<QSeries> {
    if n == 0 || degrees.iter().any(|&l| l <= 0) {
        return Err(Error::InvalidModel("need n > 0 and positive degrees".into()));
    }
    let p = x_poly(p)?;
    let mut out = QSeries::zero(&["q"], vec![cutoff]);
    for d in 0..=cutoff as i64 {
        let target = (n as i64 * (d + 1) - 1) as u32;
        let mut factor = Rational::one();
        let mut shift = 0i64;
        for &l in degrees {
            let e = l * d + 1;
            factor = factor * Rational::from(l).powi(e)?;
            shift += e;
        }
        let k = target as i64 - shift;
        if k >= 0 {
            out.add_coeff(vec![d as u32], factor * p.coefficient(&[k as u32]));
        }
    }
    Ok(out)
}

/// `coeff_{x^{n(d+1)-1}} P ∏_i (-l_i x)^{l_i d - 1}` for `⊕ O(-l_i)`.
pub fn concave_correlator(n: usize, degrees: &[i64], p: &Poly, cutoff: u32) -> Result<QSeries> {
    if n == 0 || degrees.iter().any(|&l| l <= 0) {
        return Err(Error::InvalidModel("need n > 0 and positive degrees".into()));
    }
    let p = x_poly(p)?;
    let mut out = QSeries::zero(&["q"], vec![cutoff]);
    for d in 0..=cutoff as i64 {
        let target = n as i64 * (d + 1) - 1;
        let mut factor = Rational::one();
        let mut shift = 0i64;
        for &l in degrees {
            let e = l * d - 1;
            factor = factor * Rational::from(-l).powi(e)?;
            shift += e;
        }
        let k = target - shift;
        if k >= 0 {
            out.add_coeff(vec![d as u32], factor * p.coefficient(&[k as u32]));
        }
    }
    Ok(out)
}
