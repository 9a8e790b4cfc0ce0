//! Univariate rational functions in reduced form, and Padé reconstruction.

use std::fmt;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::algebra::unipoly::UniPoly;
use crate::error::{Error, Result};

/// `num/den` in one designated variable; gcd(num, den) = 1 and the denominator
/// is normalized to `den(0) = 1` when `den(0) != 0`, else monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction<F: Field = Rational> {
    var: String,
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(var: &str, num: UniPoly<F>, den: UniPoly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if num.is_zero() {
            (UniPoly::zero(), UniPoly::one())
        } else {
            let g = num.gcd(&den);
            let (n, _) = num.div_rem(&g)?;
            let (d, _) = den.div_rem(&g)?;
            (n, d)
        };
        let norm = if den.coeff(0).is_zero() { den.leading() } else { den.coeff(0) };
        let inv = norm.inv().ok_or(Error::DivisionByZero)?;
        Ok(RationalFunction { var: var.to_string(), num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn numerator(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly<F> {
        &self.den
    }

    /// Taylor expansion at 0 up to `order` (requires `den(0) != 0`).
    pub fn expand(&self, order: u32) -> Result<QSeries<F>> {
        let n = QSeries::univariate(&self.var, order, self.num.coeffs());
        let d = QSeries::univariate(&self.var, order, self.den.coeffs());
        n.mul(&d.invert()?)
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            return write!(f, "{}", self.num.fmt_in(&self.var));
        }
        write!(f, "({})/({})", self.num.fmt_in(&self.var), self.den.fmt_in(&self.var))
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeResult<F: Field = Rational> {
    pub function: RationalFunction<F>,
    /// False when the linear system had free parameters; the reduced
    /// (minimal-degree) representative is returned in that case.
    pub unique: bool,
}

/// Finds `p/q` with `deg p <= num_deg`, `deg q <= den_deg`, `q(0) = 1` matching
/// every known coefficient of `s`.
pub fn pade_reconstruct<F: Field>(s: &QSeries<F>, num_deg: usize, den_deg: usize) -> Result<PadeResult<F>> {
    if s.vars().len() != 1 {
        return Err(Error::Variables("Padé reconstruction needs a univariate series".into()));
    }
    let c = s.to_vec();
    let known = c.len();
    if known < num_deg + den_deg + 1 {
        return Err(Error::InsufficientTerms { needed: num_deg + den_deg + 1, got: known });
    }
    // unknowns: p_0..p_m, then q_1..q_k
    let nunk = num_deg + 1 + den_deg;
    let mut a: Matrix<F> = Vec::with_capacity(known);
    let mut b = Vec::with_capacity(known);
    for j in 0..known {
        let mut row = vec![F::zero(); nunk];
        if j <= num_deg {
            row[j] = -F::one();
        }
        for i in 1..=den_deg.min(j) {
            row[num_deg + i] = c[j - i].clone();
        }
        a.push(row);
        b.push(-c[j].clone());
    }
    let (x, nullity) = linalg::solve(&a, &b).ok_or(Error::NotRational)?;
    let p = UniPoly::new(x[..=num_deg].to_vec());
    let mut qc = vec![F::one()];
    qc.extend(x[num_deg + 1..].iter().cloned());
    let q = UniPoly::new(qc);
    let function = RationalFunction::new(&s.vars()[0], p, q)?;
    Ok(PadeResult { function, unique: nullity == 0 })
}
