//! Truncated power series in one or more bookkeeping variables.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::scalar::{Field, Rational};
use crate::error::{Error, Result};

/// Power series with a per-variable truncation order; every stored multi-degree
/// is componentwise `<= order`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries<F: Field = Rational> {
    vars: Vec<String>,
    order: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> QSeries<F> {
    pub fn zero(vars: &[impl AsRef<str>], order: Vec<u32>) -> Self {
        assert_eq!(vars.len(), order.len(), "one order per series variable");
        QSeries {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], order: Vec<u32>, c: F) -> Self {
        let mut s = Self::zero(vars, order);
        let n = s.vars.len();
        s.add_coeff(vec![0; n], c);
        s
    }

    pub fn one(vars: &[impl AsRef<str>], order: Vec<u32>) -> Self {
        Self::constant(vars, order, F::one())
    }

    /// Univariate series `Σ coeffs[k] q^k` truncated at `order`.
    pub fn univariate(var: &str, order: u32, coeffs: &[F]) -> Self {
        let mut s = Self::zero(&[var], vec![order]);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_coeff(vec![k as u32], c.clone());
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn in_range(&self, d: &[u32]) -> bool {
        d.iter().zip(&self.order).all(|(a, b)| a <= b)
    }

    /// Adds `c·q^d`; degrees beyond the truncation order are dropped.
    pub fn add_coeff(&mut self, d: Vec<u32>, c: F) {
        if c.is_zero() || !self.in_range(&d) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, d: &[u32]) -> F {
        self.coeffs.get(d).cloned().unwrap_or_else(F::zero)
    }

    /// Dense coefficient list of a univariate series, `0..=order`.
    pub fn to_vec(&self) -> Vec<F> {
        assert_eq!(self.vars.len(), 1, "univariate series expected");
        (0..=self.order[0]).map(|k| self.coefficient(&[k])).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<Vec<u32>> {
        if self.vars != other.vars {
            return Err(Error::Variables(format!(
                "series variables {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(self.order.iter().zip(&other.order).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn truncate(&self, order: Vec<u32>) -> Self {
        let mut s = Self::zero(&self.vars, order);
        for (d, c) in &self.coeffs {
            s.add_coeff(d.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let order = self.check_compatible(other)?;
        let mut s = self.truncate(order);
        for (d, c) in &other.coeffs {
            s.add_coeff(d.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut s = Self::zero(&self.vars, self.order.clone());
        for (d, v) in &self.coeffs {
            s.add_coeff(d.clone(), v.mul_ref(c));
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.check_compatible(other)?;
        let mut s = Self::zero(&self.vars, order);
        for (da, ca) in &self.coeffs {
            if !s.in_range(da) {
                continue;
            }
            for (db, cb) in &other.coeffs {
                let d: Vec<u32> = da.iter().zip(db).map(|(a, b)| a + b).collect();
                if s.in_range(&d) {
                    s.add_coeff(d, ca.mul_ref(cb));
                }
            }
        }
        Ok(s)
    }

    /// Multiplicative inverse up to the truncation order.
    pub fn invert(&self) -> Result<Self> {
        let n = self.vars.len();
        let c0 = self.coefficient(&vec![0; n]);
        let c0inv = c0.inv().ok_or(Error::NotUnit)?;
        if n == 1 {
            let a = self.to_vec();
            let mut b: Vec<F> = Vec::with_capacity(a.len());
            b.push(c0inv.clone());
            for m in 1..a.len() {
                let mut acc = F::zero();
                for k in 1..=m {
                    if !a[k].is_zero() {
                        acc += a[k].mul_ref(&b[m - k]);
                    }
                }
                b.push(-(acc.mul_ref(&c0inv)));
            }
            return Ok(Self::univariate(&self.vars[0], self.order[0], &b));
        }
        // f = c0·(1 - g) with g having zero constant term
        let one = Self::one(&self.vars, self.order.clone());
        let g = one.sub(&self.scale(&c0inv))?;
        let steps: u32 = self.order.iter().sum();
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..steps {
            power = power.mul(&g)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0inv))
    }

    /// Evaluates the truncated sum at complex values of the series variables.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, c) in &self.coeffs {
            let mut t = c.to_complex();
            for (k, &e) in d.iter().enumerate() {
                t *= point[k].powi(e as i32);
            }
            acc += t;
        }
        acc
    }
}

impl<F: Field> fmt::Display for QSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in &self.coeffs {
            let (neg, mag) = c.term_parts();
            let mono: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { self.vars[k].clone() } else { format!("{}^{}", self.vars[k], e) })
                .collect();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        let big_o: Vec<String> = self
            .vars
            .iter()
            .zip(&self.order)
            .map(|(v, o)| format!("{}^{}", v, o + 1))
            .collect();
        write!(f, " + O({})", big_o.join(", "))
    }
}

impl<F: Field> fmt::Debug for QSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn geometric_inverse() {
        let f = QSeries::univariate("q", 3, &[q(1), q(-1)]);
        let inv = f.invert().unwrap();
        assert_eq!(inv.to_vec(), vec![q(1), q(1), q(1), q(1)]);
    }

    #[test]
    fn inverse_of_one_minus_3125q() {
        let f = QSeries::univariate("q", 2, &[q(1), q(-3125)]);
        let inv = f.invert().unwrap();
        assert_eq!(inv.to_vec(), vec![q(1), q(3125), q(3125 * 3125)]);
        assert_eq!(f.mul(&inv).unwrap(), QSeries::one(&["q"], vec![2]));
    }

    #[test]
    fn constant_inverse() {
        let f = QSeries::univariate("q", 0, &[q(2)]);
        assert_eq!(f.invert().unwrap().to_vec(), vec![Rational::new(1, 2)]);
        let z = QSeries::univariate("q", 2, &[q(0), q(1)]);
        assert_eq!(z.invert(), Err(Error::NotUnit));
    }

    #[test]
    fn multivariate_inverse_and_order() {
        let mut f = QSeries::one(&["q1", "q2"], vec![2, 3]);
        f.add_coeff(vec![1, 0], q(2));
        f.add_coeff(vec![0, 1], q(-1));
        f.add_coeff(vec![1, 1], Rational::new(1, 3));
        let inv = f.invert().unwrap();
        assert_eq!(f.mul(&inv).unwrap(), QSeries::one(&["q1", "q2"], vec![2, 3]));
        let g = QSeries::one(&["q1", "q2"], vec![1, 5]);
        assert_eq!(f.mul(&g).unwrap().order(), &[1, 3]);
    }
}
