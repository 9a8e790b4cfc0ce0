use itertools::Itertools;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Truncated power series in `r` variables, each of degree below `n`.
#[derive(Clone, Debug)]
struct BoxSeries {
    r: usize,
    n: usize,
    c: Vec<Complex64>,
}

impl BoxSeries {
    fn zero(r: usize, n: usize) -> Self {
        BoxSeries { r, n, c: vec![Complex64::new(0.0, 0.0); n.pow(r as u32)] }
    }

    fn constant(r: usize, n: usize, v: Complex64) -> Self {
        let mut s = Self::zero(r, n);
        s.c[0] = v;
        s
    }

    /// `c0 + Σ a_k y_k`
    fn linear(r: usize, n: usize, a: &[Complex64], c0: Complex64) -> Self {
        let mut s = Self::constant(r, n, c0);
        if n > 1 {
            for (k, v) in a.iter().enumerate() {
                s.c[n.pow(k as u32)] += v;
            }
        }
        s
    }

    fn exps(&self, idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.r];
        let mut i = idx;
        for slot in e.iter_mut() {
            *slot = i % self.n;
            i /= self.n;
        }
        e
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.r, self.n);
        let len = self.c.len();
        for i in 0..len {
            if self.c[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ei = self.exps(i);
            for j in 0..len {
                let ej = o.exps(j);
                if ei.iter().zip(&ej).any(|(a, b)| a + b >= self.n) {
                    continue;
                }
                out.c[i + j] += self.c[i] * o.c[j];
            }
        }
        out
    }

    fn scale(&self, v: Complex64) -> Self {
        BoxSeries { r: self.r, n: self.n, c: self.c.iter().map(|x| x * v).collect() }
    }

    fn add(&self, o: &Self) -> Self {
        BoxSeries { r: self.r, n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    fn nilpotent_part(&self) -> Self {
        let mut u = self.clone();
        u.c[0] = Complex64::new(0.0, 0.0);
        u
    }

    fn max_degree(&self) -> usize {
        self.r * (self.n - 1)
    }

    fn inv(&self) -> Self {
        let c0 = self.c[0];
        let u = self.nilpotent_part().scale(-1.0 / c0);
        let mut term = Self::constant(self.r, self.n, Complex64::new(1.0, 0.0));
        let mut acc = term.clone();
        for _ in 0..self.max_degree() {
            term = term.mul(&u);
            acc = acc.add(&term);
        }
        acc.scale(1.0 / c0)
    }

    fn powi(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::constant(self.r, self.n, Complex64::new(1.0, 0.0));
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    fn exp(&self) -> Self {
        let u = self.nilpotent_part();
        let mut term = Self::constant(self.r, self.n, Complex64::new(1.0, 0.0));
        let mut acc = term.clone();
        for k in 1..=self.max_degree() {
            term = term.mul(&u).scale(Complex64::new(1.0 / k as f64, 0.0));
            acc = acc.add(&term);
        }
        acc.scale(self.c[0].exp())
    }

    /// Coefficient of `∏ y_k^{n-1}`.
    fn top(&self) -> Complex64 {
        self.c[self.c.len() - 1]
    }

    /// `Σ |a_i| |b_j|` over the index pairs feeding the top coefficient of `a b`.
    fn top_magnitude(&self, o: &Self) -> f64 {
        let last = self.c.len() - 1;
        (0..=last).map(|i| self.c[i].norm() * o.c[last - i].norm()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloatStatus {
    Pass,
    Fail,
    /// Truncation tail and rounding bound exceed the requested tolerance.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FloatReport {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub difference: f64,
    /// `Σ_{k > D} |Σ_{|d_1| + |d_2| = k} ..|`: the part of the truncated product
    /// beyond degree `D`.
    pub tail: f64,
    /// A priori bound on the rounding error of the right side.
    pub rounding: f64,
    pub status: FloatStatus,
}

const ROUNDING: f64 = 1e-13;

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn degree_vectors(r: usize, max: u32) -> Vec<Vec<i64>> {
    (0..r)
        .map(|_| 0..=max as i64)
        .multi_cartesian_product()
        .filter(|v| v.iter().sum::<i64>() <= max as i64)
        .collect()
}

fn factorial(r: usize) -> f64 {
    (1..=r).map(|k| k as f64).product()
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `x_i - x_j + c` in local coordinates `x = base + y`.
fn root_form(r: usize, n: usize, i: usize, j: usize, c: Complex64) -> BoxSeries {
    let mut a = vec![real(0.0); r];
    a[i] = real(1.0);
    a[j] = real(-1.0);
    BoxSeries::linear(r, n, &a, c)
}

/// `Σ_{|d| ≤ D} e^{|d| τ} ⟨e^{(t-τ) σ_1 / z}⟩^{G_m}_d`, summing local residues at
/// `x_i = a_i z`.
fn lhs(r: usize, n: usize, t: Complex64, tau: Complex64, z: Complex64, cutoff: u32) -> Complex64 {
    let mut total = real(0.0);
    for d in degree_vectors(r, cutoff) {
        let dd: i64 = d.iter().sum();
        let mut acc = real(0.0);
        for a in d.iter().map(|&di| 0..=di).multi_cartesian_product() {
            let base: Vec<Complex64> = a.iter().map(|&ai| z * ai as f64).collect();
            let sum_base: Complex64 = base.iter().sum();
            let mut f = BoxSeries::linear(r, n, &vec![(t - tau) / z; r], (t - tau) * sum_base / z).exp();
            for i in 0..r {
                for j in i + 1..r {
                    let g = (base[i] - base[j]) * 1.0;
                    let shift = z * (d[i] - d[j]) as f64;
                    f = f
                        .mul(&root_form(r, n, i, j, g))
                        .mul(&root_form(r, n, i, j, g - shift))
                        .scale(real(sign(d[i] - d[j] + 1)));
                }
            }
            for i in 0..r {
                for l in 0..=d[i] {
                    if l == a[i] {
                        continue;
                    }
                    let mut coeffs = vec![real(0.0); r];
                    coeffs[i] = real(1.0);
                    f = f.mul(&BoxSeries::linear(r, n, &coeffs, z * (a[i] - l) as f64).powi(-(n as i64)));
                }
            }
            acc += f.top();
        }
        total += (tau * dd as f64).exp() * acc / factorial(r);
    }
    total
}

/// `e^{t σ_1 / z}` and the degree-`d` summand of `Δ · I(t; z)`.
fn i_term(r: usize, n: usize, t: Complex64, z: Complex64, d: &[i64]) -> BoxSeries {
    let dd: i64 = d.iter().sum();
    let q = (t * dd as f64).exp() * sign((r as i64 - 1) * dd);
    let mut f = BoxSeries::constant(r, n, q);
    for i in 0..r {
        for j in i + 1..r {
            f = f.mul(&root_form(r, n, i, j, z * (d[i] - d[j]) as f64));
        }
    }
    for i in 0..r {
        let mut coeffs = vec![real(0.0); r];
        coeffs[i] = real(1.0);
        for l in 1..=d[i] {
            f = f.mul(&BoxSeries::linear(r, n, &coeffs, z * l as f64).powi(-(n as i64)));
        }
    }
    f
}

/// Compares `Σ_{|d| ≤ D} e^{|d| τ} ⟨e^{(t-τ) σ_1/z}⟩_d` with
/// `∫ I^{≤D}(t; z) ∪ I^{≤D}(τ; -z)` for `P^{n-1}` (`r = 1`) or `Gr(r,n)`.
/// The status is inconclusive when the truncation tail plus the rounding bound
/// exceeds `tolerance`.
pub fn factorization_check_float(
    r: usize,
    n: usize,
    t: Complex64,
    tau: Complex64,
    z: Complex64,
    cutoff: u32,
    tolerance: f64,
) -> Result<FloatReport> {
    if r == 0 || r > n {
        return Err(Error::InvalidModel(format!("need 0 < r <= n, got r = {r}, n = {n}")));
    }
    if z.norm() == 0.0 {
        return Err(Error::InvalidModel("z must be nonzero".into()));
    }
    let left = lhs(r, n, t, tau, z, cutoff);
    let exp_t = BoxSeries::linear(r, n, &vec![t / z; r], real(0.0)).exp();
    let exp_tau = BoxSeries::linear(r, n, &vec![-tau / z; r], real(0.0)).exp();
    let norm = sign((r * (r - 1) / 2) as i64) / factorial(r);
    let degrees = degree_vectors(r, cutoff);
    let a: Vec<BoxSeries> = degrees.iter().map(|d| exp_t.mul(&i_term(r, n, t, z, d))).collect();
    let b: Vec<BoxSeries> = degrees.iter().map(|d| exp_tau.mul(&i_term(r, n, tau, -z, d))).collect();
    // summands grouped by total degree |d_1| + |d_2|
    let mut by_degree = vec![real(0.0); 2 * cutoff as usize + 1];
    let mut magnitude = 0.0;
    for (da, fa) in degrees.iter().zip(&a) {
        for (db, fb) in degrees.iter().zip(&b) {
            let k = da.iter().chain(db).sum::<i64>() as usize;
            by_degree[k] += fa.mul(fb).top() * norm;
            magnitude += fa.top_magnitude(fb) * norm.abs();
        }
    }
    let right: Complex64 = by_degree.iter().sum();
    let tail: f64 = by_degree[cutoff as usize + 1..].iter().map(|v| v.norm()).sum();
    let difference = (left - right).norm();
    let rounding = ROUNDING * (1.0 + left.norm()) + 64.0 * f64::EPSILON * magnitude;
    let status = if tail + rounding > tolerance {
        FloatStatus::Inconclusive
    } else if difference <= tail + rounding {
        FloatStatus::Pass
    } else {
        FloatStatus::Fail
    };
    Ok(FloatReport { lhs: [left.re, left.im], rhs: [right.re, right.im], difference, tail, rounding, status })
}
