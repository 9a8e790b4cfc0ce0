//! Vafa–Intriligator root sums in complex doubles.

use itertools::Itertools;
use num_complex::Complex64;

use crate::algebra::poly::MultiPoly;
use crate::algebra::scalar::Field;

pub fn eval_poly_complex<F: Field>(p: &MultiPoly<F>, point: &[Complex64]) -> Complex64 {
    p.terms()
        .iter()
        .map(|(e, c)| {
            e.iter()
                .zip(point)
                .fold(c.to_complex(), |acc, (&k, x)| acc * x.powu(k))
        })
        .sum()
}

/// `(1/(r! n^r)) Σ ∏_{i≠j}(x_i - x_j) P(x) / ∏ x_i^{n-1}` over r-tuples of roots of
/// `x^n = (-1)^{r-1} q`.
pub fn vi_oracle_float<F: Field>(r: usize, n: usize, q: Complex64, p: &MultiPoly<F>) -> Complex64 {
    assert_eq!(p.nvars(), r, "insertion must be in r variables");
    let c = if r % 2 == 1 { q } else { -q };
    let base = c.powf(1.0 / n as f64);
    let roots: Vec<Complex64> = (0..n)
        .map(|k| base * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for tuple in (0..r).map(|_| 0..n).multi_cartesian_product() {
        if !tuple.iter().all_unique() {
            continue;
        }
        let x: Vec<Complex64> = tuple.iter().map(|&i| roots[i]).collect();
        let mut v = eval_poly_complex(p, &x);
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    v *= x[i] - x[j];
                }
            }
            v /= x[i].powu(n as u32 - 1);
        }
        acc += v;
    }
    let norm: f64 = (1..=r).product::<usize>() as f64 * (n as f64).powi(r as i32);
    acc / norm
}
