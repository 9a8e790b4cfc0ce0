//! `F[x_1..x_k] / (m_1(x_1), .., m_k(x_k))` with monic univariate moduli.

use crate::algebra::poly::MultiPoly;
use crate::algebra::scalar::Field;
use crate::algebra::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing<F: Field> {
    vars: Vec<String>,
    moduli: Vec<UniPoly<F>>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(vars: &[impl AsRef<str>], moduli: Vec<UniPoly<F>>) -> Result<Self> {
        if vars.len() != moduli.len() {
            return Err(Error::Variables("one modulus per variable".into()));
        }
        for m in &moduli {
            if m.degree().unwrap_or(0) == 0 || !m.leading().is_one() {
                return Err(Error::InvalidModel("moduli must be monic of positive degree".into()));
            }
        }
        Ok(QuotientRing { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), moduli })
    }

    /// `x_k^{n_k} = 0` in every variable.
    pub fn nilpotent(vars: &[impl AsRef<str>], ns: &[usize]) -> Result<Self> {
        let moduli = ns
            .iter()
            .map(|&n| {
                let mut c = vec![F::zero(); n + 1];
                c[n] = F::one();
                UniPoly::new(c)
            })
            .collect();
        Self::new(vars, moduli)
    }

    /// `∏_j (x_k - λ_j) = 0` in every variable.
    pub fn equivariant(vars: &[impl AsRef<str>], lambda: &[F]) -> Result<Self> {
        let m = UniPoly::from_roots(lambda);
        Self::new(vars, vec![m; vars.len()])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn modulus(&self, k: usize) -> &UniPoly<F> {
        &self.moduli[k]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.moduli.iter().map(|m| m.degree().unwrap_or(0)).collect()
    }

    fn is_nilpotent(&self) -> bool {
        self.moduli.iter().all(|m| m.coeffs()[..m.coeffs().len() - 1].iter().all(|c| c.is_zero()))
    }

    /// Residues `x^e mod m` for `e = 0..=max`.
    fn power_table(&self, k: usize, max: u32) -> Vec<UniPoly<F>> {
        let m = &self.moduli[k];
        let n = m.degree().unwrap_or(0);
        let x = UniPoly::new(vec![F::zero(), F::one()]);
        let mut out = vec![UniPoly::one()];
        for e in 1..=max as usize {
            let next = out[e - 1].mul(&x);
            let next = if next.degree().unwrap_or(0) >= n { next.div_rem(m).expect("monic").1 } else { next };
            out.push(next);
        }
        out
    }

    pub fn reduce(&self, p: &MultiPoly<F>) -> Result<MultiPoly<F>> {
        let p = p.with_vars(&self.vars)?;
        if self.is_nilpotent() {
            let bound: Vec<u32> = self.dims().iter().map(|&n| n as u32 - 1).collect();
            return Ok(p.truncate_box(&bound));
        }
        let mut out = p;
        for k in 0..self.vars.len() {
            let n = self.moduli[k].degree().unwrap_or(0) as u32;
            if out.degree_in(k).is_none_or(|d| d < n) {
                continue;
            }
            let table = self.power_table(k, out.degree_in(k).unwrap_or(0));
            let mut next = MultiPoly::zero(&self.vars);
            for (e, c) in out.terms() {
                if e[k] < n {
                    next.add_term(e.clone(), c.clone());
                    continue;
                }
                for (j, a) in table[e[k] as usize].coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mut ne = e.clone();
                    ne[k] = j as u32;
                    next.add_term(ne, c.mul_ref(a));
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn mul(&self, a: &MultiPoly<F>, b: &MultiPoly<F>) -> Result<MultiPoly<F>> {
        if self.is_nilpotent() {
            let bound: Vec<u32> = self.dims().iter().map(|&n| n as u32 - 1).collect();
            return Ok(a.with_vars(&self.vars)?.mul_bounded(&b.with_vars(&self.vars)?, &bound));
        }
        self.reduce(&a.mul_poly(b))
    }

    /// Inverse of `x_k + c`.
    pub fn inverse_linear(&self, k: usize, c: &F) -> Result<MultiPoly<F>> {
        // m(x) - m(-c) = (x + c) g(x), so (x + c)^{-1} = -g(x) / m(-c)
        let m = &self.moduli[k];
        let mc = m.eval(&-c.clone());
        if mc.is_zero() {
            return Err(Error::NonInvertible);
        }
        let shifted = m.sub(&UniPoly::constant(mc.clone()));
        let (g, rem) = shifted.div_rem(&UniPoly::new(vec![c.clone(), F::one()]))?;
        debug_assert!(rem.is_zero());
        let scale = -mc.inv().expect("nonzero");
        let mut out = MultiPoly::zero(&self.vars);
        for (j, a) in g.coeffs().iter().enumerate() {
            let mut e = vec![0; self.vars.len()];
            e[k] = j as u32;
            out.add_term(e, a.mul_ref(&scale));
        }
        Ok(out)
    }

    /// `(x_k + c)^{-power}`.
    pub fn inverse_linear_power(&self, k: usize, c: &F, power: u32) -> Result<MultiPoly<F>> {
        let inv = self.inverse_linear(k, c)?;
        let mut out = MultiPoly::one(&self.vars);
        for _ in 0..power {
            out = self.mul(&out, &inv)?;
        }
        Ok(out)
    }

    /// Coefficient of `∏ x_k^{n_k - 1}` in the normal form.
    pub fn top_coefficient(&self, p: &MultiPoly<F>) -> Result<F> {
        let top: Vec<u32> = self.dims().iter().map(|&n| n as u32 - 1).collect();
        Ok(self.reduce(p)?.coefficient(&top))
    }
}
