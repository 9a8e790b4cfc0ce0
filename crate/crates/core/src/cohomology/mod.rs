//! Presented cohomology rings of projective spaces, their products and Grassmannians.

mod ring;
mod vi;

pub use ring::QuotientRing;
pub use vi::{eval_poly_complex, vi_oracle_float};

use itertools::Itertools;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// `P^{n-1}`
    Projective { n: usize },
    /// `P^{n_1-1} × .. × P^{n_k-1}`
    ProductProjective { ns: Vec<usize> },
    /// `Gr(r, n)` in Chern roots `x_1..x_r` of the dual tautological bundle.
    Grassmannian { r: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    Classical,
    Quantum,
    HEquivariant { lambda: Vec<Rational> },
    HGmEquivariant { lambda: Vec<Rational>, z: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingOracle {
    pub presentation: Presentation,
    pub flavor: Flavor,
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

impl RingOracle {
    pub fn new(presentation: Presentation, flavor: Flavor) -> Result<Self> {
        let o = RingOracle { presentation, flavor };
        if let Some(lambda) = o.lambda() {
            if lambda.len() != o.n_for_lambda()? {
                return Err(Error::InvalidModel("one λ per homogeneous coordinate".into()));
            }
        }
        Ok(o)
    }

    fn n_for_lambda(&self) -> Result<usize> {
        match &self.presentation {
            Presentation::Projective { n } | Presentation::Grassmannian { n, .. } => Ok(*n),
            Presentation::ProductProjective { ns } => match ns.iter().all_equal_value() {
                Ok(n) => Ok(*n),
                Err(_) => Err(Error::Unsupported("equivariant products need equal factors".into())),
            },
        }
    }

    pub fn lambda(&self) -> Option<&[Rational]> {
        match &self.flavor {
            Flavor::HEquivariant { lambda } | Flavor::HGmEquivariant { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn vars(&self) -> Vec<String> {
        match &self.presentation {
            Presentation::Projective { .. } => vec!["x".into()],
            Presentation::ProductProjective { ns } => names("x", ns.len()),
            Presentation::Grassmannian { r, .. } => names("x", *r),
        }
    }

    /// Series variables of the quantum flavor.
    pub fn quantum_vars(&self) -> Vec<String> {
        match &self.presentation {
            Presentation::Projective { .. } | Presentation::Grassmannian { .. } => vec!["q".into()],
            Presentation::ProductProjective { ns } => names("q", ns.len()),
        }
    }

    fn ns(&self) -> Vec<usize> {
        match &self.presentation {
            Presentation::Projective { n } => vec![*n],
            Presentation::ProductProjective { ns } => ns.clone(),
            Presentation::Grassmannian { r, n } => vec![*n; *r],
        }
    }

    /// Quotient ring of the torus-quotient presentation: `(P^{n-1})^r` for `Gr(r,n)`.
    pub fn abelian_ring(&self) -> Result<QuotientRing<Rational>> {
        let vars = self.vars();
        match self.lambda() {
            None => QuotientRing::nilpotent(&vars, &self.ns()),
            Some(l) => QuotientRing::equivariant(&vars, l),
        }
    }

    fn check_distinct_lambda(&self) -> Result<&[Rational]> {
        let l = self.lambda().ok_or_else(|| Error::Unsupported("oracle is not equivariant".into()))?;
        if !l.iter().all_unique() {
            return Err(Error::CoincidentLambda);
        }
        Ok(l)
    }
}

/// Normal form of `p`. The quantum flavor returns a polynomial in the ring
/// variables followed by the quantum parameters.
pub fn reduce(oracle: &RingOracle, p: &Poly) -> Result<Poly> {
    if let Presentation::Grassmannian { .. } = oracle.presentation {
        return Err(Error::Unsupported("Grassmannian rings are integrated through abelianization".into()));
    }
    match &oracle.flavor {
        Flavor::Quantum => {
            let ns = oracle.ns();
            let xv = oracle.vars();
            let mut all = xv.clone();
            all.extend(oracle.quantum_vars());
            let p = p.with_vars(&xv)?;
            let mut out = Poly::zero(&all);
            for (e, c) in p.terms() {
                let mut ne = vec![0; all.len()];
                for (k, &ek) in e.iter().enumerate() {
                    let n = ns[k] as u32;
                    ne[k] = ek % n;
                    ne[xv.len() + k] = ek / n;
                }
                out.add_term(ne, c.clone());
            }
            Ok(out)
        }
        _ => oracle.abelian_ring()?.reduce(p),
    }
}

pub fn is_symmetric(p: &Poly) -> bool {
    let r = p.nvars();
    (0..r.saturating_sub(1)).all(|i| {
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(i, i + 1);
        p.permute(&perm) == *p
    })
}

/// `∏_{i≠j} (x_i - x_j)` in the given variables.
pub fn root_product(vars: &[String]) -> Poly {
    let mut out = Poly::one(vars);
    let r = vars.len();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let mut c = vec![Rational::zero(); r];
                c[i] = Rational::one();
                c[j] = -Rational::one();
                out = out.mul_poly(&Poly::linear(vars, &c, Rational::zero()));
            }
        }
    }
    out
}

/// Non-equivariant integral by coefficient extraction.
pub fn integrate_classical(oracle: &RingOracle, p: &Poly) -> Result<Rational> {
    let vars = oracle.vars();
    let p = p.with_vars(&vars)?;
    let top: Vec<u32> = oracle.ns().iter().map(|&n| n as u32 - 1).collect();
    match &oracle.presentation {
        Presentation::Grassmannian { r, .. } => {
            if !is_symmetric(&p) {
                return Err(Error::NotWeylInvariant);
            }
            let v = root_product(&vars).mul_bounded(&p, &top).coefficient(&top);
            Ok(v / Rational::factorial(*r as u64))
        }
        _ => Ok(p.coefficient(&top)),
    }
}

/// Equivariant integral as a sum over torus-fixed points.
pub fn integrate_equivariant(oracle: &RingOracle, p: &Poly) -> Result<Rational> {
    let lambda = oracle.check_distinct_lambda()?;
    let vars = oracle.vars();
    let p = p.with_vars(&vars)?;
    let n = lambda.len();
    // 1 / ∏_{j≠i} (λ_i - λ_j)
    let euler_inv = |i: usize| -> Rational {
        let e: Rational = (0..n).filter(|&j| j != i).map(|j| &lambda[i] - &lambda[j]).product();
        e.inv().expect("distinct λ")
    };
    let mut acc = Rational::zero();
    match &oracle.presentation {
        Presentation::Projective { .. } => {
            for i in 0..n {
                acc += p.eval(&[lambda[i].clone()]) * euler_inv(i);
            }
        }
        Presentation::ProductProjective { ns } => {
            for pt in (0..ns.len()).map(|_| 0..n).multi_cartesian_product() {
                let vals: Vec<Rational> = pt.iter().map(|&i| lambda[i].clone()).collect();
                let w: Rational = pt.iter().map(|&i| euler_inv(i)).product();
                acc += p.eval(&vals) * w;
            }
        }
        Presentation::Grassmannian { r, .. } => {
            if !is_symmetric(&p) {
                return Err(Error::NotWeylInvariant);
            }
            // residue of P ∏_{i≠j}(x_i - x_j) / ∏_i ∏_j (x_i - λ_j) at x = λ_S
            for s in (0..n).combinations(*r) {
                let vals: Vec<Rational> = s.iter().map(|&i| lambda[i].clone()).collect();
                let mut w = Rational::one();
                for a in 0..*r {
                    for b in 0..*r {
                        if a != b {
                            w = w * (&vals[a] - &vals[b]);
                        }
                    }
                    w = w * euler_inv(s[a]);
                }
                acc += p.eval(&vals) * w;
            }
        }
    }
    Ok(acc)
}

/// Integral in the quotient ring: the top coefficient of the normal form.
/// For `Gr(r,n)` the root product is inserted and the result divided by `r!`.
pub fn integrate_in_ring(oracle: &RingOracle, p: &Poly) -> Result<Rational> {
    let ring = oracle.abelian_ring()?;
    match &oracle.presentation {
        Presentation::Grassmannian { r, .. } => {
            let p = p.with_vars(ring.vars())?;
            if !is_symmetric(&p) {
                return Err(Error::NotWeylInvariant);
            }
            let v = ring.top_coefficient(&ring.mul(&root_product(ring.vars()), &p)?)?;
            Ok(v / Rational::factorial(*r as u64))
        }
        _ => ring.top_coefficient(p),
    }
}

/// `∫ reduce_quantum(p)` as a series in the quantum parameters, truncated at `order`.
pub fn integrate_quantum(oracle: &RingOracle, p: &Poly, order: u32) -> Result<crate::algebra::QSeries> {
    let reduced = reduce(oracle, p)?;
    let nx = oracle.vars().len();
    let top: Vec<u32> = oracle.ns().iter().map(|&n| n as u32 - 1).collect();
    let qv = oracle.quantum_vars();
    let mut s = crate::algebra::QSeries::zero(&qv, vec![order; qv.len()]);
    for (e, c) in reduced.terms() {
        if e[..nx] == top[..] {
            s.add_coeff(e[nx..].to_vec(), c.clone());
        }
    }
    Ok(s)
}
