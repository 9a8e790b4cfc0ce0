use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};
use crate::glsm::{GlsmModel, Matter};
use crate::residue::{jk_residue, Arrangement};

use super::{gauge_vars, linear_form, nonneg, pair};

/// A toric variety `C^m // (C^*)^r` with charges `u_i`, optionally cut by the
/// zero locus of `⊕ O(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSpec {
    pub charges: Vec<Vec<i64>>,
    pub bundle: Vec<Vec<i64>>,
    pub eta: Vec<Rational>,
    /// Multiply the insertion by `∏ b_j(x)`.
    pub euler_insertion: bool,
    pub degree_cone: Vec<Vec<i64>>,
}

impl ToricSpec {
    pub fn new(charges: Vec<Vec<i64>>, eta: Vec<Rational>) -> Result<Self> {
        let r = eta.len();
        let degree_cone = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        let t = ToricSpec { charges, bundle: Vec::new(), eta, euler_insertion: false, degree_cone };
        t.validate()?;
        Ok(t)
    }

    /// `P^{n_1-1} × .. × P^{n_k-1}`.
    pub fn product_of_projective(ns: &[usize]) -> Result<Self> {
        let r = ns.len();
        let mut charges = Vec::new();
        for (k, &n) in ns.iter().enumerate() {
            for _ in 0..n {
                charges.push((0..r).map(|j| i64::from(j == k)).collect());
            }
        }
        let eta = (0..r).map(|k| Rational::from(k as i64 + 1)).collect();
        ToricSpec::new(charges, eta)
    }

    pub fn projective_space(n: usize) -> Result<Self> {
        ToricSpec::product_of_projective(&[n])
    }

    /// Hirzebruch surface `F_a`.
    pub fn hirzebruch(a: i64) -> Result<Self> {
        ToricSpec::new(
            vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![-a, 1]],
            vec![Rational::from(2), Rational::from(1)],
        )
    }

    pub fn with_bundle(mut self, bundle: Vec<Vec<i64>>, euler_insertion: bool) -> Result<Self> {
        self.bundle = bundle;
        self.euler_insertion = euler_insertion;
        self.validate()?;
        Ok(self)
    }

    pub fn with_degree_cone(mut self, rays: Vec<Vec<i64>>) -> Result<Self> {
        self.degree_cone = rays;
        self.glsm_model()?;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.eta.len()
    }

    pub fn u_vars(&self) -> Vec<String> {
        (1..=self.charges.len()).map(|i| format!("u{i}")).collect()
    }

    pub(super) fn validate(&self) -> Result<()> {
        let r = self.rank();
        if r == 0 || self.charges.is_empty() {
            return Err(Error::InvalidModel("toric data needs charges and an FI vector".into()));
        }
        if self.charges.iter().chain(&self.bundle).any(|w| w.len() != r) {
            return Err(Error::InvalidModel("charge vectors must have length r".into()));
        }
        let weights = self.charges.iter().map(|u| (u.clone(), 1)).collect();
        Arrangement::new(r, weights, self.eta.clone())?;
        Ok(())
    }

    /// Insertion in the `u` variables, or already in gauge variables, rewritten
    /// through `u_i = ⟨u_i, x⟩`.
    pub fn to_gauge(&self, p: &Poly) -> Result<Poly> {
        let x = gauge_vars(self.rank());
        match p.with_vars(&self.u_vars()) {
            Ok(pu) => {
                let images: Vec<Poly> = self.charges.iter().map(|u| linear_form(&x, u, &Rational::zero())).collect();
                Ok(pu.compose(&images, &x))
            }
            Err(_) => p.with_vars(&x),
        }
    }

    pub(super) fn mp_class(&self, d: &[i64]) -> Result<Poly> {
        let x = gauge_vars(self.rank());
        let zero = Rational::zero();
        let mut out = Poly::one(&x);
        for b in &self.bundle {
            out = out.mul_poly(&linear_form(&x, b, &zero).pow(nonneg(pair(b, d))?));
        }
        for u in &self.charges {
            let e = pair(u, d);
            if e < 0 {
                out = out.mul_poly(&linear_form(&x, u, &zero).pow((-e - 1) as u32));
            }
        }
        Ok(out)
    }

    pub(super) fn glsm_model(&self) -> Result<GlsmModel> {
        let mut matter: Vec<Matter> = self.charges.iter().map(|u| Matter::new(u.clone(), 0)).collect();
        matter.extend(self.bundle.iter().map(|b| Matter::new(b.iter().map(|c| -c).collect(), 2)));
        GlsmModel::new(self.rank(), matter, vec![], self.eta.clone())?.with_degree_cone(self.degree_cone.clone())
    }
}

/// `Σ_d q^d JK_η(P ∏ b_j^{⟨b_j,d⟩} / ∏ u_i^{⟨u_i,d⟩+1})`, with `∏ b_j` inserted
/// when `euler_insertion` is set.
pub fn toric_correlator(spec: &ToricSpec, p: &Poly, cutoff: u32) -> Result<QSeries> {
    spec.validate()?;
    let r = spec.rank();
    let x = gauge_vars(r);
    let p = spec.to_gauge(p)?;
    let model = spec.glsm_model()?;
    let zero = Rational::zero();
    let mut out = QSeries::zero(model.series_vars(), vec![cutoff; r]);
    for d in model.degrees(cutoff) {
        let mut num = p.clone();
        let mut dens: Vec<(Vec<i64>, u32)> = Vec::new();
        let extra = i64::from(spec.euler_insertion);
        let mut push = |w: &Vec<i64>, e: i64, num: &mut Poly| {
            if e >= 0 {
                *num = num.mul_poly(&linear_form(&x, w, &zero).pow(e as u32));
            } else {
                dens.push((w.clone(), (-e) as u32));
            }
        };
        for b in &spec.bundle {
            push(b, pair(b, &d) + extra, &mut num);
        }
        for u in &spec.charges {
            push(u, -pair(u, &d) - 1, &mut num);
        }
        if dens.is_empty() {
            continue;
        }
        let arr = Arrangement::new(r, dens.clone(), spec.eta.clone())?;
        let v = jk_residue(&arr, &num, &dens)?;
        out.add_coeff(d.iter().map(|&c| c as u32).collect(), v);
    }
    Ok(out)
}
