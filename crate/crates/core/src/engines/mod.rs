//! Correlators for the concrete target geometries, each with its GLSM model and
//! the sign dictionary relating the engine's `q` to the model's `e^{t'}`.

mod grassmannian;
mod projective;
mod toric;

pub use grassmannian::{grassmannian_ab_correlator, grassmannian_ci_correlator, tstar_gr_correlator};
pub use projective::{ci_correlator, concave_correlator, projective_correlator};
pub use toric::{toric_correlator, ToricSpec};

use std::collections::BTreeMap;

use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Field, Rational};
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};
use crate::glsm::{self, GlsmModel, Matter, Variant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    Projective { n: usize },
    /// Complete intersection of degrees `l` in `P^{n-1}`.
    ProjectiveCi { n: usize, degrees: Vec<i64>, calabi_yau: bool },
    /// `⊕ O(-l_i)` over `P^{n-1}`.
    Concave { n: usize, degrees: Vec<i64> },
    Toric(ToricSpec),
    Grassmannian { r: usize, n: usize },
    /// Zero locus in `Gr(r,n)` of a bundle with weights `bundle`.
    GrassmannianCi { r: usize, n: usize, bundle: Vec<Vec<i64>> },
    TstarGrassmannian { r: usize, n: usize, lambda: Vec<Rational>, mu: Rational },
}

/// Engine coefficient at series degree `s` is
/// `(-1)^{overall + Σ_k per_series_k s_k}` times the raw GLSM coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dictionary {
    pub overall: i64,
    pub per_series: Vec<i64>,
}

impl Dictionary {
    pub fn trivial(k: usize) -> Self {
        Dictionary { overall: 0, per_series: vec![0; k] }
    }

    pub fn sign(&self, s: &[u32]) -> Rational {
        let e: i64 = self.overall + self.per_series.iter().zip(s).map(|(a, &b)| a * b as i64).sum::<i64>();
        Rational::from(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn apply(&self, raw: &QSeries) -> QSeries {
        let mut out = QSeries::zero(raw.vars(), raw.order().to_vec());
        for (s, c) in raw.coeffs() {
            out.add_coeff(s.clone(), self.sign(s) * c.clone());
        }
        out
    }

    /// e.g. `q = (-1)^5 e^{t'}, overall sign (-1)^1`
    pub fn describe(&self, vars: &[String]) -> String {
        let parts: Vec<String> = vars
            .iter()
            .zip(&self.per_series)
            .map(|(v, e)| {
                let t = if vars.len() == 1 { "t'".to_string() } else { format!("t'_{}", &v[1..]) };
                if e.rem_euclid(2) == 0 { format!("{v} = e^{{{t}}}") } else { format!("{v} = -e^{{{t}}}") }
            })
            .collect();
        let sign = if self.overall.rem_euclid(2) == 0 { "+1" } else { "-1" };
        format!("{}; overall sign {sign}", parts.join(", "))
    }
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    (0..r).map(|j| i64::from(i == j)).collect()
}

fn lambda_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("lambda{j}")).collect()
}

/// `c * name + constant` over the parameter names.
fn mass(terms: &[(&str, i64)]) -> Poly {
    let names: Vec<&str> = terms.iter().map(|(n, _)| *n).collect();
    let coeffs: Vec<Rational> = terms.iter().map(|(_, c)| Rational::from(*c)).collect();
    Poly::linear(&names, &coeffs, Rational::zero())
}

fn gauge_vars(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["x".into()]
    } else {
        (1..=r).map(|i| format!("x{i}")).collect()
    }
}

/// `⟨w, x⟩ + c` as a polynomial in the gauge variables.
pub(crate) fn linear_form(vars: &[String], w: &[i64], c: &Rational) -> Poly {
    let coeffs: Vec<Rational> = w.iter().map(|&a| Rational::from(a)).collect();
    Poly::linear(vars, &coeffs, c.clone())
}

fn pair(a: &[i64], d: &[i64]) -> i64 {
    a.iter().zip(d).map(|(x, y)| x * y).sum()
}

impl TargetSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetSpec::Projective { n } if *n == 0 => Err(Error::InvalidModel("n must be positive".into())),
            TargetSpec::ProjectiveCi { n, degrees, calabi_yau } => {
                if degrees.iter().any(|&l| l <= 0) {
                    return Err(Error::InvalidModel("complete-intersection degrees must be positive".into()));
                }
                if *calabi_yau && degrees.iter().sum::<i64>() != *n as i64 {
                    return Err(Error::InvalidModel(format!("Calabi-Yau condition fails: Σl = {} ≠ n = {n}", degrees.iter().sum::<i64>())));
                }
                Ok(())
            }
            TargetSpec::Concave { degrees, .. } if degrees.iter().any(|&l| l <= 0) => {
                Err(Error::InvalidModel("concave bundle degrees must be positive".into()))
            }
            TargetSpec::Toric(t) => t.validate(),
            TargetSpec::Grassmannian { r, n } | TargetSpec::GrassmannianCi { r, n, .. } | TargetSpec::TstarGrassmannian { r, n, .. }
                if *r == 0 || r > n =>
            {
                Err(Error::InvalidModel(format!("need 0 < r <= n, got r = {r}, n = {n}")))
            }
            TargetSpec::GrassmannianCi { r, bundle, .. } => {
                if bundle.iter().any(|w| w.len() != *r) {
                    return Err(Error::InvalidModel("bundle weights must have length r".into()));
                }
                let s: Vec<i64> = (0..*r).map(|k| bundle.iter().map(|w| w[k]).sum()).collect();
                if s.iter().any(|c| (c - s[0]).rem_euclid(2) != 0) {
                    return Err(Error::InvalidModel("bundle weight sum must have components of equal parity".into()));
                }
                Ok(())
            }
            TargetSpec::TstarGrassmannian { n, lambda, .. } if lambda.len() != *n => {
                Err(Error::InvalidModel("one λ per flavor".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            TargetSpec::Projective { .. } | TargetSpec::ProjectiveCi { .. } | TargetSpec::Concave { .. } => 1,
            TargetSpec::Toric(t) => t.rank(),
            TargetSpec::Grassmannian { r, .. } | TargetSpec::GrassmannianCi { r, .. } | TargetSpec::TstarGrassmannian { r, .. } => *r,
        }
    }

    /// Variables the insertion is written in.
    pub fn insertion_vars(&self) -> Vec<String> {
        match self {
            TargetSpec::Toric(t) => t.u_vars(),
            _ => gauge_vars(self.rank()),
        }
    }

    pub fn dictionary(&self) -> Dictionary {
        match self {
            TargetSpec::ProjectiveCi { degrees, .. } => {
                Dictionary { overall: degrees.len() as i64, per_series: vec![degrees.iter().sum()] }
            }
            TargetSpec::Toric(t) => {
                let r = t.rank();
                let sum: Vec<i64> = (0..r).map(|k| t.bundle.iter().map(|b| b[k]).sum()).collect();
                Dictionary { overall: t.bundle.len() as i64, per_series: sum }
            }
            TargetSpec::GrassmannianCi { bundle, .. } => Dictionary {
                overall: bundle.len() as i64,
                per_series: vec![bundle.iter().map(|w| w[0]).sum()],
            },
            _ => Dictionary::trivial(match self {
                TargetSpec::Toric(t) => t.rank(),
                _ => 1,
            }),
        }
    }

    /// The GLSM whose raw correlator this target specializes.
    pub fn glsm_model(&self) -> Result<GlsmModel> {
        self.validate()?;
        let one = Rational::one();
        let model = match self {
            TargetSpec::Projective { n } => GlsmModel::new(1, fundamentals(1, *n), vec![], vec![one])?,
            TargetSpec::ProjectiveCi { n, degrees, .. } => {
                let mut m = fundamentals(1, *n);
                m.extend(degrees.iter().map(|&l| Matter::new(vec![-l], 2)));
                GlsmModel::new(1, m, vec![], vec![one])?
            }
            TargetSpec::Concave { n, degrees } => {
                let mut m = fundamentals(1, *n);
                m.extend(degrees.iter().map(|&l| Matter::new(vec![-l], 0)));
                GlsmModel::new(1, m, vec![], vec![one])?
            }
            TargetSpec::Toric(t) => t.glsm_model()?,
            TargetSpec::Grassmannian { r, n } => GlsmModel::new(*r, fundamentals(*r, *n), gl_roots(*r), vec![one; *r])?,
            TargetSpec::GrassmannianCi { r, n, bundle } => {
                let mut m = fundamentals(*r, *n);
                m.extend(bundle.iter().map(|w| Matter::new(w.iter().map(|c| -c).collect(), 2)));
                GlsmModel::new(*r, m, gl_roots(*r), vec![one; *r])?
            }
            TargetSpec::TstarGrassmannian { r, n, lambda, mu } => {
                let r = *r;
                let mut m = fundamentals(r, *n);
                let names = lambda_names(*n);
                for name in &names {
                    for i in 0..r {
                        let w: Vec<i64> = unit(r, i).iter().map(|c| -c).collect();
                        m.push(Matter::new(w, 0).with_mass(mass(&[(name, 1), ("mu", -1)])));
                    }
                }
                for i in 0..r {
                    for j in 0..r {
                        let w: Vec<i64> = (0..r).map(|k| unit(r, i)[k] - unit(r, j)[k]).collect();
                        m.push(Matter::new(w, 2).with_mass(mass(&[("mu", 1)])));
                    }
                }
                let mut params: BTreeMap<String, Rational> =
                    names.into_iter().zip(lambda.iter().cloned()).collect();
                params.insert("mu".into(), mu.clone());
                GlsmModel::new(r, m, gl_roots(r), vec![one; r])?.with_params(params)
            }
        };
        Ok(model)
    }

    /// Raw GLSM correlator with the sign dictionary applied. The insertion is
    /// given in [`TargetSpec::insertion_vars`].
    pub fn glsm_correlator(&self, p: &Poly, cutoff: u32, variant: Variant) -> Result<QSeries> {
        let model = self.glsm_model()?;
        let p = self.insertion_in_gauge_vars(p)?;
        if let TargetSpec::Toric(t) = self {
            // the GLSM carries the Euler class of the bundle, the engine inserts it
            if !t.euler_insertion && !t.bundle.is_empty() {
                return Err(Error::Unsupported("toric GLSM comparison needs euler_insertion = true".into()));
            }
        }
        let raw = glsm::correlator(&model, &p, cutoff, variant)?;
        Ok(self.dictionary().apply(&raw))
    }

    pub fn insertion_in_gauge_vars(&self, p: &Poly) -> Result<Poly> {
        match self {
            TargetSpec::Toric(t) => t.to_gauge(p),
            _ => p.with_vars(&gauge_vars(self.rank())),
        }
    }
}

/// `n` copies of each fundamental weight `e_i`, the copy `j` with mass `-λ_j`.
fn fundamentals(r: usize, n: usize) -> Vec<Matter> {
    let names = lambda_names(n);
    let mut out = Vec::new();
    for name in &names {
        for i in 0..r {
            out.push(Matter::new(unit(r, i), 0).with_mass(mass(&[(name, -1)])));
        }
    }
    out
}

/// Positive roots `e_i - e_j`, `i < j`.
fn gl_roots(r: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            out.push((0..r).map(|k| unit(r, i)[k] - unit(r, j)[k]).collect());
        }
    }
    out
}

/// Morrison–Plesser class in the gauge variables at `z = 0`.
pub fn mp_class(spec: &TargetSpec, d: &[i64]) -> Result<Poly> {
    mp_class_gm(spec, d, &Rational::zero())
}

/// Morrison–Plesser class; the Grassmannian version carries the `z` shifts
/// `∏_δ ∏_{l=1}^{⟨δ,d⟩} (⟨δ,x⟩ + l z)`.
pub fn mp_class_gm(spec: &TargetSpec, d: &[i64], z: &Rational) -> Result<Poly> {
    spec.validate()?;
    if d.len() != spec.rank() {
        return Err(Error::InvalidModel("degree has wrong length".into()));
    }
    let vars = spec.insertion_vars();
    match spec {
        TargetSpec::Projective { .. } | TargetSpec::Grassmannian { .. } => Ok(Poly::one(&gauge_vars(spec.rank()))),
        TargetSpec::ProjectiveCi { degrees, .. } => {
            let x = gauge_vars(1);
            let mut out = Poly::one(&x);
            for &l in degrees {
                out = out.mul_poly(&linear_form(&x, &[l], &Rational::zero()).pow(nonneg(l * d[0])?));
            }
            Ok(out)
        }
        TargetSpec::Toric(t) => t.mp_class(d),
        TargetSpec::GrassmannianCi { r, bundle, .. } => {
            let x = gauge_vars(*r);
            let mut out = Poly::one(&x);
            for w in bundle {
                for l in 1..=nonneg(pair(w, d))? {
                    out = out.mul_poly(&linear_form(&x, w, &(z * &Rational::from(l as i64))));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("no Morrison-Plesser class for {vars:?} target"))),
    }
}

fn nonneg(e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::InvalidModel(format!("degree is not effective (exponent {e})")))
}

/// Dispatches to the engine of the target.
pub fn correlate(spec: &TargetSpec, p: &Poly, cutoff: u32, variant: Variant, params: &BTreeMap<String, Rational>) -> Result<QSeries> {
    spec.validate()?;
    let plain_only = |v: Variant| -> Result<()> {
        if v == Variant::Plain {
            Ok(())
        } else {
            Err(Error::Unsupported("this engine computes the plain correlator only".into()))
        }
    };
    match spec {
        TargetSpec::Projective { n } => match variant {
            Variant::Plain => projective_correlator(*n, p, cutoff),
            _ => grassmannian_ab_correlator(1, *n, p, cutoff, variant, params),
        },
        TargetSpec::ProjectiveCi { n, degrees, .. } => {
            plain_only(variant)?;
            ci_correlator(*n, degrees, p, cutoff)
        }
        TargetSpec::Concave { n, degrees } => {
            plain_only(variant)?;
            concave_correlator(*n, degrees, p, cutoff)
        }
        TargetSpec::Toric(t) => {
            plain_only(variant)?;
            toric_correlator(t, p, cutoff)
        }
        TargetSpec::Grassmannian { r, n } => grassmannian_ab_correlator(*r, *n, p, cutoff, variant, params),
        TargetSpec::GrassmannianCi { r, n, bundle } => {
            plain_only(variant)?;
            grassmannian_ci_correlator(*r, *n, bundle, p, cutoff)
        }
        TargetSpec::TstarGrassmannian { r, n, lambda, mu } => tstar_gr_correlator(*r, *n, lambda, mu, p, cutoff),
    }
}
