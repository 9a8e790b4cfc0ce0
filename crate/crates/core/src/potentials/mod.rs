//! Coulomb-branch effective twisted superpotential, its exponentiated gradient
//! and the Bethe equations it produces.
//!
//! `W_eff` contains logarithms and `π√−1` terms, so it is only kept as
//! structure. Everything computable goes through `exp(∂_k W_eff)`, whose
//! transcendental pieces reduce to `e^{t_k}` (a marker variable) and exact signs.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::poly::{MultiPoly, Poly};
use crate::algebra::ratfunc::RationalFunction;
use crate::algebra::scalar::{Field, GaussianRational, Rational};
use crate::algebra::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::glsm::GlsmModel;
use crate::report::EqualityReport;

/// One matter term `(ρ(x) + ν) (log(ρ(x) + ν) − 1)` with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatterTerm {
    pub weight: Vec<i64>,
    /// `ρ(x) + ν` over the gauge variables followed by the unbound parameters.
    pub form: Poly,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectivePotential {
    gauge_vars: Vec<String>,
    vars: Vec<String>,
    /// Marker standing for `e^{t_k}`, one per gauge direction.
    pub fi: Vec<String>,
    /// Positive roots; each contributes `−π√−1 α(x)`.
    pub positive_roots: Vec<Vec<i64>>,
    pub matter: Vec<MatterTerm>,
}

impl EffectivePotential {
    /// Bound model parameters are substituted; unbound ones stay symbolic.
    pub fn from_model(model: &GlsmModel) -> Result<Self> {
        let gauge_vars = model.vars();
        let r = model.rank();
        let mut free: Vec<String> = Vec::new();
        for m in model.matter() {
            for v in m.mass.vars() {
                if !model.params().contains_key(v) && !free.contains(v) {
                    free.push(v.clone());
                }
            }
        }
        free.sort();
        let mut vars = gauge_vars.clone();
        vars.extend(free);
        let mut matter: Vec<MatterTerm> = Vec::new();
        for m in model.matter() {
            let coeffs: Vec<Rational> = (0..vars.len())
                .map(|k| if k < r { Rational::from(m.weight[k]) } else { Rational::zero() })
                .collect();
            let mass = bind(&m.mass, model.params(), &vars)?;
            let form = &Poly::linear(&vars, &coeffs, Rational::zero()) + &mass;
            match matter.iter_mut().find(|t| t.weight == m.weight && t.form == form) {
                Some(t) => t.multiplicity += 1,
                None => matter.push(MatterTerm { weight: m.weight.clone(), form, multiplicity: 1 }),
            }
        }
        let fi = (0..r)
            .map(|k| {
                model
                    .series_vars()
                    .iter()
                    .zip(model.series_map())
                    .find(|(_, row)| row[k] != 0)
                    .map(|(v, _)| v.clone())
                    .ok_or_else(|| Error::InvalidModel(format!("no series variable couples to x{}", k + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EffectivePotential { gauge_vars, vars, fi, positive_roots: model.roots().to_vec(), matter })
    }

    pub fn gauge_vars(&self) -> &[String] {
        &self.gauge_vars
    }

    /// Gauge variables followed by the unbound parameters.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn exp_grad(&self, k: usize) -> Result<ExpGradient> {
        if k >= self.gauge_vars.len() {
            return Err(Error::InvalidModel(format!("gauge index {k} out of range")));
        }
        let root_sum: i64 = self.positive_roots.iter().map(|a| a[k]).sum();
        let mut factors: Vec<(Poly, i64)> = self
            .matter
            .iter()
            .filter(|t| t.weight[k] != 0)
            .map(|t| (t.form.clone(), -t.weight[k] * t.multiplicity as i64))
            .collect();
        factors.sort_by(|a, b| a.0.to_string().cmp(&b.0.to_string()).then(a.1.cmp(&b.1)));
        Ok(ExpGradient {
            k,
            marker: self.fi[k].clone(),
            sign: if root_sum.rem_euclid(2) == 0 { 1 } else { -1 },
            factors,
            gauge_vars: self.gauge_vars.clone(),
            vars: self.vars.clone(),
        })
    }
}

/// `exp(∂_{x_k} W_eff) = sign · e^{t_k} · ∏ form^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpGradient {
    pub k: usize,
    pub marker: String,
    pub sign: i64,
    pub factors: Vec<(Poly, i64)>,
    gauge_vars: Vec<String>,
    vars: Vec<String>,
}

impl ExpGradient {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables of the cleared equation: [`Self::vars`] and the marker.
    pub fn cleared_vars(&self) -> Vec<String> {
        let mut v = self.vars.clone();
        v.push(self.marker.clone());
        v
    }

    pub fn numerator(&self) -> Poly {
        self.product(|e| e > 0)
    }

    pub fn denominator(&self) -> Poly {
        self.product(|e| e < 0)
    }

    fn product(&self, keep: impl Fn(i64) -> bool) -> Poly {
        self.factors
            .iter()
            .filter(|(_, e)| keep(*e))
            .fold(Poly::one(&self.vars), |acc, (f, e)| acc.mul_poly(&f.pow(e.unsigned_abs() as u32)))
    }

    /// `denominator − sign · marker · numerator`, whose vanishing is `exp_grad = 1`.
    pub fn cleared_unit_equation(&self) -> Poly {
        let vars = self.cleared_vars();
        let q = Poly::var(&vars, &self.marker).expect("marker is a variable");
        let den = self.denominator().with_vars(&vars).expect("subset");
        let num = self.numerator().with_vars(&vars).expect("subset");
        &den - &q.mul_poly(&num).scale(&Rational::from(self.sign))
    }

    /// The rank-one gradient as a rational function of `x` with the `e^{t}`
    /// marker left out; parameters come from `values`.
    pub fn rational_function<F: Field>(&self, values: &BTreeMap<String, F>) -> Result<RationalFunction<F>> {
        if self.gauge_vars.len() != 1 {
            return Err(Error::Unsupported("rational function form needs rank one".into()));
        }
        let x = &self.gauge_vars[0];
        let num = UniPoly::from_multi(&specialize(&self.numerator(), &self.gauge_vars, values)?, 0)?;
        let den = UniPoly::from_multi(&specialize(&self.denominator(), &self.gauge_vars, values)?, 0)?;
        RationalFunction::new(x, num.scale(&F::from_i64(self.sign)), den)
    }
}

/// Substitutes bound parameters; the remaining variables are placed in `vars`.
fn bind(p: &Poly, params: &BTreeMap<String, Rational>, vars: &[String]) -> Result<Poly> {
    let images: Vec<Poly> = p
        .vars()
        .iter()
        .map(|v| match params.get(v) {
            Some(c) => Ok(Poly::constant(vars, c.clone())),
            None => Poly::var(vars, v),
        })
        .collect::<Result<_>>()?;
    Ok(p.compose(&images, vars))
}

/// Maps `p` into `F`, substituting `values` for every non-gauge variable.
pub fn specialize<F: Field>(p: &Poly, gauge_vars: &[String], values: &BTreeMap<String, F>) -> Result<MultiPoly<F>> {
    let images: Vec<MultiPoly<F>> = p
        .vars()
        .iter()
        .map(|v| {
            if gauge_vars.contains(v) {
                MultiPoly::var(gauge_vars, v)
            } else {
                values
                    .get(v)
                    .map(|c| MultiPoly::constant(gauge_vars, c.clone()))
                    .ok_or_else(|| Error::InvalidModel(format!("parameter `{v}` is not bound")))
            }
        })
        .collect::<Result<_>>()?;
    Ok(p.map_coeffs(F::from_rational).compose(&images, gauge_vars))
}

/// `∏ lhs_num / ∏ lhs_den = coefficient · e^{t} · ∏ rhs_num / ∏ rhs_den`.
/// Factors on the left involve only `x_k`; factors on the right are the
/// interactions with other gauge variables. Every factor is monic in `x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheEquation<F: Field = Rational> {
    pub index: usize,
    pub coefficient: F,
    pub marker: String,
    pub lhs_numerator: Vec<MultiPoly<F>>,
    pub lhs_denominator: Vec<MultiPoly<F>>,
    pub rhs_numerator: Vec<MultiPoly<F>>,
    pub rhs_denominator: Vec<MultiPoly<F>>,
    vars: Vec<String>,
    gauge_vars: Vec<String>,
}

fn prod<F: Field>(fs: &[MultiPoly<F>], vars: &[String]) -> MultiPoly<F> {
    fs.iter().fold(MultiPoly::one(vars), |acc, f| acc.mul_poly(&f.with_vars(vars).expect("subset")))
}

impl<F: Field> BetheEquation<F> {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Both sides after clearing denominators, over [`Self::vars`] and the marker.
    pub fn cleared(&self) -> (MultiPoly<F>, MultiPoly<F>) {
        let mut vars = self.vars.clone();
        vars.push(self.marker.clone());
        let q = MultiPoly::var(&vars, &self.marker).expect("marker is a variable");
        let lhs = prod(&self.lhs_numerator, &vars).mul_poly(&prod(&self.rhs_denominator, &vars));
        let rhs = prod(&self.rhs_numerator, &vars).mul_poly(&prod(&self.lhs_denominator, &vars));
        (lhs, q.mul_poly(&rhs).scale(&self.coefficient))
    }

    /// True when the interaction product is identically one.
    pub fn interaction_is_trivial(&self) -> bool {
        prod(&self.rhs_numerator, &self.vars) == prod(&self.rhs_denominator, &self.vars)
    }

    /// True when the single-variable ratio is identically one.
    pub fn single_is_trivial(&self) -> bool {
        prod(&self.lhs_numerator, &self.vars) == prod(&self.lhs_denominator, &self.vars)
    }

    /// Applies `x_i ↦ x_i + shift_i` to every factor.
    pub fn shift_gauge(&self, shift: &[F]) -> Result<Self> {
        if shift.len() != self.gauge_vars.len() {
            return Err(Error::InvalidModel("one shift per gauge variable".into()));
        }
        let mut full = vec![F::zero(); self.vars.len()];
        for (g, s) in self.gauge_vars.iter().zip(shift) {
            let k = self.vars.iter().position(|v| v == g).expect("gauge variable");
            full[k] = s.clone();
        }
        let sh = |fs: &[MultiPoly<F>]| fs.iter().map(|f| f.shift(&full)).collect::<Vec<_>>();
        Ok(BetheEquation {
            lhs_numerator: sh(&self.lhs_numerator),
            lhs_denominator: sh(&self.lhs_denominator),
            rhs_numerator: sh(&self.rhs_numerator),
            rhs_denominator: sh(&self.rhs_denominator),
            ..self.clone()
        })
    }
}

impl BetheEquation<Rational> {
    /// Substitutes every parameter, leaving only gauge variables.
    pub fn specialize<G: Field>(&self, values: &BTreeMap<String, G>) -> Result<BetheEquation<G>> {
        let sp = |fs: &[Poly]| fs.iter().map(|f| specialize(f, &self.gauge_vars, values)).collect::<Result<Vec<_>>>();
        Ok(BetheEquation {
            index: self.index,
            coefficient: G::from_rational(&self.coefficient),
            marker: self.marker.clone(),
            lhs_numerator: sp(&self.lhs_numerator)?,
            lhs_denominator: sp(&self.lhs_denominator)?,
            rhs_numerator: sp(&self.rhs_numerator)?,
            rhs_denominator: sp(&self.rhs_denominator)?,
            vars: self.gauge_vars.clone(),
            gauge_vars: self.gauge_vars.clone(),
        })
    }
}

impl<F: Field> Serialize for BetheEquation<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Side {
            numerator: Vec<String>,
            denominator: Vec<String>,
        }
        let strs = |fs: &[MultiPoly<F>]| fs.iter().map(|f| f.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("BetheEquation", 6)?;
        st.serialize_field("index", &self.index)?;
        st.serialize_field("variables", &self.vars)?;
        st.serialize_field("coefficient", &self.coefficient.to_string())?;
        st.serialize_field("marker", &self.marker)?;
        st.serialize_field("lhs", &Side { numerator: strs(&self.lhs_numerator), denominator: strs(&self.lhs_denominator) })?;
        st.serialize_field("rhs", &Side { numerator: strs(&self.rhs_numerator), denominator: strs(&self.rhs_denominator) })?;
        st.end()
    }
}

/// The unit equations `exp(∂_{x_k} W_eff) = 1`, one per gauge variable.
pub fn bethe_equations(model: &GlsmModel) -> Result<Vec<BetheEquation>> {
    let w = EffectivePotential::from_model(model)?;
    (0..model.rank()).map(|k| bethe_equation(&w, k)).collect()
}

fn bethe_equation(w: &EffectivePotential, k: usize) -> Result<BetheEquation> {
    let g = w.exp_grad(k)?;
    let r = w.gauge_vars.len();
    let mut coefficient = Rational::from(g.sign);
    let (mut ln, mut ld, mut rn, mut rd) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (f, e) in &g.factors {
        let mut unit = vec![0; w.vars.len()];
        unit[k] = 1;
        let c = f.coefficient(&unit);
        let monic = f.div_scalar(&c)?;
        coefficient = coefficient * c.powi(*e)?;
        let interacts = (0..r).any(|j| {
            let mut u = vec![0; w.vars.len()];
            u[j] = 1;
            j != k && !f.coefficient(&u).is_zero()
        });
        // single-variable factors move to the left, so their exponents flip
        let (target, copies) = match (interacts, *e > 0) {
            (false, false) => (&mut ln, -e),
            (false, true) => (&mut ld, *e),
            (true, true) => (&mut rn, *e),
            (true, false) => (&mut rd, -e),
        };
        for _ in 0..copies {
            target.push(monic.clone());
        }
    }
    Ok(BetheEquation {
        index: k,
        coefficient,
        marker: g.marker,
        lhs_numerator: ln,
        lhs_denominator: ld,
        rhs_numerator: rn,
        rhs_denominator: rd,
        vars: w.vars.clone(),
        gauge_vars: w.gauge_vars.clone(),
    })
}

/// Checks that clearing denominators in `exp(∂_{x_k} W_eff) = 1` gives
/// `lhs = rhs` up to a nonzero constant. The relation is read in
/// [`ExpGradient::cleared_vars`].
pub fn check_vacuum_relation(model: &GlsmModel, k: usize, lhs: &Poly, rhs: &Poly) -> Result<EqualityReport> {
    let g = EffectivePotential::from_model(model)?.exp_grad(k)?;
    let vars = g.cleared_vars();
    let cleared = g.cleared_unit_equation();
    let relation = &lhs.with_vars(&vars)? - &rhs.with_vars(&vars)?;
    let pass = match relation.terms().iter().next() {
        Some((e, c)) => {
            let ratio = cleared.coefficient(e).try_div(c)?;
            !ratio.is_zero() && relation.scale(&ratio) == cleared
        }
        None => false,
    };
    Ok(EqualityReport {
        identity: format!("exp_grad_{} = 1 gives {} = {}", k + 1, lhs, rhs),
        degree: vec![k as i64],
        lhs: format!("{cleared} = 0"),
        rhs: format!("{relation} = 0"),
        pass,
    })
}

/// Spin-chain check for `T*Gr(r, n)`: with `λ_j = √−1/2`, `μ = −√−1` and
/// `x_k = u_k + √−1`, each unit equation clears to
/// `(u_k + √−1/2)^n ∏_{j≠k}(u_k − u_j − √−1) = Q (u_k − √−1/2)^n ∏_{j≠k}(u_k − u_j + √−1)`
/// with `Q = (−1)^n e^{t}`.
pub fn spin_chain_check(r: usize, n: usize) -> Result<Vec<EqualityReport>> {
    let spec = crate::engines::TargetSpec::TstarGrassmannian {
        r,
        n,
        lambda: (1..=n as i64).map(Rational::from).collect(),
        mu: Rational::one(),
    };
    let model = spec.glsm_model()?.with_params(BTreeMap::new());
    let i = GaussianRational::i();
    let half = GaussianRational::from(Rational::new(1, 2));
    let mut values: BTreeMap<String, GaussianRational> =
        (1..=n).map(|j| (format!("lambda{j}"), i.clone() * half.clone())).collect();
    values.insert("mu".into(), -i.clone());
    let mut out = Vec::new();
    for eq in bethe_equations(&model)? {
        let eq = eq.specialize(&values)?.shift_gauge(&vec![i.clone(); r])?;
        let (lhs, rhs) = eq.cleared();
        let (want_lhs, want_rhs) = bethe_shape(&eq.gauge_vars, eq.index, n, &eq.marker);
        let vars = lhs.vars().to_vec();
        let pass = lhs == want_lhs.with_vars(&vars)? && rhs == want_rhs.with_vars(&vars)?;
        out.push(EqualityReport {
            identity: format!("spin-chain Bethe equation {}", eq.index + 1),
            degree: vec![eq.index as i64],
            lhs: format!("{lhs} = {rhs}"),
            rhs: format!("{want_lhs} = {want_rhs}"),
            pass,
        });
    }
    Ok(out)
}

/// Cleared Bethe equation in `u`, with `Q = (−1)^n q` written out.
fn bethe_shape(
    vars: &[String],
    k: usize,
    n: usize,
    marker: &str,
) -> (MultiPoly<GaussianRational>, MultiPoly<GaussianRational>) {
    let mut all = vars.to_vec();
    all.push(marker.to_string());
    let i = GaussianRational::i();
    let half_i = i.clone() * GaussianRational::from(Rational::new(1, 2));
    let u = |j: usize| MultiPoly::<GaussianRational>::var_index(&all, j);
    let c = |v: GaussianRational| MultiPoly::constant(&all, v);
    let mut lhs = (&u(k) + &c(half_i.clone())).pow(n as u32);
    let mut rhs = (&u(k) - &c(half_i)).pow(n as u32);
    for j in (0..vars.len()).filter(|&j| j != k) {
        let diff = &u(k) - &u(j);
        lhs = lhs.mul_poly(&(&diff - &c(i.clone())));
        rhs = rhs.mul_poly(&(&diff + &c(i.clone())));
    }
    let sign = GaussianRational::from_i64(if n % 2 == 0 { 1 } else { -1 });
    let q = MultiPoly::var(&all, marker).expect("marker is a variable");
    (lhs, q.mul_poly(&rhs).scale(&sign))
}
