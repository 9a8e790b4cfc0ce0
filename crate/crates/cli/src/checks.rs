//! Identity suites run by `aglsm check`, at fixed small parameters.

use std::collections::BTreeMap;

use aglsm::algebra::{Field, Poly, Rational};
use aglsm::cohomology::{integrate_classical, integrate_equivariant, vi_oracle_float, Flavor, Presentation, RingOracle};
use aglsm::engines::{correlate, grassmannian_ab_correlator, projective_correlator, concave_correlator, ci_correlator, TargetSpec, ToricSpec};
use aglsm::glsm::{canonical, z_factor, z_factor_equivariant, Variant};
use aglsm::ifunctions::{factorization_check, factorization_check_float, hori_vafa_shift_check, FloatStatus};
use aglsm::Result;
use clap::ValueEnum;
use itertools::Itertools;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Factorization,
    HoriVafa,
    Martin,
    Vi,
    ZLimit,
    SelectionRules,
    All,
}

impl Suite {
    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Factorization,
                Suite::HoriVafa,
                Suite::Martin,
                Suite::Vi,
                Suite::ZLimit,
                Suite::SelectionRules,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub struct Settings {
    pub float_tolerance: f64,
    pub rng: StdRng,
}

fn fr(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn gauge_vars(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["x".into()]
    } else {
        (1..=r).map(|i| format!("x{i}")).collect()
    }
}

fn sigma1_pow(r: usize, k: u32) -> Poly {
    let vars = gauge_vars(r);
    Poly::linear(&vars, &vec![Rational::one(); r], Rational::zero()).pow(k)
}

/// Sum of the distinct permutations of `x^a`.
fn symmetrized(a: &[u32]) -> Poly {
    let vars = gauge_vars(a.len());
    let mut p = Poly::zero(&vars);
    for perm in a.iter().copied().permutations(a.len()).unique() {
        p.add_term(perm, Rational::one());
    }
    p
}

/// Distinct random rationals with small numerators and denominators.
fn random_lambda(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < n {
        let v = fr(rng.gen_range(-40..=40), rng.gen_range(1..=9));
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn run(suite: Suite, settings: &mut Settings) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for s in suite.members() {
        let name = s.name();
        let mut push = |check: String, pass: bool, detail: String| {
            out.push(CheckResult { suite: name.clone(), name: check, pass, detail });
        };
        match s {
            Suite::Factorization => factorization(settings, &mut push)?,
            Suite::HoriVafa => hori_vafa(&mut push)?,
            Suite::Martin => martin(settings, &mut push)?,
            Suite::Vi => vi(&mut push)?,
            Suite::ZLimit => z_limit(&mut push)?,
            Suite::SelectionRules => selection_rules(&mut push)?,
            Suite::All => unreachable!("expanded by members"),
        }
    }
    Ok(out)
}

type Push<'a> = dyn FnMut(String, bool, String) + 'a;

fn factorization(settings: &Settings, push: &mut Push) -> Result<()> {
    let cases: [(usize, usize, Poly, u32, Option<Vec<Rational>>); 5] = [
        (1, 2, sigma1_pow(1, 3), 3, None),
        (1, 2, Poly::parse("x^2 + x", &["x"])?, 3, Some(vec![fr(1, 2), fr(-1, 3)])),
        (1, 3, sigma1_pow(1, 4), 2, Some(vec![Rational::zero(), fr(1, 4), fr(-3, 7)])),
        (2, 3, Poly::parse("x1^2*x2^2 + x1 + x2", &["x1", "x2"])?, 1, Some(vec![Rational::zero(), fr(1, 7), fr(5, 11)])),
        (2, 4, sigma1_pow(2, 8), 1, None),
    ];
    for (r, n, p, dmax, lambda) in &cases {
        for z in [fr(1, 3), fr(-2, 5)] {
            for d in 0..=*dmax {
                let rep = factorization_check(*r, *n, p, d, &z, lambda.as_deref())?;
                let eq = if lambda.is_some() { "H-equivariant" } else { "plain" };
                push(
                    format!("r={r} n={n} P={p} d={d} z={z} {eq}"),
                    rep.pass,
                    format!("lhs {} rhs {}", rep.lhs, rep.rhs),
                );
            }
        }
    }
    let t = Complex64::new(1e-3f64.ln(), 0.3);
    let tau = Complex64::new(1e-3f64.ln(), -0.2);
    let z = Complex64::new(2.0, 0.5);
    for (r, n) in [(1, 2), (2, 4)] {
        let rep = factorization_check_float(r, n, t, tau, z, 4, settings.float_tolerance)?;
        push(
            format!("float r={r} n={n} |e^t|=1e-3 cutoff 4"),
            rep.status == FloatStatus::Pass,
            format!("difference {:e}, tail {:e}, rounding {:e}, {:?}", rep.difference, rep.tail, rep.rounding, rep.status),
        );
    }
    Ok(())
}

fn hori_vafa(push: &mut Push) -> Result<()> {
    for r in 1..=3 {
        for d in (0..r).map(|_| 0..=3i64).multi_cartesian_product().filter(|d| d.iter().sum::<i64>() <= 3) {
            for z in [fr(1, 2), fr(-3, 1)] {
                let rep = hori_vafa_shift_check(r, &d, &z)?;
                push(format!("r={r} d={d:?} z={z}"), rep.pass, format!("{} vs {}", rep.lhs, rep.rhs));
            }
        }
    }
    Ok(())
}

fn martin(settings: &mut Settings, push: &mut Push) -> Result<()> {
    let no = BTreeMap::new();
    for (r, n) in [(2usize, 4usize), (2, 5), (3, 6)] {
        let dim = (r * (n - r)) as u32;
        let classical = RingOracle::new(Presentation::Grassmannian { r, n }, Flavor::Classical)?;
        let samples = [random_lambda(&mut settings.rng, n), random_lambda(&mut settings.rng, n)];
        let oracles = samples
            .iter()
            .map(|l| RingOracle::new(Presentation::Grassmannian { r, n }, Flavor::HEquivariant { lambda: l.clone() }))
            .collect::<Result<Vec<_>>>()?;
        // exponent vectors a_1 >= .. >= a_r with |a| = dim
        let parts = (0..r).map(|_| 0..=dim).multi_cartesian_product().filter(|a| {
            a.iter().sum::<u32>() == dim && a.windows(2).all(|w| w[0] >= w[1])
        });
        for a in parts {
            let p = symmetrized(&a);
            let c = integrate_classical(&classical, &p)?;
            let e = correlate(&TargetSpec::Grassmannian { r, n }, &p, 0, Variant::Plain, &no)?.coefficient(&[0]);
            let loc = oracles.iter().map(|o| integrate_equivariant(o, &p)).collect::<Result<Vec<_>>>()?;
            let pass = c == e && loc.iter().all(|v| *v == c);
            push(
                format!("Gr({r},{n}) m{a:?}"),
                pass,
                format!(
                    "coefficient {c}, engine {e}, localization {} at lambda {}",
                    loc.iter().join(", "),
                    samples.iter().map(|l| format!("({})", l.iter().join(", "))).join(" and ")
                ),
            );
        }
    }
    Ok(())
}

fn vi(push: &mut Push) -> Result<()> {
    let no = BTreeMap::new();
    for (n, ks) in [(4usize, [4u32, 8]), (5, [6, 11])] {
        for k in ks {
            let p = sigma1_pow(2, k);
            let s = grassmannian_ab_correlator(2, n, &p, 3, Variant::Plain, &no)?;
            for qv in [1.0 / 7.0, 1.0 / 11.0] {
                let a = s.eval_complex(&[Complex64::new(qv, 0.0)]);
                let b = vi_oracle_float(2, n, Complex64::new(qv, 0.0), &p);
                let rel = (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
                push(format!("Gr(2,{n}) sigma1^{k} q={qv:.6}"), rel <= 1e-8, format!("series {a}, root sum {b}, relative {rel:e}"));
            }
        }
    }
    Ok(())
}

fn z_limit(push: &mut Push) -> Result<()> {
    let x = |s: &str| Poly::parse(s, &["x"]);
    let targets = vec![
        (TargetSpec::Projective { n: 3 }, x("x^5")?),
        (TargetSpec::ProjectiveCi { n: 5, degrees: vec![5], calabi_yau: true }, x("x^3")?),
        (TargetSpec::Concave { n: 3, degrees: vec![3] }, x("x^3")?),
        (TargetSpec::Toric(ToricSpec::hirzebruch(1)?), Poly::parse("u3^2", &["u1", "u2", "u3", "u4"])?),
        (TargetSpec::Grassmannian { r: 2, n: 4 }, sigma1_pow(2, 8)),
        (TargetSpec::TstarGrassmannian { r: 1, n: 2, lambda: vec![Rational::zero(), fr(1, 2)], mu: fr(1, 3) }, x("x^2 + 1")?),
    ];
    for (spec, p) in &targets {
        let model = spec.glsm_model()?;
        for d in model.degrees(2) {
            let zero = vec![Rational::zero(); model.matter().len()];
            let a = canonical(&z_factor_equivariant(&model, &d, &zero, &Rational::zero())?);
            let b = canonical(&z_factor(&model, &d)?);
            push(format!("{spec:?} Z_d at z=0, d={d:?}"), a == b, String::new());
        }
        let variant = if matches!(spec, TargetSpec::TstarGrassmannian { .. }) { Variant::H } else { Variant::Plain };
        let e = correlate(spec, p, 2, variant, &BTreeMap::new())?;
        let g = spec.glsm_correlator(p, 2, variant)?;
        push(format!("{spec:?} engine vs glsm"), e == g, format!("engine {e}, glsm {g}"));
    }
    Ok(())
}

fn selection_rules(push: &mut Push) -> Result<()> {
    for n in 2..=6usize {
        for k in 0..=(n * 6) as u32 {
            let s = projective_correlator(n, &Poly::monomial(&["x"], vec![k], Rational::one()), 5)?;
            let pass = (0..=5u32).all(|d| {
                let want = if k as usize == n * (d as usize + 1) - 1 { Rational::one() } else { Rational::zero() };
                s.coefficient(&[d]) == want
            });
            push(format!("P^{} <x^{k}>", n - 1), pass, s.to_string());
        }
    }
    // nonzero only at k = n + r - 1 for O(-3) over P^2 and at k = n - r - 1 for the quintic
    for (label, n, degrees, live, concave) in [("O(-3) over P^2", 3, vec![3], 3, true), ("quintic", 5, vec![5], 3, false)] {
        for k in 0..=8u32 {
            let p = Poly::monomial(&["x"], vec![k], Rational::one());
            let s = if concave { concave_correlator(n, &degrees, &p, 5)? } else { ci_correlator(n, &degrees, &p, 5)? };
            let pass = if k == live { (0..=5u32).all(|d| !s.coefficient(&[d]).is_zero()) } else { s.is_zero() };
            push(format!("{label} <x^{k}>"), pass, s.to_string());
        }
    }
    Ok(())
}
