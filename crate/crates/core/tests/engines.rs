use std::collections::BTreeMap;

use aglsm::algebra::{pade_reconstruct, Field, Poly, QSeries, Rational, UniPoly};
use aglsm::cohomology::vi_oracle_float;
use aglsm::engines::*;
use aglsm::glsm::Variant;
use aglsm::residue::univariate_residue;
use aglsm::Error;
use num_complex::Complex64;

fn q(v: i64) -> Rational {
    Rational::from(v)
}

fn fr(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn px(s: &str) -> Poly {
    Poly::parse(s, &["x"]).unwrap()
}

fn sigma1_pow(r: usize, k: u32) -> Poly {
    let vars: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
    let ones = vec![q(1); r];
    Poly::linear(&vars, &ones, q(0)).pow(k)
}

fn coeffs(s: &QSeries) -> Vec<Rational> {
    s.to_vec()
}

/// Geometric series `a / (1 - b q)` through order `cutoff`.
fn geometric(a: Rational, b: Rational, cutoff: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut c = a;
    for _ in 0..=cutoff {
        out.push(c.clone());
        c = c * b.clone();
    }
    out
}

#[test]
fn mp_class_examples() {
    let quintic = TargetSpec::ProjectiveCi { n: 5, degrees: vec![5], calabi_yau: true };
    assert_eq!(mp_class(&quintic, &[1]).unwrap(), px("3125*x^5"));

    let p1p1 = TargetSpec::Toric(
        ToricSpec::product_of_projective(&[2, 2]).unwrap().with_bundle(vec![vec![2, 2]], false).unwrap(),
    );
    let expected = Poly::parse("(2*x1+2*x2)^4", &["x1", "x2"]).unwrap();
    assert_eq!(mp_class(&p1p1, &[1, 1]).unwrap(), expected);

    let gr = gr35();
    let expected = Poly::parse("(x1+2*x2+2*x3)*(2*x1+x2+2*x3)^2*(2*x1+2*x2+x3)^2", &["x1", "x2", "x3"]).unwrap();
    assert_eq!(mp_class(&gr, &[1, 0, 0]).unwrap(), expected);
    assert_eq!(mp_class_gm(&gr, &[1, 0, 0], &q(0)).unwrap(), expected);
}

#[test]
fn mp_class_rejects_noneffective_degree() {
    let quintic = TargetSpec::ProjectiveCi { n: 5, degrees: vec![5], calabi_yau: true };
    assert!(mp_class(&quintic, &[-1]).is_err());
}

#[test]
fn projective_examples() {
    assert_eq!(coeffs(&projective_correlator(2, &px("x^3"), 3).unwrap()), vec![q(0), q(1), q(0), q(0)]);
    assert_eq!(coeffs(&projective_correlator(5, &px("x^4"), 3).unwrap()), vec![q(1), q(0), q(0), q(0)]);
    assert!(projective_correlator(5, &px("x^5"), 3).unwrap().is_zero());
}

#[test]
fn ci_examples() {
    let s = ci_correlator(5, &[5], &px("x^3"), 5).unwrap();
    assert_eq!(coeffs(&s), geometric(q(5), q(3125), 5));
    let s = ci_correlator(6, &[2, 4], &px("x^3"), 5).unwrap();
    assert_eq!(coeffs(&s), geometric(q(8), q(4 * 256), 5));
    assert!(ci_correlator(5, &[5], &px("x^2"), 5).unwrap().is_zero());
}

#[test]
fn ci_selection_rule() {
    for (n, l) in [(5usize, vec![5i64]), (6, vec![2, 4]), (6, vec![3, 3])] {
        let dim = n - l.len() - 1;
        for k in 0..8u32 {
            let s = ci_correlator(n, &l, &Poly::monomial(&["x"], vec![k], q(1)), 3).unwrap();
            assert_eq!(!s.is_zero(), k as usize == dim, "n={n} l={l:?} k={k}");
        }
    }
}

#[test]
fn concave_examples() {
    // the only nonvanishing insertion sits one degree below n + r
    let s = concave_correlator(3, &[3], &px("x^3"), 5).unwrap();
    assert_eq!(coeffs(&s), geometric(fr(-1, 3), q(-27), 5));
    let s = concave_correlator(4, &[2, 2], &px("x^5"), 5).unwrap();
    assert_eq!(coeffs(&s), geometric(fr(1, 4), q(16), 5));
    for k in [0u32, 1, 2, 4, 5, 6] {
        let s = concave_correlator(3, &[3], &Poly::monomial(&["x"], vec![k], q(1)), 5).unwrap();
        assert!(s.is_zero(), "k = {k}");
    }
}

fn p1p1_anticanonical() -> ToricSpec {
    ToricSpec::product_of_projective(&[2, 2]).unwrap().with_bundle(vec![vec![2, 2]], false).unwrap()
}

#[test]
fn toric_p1p1_matches_product_oracle() {
    let spec = p1p1_anticanonical();
    let p = Poly::parse("(u1+u2+u3+u4)^2", &["u1", "u2", "u3", "u4"]).unwrap();
    let s = toric_correlator(&spec, &p, 2).unwrap();
    for d1 in 0..=2u32 {
        for d2 in 0..=2u32 {
            // coefficient of x1^{2d1+1} x2^{2d2+1} in (2x1 + 2x2)^{2d1+2d2+2}
            let n = 2 * (d1 + d2) as i64 + 2;
            let expected = q(2).powi(n).unwrap() * Rational::binomial(n, 2 * d1 as u64 + 1);
            assert_eq!(s.coefficient(&[d1, d2]), expected, "d = ({d1},{d2})");
        }
    }
}

#[test]
fn toric_wrong_degree_vanishes() {
    let spec = p1p1_anticanonical();
    let p = Poly::parse("(u1+u2+u3+u4)^3", &["u1", "u2", "u3", "u4"]).unwrap();
    assert!(toric_correlator(&spec, &p, 2).unwrap().is_zero());
}

#[test]
fn toric_projective_specializations() {
    let p4 = ToricSpec::projective_space(5).unwrap();
    for k in 0..12u32 {
        let p = Poly::monomial(&["u1"], vec![k], q(1));
        let t = toric_correlator(&p4, &p, 2).unwrap();
        let e = projective_correlator(5, &Poly::monomial(&["x"], vec![k], q(1)), 2).unwrap();
        assert_eq!(t.to_vec(), e.to_vec(), "k = {k}");
    }
    let quintic = ToricSpec::projective_space(5).unwrap().with_bundle(vec![vec![5]], true).unwrap();
    let t = toric_correlator(&quintic, &Poly::monomial(&["u1"], vec![3], q(1)), 3).unwrap();
    let e = ci_correlator(5, &[5], &px("x^3"), 3).unwrap();
    assert_eq!(t.to_vec(), e.to_vec());
}

#[test]
fn toric_degenerate_eta_is_rejected() {
    let err = ToricSpec::new(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]], vec![q(1), q(0)]);
    assert!(matches!(err, Err(Error::DegenerateFi(_))));
}

#[test]
fn hirzebruch_matches_glsm() {
    for a in 0..3 {
        let spec = TargetSpec::Toric(ToricSpec::hirzebruch(a).unwrap());
        for k in 0..4u32 {
            let p = Poly::monomial(&["u3"], vec![k], q(1)).mul_poly(&Poly::monomial(&["u1"], vec![2 - k.min(2)], q(1)));
            let e = correlate(&spec, &p, 2, Variant::Plain, &BTreeMap::new()).unwrap();
            let g = spec.glsm_correlator(&p, 2, Variant::Plain).unwrap();
            assert_eq!(e, g, "a = {a}, k = {k}");
        }
    }
}

#[test]
fn grassmannian_examples() {
    let no = BTreeMap::new();
    let s = grassmannian_ab_correlator(2, 4, &sigma1_pow(2, 4), 2, Variant::Plain, &no).unwrap();
    assert_eq!(s.coefficient(&[0]), q(2));
    for k in 0..12u32 {
        let p = Poly::monomial(&["x"], vec![k], q(1));
        let a = grassmannian_ab_correlator(1, 3, &p, 3, Variant::Plain, &no).unwrap();
        assert_eq!(a, projective_correlator(3, &p, 3).unwrap());
    }
}

#[test]
fn grassmannian_rejects_nonsymmetric() {
    let p = Poly::parse("x1^2", &["x1", "x2"]).unwrap();
    let err = grassmannian_ab_correlator(2, 4, &p, 1, Variant::Plain, &BTreeMap::new());
    assert!(matches!(err, Err(Error::NotWeylInvariant)));
}

fn series_at(s: &QSeries, qv: f64) -> Complex64 {
    s.eval_complex(&[Complex64::new(qv, 0.0)])
}

#[test]
fn grassmannian_matches_vafa_intriligator() {
    let no = BTreeMap::new();
    for (n, k) in [(5usize, 6u32), (5, 11), (5, 16), (4, 4), (4, 8), (4, 12)] {
        // each degree adds n to the insertion, so the series is a monomial
        let s = grassmannian_ab_correlator(2, n, &sigma1_pow(2, k), 3, Variant::Plain, &no).unwrap();
        for qv in [1.0 / 7.0, 1.0 / 11.0] {
            let a = series_at(&s, qv);
            let b = vi_oracle_float(2, n, Complex64::new(qv, 0.0), &sigma1_pow(2, k));
            assert!((a - b).norm() <= 1e-8 * b.norm().max(1e-300), "n={n} k={k}: {a} vs {b}");
        }
    }
}

fn gr35() -> TargetSpec {
    TargetSpec::GrassmannianCi { r: 3, n: 5, bundle: vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]] }
}

fn gr35_bundle() -> Vec<Vec<i64>> {
    vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]]
}

#[test]
fn grassmannian_ci_matches_closed_form() {
    let s = grassmannian_ci_correlator(3, 5, &gr35_bundle(), &sigma1_pow(3, 3), 5).unwrap();
    // 25(1 - q) / (1 - 122 q - 122 q^2 + q^3)
    let num = [q(25), q(-25)];
    let den = [q(1), q(-122), q(-122), q(1)];
    let mut expected: Vec<Rational> = Vec::new();
    for k in 0..6usize {
        let mut c = num.get(k).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=k.min(3) {
            c = c - den[j].clone() * expected[k - j].clone();
        }
        expected.push(c);
    }
    assert_eq!(s.to_vec(), expected);

    let pade = pade_reconstruct(&s, 1, 3).unwrap();
    let f = pade.function;
    assert_eq!(f.numerator().coeffs(), &num);
    assert_eq!(f.denominator().coeffs(), &den);
    assert!(grassmannian_ci_correlator(3, 5, &gr35_bundle(), &sigma1_pow(3, 2), 3).unwrap().is_zero());
}

#[test]
fn grassmannian_ci_pade_with_two_denominator_terms_fails() {
    let s = grassmannian_ci_correlator(3, 5, &gr35_bundle(), &sigma1_pow(3, 3), 5).unwrap();
    match pade_reconstruct(&s, 1, 2) {
        Err(_) => {}
        Ok(p) => assert_ne!(p.function.denominator().coeffs().len(), 4),
    }
}

#[test]
fn tstar_single_flavor_hand_residue() {
    // r = n = 1: μ (-x + λ - μ)^{d-1} / (x - λ)^{d+1}; the residue is
    // μ binom(d-1, d) (-1)^d (-μ)^{-1} at d = 0 and vanishes for d >= 1
    let lambda = [fr(2, 3)];
    let mu = fr(1, 5);
    let s = tstar_gr_correlator(1, 1, &lambda, &mu, &px("1"), 4).unwrap();
    assert_eq!(s.to_vec(), vec![q(-1), q(0), q(0), q(0), q(0)]);
    let s = tstar_gr_correlator(1, 1, &lambda, &mu, &px("x"), 3).unwrap();
    // d = 0 leaves -λ; for d >= 1, with y = x - λ, μ (y + λ)(-y - μ)^{d-1} / y^{d+1} leaves (-1)^{d-1} μ
    assert_eq!(s.to_vec(), vec![-lambda[0].clone(), mu.clone(), -mu.clone(), mu.clone()]);
}

#[test]
fn tstar_matches_univariate_residues() {
    let lambda = [q(0), q(1)];
    let mu = fr(1, 3);
    let s = tstar_gr_correlator(1, 2, &lambda, &mu, &px("1"), 2).unwrap();
    for d in 0..=2i64 {
        let mut num = UniPoly::constant(mu.clone());
        let mut den = UniPoly::one();
        for l in &lambda {
            let y = UniPoly::new(vec![l - &mu, q(-1)]);
            for _ in 0..(d - 1).max(0) {
                num = num.mul(&y);
            }
            if d == 0 {
                den = den.mul(&y);
            }
            for _ in 0..=d {
                den = den.mul(&UniPoly::linear_root(l));
            }
        }
        let v: Rational = lambda.iter().map(|l| univariate_residue(&num, &den, l).unwrap()).sum();
        assert_eq!(s.coefficient(&[d as u32]), v, "d = {d}");
    }
}

#[test]
fn tstar_errors() {
    let p = Poly::parse("x1", &["x1", "x2"]).unwrap();
    assert!(matches!(
        tstar_gr_correlator(2, 3, &[q(0), q(1), q(2)], &fr(1, 3), &p, 1),
        Err(Error::NotWeylInvariant)
    ));
    // λ_2 - μ = λ_1 puts a Y pole on an X pole
    let err = tstar_gr_correlator(1, 2, &[q(0), q(1)], &q(1), &px("1"), 1);
    assert!(matches!(err, Err(Error::NonGeneric(_))), "{err:?}");
    assert!(matches!(tstar_gr_correlator(1, 2, &[q(1), q(1)], &q(1), &px("1"), 1), Err(Error::CoincidentLambda)));
}

#[test]
fn dictionaries() {
    let quintic = TargetSpec::ProjectiveCi { n: 5, degrees: vec![5], calabi_yau: true };
    let d = quintic.dictionary();
    assert_eq!((d.overall, d.per_series.clone()), (1, vec![5]));
    assert_eq!(d.describe(&["q".into()]), "q = -e^{t'}; overall sign -1");
    assert_eq!(TargetSpec::Projective { n: 3 }.dictionary(), Dictionary::trivial(1));
    let bad = TargetSpec::ProjectiveCi { n: 5, degrees: vec![4], calabi_yau: true };
    assert!(bad.validate().is_err());
    assert!(TargetSpec::Concave { n: 3, degrees: vec![0] }.validate().is_err());
}

fn all_targets() -> Vec<(TargetSpec, Poly)> {
    let x3 = px("x^3");
    vec![
        (TargetSpec::Projective { n: 3 }, px("x^5")),
        (TargetSpec::ProjectiveCi { n: 5, degrees: vec![5], calabi_yau: true }, x3.clone()),
        (TargetSpec::ProjectiveCi { n: 6, degrees: vec![2, 4], calabi_yau: true }, x3.clone()),
        (TargetSpec::ProjectiveCi { n: 4, degrees: vec![2], calabi_yau: false }, px("x^4")),
        (TargetSpec::Concave { n: 3, degrees: vec![3] }, x3.clone()),
        (TargetSpec::Concave { n: 4, degrees: vec![2, 2] }, px("x^5")),
        (
            TargetSpec::Toric(ToricSpec::product_of_projective(&[2, 2]).unwrap().with_bundle(vec![vec![2, 2]], true).unwrap()),
            Poly::parse("u1*u3", &["u1", "u2", "u3", "u4"]).unwrap(),
        ),
        (TargetSpec::Toric(ToricSpec::hirzebruch(1).unwrap()), Poly::parse("u3^2", &["u1", "u2", "u3", "u4"]).unwrap()),
        (TargetSpec::Grassmannian { r: 2, n: 4 }, sigma1_pow(2, 8)),
        (gr35(), sigma1_pow(3, 3)),
        (
            TargetSpec::TstarGrassmannian { r: 1, n: 2, lambda: vec![q(0), fr(1, 2)], mu: fr(1, 3) },
            px("x^2 + 1"),
        ),
    ]
}

#[test]
fn engines_agree_with_glsm() {
    for (spec, p) in all_targets() {
        let variant = match spec {
            TargetSpec::TstarGrassmannian { .. } => Variant::H,
            _ => Variant::Plain,
        };
        let e = correlate(&spec, &p, 3, variant, &BTreeMap::new()).unwrap();
        let g = spec.glsm_correlator(&p, 3, variant).unwrap();
        assert_eq!(e, g, "{spec:?}");
    }
}

#[test]
fn equivariant_grassmannian_matches_glsm() {
    let spec = TargetSpec::Grassmannian { r: 2, n: 3 };
    let mut params: BTreeMap<String, Rational> =
        [("lambda1", q(0)), ("lambda2", fr(1, 2)), ("lambda3", fr(-2, 7)), ("z", fr(1, 3))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
    let p = Poly::parse("x1^2*x2^2 + x1 + x2", &["x1", "x2"]).unwrap();
    for variant in [Variant::Gm, Variant::H, Variant::HGm] {
        let e = correlate(&spec, &p, 2, variant, &params).unwrap();
        let model = spec.glsm_model().unwrap().with_params(params.clone());
        let g = aglsm::glsm::correlator(&model, &p, 2, variant).unwrap();
        assert_eq!(e, g, "{variant:?}");
    }
    params.remove("z");
    assert!(correlate(&spec, &p, 2, Variant::Gm, &params).is_err());
}
