use std::collections::BTreeMap;

use aglsm::algebra::{Field, GaussianRational, MultiPoly, Poly, Rational};
use aglsm::engines::TargetSpec;
use aglsm::glsm::{GlsmModel, Matter};
use aglsm::potentials::*;
use proptest::prelude::*;

fn q(v: i64) -> Rational {
    Rational::from(v)
}

fn projective(n: usize) -> GlsmModel {
    TargetSpec::Projective { n }.glsm_model().unwrap()
}

fn tstar(r: usize, n: usize) -> GlsmModel {
    let spec = TargetSpec::TstarGrassmannian { r, n, lambda: (1..=n as i64).map(q).collect(), mu: q(1) };
    spec.glsm_model().unwrap().with_params(BTreeMap::new())
}

fn lambdas(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("lambda{j}")).collect()
}

#[test]
fn projective_exp_grad() {
    let m = projective(3);
    let g = EffectivePotential::from_model(&m).unwrap().exp_grad(0).unwrap();
    assert_eq!(g.marker, "q");
    assert_eq!(g.sign, 1);
    assert!(g.numerator().as_constant().is_some_and(|c| c.is_one()));
    assert_eq!(g.denominator().to_string(), Poly::parse("(x-lambda1)*(x-lambda2)*(x-lambda3)", g.vars()).unwrap().to_string());
    // multiplying by ∏(x - λ_i) leaves q
    let vars = g.cleared_vars();
    let prod = Poly::parse("(x-lambda1)*(x-lambda2)*(x-lambda3)", &vars).unwrap();
    let q_var = Poly::var(&vars, "q").unwrap();
    assert_eq!(g.cleared_unit_equation(), &prod - &q_var);
}

#[test]
fn projective_vacuum_relation() {
    for n in 1..=5 {
        let m = projective(n);
        let vars = EffectivePotential::from_model(&m).unwrap().exp_grad(0).unwrap().cleared_vars();
        let lhs = lambdas(n).iter().fold(Poly::one(&vars), |acc, l| {
            acc.mul_poly(&Poly::parse(&format!("x-{l}"), &vars).unwrap())
        });
        let rhs = Poly::var(&vars, "q").unwrap();
        let rep = check_vacuum_relation(&m, 0, &lhs, &rhs).unwrap();
        assert!(rep.pass, "{rep:?}");
        // wrong relation
        let bad = check_vacuum_relation(&m, 0, &lhs, &rhs.scale(&q(2))).unwrap();
        assert!(!bad.pass);
    }
}

#[test]
fn zero_masses_give_quantum_relation() {
    for n in 1..=5 {
        let params = lambdas(n).into_iter().map(|l| (l, q(0))).collect();
        let m = projective(n).with_params(params);
        let vars = ["x", "q"];
        let lhs = Poly::parse(&format!("x^{n}"), &vars).unwrap();
        let rhs = Poly::parse("q", &vars).unwrap();
        assert!(check_vacuum_relation(&m, 0, &lhs, &rhs).unwrap().pass);
        let wrong = Poly::parse(&format!("x^{}", n + 1), &vars).unwrap();
        assert!(!check_vacuum_relation(&m, 0, &wrong, &rhs).unwrap().pass);
    }
}

#[test]
fn single_matter_field() {
    let mass = Poly::parse("-lambda1", &["lambda1"]).unwrap();
    let m = GlsmModel::new(1, vec![Matter::new(vec![1], 0).with_mass(mass)], vec![], vec![q(1)]).unwrap();
    let g = EffectivePotential::from_model(&m).unwrap().exp_grad(0).unwrap();
    assert_eq!(g.factors.len(), 1);
    assert_eq!(g.factors[0].1, -1);
    let values = BTreeMap::from([("lambda1".to_string(), q(3))]);
    // 1/(x - 3), stored normalized at the constant term
    let rf = g.rational_function(&values).unwrap();
    assert_eq!(rf.numerator().coeffs(), [Rational::new(-1, 3)]);
    assert_eq!(rf.denominator().coeffs(), [q(1), Rational::new(-1, 3)]);
}

#[test]
fn bound_masses_are_substituted() {
    let params = BTreeMap::from([("lambda1".to_string(), q(2)), ("lambda2".to_string(), q(-1))]);
    let m = projective(2).with_params(params);
    let g = EffectivePotential::from_model(&m).unwrap().exp_grad(0).unwrap();
    assert_eq!(g.vars(), ["x"]);
    let vars = ["x", "q"];
    let lhs = Poly::parse("(x-2)*(x+1)", &vars).unwrap();
    assert!(check_vacuum_relation(&m, 0, &lhs, &Poly::parse("q", &vars).unwrap()).unwrap().pass);
}

#[test]
fn grassmannian_weyl_sign() {
    for r in 1..=4 {
        let m = TargetSpec::Grassmannian { r, n: 5 }.glsm_model().unwrap();
        let w = EffectivePotential::from_model(&m).unwrap();
        for k in 0..r {
            let g = w.exp_grad(k).unwrap();
            assert_eq!(g.sign, if r % 2 == 1 { 1 } else { -1 }, "r={r} k={k}");
        }
    }
}

/// Cleared vacuum equation built directly:
/// `∏_j (x_k-λ_j) ∏_{j≠k}(x_k-x_j+μ) = (-1)^n q ∏_j (x_k-λ_j+μ) ∏_{j≠k}(x_k-x_j-μ)`.
fn vacuum_cleared(r: usize, n: usize, k: usize, vars: &[String]) -> (Poly, Poly) {
    let x = |i: usize| if r == 1 { "x".to_string() } else { format!("x{}", i + 1) };
    let p = |s: String| Poly::parse(&s, vars).unwrap();
    let mut lhs = Poly::one(vars);
    let mut rhs = p("q".into()).scale(&q(if n % 2 == 0 { 1 } else { -1 }));
    for j in 1..=n {
        lhs = lhs.mul_poly(&p(format!("{}-lambda{j}", x(k))));
        rhs = rhs.mul_poly(&p(format!("{}-lambda{j}+mu", x(k))));
    }
    for j in (0..r).filter(|&j| j != k) {
        lhs = lhs.mul_poly(&p(format!("{}-{}+mu", x(k), x(j))));
        rhs = rhs.mul_poly(&p(format!("{}-{}-mu", x(k), x(j))));
    }
    (lhs, rhs)
}

#[test]
fn tstar_vacuum_equations() {
    for r in 1..=3 {
        for n in r..=4 {
            let eqs = bethe_equations(&tstar(r, n)).unwrap();
            assert_eq!(eqs.len(), r);
            for eq in &eqs {
                assert_eq!(eq.coefficient, q(if n % 2 == 0 { 1 } else { -1 }));
                assert_eq!(eq.marker, "q");
                assert_eq!(eq.lhs_numerator.len(), n);
                assert_eq!(eq.lhs_denominator.len(), n);
                assert_eq!(eq.rhs_numerator.len(), r - 1);
                let (lhs, rhs) = eq.cleared();
                let vars = lhs.vars().to_vec();
                let (want_l, want_r) = vacuum_cleared(r, n, eq.index, &vars);
                assert_eq!(lhs, want_l, "r={r} n={n}");
                assert_eq!(rhs, want_r, "r={r} n={n}");
            }
        }
    }
}

#[test]
fn rank_one_has_no_interaction() {
    let eqs = bethe_equations(&tstar(1, 3)).unwrap();
    assert_eq!(eqs.len(), 1);
    assert!(eqs[0].rhs_numerator.is_empty() && eqs[0].rhs_denominator.is_empty());
    assert!(eqs[0].interaction_is_trivial());
}

#[test]
fn massless_adjoint_degenerates() {
    let (r, n) = (3, 4);
    let mut values: BTreeMap<String, Rational> = lambdas(n).into_iter().zip([q(1), q(-2), Rational::new(1, 3), q(5)]).collect();
    values.insert("mu".into(), q(0));
    for eq in bethe_equations(&tstar(r, n)).unwrap() {
        let eq = eq.specialize(&values).unwrap();
        assert!(eq.interaction_is_trivial());
        assert!(eq.single_is_trivial());
    }
    values.insert("mu".into(), q(1));
    let eq = bethe_equations(&tstar(r, n)).unwrap()[0].specialize(&values).unwrap();
    assert!(!eq.interaction_is_trivial());
}

#[test]
fn spin_chain_shape() {
    for r in 1..=3 {
        for n in r..=4 {
            for rep in spin_chain_check(r, n).unwrap() {
                assert!(rep.pass, "r={r} n={n} {rep:?}");
            }
        }
    }
}

#[test]
fn spin_chain_needs_the_shift() {
    // without x -> u + i the equation is not of Bethe form
    let i = GaussianRational::i();
    let half = GaussianRational::from(Rational::new(1, 2));
    let mut values: BTreeMap<String, GaussianRational> = lambdas(2).into_iter().map(|l| (l, i.clone() * half.clone())).collect();
    values.insert("mu".into(), -i.clone());
    let eq = bethe_equations(&tstar(1, 2)).unwrap()[0].specialize(&values).unwrap();
    let (lhs, _) = eq.cleared();
    let u = MultiPoly::<GaussianRational>::var(lhs.vars(), "x").unwrap();
    let want = (&u + &MultiPoly::constant(lhs.vars(), i.clone() * half.clone())).pow(2);
    assert_ne!(lhs, want);
    let shifted = eq.shift_gauge(&[i]).unwrap().cleared().0;
    assert_eq!(shifted, want);
}

#[test]
fn bethe_json() {
    let eqs = bethe_equations(&tstar(2, 2)).unwrap();
    let v = serde_json::to_value(&eqs).unwrap();
    let e = &v[0];
    assert_eq!(e["coefficient"], "1");
    assert_eq!(e["marker"], "q");
    assert_eq!(e["lhs"]["numerator"].as_array().unwrap().len(), 2);
    assert_eq!(e["rhs"]["denominator"].as_array().unwrap().len(), 1);
    assert_eq!(e["variables"][0], "x1");
}

proptest! {
    #[test]
    fn projective_gradient_times_product_is_one(
        ls in prop::collection::vec((-20i64..20, 1i64..6), 1..5),
        x in (-50i64..50, 1i64..7),
    ) {
        let n = ls.len();
        let values: BTreeMap<String, Rational> =
            lambdas(n).into_iter().zip(ls.iter().map(|&(a, b)| Rational::new(a, b))).collect();
        let x = Rational::new(x.0, x.1);
        prop_assume!(values.values().all(|l| *l != x));
        let g = EffectivePotential::from_model(&projective(n)).unwrap().exp_grad(0).unwrap();
        let rf = g.rational_function(&values).unwrap();
        let prod: Rational = values.values().map(|l| &x - l).product();
        let v = rf.numerator().eval(&x) / rf.denominator().eval(&x);
        prop_assert!((v * prod).is_one());
    }
}
