use aglsm::algebra::{Poly, Rational, UniPoly};
use aglsm::residue::{jk_residue, jk_total, univariate_residue, AffineForm, Arrangement, Integrand, LinearFactor, PoleAssignment, RatExpr};
use aglsm::Error;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn poly(s: &str, vars: &[&str]) -> Poly {
    Poly::parse_strict(s, vars).unwrap()
}

fn x_minus(n: usize, k: usize, a: Rational) -> AffineForm {
    AffineForm::var_minus(n, k, &a)
}

#[test]
fn residue_of_x3_over_x4_is_one() {
    let e = RatExpr::new(&["x"], poly("x^3", &["x"]), vec![(x_minus(1, 0, q(0)), 4)]).unwrap();
    assert_eq!(e.residue_at(0, &q(0)).unwrap().as_scalar().unwrap(), q(1));
}

#[test]
fn simple_pole_residue() {
    let (l1, l2) = (qq(1, 3), q(2));
    let p = poly("x^3 + 2*x + 7", &["x"]);
    let e = RatExpr::new(
        &["x"],
        p.clone(),
        vec![(x_minus(1, 0, l1.clone()), 1), (x_minus(1, 0, l2.clone()), 1)],
    )
    .unwrap();
    let got = e.residue_at(0, &l1).unwrap().as_scalar().unwrap();
    let expected = p.eval(&[l1.clone()]) / (l1 - l2);
    assert_eq!(got, expected);
}

#[test]
fn no_pole_gives_zero() {
    let e = RatExpr::new(&["x"], poly("x^5", &["x"]), vec![(x_minus(1, 0, q(0)), 4)]).unwrap();
    assert_eq!(e.residue_at(0, &q(0)).unwrap().as_scalar().unwrap(), q(0));
}

#[test]
fn iterated_residue_examples() {
    let xy = ["x", "y"];
    let e = RatExpr::new(
        &xy,
        poly("x*y", &xy),
        vec![(x_minus(2, 0, q(0)), 2), (x_minus(2, 1, q(0)), 2)],
    )
    .unwrap();
    assert_eq!(e.iterated_residue(&[(0, q(0)), (1, q(0))]).unwrap(), q(1));

    let v = ["x1", "x2"];
    let e = RatExpr::new(&v, Poly::one(&v), vec![(x_minus(2, 0, q(0)), 1), (x_minus(2, 1, q(0)), 1)]).unwrap();
    assert_eq!(e.iterated_residue(&[(0, q(0)), (1, q(0))]).unwrap(), q(1));
}

/// Coefficient of x1^{a-1} x2^{b-1} in the numerator, computed directly.
fn coefficient_oracle(num: &Poly, a: u32, b: u32) -> Rational {
    if a == 0 || b == 0 {
        return q(0);
    }
    num.coefficient(&[a - 1, b - 1])
}

#[test]
fn vandermonde_square_residue() {
    let v = ["x1", "x2"];
    // x1^3 x2^3 (x1-x2)^2 / (x1^4 x2^4): the x1^{-1} x2^{-1} coefficient vanishes
    let num = poly("x1^3*x2^3*(x1-x2)^2", &v);
    let e = RatExpr::new(&v, num.clone(), vec![(x_minus(2, 0, q(0)), 4), (x_minus(2, 1, q(0)), 4)]).unwrap();
    let got = e.iterated_residue(&[(0, q(0)), (1, q(0))]).unwrap();
    assert_eq!(got, coefficient_oracle(&num, 4, 4));
    assert_eq!(got, q(0));
    // (x1-x2)^2 / (x1^2 x2^2): the x1 x2 coefficient of (x1-x2)^2 is -2
    let num = poly("(x1-x2)^2", &v);
    let e = RatExpr::new(&v, num.clone(), vec![(x_minus(2, 0, q(0)), 2), (x_minus(2, 1, q(0)), 2)]).unwrap();
    let got = e.iterated_residue(&[(0, q(0)), (1, q(0))]).unwrap();
    assert_eq!(got, coefficient_oracle(&num, 2, 2));
    assert_eq!(got, q(-2));
}

#[test]
fn jk_examples() {
    let one = Poly::one(&["x1", "x2"]);
    let arr = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![0, 1], 1)], vec![q(1), q(1)]).unwrap();
    assert_eq!(jk_residue(&arr, &one, &[(vec![1, 0], 1), (vec![0, 1], 1)]).unwrap(), q(1));

    let arr = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![0, 1], 1)], vec![q(-1), q(1)]).unwrap();
    assert_eq!(jk_residue(&arr, &one, &[(vec![1, 0], 1), (vec![0, 1], 1)]).unwrap(), q(0));

    let arr = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![1, 1], 1)], vec![q(2), q(1)]).unwrap();
    let got = jk_residue(&arr, &one, &[(vec![1, 0], 1), (vec![1, 1], 1)]).unwrap();
    // partial-fraction oracle: the only basis {x1, x1+x2} has det 1 and contains η
    let det = q(1) * q(1) - q(0) * q(1);
    assert_eq!(got, q(1) / det);
}

#[test]
fn jk_rank_one_is_coefficient_extraction() {
    let arr = Arrangement::new(1, vec![(vec![1], 1)], vec![q(1)]).unwrap();
    let p = poly("3*x^4 + 5*x^2 - x", &["x"]);
    for n in 1..7u32 {
        let got = jk_residue(&arr, &p, &[(vec![1], n)]).unwrap();
        assert_eq!(got, p.coefficient(&[n - 1]));
    }
    let arr = Arrangement::new(1, vec![(vec![1], 1)], vec![q(-1)]).unwrap();
    assert_eq!(jk_residue(&arr, &p, &[(vec![1], 3)]).unwrap(), q(0));
}

#[test]
fn jk_degenerate_and_nonprojective() {
    let r = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![0, 1], 1)], vec![q(1), q(0)]);
    assert!(matches!(r, Err(Error::DegenerateFi(_))));
    let r = Arrangement::new(1, vec![(vec![1], 1), (vec![-1], 1)], vec![q(1)]);
    assert_eq!(r, Err(Error::NonProjective));
    let r = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![-1, 1], 1), (vec![0, -1], 1)], vec![q(1), q(3)]);
    assert_eq!(r, Err(Error::NonProjective));
}

#[test]
fn jk_vanishes_off_degree() {
    let v = ["x1", "x2"];
    let arr = Arrangement::new(2, vec![(vec![1, 0], 1), (vec![1, 1], 1), (vec![0, 1], 1)], vec![q(2), q(1)]).unwrap();
    let dens = [(vec![1, 0], 2), (vec![1, 1], 1), (vec![0, 1], 1)];
    // total denominator degree 4, so only degree-2 numerators can contribute
    for s in ["1", "x1", "x1^3", "x2^3 + x1^4*x2"] {
        assert_eq!(jk_residue(&arr, &poly(s, &v), &dens).unwrap(), q(0), "{s}");
    }
}

#[test]
fn jk_dependent_triple_matches_partial_fractions() {
    // 1/(x1 · x2 · (x1+x2)) with numerator x1: equals 1/(x2 (x1+x2)),
    // whose only basis {x2, x1+x2} has det -1.
    let v = ["x1", "x2"];
    let dens = [(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)];
    let arr = Arrangement::new(2, dens.iter().map(|(w, k)| (w.clone(), *k)).collect(), vec![q(1), q(2)]).unwrap();
    let got = jk_residue(&arr, &poly("x1", &v), &dens).unwrap();
    // η = (1,2) = (1,1) + (0,1) lies in Cone{x2, x1+x2}
    assert_eq!(got, q(1));
    let arr = Arrangement::new(2, dens.iter().map(|(w, k)| (w.clone(), *k)).collect(), vec![q(2), q(1)]).unwrap();
    assert_eq!(jk_residue(&arr, &poly("x1", &v), &dens).unwrap(), q(0));
    // numerator x1 + x2 cancels the third factor: 1/(x1 x2), always 1 in the positive quadrant
    assert_eq!(jk_residue(&arr, &poly("x1+x2", &v), &dens).unwrap(), q(1));
}

#[test]
fn jk_total_shifted_poles() {
    // rank 1: P(x)/((x-a)(x-b)) with η>0 picks both poles
    let p = poly("x^2", &["x"]);
    let integrand = Integrand {
        rank: 1,
        polys: vec![p],
        linear: vec![
            LinearFactor { weight: vec![1], constant: -qq(1, 3), exponent: -1 },
            LinearFactor { weight: vec![1], constant: -q(2), exponent: -1 },
            LinearFactor { weight: vec![1], constant: q(0), exponent: -1 },
        ],
    };
    // x^2/(x (x-1/3)(x-2)): residues 0, (1/3)/(1/3-2), 2/(2-1/3) sum to 1
    assert_eq!(jk_total(&integrand, &[q(1)]).unwrap(), q(1));
}

#[test]
fn sum_residues_examples() {
    let (l1, l2) = (qq(-2, 5), q(3));
    let dens = vec![(x_minus(1, 0, l1.clone()), 1), (x_minus(1, 0, l2.clone()), 1)];
    let poles = [PoleAssignment::new(vec![(0, l1.clone())]), PoleAssignment::new(vec![(0, l2.clone())])];
    let e = |s: &str| RatExpr::new(&["x"], poly(s, &["x"]), dens.clone()).unwrap();
    assert_eq!(e("1").sum_residues(&poles).unwrap(), q(0));
    assert_eq!(e("x").sum_residues(&poles).unwrap(), q(1));
    let direct = l1.clone() * l1.clone() / (l1.clone() - l2.clone()) + l2.clone() * l2.clone() / (l2.clone() - l1.clone());
    assert_eq!(e("x^2").sum_residues(&poles).unwrap(), direct);
    assert_eq!(direct, l1 + l2);
}

#[test]
fn sum_residues_rejects_coincident_poles() {
    let dens = vec![(x_minus(1, 0, q(1)), 1), (x_minus(1, 0, q(1)), 1)];
    let e = RatExpr::new(&["x"], Poly::one(&["x"]), dens).unwrap();
    let poles = [PoleAssignment::new(vec![(0, q(1))]), PoleAssignment::new(vec![(0, q(1))])];
    assert!(matches!(e.sum_residues(&poles), Err(Error::NonGeneric(_))));
}

#[test]
fn laurent_residue_matches_affine_path() {
    // (x^4 + 1) / ((x - 1)^3 (x + 2))
    let num = UniPoly::new(vec![q(1), q(0), q(0), q(0), q(1)]);
    let den = UniPoly::from_roots(&[q(1), q(1), q(1), q(-2)]);
    let a = univariate_residue(&num, &den, &q(1)).unwrap();
    let e = RatExpr::new(
        &["x"],
        poly("x^4 + 1", &["x"]),
        vec![(x_minus(1, 0, q(1)), 3), (x_minus(1, 0, q(-2)), 1)],
    )
    .unwrap();
    assert_eq!(e.residue_at(0, &q(1)).unwrap().as_scalar().unwrap(), a);
    let b = univariate_residue(&num, &den, &q(-2)).unwrap();
    // residue theorem: finite residues plus residue at infinity (-1 for this degree 0 excess)
    assert_eq!(a + b, q(1));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| Rational::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_theorem_on_random_forms(
        roots in prop::collection::vec(small_rational(), 2..5),
        powers in prop::collection::vec(1u32..3, 4),
        coeffs in prop::collection::vec(-5i64..6, 0..4),
    ) {
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let total: u32 = powers.iter().take(distinct.len()).sum();
        let num_deg = (total as usize).saturating_sub(2).min(coeffs.len());
        let mut p = Poly::zero(&["x"]);
        for (k, c) in coeffs.iter().take(num_deg).enumerate() {
            p.add_term(vec![k as u32], q(*c));
        }
        let dens: Vec<(AffineForm, u32)> = distinct
            .iter()
            .zip(&powers)
            .map(|(r, k)| (x_minus(1, 0, r.clone()), *k))
            .collect();
        let e = RatExpr::new(&["x"], p, dens).unwrap();
        let poles: Vec<PoleAssignment> = distinct.iter().map(|r| PoleAssignment::new(vec![(0, r.clone())])).collect();
        prop_assert_eq!(e.sum_residues(&poles).unwrap(), q(0));
    }

    #[test]
    fn iterated_residue_matches_partial_fractions(
        a in small_rational(), b in small_rational(), c in small_rational(),
        n in prop::collection::vec(-4i64..5, 4),
    ) {
        prop_assume!(a != b && c != q(0));
        // N(x,y) / ((x-a)(x-b)(y-c)(y - x)) at (x=a, y=c): simple poles, so the value is
        // N(a,c) / ((a-b)(c-a)) by partial fractions
        let v = ["x", "y"];
        let num = Poly::from_terms(&v, vec![
            (vec![0, 0], q(n[0])), (vec![1, 0], q(n[1])), (vec![0, 1], q(n[2])), (vec![1, 1], q(n[3])),
        ]);
        prop_assume!(c != a);
        let dens = vec![
            (x_minus(2, 0, a.clone()), 1),
            (x_minus(2, 0, b.clone()), 1),
            (x_minus(2, 1, c.clone()), 1),
            (AffineForm::new(vec![q(-1), q(1)], q(0)), 1),
        ];
        let e = RatExpr::new(&v, num.clone(), dens).unwrap();
        let got = e.iterated_residue(&[(1, c.clone()), (0, a.clone())]).unwrap();
        let expected = num.eval(&[a.clone(), c.clone()]) / ((a.clone() - b) * (c.clone() - a.clone()));
        prop_assert_eq!(got.clone(), expected);
        let swapped = e.iterated_residue(&[(0, a.clone()), (1, c.clone())]).unwrap();
        prop_assert_eq!(got, swapped);
    }

    #[test]
    fn jk_is_linear_in_numerator(
        a in prop::collection::vec(-5i64..6, 6),
        b in prop::collection::vec(-5i64..6, 6),
        s in small_rational(),
    ) {
        let v = ["x1", "x2"];
        let dens = [(vec![1, 0], 2), (vec![1, 1], 2), (vec![0, 1], 1)];
        let arr = Arrangement::new(2, dens.iter().map(|(w, k)| (w.clone(), *k)).collect(), vec![q(3), q(1)]).unwrap();
        let mk = |c: &[i64]| Poly::from_terms(&v, vec![
            (vec![3, 0], q(c[0])), (vec![2, 1], q(c[1])), (vec![1, 2], q(c[2])), (vec![0, 3], q(c[3])),
            (vec![1, 0], q(c[4])), (vec![0, 0], q(c[5])),
        ]);
        let (pa, pb) = (mk(&a), mk(&b));
        let lhs = jk_residue(&arr, &pa.add_poly(&pb.scale(&s)), &dens).unwrap();
        let rhs = jk_residue(&arr, &pa, &dens).unwrap() + s * jk_residue(&arr, &pb, &dens).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn jk_total_matches_iterated_residues_on_product_arrangement() {
    // rank 2, poles x1 ∈ {0, 1}, x2 ∈ {0, 2}: with η in the positive quadrant the
    // JK sum picks every product pole, which equals the sum of iterated residues.
    let v = ["x1", "x2"];
    let p = poly("x1^3*x2 + 2*x1*x2^2 + x2^3 - x1", &v);
    let integrand = Integrand {
        rank: 2,
        polys: vec![p.clone()],
        linear: vec![
            LinearFactor { weight: vec![1, 0], constant: q(0), exponent: -2 },
            LinearFactor { weight: vec![1, 0], constant: q(-1), exponent: -1 },
            LinearFactor { weight: vec![0, 1], constant: q(0), exponent: -1 },
            LinearFactor { weight: vec![0, 1], constant: q(-2), exponent: -2 },
        ],
    };
    let got = jk_total(&integrand, &[q(1), q(1)]).unwrap();
    let e = RatExpr::new(
        &v,
        p,
        vec![
            (x_minus(2, 0, q(0)), 2),
            (x_minus(2, 0, q(1)), 1),
            (x_minus(2, 1, q(0)), 1),
            (x_minus(2, 1, q(2)), 2),
        ],
    )
    .unwrap();
    let mut expected = q(0);
    for a in [q(0), q(1)] {
        for b in [q(0), q(2)] {
            expected += e.iterated_residue(&[(0, a.clone()), (1, b)]).unwrap();
        }
    }
    assert_eq!(got, expected);
}
