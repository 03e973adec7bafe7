use std::sync::Arc;

use hypolab::exact::{cq, format_q, parse_q, q, qf, Q, CQ};
use hypolab::lie::json::{algebra_from_json, algebra_to_json, enveloping_from_json, enveloping_to_json};
use hypolab::lie::{build_algebra, build_ktilde_in, AlgebraElement, DilationAction, EnvelopingPolynomial, GradedLieAlgebra};
use hypolab::spectral::{
    assemble_k, assemble_polydiffop, from_coo, maximal_constant, to_coo, CsrMatrix, EstimateForm, FieldSpec,
    HermiteFourierBasis, TrigTerm, C64,
};
use hypolab::weyl::json::{polydiffop_from_json, polydiffop_to_json};
use hypolab::weyl::{build_standard_rep, phase_space_vars, rep_apply, Monomial, PolyDiffOp};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| qf(n, d))
}

fn complex_rational() -> impl Strategy<Value = CQ> {
    (rational(), rational()).prop_map(|(a, b)| cq(a, b))
}

fn element(n: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(rational(), n).prop_map(|coeffs| AlgebraElement { coeffs })
}

fn algebra(d: usize) -> Arc<GradedLieAlgebra> {
    Arc::new(build_algebra(d).unwrap())
}

fn polynomial(d: usize) -> impl Strategy<Value = EnvelopingPolynomial> {
    let g = algebra(d);
    let n = g.dim();
    prop::collection::vec((prop::collection::vec(0..n, 0..4), complex_rational()), 0..6).prop_map(move |terms| {
        let mut p = EnvelopingPolynomial::zero(g.clone());
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    })
}

/// Random operator on `(v1, v2, x1, x2)` with small exponents.
fn operator() -> impl Strategy<Value = PolyDiffOp> {
    let mono = (prop::collection::vec(0u32..3, 4), prop::collection::vec(0u32..3, 4));
    prop::collection::vec((mono, complex_rational()), 0..5).prop_map(|terms| {
        let mut op = PolyDiffOp::zero(phase_space_vars(2));
        for ((poly, deriv), c) in terms {
            op.add_term(Monomial { poly, deriv }, c);
        }
        op
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_bilinear_and_antisymmetric(
        (d, x, y, z) in (2usize..=3).prop_flat_map(|d| {
            let n = build_algebra(d).unwrap().dim();
            (Just(d), element(n), element(n), element(n))
        }),
        s in rational(),
    ) {
        let g = algebra(d);
        let lhs = g.bracket(&x.scale(&s).add(&z).unwrap(), &y).unwrap();
        let rhs = g.bracket(&x, &y).unwrap().scale(&s).add(&g.bracket(&z, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(g.bracket(&x, &y).unwrap().add(&g.bracket(&y, &x).unwrap()).unwrap().is_zero());
        prop_assert!(g.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn dilations_compose(p in polynomial(2), t in rational(), s in rational()) {
        let delta = DilationAction::new(p.algebra());
        prop_assert_eq!(delta.apply(&t, &delta.apply(&s, &p)), delta.apply(&(&t * &s), &p));
        prop_assert_eq!(delta.apply(&q(1), &p), p.clone());
        let formal = p.dilate();
        prop_assert_eq!(formal.evaluate(&t), delta.apply(&t, &p));
    }

    #[test]
    fn grading_adds_under_products(p in polynomial(3), r in polynomial(3)) {
        prop_assert!(p.mul(&r).is_ok());
        for (u, _) in p.terms() {
            for (v, _) in r.terms() {
                let joined: Vec<usize> = u.iter().chain(v).copied().collect();
                prop_assert_eq!(p.grading(&joined), p.grading(u) + p.grading(v));
            }
        }
    }

    #[test]
    fn ktilde_is_homogeneous_of_degree_two(b in rational(), d in 2usize..=3) {
        let g = algebra(d);
        let k = build_ktilde_in(&g, &b, d).unwrap();
        prop_assert!(k.is_homogeneous(2));
        let dilated = k.dilate();
        prop_assert_eq!(dilated.as_monomial(2), Some(&k));
    }

    #[test]
    fn composition_is_associative(a in operator(), b in operator(), c in operator()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn adjoint_is_an_antihomomorphic_involution(a in operator(), b in operator()) {
        prop_assert_eq!(a.formal_adjoint().formal_adjoint(), a.clone());
        let lhs = a.compose(&b).unwrap().formal_adjoint();
        let rhs = b.formal_adjoint().compose(&a.formal_adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_is_a_derivation(a in operator(), b in operator(), c in operator()) {
        let lhs = a.commutator(&b.compose(&c).unwrap()).unwrap();
        let rhs = a.commutator(&b).unwrap().compose(&c).unwrap().add(&b.compose(&a.commutator(&c).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trips(p in polynomial(2), op in operator(), d in 2usize..=3) {
        let g = build_algebra(d).unwrap();
        prop_assert_eq!(algebra_from_json(&algebra_to_json(&g)).unwrap(), g);
        prop_assert_eq!(enveloping_from_json(&enveloping_to_json(&p)).unwrap(), p.clone());
        prop_assert_eq!(polydiffop_from_json::<CQ>(&polydiffop_to_json(&op)).unwrap(), op.clone());
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let x = qf(n, d);
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn rational_parser_never_panics(s in "\\PC{0,40}") {
        let _ = parse_q(&s);
    }

    #[test]
    fn coo_round_trips(entries in prop::collection::vec((0usize..7, 0usize..5, -1e3f64..1e3, -1e3f64..1e3), 0..30)) {
        let m = CsrMatrix::from_triplets(7, 5, entries.into_iter().map(|(i, j, a, b)| (i, j, C64::new(a, b))));
        let doc = from_coo(&to_coo(&m, "abc")).unwrap();
        prop_assert_eq!(doc.matrix, m);
        prop_assert_eq!(doc.basis, "abc");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symbolic_and_spectral_k_agree(num in -12i64..=12, den in 1i64..=4, seed in any::<u64>()) {
        let b = qf(num, den);
        let basis = HermiteFourierBasis::new(2, 5, 1).unwrap();
        let rep = build_standard_rep(2).unwrap();
        let symbolic = rep_apply(&rep, &build_ktilde_in(rep.algebra(), &b, 2).unwrap()).unwrap();
        let via_rep = assemble_polydiffop(&basis, &symbolic).unwrap();
        let direct = assemble_k(&basis, &FieldSpec::constant(2, vec![num as f64 / den as f64]).unwrap(), 0.0).unwrap();
        let u = hypolab::spectral::random_vector(basis.dim(), seed);
        let (x, y) = (via_rep.apply(&u), direct.apply(&u));
        let err = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10, "err = {err}");
    }

    #[test]
    fn field_values_are_real_and_bounded_by_the_norm(
        mean in -3.0f64..3.0,
        c in -2.0f64..2.0,
        s in -2.0f64..2.0,
        m1 in -2i64..=2,
        m2 in 0i64..=2,
        x1 in 0.0f64..1.0,
        x2 in 0.0f64..1.0,
    ) {
        let f = FieldSpec::trig(2, vec![mean], &[TrigTerm { mode: vec![m1, m2], cos: vec![c], sin: vec![s] }]).unwrap();
        let direct = mean + c * (2.0 * std::f64::consts::PI * (m1 as f64 * x1 + m2 as f64 * x2)).cos()
            + s * (2.0 * std::f64::consts::PI * (m1 as f64 * x1 + m2 as f64 * x2)).sin();
        let v = f.eval(&[x1, x2])[0];
        prop_assert!((v - direct).abs() < 1e-12);
        prop_assert!(f.lipschitz_norm() >= v.abs() - 1e-12);
    }
}

/// Reversing every Fourier mode is a unitary relabelling of the basis that
/// maps the operator for `b(x)` to the one for `b(−x)`; for an even field the
/// pencil is permuted and the constant is unchanged.
#[test]
fn estimate_invariant_under_fourier_reindexing() {
    let basis = HermiteFourierBasis::new(2, 5, 1).unwrap();
    let f = FieldSpec::trig(2, vec![1.0], &[TrigTerm { mode: vec![1, 0], cos: vec![0.5], sin: vec![] }]).unwrap();
    let p = hypolab::spectral::build_pencil(&basis, &f, EstimateForm::Theorem, Default::default()).unwrap();
    let dom = basis.domain();
    let perm: Vec<usize> = (0..dom.dim())
        .map(|i| {
            let (h, m) = dom.decode(i);
            let flipped: Vec<i64> = m.iter().map(|x| -x).collect();
            dom.index(&h, &flipped).unwrap()
        })
        .collect();
    let (a, b) = (p.a.permute_symmetric(&perm), p.b.permute_symmetric(&perm));
    let opts = hypolab::spectral::SolverOptions::default();
    let l0 = hypolab::spectral::pencil_max(&p.a, &p.b, &opts).unwrap().lambda;
    let l1 = hypolab::spectral::pencil_max(&a, &b, &opts).unwrap().lambda;
    assert!((l0 - l1).abs() <= 1e-8 * l0);
    let direct = maximal_constant(&basis, &f, EstimateForm::Theorem).unwrap().lambda_max;
    assert!((direct - l0).abs() <= 1e-12 * l0);
}
