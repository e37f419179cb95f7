use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use grslab::basis::{gauss_hermite_rule, BasisSet};
use grslab::catalog::{make_example, overlap_closed_form, ExampleSpec};
use grslab::function::FunctionRep;
use grslab::grs::g0_quadratic_check;
use grslab::krein::{apply_parity, hermitian_defect, Product, Workspace};
use grslab::metric::{Exponent, Expr, MetricOperatorQ};

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
        len,
    )
}

// Scale 1 makes products of two Hermite functions exact on the rule.
fn hermite_ws(order: usize) -> Workspace {
    Workspace::new(Arc::new(gauss_hermite_rule(order, 1.0).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parity_is_an_involution(c in coeffs(10), shift in -0.5..0.5f64) {
        let basis = Arc::new(BasisSet::hermite(10));
        let f = FunctionRep::shifted_expansion(basis, c, Complex64::new(0.0, shift)).unwrap();
        let ws = hermite_ws(60);
        let twice = apply_parity(&apply_parity(&f).unwrap()).unwrap();
        prop_assert!(ws.distance(&twice, &f).unwrap() < 1e-12);

        let s = ws.sample(&f).unwrap();
        let twice = apply_parity(&apply_parity(&s).unwrap()).unwrap();
        prop_assert!(ws.distance(&twice, &s).unwrap() < 1e-12);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(c in coeffs(8), d in coeffs(8)) {
        let basis = Arc::new(BasisSet::hermite(8));
        let f = FunctionRep::expansion(basis.clone(), c).unwrap();
        let g = FunctionRep::expansion(basis, d).unwrap();
        let ws = hermite_ws(40);
        let fg = ws.inner(&f, &g).unwrap();
        let gf = ws.inner(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-12);
        let kfg = ws.krein_inner(&f, &g).unwrap();
        let kgf = ws.krein_inner(&g, &f).unwrap();
        prop_assert!((kfg - kgf.conj()).norm() < 1e-12);
        // Coefficient and sampled forms agree.
        let sampled = ws.inner(&ws.sample(&f).unwrap(), &ws.sample(&g).unwrap()).unwrap();
        prop_assert!((fg - sampled).norm() < 1e-10);
    }

    #[test]
    fn krein_gram_is_hermitian(a in 0.05..1.0f64, n in 2usize..12) {
        let sys = make_example(&ExampleSpec::shifted_ho(a, n)).unwrap();
        let g = sys.workspace().gram(sys.phi(), Product::Krein).unwrap();
        prop_assert!(hermitian_defect(&g) < 1e-10);
    }

    #[test]
    fn translation_exponentials_compose(a in -1.0..1.0f64, c in coeffs(6)) {
        let q = MetricOperatorQ::translation(a).unwrap();
        let basis = Arc::new(BasisSet::hermite(6));
        let f = FunctionRep::expansion(basis, c).unwrap();
        let ws = hermite_ws(80);
        let half = ws.apply_exp(&q, Exponent::Half, &f).unwrap();
        let one = ws.apply_exp(&q, Exponent::One, &f).unwrap();
        let twice = ws.apply_exp(&q, Exponent::Half, &half).unwrap();
        prop_assert!(ws.distance(&twice, &one).unwrap() < 1e-9);
        let back = ws.apply_exp(&q, Exponent::MinusHalf, &half).unwrap();
        prop_assert!(ws.distance(&back, &f).unwrap() < 1e-9);
    }

    #[test]
    fn multiplication_exponentials_compose(k in 0.1..1.0f64, c in coeffs(6)) {
        let q = MetricOperatorQ::multiplication(Expr::parse(&format!("(scale {k} (atan x))")).unwrap());
        let basis = Arc::new(BasisSet::hermite(6));
        let ws = hermite_ws(60);
        let f = ws.sample(&FunctionRep::expansion(basis, c).unwrap()).unwrap();
        let forward = ws.apply_exp(&q, Exponent::One, &f).unwrap();
        let back = ws.apply_exp(&q, Exponent::MinusOne, &forward).unwrap();
        prop_assert!(ws.distance(&back, &f).unwrap() < 1e-12);
    }

    #[test]
    fn g0_form_matches_coefficient_norm(a in -1.0..1.0f64, c in coeffs(10)) {
        let sys = make_example(&ExampleSpec::shifted_ho(a, 10)).unwrap();
        let r = g0_quadratic_check(&sys, &c).unwrap();
        prop_assert!(r.defect() <= 1e-7);
        prop_assert!(r.quadrature.re > 0.0 || r.exact == 0.0);
    }

    #[test]
    fn expression_derivative_matches_difference_quotient(
        k in 0.1..2.0f64,
        s in 0.1..1.5f64,
        x in -3.0..3.0f64,
    ) {
        let src = format!("(add (scale {k} (atan x)) (mul (tanh x) (gauss {s})) (pow x 3))");
        let e = Expr::parse(&src).unwrap();
        let d = e.derivative();
        let h = 1e-5;
        let fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
        prop_assert!((d.eval(x) - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{src} at {x}");
        let reparsed: Expr = e.to_string().parse().unwrap();
        prop_assert!((reparsed.eval(x) - e.eval(x)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_overlap_is_symmetric_and_vanishes_on_odd_sums(n in 0usize..20, m in 0usize..20) {
        let v = overlap_closed_form(n, m).unwrap();
        let w = overlap_closed_form(m, n).unwrap();
        prop_assert!((v - w).abs() <= 1e-14 * v.abs().max(1e-300));
        if (n + m) % 2 == 1 {
            prop_assert_eq!(v, 0.0);
        }
    }
}

#[test]
fn j_defect_ignores_global_phase_of_basis() {
    use grslab::csymmetry::j_orthonormality_defect;
    // Rotating every φₙ by a phase leaves [φₙ, φₘ] unchanged, so the defect
    // computed from the Gram matrix must not move either.
    let sys = make_example(&ExampleSpec::shifted_ho(0.5, 8)).unwrap();
    let ws = sys.workspace();
    let phase = Complex64::from_polar(1.0, 0.7);
    let rotated: Vec<FunctionRep> = sys.phi().iter().map(|f| f.scale(phase)).collect();
    let g0 = ws.gram(sys.phi(), Product::Krein).unwrap();
    let g1 = ws.gram(&rotated, Product::Krein).unwrap();
    let diff = (&g0 - &g1).iter().fold(0.0f64, |m, v| m.max(v.norm()));
    assert!(diff < 1e-12);
    assert!(j_orthonormality_defect(&sys).unwrap() < 1e-8);
}
