use std::sync::Arc;

use num_complex::Complex64;

use grslab::basis::uniform_rule;
use grslab::catalog::{make_example, ExampleSpec};
use grslab::function::FunctionRep;
use grslab::hamiltonian::{
    apply_spectral, fd_matrix, Direction, HamiltonianKind, SpectralHamiltonian,
};
use grslab::krein::Workspace;
use grslab::metric::Sign;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn shifted_lambdas(a: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| c(2.0 * k as f64 + 1.0 + a * a, 0.0))
        .collect()
}

fn span_element(sys: &grslab::grs::BiorthogonalSystem, coeffs: &[Complex64]) -> FunctionRep {
    let terms: Vec<(Complex64, &FunctionRep)> = coeffs.iter().copied().zip(sys.phi()).collect();
    sys.workspace().combine(&terms).unwrap()
}

#[test]
fn spectral_and_differential_operators_agree_on_the_span() {
    let a = 0.5;
    let n = 8;
    let sys = make_example(&ExampleSpec::shifted_ho(a, n)).unwrap();
    let h = SpectralHamiltonian::new(shifted_lambdas(a, n), &sys, Direction::PhiPsi).unwrap();
    let grid = Arc::new(uniform_rule(12.0, 4000).unwrap());
    let fd = fd_matrix(HamiltonianKind::ShiftedHo { a }, grid.clone()).unwrap();
    let fine = Workspace::new(grid);

    let coeffs = [
        c(1.0, 0.0),
        c(0.0, -0.5),
        c(0.3, 0.2),
        c(-0.4, 0.0),
        c(0.1, 0.1),
        c(0.0, 0.25),
        c(0.2, -0.1),
        c(0.05, 0.0),
    ];
    let f = span_element(&sys, &coeffs);
    let spectral = fine.sample(&apply_spectral(&h, &f).unwrap()).unwrap();
    let samples = fine.sample(&f).unwrap();
    let differential = fd.apply(samples.as_sampled().unwrap().values()).unwrap();

    let s = spectral.as_sampled().unwrap().values();
    let interior = 1..s.len() - 1;
    let num: f64 = interior
        .clone()
        .map(|j| (s[j] - differential[j]).norm_sqr())
        .sum();
    let den: f64 = interior.map(|j| s[j].norm_sqr()).sum();
    let rel = (num / den).sqrt();
    assert!(rel <= 1e-2, "relative L2 mismatch {rel:e}");
}

#[test]
fn real_spectrum_is_symmetric_in_the_minus_q_product() {
    let a = 0.75;
    let n = 8;
    let sys = make_example(&ExampleSpec::shifted_ho(a, n)).unwrap();
    let h = SpectralHamiltonian::new(shifted_lambdas(a, n), &sys, Direction::PhiPsi).unwrap();
    let ws = sys.workspace();
    let f = span_element(&sys, &[c(1.0, 0.0), c(0.0, 1.0), c(0.5, -0.5)]);
    let g = span_element(&sys, &[c(0.0, 0.0), c(0.2, 0.0), c(-1.0, 0.3), c(0.0, 0.7)]);
    let hf = h.apply(&f).unwrap();
    let hg = h.apply(&g).unwrap();
    let lhs = ws.weighted_inner(sys.q(), Sign::Minus, &hf, &g).unwrap();
    let rhs = ws.weighted_inner(sys.q(), Sign::Minus, &f, &hg).unwrap();
    assert!((lhs - rhs).norm() <= 1e-8, "{lhs} vs {rhs}");
}
