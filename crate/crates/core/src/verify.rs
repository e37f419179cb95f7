//! Verification suites for the catalog systems. Each suite returns a
//! [`VerificationReport`] of defect-type checks; thresholds are named
//! defaults unless overridden through [`VerifyOptions`].

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{gauss_hermite_rule, uniform_rule, BasisSet, QuadratureRule};
use crate::catalog::{
    make_example, overlap_agreement, overlap_quadrature, ExampleParams, ExampleSpec,
    MAX_OVERLAP_INDEX,
};
use crate::csymmetry::{
    classify_type_with_tol, expansion_residual, j_orthonormality_defect, partner_check,
    sign_sequence_with_tol, CSymmetryOp, Verdict,
};
use crate::defaults::*;
use crate::error::{Error, Result};
use crate::function::FunctionRep;
use crate::grs::{
    biorthogonality_defect, g0_quadratic_check, gq_basis_defect, weighted_orthonormality_defect,
    BiorthogonalSystem,
};
use crate::hamiltonian::{eigen_residual, fd_matrix, HamiltonianKind};
use crate::krein::Workspace;
use crate::metric::{Exponent, Sign};
use crate::report::{Check, VerificationReport};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tol_biorth: Option<f64>,
    pub tol_krein: Option<f64>,
    /// Expected classification; defaults to the known verdict of the example.
    pub expect: Option<Verdict>,
    pub fd_half_width: f64,
    pub fd_points: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol_biorth: None,
            tol_krein: None,
            expect: None,
            fd_half_width: FD_HALF_WIDTH,
            fd_points: FD_POINTS,
            seed: SEED,
        }
    }
}

/// The classification each catalog example is known to have.
pub fn expected_verdict(spec: &ExampleSpec) -> Verdict {
    match spec.params {
        ExampleParams::Example1 => Verdict::NotJOrthonormal,
        _ => Verdict::FirstType,
    }
}

fn base_report(spec: &ExampleSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new(spec.id().to_string()).param("n", spec.n);
    match &spec.params {
        ExampleParams::ShiftedHo { a } => r = r.param("a", *a),
        ExampleParams::Example1 => {}
        ExampleParams::PerturbedAnharmonic { beta, p } => {
            r = r.param("beta", *beta).param("p", p.to_string())
        }
    }
    let s = &spec.settings;
    if let Some(v) = s.quad_order {
        r = r.setting("quad_order", v);
    }
    if let Some(v) = s.grid_l {
        r = r.setting("grid_l", v);
    }
    if let Some(v) = s.grid_points {
        r = r.setting("grid_points", v);
    }
    if let Some(v) = opts.tol_biorth {
        r = r.setting("tol_biorth", v);
    }
    if let Some(v) = opts.tol_krein {
        r = r.setting("tol_krein", v);
    }
    r.setting("fd_half_width", opts.fd_half_width)
        .setting("fd_points", opts.fd_points)
        .setting("seed", opts.seed)
}

fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn random_span(
    sys: &BiorthogonalSystem,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Result<Vec<FunctionRep>> {
    let k = sys.len().min(8);
    (0..count)
        .map(|_| {
            let c = random_coeffs(rng, k);
            let terms: Vec<(Complex64, &FunctionRep)> = c.into_iter().zip(sys.phi()).collect();
            sys.workspace().combine(&terms)
        })
        .collect()
}

fn alternating(n: usize) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// e^{tQ}eₙ sampled on `grid`.
pub fn sample_transformed(
    sys: &BiorthogonalSystem,
    t: Exponent,
    n: usize,
    grid: &Arc<QuadratureRule>,
) -> Result<FunctionRep> {
    let ws = Workspace::new(grid.clone());
    let e = FunctionRep::basis_vector(sys.basis().clone(), n)?;
    ws.sample(&ws.apply_exp(sys.q(), t, &e)?)
}

/// Run the suite for one catalog example.
pub fn verify_example(spec: &ExampleSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut report = base_report(spec, opts);
    let mut sys = None;
    report.push(Check::timed("build", 0.0, || {
        sys = Some(make_example(spec)?);
        Ok(0.0)
    }));
    let Some(sys) = sys else {
        return report;
    };
    let numeric = matches!(spec.params, ExampleParams::PerturbedAnharmonic { .. });
    let tol_biorth = opts.tol_biorth.unwrap_or(if numeric {
        TOL_BIORTH_NUMERIC
    } else {
        TOL_BIORTH
    });
    let tol_krein = opts.tol_krein.unwrap_or(TOL_KREIN);
    let expect = opts.expect.unwrap_or_else(|| expected_verdict(spec));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    report.push(Check::timed("biorthogonality", tol_biorth, || {
        biorthogonality_defect(&sys)
    }));
    report.push(Check::timed("weighted_orthonormality", tol_biorth, || {
        let (a, b) = weighted_orthonormality_defect(&sys)?;
        Ok(a.max(b))
    }));

    if numeric {
        report.push(Check::timed_with_detail("parity_signs", 0.0, || {
            let signs = sys.basis().parity_signs();
            let wrong = signs
                .iter()
                .enumerate()
                .filter(|(n, s)| **s != alternating(*n))
                .count();
            Ok((wrong as f64, Some(format!("{signs:?}"))))
        }));
        report.push(Check::timed("basis_parity_defect", TOL_PARITY, || {
            Ok(sys.basis().parity_defect())
        }));
    }

    match spec.params {
        ExampleParams::Example1 => {
            report.push(Check::timed_with_detail("j_witness", 0.0, || {
                let p00 = sys.workspace().krein_inner(&sys.phi()[0], &sys.phi()[0])?;
                let gap = (p00.norm() - 1.0).abs();
                Ok((
                    (J_WITNESS_GAP - gap).max(0.0),
                    Some(format!("|[phi_0,phi_0]| = {:.10}", p00.norm())),
                ))
            }));
            let n_max = (spec.n - 1).min(OVERLAP_TABLE_MAX);
            let table = overlap_quadrature(n_max).and_then(|q| overlap_agreement(&q));
            report.push(Check::timed("overlap_closed_form", TOL_OVERLAP_REL, || {
                table.clone().map(|t| t.0)
            }));
            report.push(Check::timed("overlap_odd", TOL_OVERLAP_ODD, || {
                table.map(|t| t.1)
            }));
        }
        _ => {
            report.push(Check::timed("j_orthonormality", tol_krein, || {
                j_orthonormality_defect(&sys)
            }));
            report.push(Check::timed_with_detail("sign_sequence", 0.0, || {
                let signs = sign_sequence_with_tol(&sys, tol_krein)?;
                let wrong = signs
                    .iter()
                    .enumerate()
                    .filter(|(n, s)| **s != alternating(*n))
                    .count();
                Ok((wrong as f64, Some(format!("{signs:?}"))))
            }));
            report.push(Check::timed("partner", TOL_PARTNER, || partner_check(&sys)));
        }
    }

    report.push(Check::timed_with_detail("classify", 0.0, || {
        let c = classify_type_with_tol(&sys, tol_krein);
        let detail = format!(
            "verdict {}, expected {expect}, j_defect {:.3e}, anticommutation residual {}",
            c.verdict,
            c.j_defect,
            c.anticommutation_evidence
                .map_or("n/a".to_owned(), |v| format!("{v:.3e}"))
        );
        Ok((if c.verdict == expect { 0.0 } else { 1.0 }, Some(detail)))
    }));

    if expect == Verdict::FirstType {
        c_symmetry_checks(&mut report, &sys, &mut rng);
    }

    report.push(Check::timed("g0_positivity", TOL_G0, || {
        let mut worst = 0.0f64;
        for _ in 0..RANDOM_G0_VECTORS {
            let len = rng.gen_range(1..=sys.len());
            let r = g0_quadratic_check(&sys, &random_coeffs(&mut rng, len))?;
            if !(r.quadrature.re > 0.0) {
                return Err(Error::Numeric(format!(
                    "non-positive quadratic form {}",
                    r.quadrature
                )));
            }
            worst = worst.max(r.defect());
        }
        Ok(worst)
    }));

    match &spec.params {
        ExampleParams::ShiftedHo { a } => {
            shifted_ho_residuals(&mut report, &sys, *a, opts);
            report.push(Check::timed_with_detail("gq_basis", TOL_GQ_BASIS, || {
                gq_sweep(*a, &spec.settings)
            }));
        }
        ExampleParams::Example1 => example1_residuals(&mut report, &sys, opts),
        ExampleParams::PerturbedAnharmonic { beta, p } => {
            report.push(Check::timed(
                "eigen_residuals",
                TOL_EIGEN_RESIDUAL_ANHARMONIC,
                || {
                    let grid = sys
                        .basis()
                        .grid()
                        .cloned()
                        .ok_or_else(|| Error::Structure("numeric basis without grid".into()))?;
                    let energies = sys.basis().energies().unwrap_or(&[]).to_vec();
                    let h = fd_matrix(
                        HamiltonianKind::PerturbedAnharmonic {
                            beta: *beta,
                            p: p.clone(),
                        },
                        grid.clone(),
                    )?;
                    let ha = fd_matrix(
                        HamiltonianKind::PerturbedAnharmonicAdjoint {
                            beta: *beta,
                            p: p.clone(),
                        },
                        grid.clone(),
                    )?;
                    let mut worst = 0.0f64;
                    for n in 0..=EIGEN_CHECK_MAX_INDEX.min(sys.len() - 1) {
                        let lambda = Complex64::new(energies[n], 0.0);
                        let phi = sample_transformed(&sys, Exponent::Half, n, &grid)?;
                        let psi = sample_transformed(&sys, Exponent::MinusHalf, n, &grid)?;
                        worst = worst
                            .max(eigen_residual(&h, &phi, lambda)?)
                            .max(eigen_residual(&ha, &psi, lambda)?);
                    }
                    Ok(worst)
                },
            ));
        }
    }
    report
}

fn c_symmetry_checks(
    report: &mut VerificationReport,
    sys: &BiorthogonalSystem,
    rng: &mut ChaCha8Rng,
) {
    let op = match CSymmetryOp::for_system(sys) {
        Ok(op) => op,
        Err(e) => {
            report.push(Check::defect("c_symmetry", f64::NAN, 0.0).with_detail(e.to_string()));
            return;
        }
    };
    let family = random_span(sys, rng, RANDOM_SPAN_FUNCTIONS);
    let ws = sys.workspace();
    report.push(Check::timed("c_squared", TOL_CSYM, || {
        let mut worst = 0.0f64;
        for f in family.as_ref().map_err(Clone::clone)? {
            worst = worst.max(op.involution_defect(f)?);
        }
        Ok(worst)
    }));
    report.push(Check::timed("jc_positivity", 0.0, || {
        let mut bad = 0usize;
        for f in family.as_ref().map_err(Clone::clone)? {
            if !(op.jc_form(f)?.re > 0.0) {
                bad += 1;
            }
        }
        Ok(bad as f64)
    }));
    report.push(Check::timed("c_inner_consistency", TOL_CSYM, || {
        let family = family.as_ref().map_err(Clone::clone)?;
        let mut worst = 0.0f64;
        for pair in family.windows(2) {
            let (f, g) = (&pair[0], &pair[1]);
            let ci = op.c_inner(f, g)?;
            let wi = ws.weighted_inner(sys.q(), Sign::Minus, f, g)?;
            let (fp, fm) = op.fundamental_split(f)?;
            let (gp, gm) = op.fundamental_split(g)?;
            let split = ws.krein_inner(&fp, &gp)? - ws.krein_inner(&fm, &gm)?;
            let scale = ci.norm().max(1.0);
            worst = worst
                .max((ci - wi).norm() / scale)
                .max((ci - split).norm() / scale)
                .max((wi - split).norm() / scale);
        }
        Ok(worst)
    }));
    report.push(Check::timed("expansion_residual", TOL_CSYM, || {
        let mut worst = 0.0f64;
        for f in family.as_ref().map_err(Clone::clone)? {
            worst = worst.max(expansion_residual(sys, &op, f, sys.len())? / op.metric_norm(f)?);
        }
        Ok(worst)
    }));
}

fn fd_grid(opts: &VerifyOptions, points: usize) -> Result<Arc<QuadratureRule>> {
    Ok(Arc::new(uniform_rule(opts.fd_half_width, points)?))
}

fn max_residual(
    sys: &BiorthogonalSystem,
    kind: HamiltonianKind,
    t: Exponent,
    lambda: impl Fn(usize) -> f64,
    grid: &Arc<QuadratureRule>,
) -> Result<Vec<f64>> {
    let h = fd_matrix(kind, grid.clone())?;
    (0..=EIGEN_CHECK_MAX_INDEX.min(sys.len() - 1))
        .map(|n| {
            eigen_residual(
                &h,
                &sample_transformed(sys, t, n, grid)?,
                Complex64::new(lambda(n), 0.0),
            )
        })
        .collect()
}

fn shifted_ho_residuals(
    report: &mut VerificationReport,
    sys: &BiorthogonalSystem,
    a: f64,
    opts: &VerifyOptions,
) {
    let lambda = move |n: usize| 2.0 * n as f64 + 1.0 + a * a;
    let fine = fd_grid(opts, opts.fd_points).and_then(|g| {
        let phi = max_residual(
            sys,
            HamiltonianKind::ShiftedHo { a },
            Exponent::Half,
            lambda,
            &g,
        )?;
        let psi = max_residual(
            sys,
            HamiltonianKind::ShiftedHo { a: -a },
            Exponent::MinusHalf,
            lambda,
            &g,
        )?;
        Ok((phi, psi))
    });
    report.push(Check::timed("eigen_residuals", TOL_EIGEN_RESIDUAL, || {
        let (phi, psi) = fine.clone()?;
        Ok(phi.iter().chain(&psi).fold(0.0, |m: f64, v| m.max(*v)))
    }));
    report.push(Check::timed_with_detail("fd_convergence", 0.0, || {
        let (phi, _) = fine?;
        // h → 2h: points p ↦ (p + 1)/2 - 1 keeps the half-width fixed.
        let coarse = fd_grid(opts, opts.fd_points.div_ceil(2) - 1)?;
        let rough = max_residual(
            sys,
            HamiltonianKind::ShiftedHo { a },
            Exponent::Half,
            lambda,
            &coarse,
        )?;
        let ratios: Vec<f64> = rough.iter().zip(&phi).map(|(c, f)| c / f).collect();
        let (lo, hi) = FD_RATIO_RANGE;
        let outside = ratios.iter().fold(0.0f64, |m, r| m.max(lo - r).max(r - hi));
        Ok((outside.max(0.0), Some(format!("ratios {ratios:.3?}"))))
    }));
}

fn example1_residuals(
    report: &mut VerificationReport,
    sys: &BiorthogonalSystem,
    opts: &VerifyOptions,
) {
    report.push(Check::timed("eigen_residuals", TOL_EIGEN_RESIDUAL, || {
        let g = fd_grid(opts, opts.fd_points)?;
        let lambda = |n: usize| n as f64 + 0.5;
        let phi = max_residual(sys, HamiltonianKind::Example1, Exponent::Half, lambda, &g)?;
        let psi = max_residual(
            sys,
            HamiltonianKind::Example1Adjoint,
            Exponent::MinusHalf,
            lambda,
            &g,
        )?;
        Ok(phi.iter().chain(&psi).fold(0.0, |m: f64, v| m.max(*v)))
    }));
}

/// L²-normalized e^{-x²} on the Hermite basis.
pub fn normalized_gaussian() -> Result<FunctionRep> {
    let size = 96;
    let basis = Arc::new(BasisSet::hermite(size));
    let grid = gauss_hermite_rule(120, 1.0)?;
    let norm = (2.0 / std::f64::consts::PI).powf(0.25);
    FunctionRep::project_hermite(basis, &grid, size, |x| norm * (-x * x).exp())
}

/// Resolution-of-identity defects for f = g = normalized e^{-x²} along
/// the truncations of [`GQ_SWEEP`].
pub fn gq_defects(
    a: f64,
    settings: &crate::catalog::NumericSettings,
) -> Result<Vec<(usize, (f64, f64))>> {
    let f = normalized_gaussian()?;
    GQ_SWEEP
        .iter()
        .map(|&n| {
            let spec =
                ExampleSpec::shifted_ho(a, n).with_settings(crate::catalog::NumericSettings {
                    quad_order: None,
                    grid_points: None,
                    ..settings.clone()
                });
            let sys = make_example(&spec)?;
            Ok((n, gq_basis_defect(&sys, &f, &f)?))
        })
        .collect()
}

fn gq_sweep(a: f64, settings: &crate::catalog::NumericSettings) -> Result<(f64, Option<String>)> {
    let d = gq_defects(a, settings)?;
    let decreasing = d
        .windows(2)
        .all(|w| w[1].1 .0 < w[0].1 .0 && w[1].1 .1 < w[0].1 .1);
    let last = d.last().map_or(f64::INFINITY, |(_, (x, y))| x.max(*y));
    let detail = d
        .iter()
        .map(|(n, (x, y))| format!("N={n}: {x:.2e}/{y:.2e}"))
        .collect::<Vec<_>>()
        .join(", ");
    if decreasing {
        Ok((last, Some(detail)))
    } else {
        Ok((
            f64::INFINITY,
            Some(format!("not strictly decreasing: {detail}")),
        ))
    }
}

/// Closed-form overlaps against quadrature for 0 ≤ n, m ≤ n_max.
pub fn verify_overlap(n_max: usize) -> (VerificationReport, Option<Array2<Complex64>>) {
    let mut report = VerificationReport::new("overlap").param("n_max", n_max);
    if n_max > MAX_OVERLAP_INDEX {
        report.push(
            Check::defect("overlap_closed_form", f64::NAN, TOL_OVERLAP_REL)
                .with_detail(format!("n_max {n_max} exceeds {MAX_OVERLAP_INDEX}")),
        );
        return (report, None);
    }
    let q = overlap_quadrature(n_max);
    let agreement = q.as_ref().map_err(Clone::clone).and_then(overlap_agreement);
    report.push(Check::timed("overlap_closed_form", TOL_OVERLAP_REL, || {
        agreement.clone().map(|t| t.0)
    }));
    report.push(Check::timed("overlap_odd", TOL_OVERLAP_ODD, || {
        agreement.map(|t| t.1)
    }));
    (report, q.ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names_failing(r: &VerificationReport) -> Vec<String> {
        r.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} {:?} {:?}", c.name, c.value, c.detail))
            .collect()
    }

    #[test]
    fn shifted_ho_suite_passes() {
        let r = verify_example(&ExampleSpec::shifted_ho(0.5, 16), &VerifyOptions::default());
        assert!(r.all_pass(), "{:?}", names_failing(&r));
        assert!(r.is_self_consistent());
        for name in [
            "biorthogonality",
            "j_orthonormality",
            "partner",
            "classify",
            "c_squared",
            "c_inner_consistency",
            "eigen_residuals",
        ] {
            assert!(r.check(name).is_some(), "{name}");
        }
    }

    #[test]
    fn example1_suite_passes_with_negative_verdict() {
        let r = verify_example(&ExampleSpec::example1(12), &VerifyOptions::default());
        assert!(r.all_pass(), "{:?}", names_failing(&r));
        assert!(r
            .check("classify")
            .unwrap()
            .detail
            .as_ref()
            .unwrap()
            .contains("not_j_orthonormal"));
        let wrong = VerifyOptions {
            expect: Some(Verdict::FirstType),
            ..VerifyOptions::default()
        };
        assert!(
            !verify_example(&ExampleSpec::example1(12), &wrong)
                .check("classify")
                .unwrap()
                .pass
        );
    }

    #[test]
    fn perturbed_anharmonic_suite_passes() {
        let r = verify_example(
            &ExampleSpec::default_perturbed_anharmonic(8),
            &VerifyOptions::default(),
        );
        assert!(r.all_pass(), "{:?}", names_failing(&r));
    }

    #[test]
    fn build_failure_is_a_failed_check() {
        let r = verify_example(&ExampleSpec::shifted_ho(0.0, 8), &VerifyOptions::default());
        assert_eq!(r.checks.len(), 1);
        assert!(!r.all_pass());
    }

    #[test]
    fn overlap_report() {
        let (r, m) = verify_overlap(12);
        assert!(r.all_pass());
        assert_eq!(m.unwrap().dim(), (13, 13));
        assert!(!verify_overlap(31).0.all_pass());
    }
}
