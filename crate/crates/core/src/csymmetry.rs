//! Krein-side structure of a biorthogonal system: J-orthonormality, the
//! sign sequence, first-type classification and the C-symmetry C = e^{Q}J.

use num_complex::Complex64;
use serde::Serialize;

use crate::defaults::{TOL_KREIN, TOL_PARITY};
use crate::error::{Error, Result};
use crate::function::FunctionRep;
use crate::grs::BiorthogonalSystem;
use crate::krein::{apply_parity, FundamentalSymmetryJ, Product, Workspace};
use crate::metric::{anticommutes_with_parity, Anticommutation, Exponent, MetricOperatorQ, Sign};

/// max | |[φₙ, φₘ]| - δₙₘ |. Phase-blind by construction.
pub fn j_orthonormality_defect(sys: &BiorthogonalSystem) -> Result<f64> {
    let g = sys.workspace().gram(sys.phi(), Product::Krein)?;
    Ok(g.indexed_iter().fold(0.0f64, |worst, ((i, j), v)| {
        let id = if i == j { 1.0 } else { 0.0 };
        worst.max((v.norm() - id).abs())
    }))
}

/// δₙ = [φₙ, φₙ] rounded to ±1, with tolerance `tol`.
pub fn sign_sequence_with_tol(sys: &BiorthogonalSystem, tol: f64) -> Result<Vec<i8>> {
    let ws = sys.workspace();
    sys.phi()
        .iter()
        .enumerate()
        .map(|(n, phi)| {
            let d = ws.krein_inner(phi, phi)?;
            let s: i8 = if d.re >= 0.0 { 1 } else { -1 };
            if (d - s as f64).norm() > tol {
                return Err(Error::NotJOrthonormal(format!(
                    "[φ_{n}, φ_{n}] = {d:.6e} is not ±1 within {tol:e}"
                )));
            }
            Ok(s)
        })
        .collect()
}

pub fn sign_sequence(sys: &BiorthogonalSystem) -> Result<Vec<i8>> {
    sign_sequence_with_tol(sys, TOL_KREIN)
}

fn signs_of(sys: &BiorthogonalSystem) -> Result<Vec<i8>> {
    match sys.signs() {
        Some(s) => Ok(s.to_vec()),
        None => sign_sequence(sys),
    }
}

/// max ‖ψₙ - δₙ Jφₙ‖ / ‖ψₙ‖.
pub fn partner_check(sys: &BiorthogonalSystem) -> Result<f64> {
    let ws = sys.workspace();
    let signs = signs_of(sys)?;
    let mut worst = 0.0f64;
    for ((phi, psi), &s) in sys.phi().iter().zip(sys.psi()).zip(&signs) {
        let partner = apply_parity(phi)?.scale(Complex64::new(s as f64, 0.0));
        worst = worst.max(ws.distance(psi, &partner)? / ws.norm(psi)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FirstType,
    NotJOrthonormal,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::FirstType => "first_type",
            Self::NotJOrthonormal => "not_j_orthonormal",
            Self::Undetermined => "undetermined",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "first_type" => Ok(Self::FirstType),
            "not_j_orthonormal" => Ok(Self::NotJOrthonormal),
            "undetermined" => Ok(Self::Undetermined),
            other => Err(Error::Domain(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeClassification {
    pub verdict: Verdict,
    pub j_defect: f64,
    /// Residual of J e^{-Q} = e^{Q} J; `None` if it could not be computed.
    pub anticommutation_evidence: Option<f64>,
}

/// J-orthonormality first, then anticommutation of Q with parity and the
/// parity-eigenvector property of the basis. A second-type verdict is
/// never produced: no finite search can rule out every anticommuting Q.
pub fn classify_type(sys: &BiorthogonalSystem) -> TypeClassification {
    classify_type_with_tol(sys, TOL_KREIN)
}

pub fn classify_type_with_tol(sys: &BiorthogonalSystem, tol: f64) -> TypeClassification {
    let j_defect = j_orthonormality_defect(sys).unwrap_or(f64::INFINITY);
    let report = anticommutes_with_parity(sys.q(), sys.workspace());
    let verdict = if !(j_defect <= tol) {
        Verdict::NotJOrthonormal
    } else if report.verdict == Anticommutation::Yes && sys.basis().parity_defect() <= TOL_PARITY {
        Verdict::FirstType
    } else {
        Verdict::Undetermined
    };
    TypeClassification {
        verdict,
        j_defect,
        anticommutation_evidence: report.evidence,
    }
}

/// C = e^{Q}J = Je^{-Q} for a generator that anticommutes with J.
#[derive(Debug, Clone)]
pub struct CSymmetryOp {
    q: MetricOperatorQ,
    j: FundamentalSymmetryJ,
    ws: Workspace,
}

impl CSymmetryOp {
    pub fn new(q: MetricOperatorQ, ws: Workspace) -> Result<Self> {
        let report = anticommutes_with_parity(&q, &ws);
        if report.verdict != Anticommutation::Yes {
            return Err(Error::Structure(format!(
                "{q} does not anticommute with parity ({:?})",
                report.verdict
            )));
        }
        Ok(Self {
            q,
            j: FundamentalSymmetryJ::Parity,
            ws,
        })
    }

    /// The C-symmetry attached to a system's generator and working grid.
    pub fn for_system(sys: &BiorthogonalSystem) -> Result<Self> {
        Self::new(sys.q().clone(), sys.workspace().clone())
    }

    pub fn q(&self) -> &MetricOperatorQ {
        &self.q
    }

    pub fn workspace(&self) -> &Workspace {
        &self.ws
    }

    /// Cf = e^{Q}(Jf).
    pub fn apply(&self, f: &FunctionRep) -> Result<FunctionRep> {
        self.ws.apply_exp(&self.q, Exponent::One, &self.j.apply(f)?)
    }

    /// [Cf, g] = ⟨f, g⟩_{-Q}.
    pub fn c_inner(&self, f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
        self.ws.krein_inner(&self.apply(f)?, g)
    }

    /// f± = ½(I ± C)f.
    pub fn fundamental_split(&self, f: &FunctionRep) -> Result<(FunctionRep, FunctionRep)> {
        let cf = self.apply(f)?;
        let half = Complex64::new(0.5, 0.0);
        Ok((
            self.ws.combine(&[(half, f), (half, &cf)])?,
            self.ws.combine(&[(half, f), (-half, &cf)])?,
        ))
    }

    /// ‖C(Cf) - f‖ / ‖f‖.
    pub fn involution_defect(&self, f: &FunctionRep) -> Result<f64> {
        let ccf = self.apply(&self.apply(f)?)?;
        Ok(self.ws.distance(&ccf, f)? / self.ws.norm(f)?)
    }

    /// ⟨J(Cf), f⟩, positive for nonzero f.
    pub fn jc_form(&self, f: &FunctionRep) -> Result<Complex64> {
        self.ws.inner(&self.j.apply(&self.apply(f)?)?, f)
    }

    /// ‖f‖_{-Q} in the factored form ‖e^{-Q/2} f‖.
    pub fn metric_norm(&self, f: &FunctionRep) -> Result<f64> {
        Ok(self
            .ws
            .weighted_inner(&self.q, Sign::Minus, f, f)?
            .re
            .max(0.0)
            .sqrt())
    }
}

/// apply_c as a free function.
pub fn apply_c(c: &CSymmetryOp, f: &FunctionRep) -> Result<FunctionRep> {
    c.apply(f)
}

pub fn c_inner(c: &CSymmetryOp, f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
    c.c_inner(f, g)
}

pub fn fundamental_split(c: &CSymmetryOp, f: &FunctionRep) -> Result<(FunctionRep, FunctionRep)> {
    c.fundamental_split(f)
}

/// ‖f - Σ_{n<M} δₙ[f, φₙ]φₙ‖_{-Q}.
pub fn expansion_residual(
    sys: &BiorthogonalSystem,
    c: &CSymmetryOp,
    f: &FunctionRep,
    m: usize,
) -> Result<f64> {
    if m > sys.len() {
        return Err(Error::Domain(format!(
            "expansion length {m} exceeds truncation {}",
            sys.len()
        )));
    }
    let signs = signs_of(sys)?;
    let ws = sys.workspace();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    for (phi, &s) in sys.phi().iter().zip(&signs).take(m) {
        coeffs.push(-ws.krein_inner(f, phi)? * s as f64);
    }
    let mut terms: Vec<(Complex64, &FunctionRep)> = vec![(coeffs[0], f)];
    terms.extend(coeffs[1..].iter().copied().zip(sys.phi().iter()));
    c.metric_norm(&ws.combine(&terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gauss_hermite_rule, BasisSet};
    use crate::grs::build_system;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shifted_ho(n: usize) -> BiorthogonalSystem {
        let grid = Arc::new(gauss_hermite_rule(2 * n + 40, 1.0).unwrap());
        build_system(
            MetricOperatorQ::translation(0.5).unwrap(),
            Arc::new(BasisSet::hermite(n + 64)),
            n,
            grid,
        )
        .unwrap()
    }

    fn trivial() -> BiorthogonalSystem {
        let grid = Arc::new(gauss_hermite_rule(30, 1.0).unwrap());
        build_system(
            MetricOperatorQ::diagonal(vec![0.0; 6]).unwrap(),
            Arc::new(BasisSet::hermite(6)),
            6,
            grid,
        )
        .unwrap()
    }

    fn example1(n: usize) -> BiorthogonalSystem {
        let grid = Arc::new(gauss_hermite_rule(2 * n + 40, 0.5).unwrap());
        let q = MetricOperatorQ::parse_multiplication("(scale -0.5 (pow x 2))").unwrap();
        build_system(q, Arc::new(BasisSet::hermite(n + 64)), n, grid).unwrap()
    }

    #[test]
    fn shifted_ho_is_first_type() {
        let sys = shifted_ho(16);
        assert!(j_orthonormality_defect(&sys).unwrap() <= 1e-8);
        let signs = sign_sequence(&sys).unwrap();
        assert!(signs
            .iter()
            .enumerate()
            .all(|(n, &s)| s == if n % 2 == 0 { 1 } else { -1 }));
        assert!(partner_check(&sys).unwrap() <= 1e-8);
        assert_eq!(classify_type(&sys).verdict, Verdict::FirstType);
    }

    #[test]
    fn trivial_generator() {
        let sys = trivial();
        assert!(j_orthonormality_defect(&sys).unwrap() <= 1e-14);
        assert_eq!(sign_sequence(&sys).unwrap(), vec![1, -1, 1, -1, 1, -1]);
        assert_eq!(partner_check(&sys).unwrap(), 0.0);
        let op = CSymmetryOp::for_system(&sys).unwrap();
        let e0 = &sys.phi()[0];
        assert_eq!(&op.apply(e0).unwrap(), e0);
        let f =
            FunctionRep::expansion(sys.basis().clone(), vec![c(1.0, 2.0), c(0.5, 0.0)]).unwrap();
        let g =
            FunctionRep::expansion(sys.basis().clone(), vec![c(0.0, 1.0), c(3.0, 0.0)]).unwrap();
        assert!(
            (op.c_inner(&f, &g).unwrap() - sys.workspace().inner(&f, &g).unwrap()).norm() < 1e-15
        );
    }

    #[test]
    fn example_one_is_not_j_orthonormal() {
        let sys = example1(12);
        let d = j_orthonormality_defect(&sys).unwrap();
        assert!(d >= 0.18, "{d}");
        let p00 = sys
            .workspace()
            .krein_inner(&sys.phi()[0], &sys.phi()[0])
            .unwrap();
        assert!((p00.re - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(matches!(
            sign_sequence(&sys),
            Err(Error::NotJOrthonormal(_))
        ));
        let class = classify_type(&sys);
        assert_eq!(class.verdict, Verdict::NotJOrthonormal);
        let q = sys.q().clone();
        assert!(CSymmetryOp::new(q, sys.workspace().clone()).is_err());
    }

    #[test]
    fn c_symmetry_on_first_type_system() {
        let sys = shifted_ho(16);
        let op = CSymmetryOp::for_system(&sys).unwrap();
        let ws = sys.workspace();
        let phi = sys.phi();
        assert!(ws.distance(&op.apply(&phi[2]).unwrap(), &phi[2]).unwrap() < 1e-8);
        assert!(
            ws.distance(&op.apply(&phi[1]).unwrap(), &phi[1].scale(c(-1.0, 0.0)))
                .unwrap()
                < 1e-8
        );
        for n in 0..6 {
            for m in 0..6 {
                let v = op.c_inner(&phi[n], &phi[m]).unwrap();
                let id = if n == m { 1.0 } else { 0.0 };
                assert!((v - id).norm() < 1e-8);
            }
        }
        assert!(op.involution_defect(&phi[3]).unwrap() < 1e-8);
        assert!(op.jc_form(&phi[3]).unwrap().re > 0.0);
    }

    #[test]
    fn split_and_expansion() {
        let sys = shifted_ho(16);
        let op = CSymmetryOp::for_system(&sys).unwrap();
        let ws = sys.workspace();
        let phi = sys.phi();
        let one = c(1.0, 0.0);
        let f = ws.combine(&[(one, &phi[0]), (one, &phi[1])]).unwrap();
        let (plus, minus) = op.fundamental_split(&f).unwrap();
        assert!(ws.distance(&plus, &phi[0]).unwrap() < 1e-8);
        assert!(ws.distance(&minus, &phi[1]).unwrap() < 1e-8);
        let g = ws
            .combine(&[
                (c(0.3, 0.0), &phi[0]),
                (c(0.0, 2.0), &phi[1]),
                (one, &phi[2]),
            ])
            .unwrap();
        let (gp, gm) = op.fundamental_split(&g).unwrap();
        let split = ws.krein_inner(&plus, &gp).unwrap() - ws.krein_inner(&minus, &gm).unwrap();
        assert!((split - op.c_inner(&f, &g).unwrap()).norm() < 1e-8);
        assert!(expansion_residual(&sys, &op, &phi[3], 4).unwrap() < 1e-9);
    }
}
