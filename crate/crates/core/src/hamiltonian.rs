//! Non-self-adjoint Hamiltonians: the spectral form Σ λₙ⟨·,ψₙ⟩φₙ and
//! finite-difference realizations of the differential operators whose
//! eigenvectors the catalog systems are.

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::QuadratureRule;
use crate::defaults::{BOUNDARY_TOL, FD_MIN_POINTS};
use crate::error::{Error, Result};
use crate::function::FunctionRep;
use crate::grs::BiorthogonalSystem;
use crate::metric::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// f ↦ Σ λₙ⟨f, ψₙ⟩φₙ
    PhiPsi,
    /// f ↦ Σ λₙ⟨f, φₙ⟩ψₙ
    PsiPhi,
}

/// Truncated spectral Hamiltonian built from a biorthogonal system.
#[derive(Debug, Clone)]
pub struct SpectralHamiltonian<'a> {
    lambdas: Vec<Complex64>,
    sys: &'a BiorthogonalSystem,
    direction: Direction,
}

impl<'a> SpectralHamiltonian<'a> {
    pub fn new(
        lambdas: Vec<Complex64>,
        sys: &'a BiorthogonalSystem,
        direction: Direction,
    ) -> Result<Self> {
        if lambdas.len() != sys.len() {
            return Err(Error::Structure(format!(
                "{} eigenvalues for a system of size {}",
                lambdas.len(),
                sys.len()
            )));
        }
        Ok(Self {
            lambdas,
            sys,
            direction,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn apply(&self, f: &FunctionRep) -> Result<FunctionRep> {
        let ws = self.sys.workspace();
        let (bra, ket) = match self.direction {
            Direction::PhiPsi => (self.sys.psi(), self.sys.phi()),
            Direction::PsiPhi => (self.sys.phi(), self.sys.psi()),
        };
        let coeffs: Vec<Complex64> = bra
            .iter()
            .zip(&self.lambdas)
            .map(|(b, l)| Ok(l * ws.inner(f, b)?))
            .collect::<Result<_>>()?;
        let terms: Vec<(Complex64, &FunctionRep)> = coeffs.into_iter().zip(ket).collect();
        ws.combine(&terms)
    }
}

pub fn apply_spectral(h: &SpectralHamiltonian<'_>, f: &FunctionRep) -> Result<FunctionRep> {
    h.apply(f)
}

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianKind {
    /// -d² + x² + 2iax
    ShiftedHo { a: f64 },
    /// ½(-d² - x d/dx + ½(3x²/2 - 1))
    Example1,
    /// ½(-d² + x d/dx + ½(3x²/2 + 1))
    Example1Adjoint,
    /// H_β + 2p' d/dx + p'' - p'²
    PerturbedAnharmonic { beta: f64, p: Expr },
    /// H_β - 2p' d/dx - p'' - p'²
    PerturbedAnharmonicAdjoint { beta: f64, p: Expr },
    /// -d² + |x|^β
    Anharmonic { beta: f64 },
}

/// A second-order operator c₂ d² + c₁(x) d/dx + c₀(x) discretized by central
/// differences with Dirichlet ends; stored as three complex diagonals.
#[derive(Debug, Clone)]
pub struct DifferentialHamiltonian {
    kind: HamiltonianKind,
    grid: Arc<QuadratureRule>,
    lower: Vec<Complex64>,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
}

type Coefficients = (f64, Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> Complex64>);

fn coefficients(kind: &HamiltonianKind) -> Coefficients {
    let real = |c: f64| Complex64::new(c, 0.0);
    match kind.clone() {
        HamiltonianKind::ShiftedHo { a } => (
            -1.0,
            Box::new(|_| 0.0),
            Box::new(move |x| Complex64::new(x * x, 2.0 * a * x)),
        ),
        HamiltonianKind::Example1 => (
            -0.5,
            Box::new(|x| -0.5 * x),
            Box::new(move |x| real(0.25 * (1.5 * x * x - 1.0))),
        ),
        HamiltonianKind::Example1Adjoint => (
            -0.5,
            Box::new(|x| 0.5 * x),
            Box::new(move |x| real(0.25 * (1.5 * x * x + 1.0))),
        ),
        HamiltonianKind::PerturbedAnharmonic { beta, p } => {
            let (dp, ddp) = (p.derivative(), p.derivative().derivative());
            let dp1 = dp.clone();
            (
                -1.0,
                Box::new(move |x| 2.0 * dp1.eval(x)),
                Box::new(move |x| real(x.abs().powf(beta) + ddp.eval(x) - dp.eval(x).powi(2))),
            )
        }
        HamiltonianKind::PerturbedAnharmonicAdjoint { beta, p } => {
            let (dp, ddp) = (p.derivative(), p.derivative().derivative());
            let dp1 = dp.clone();
            (
                -1.0,
                Box::new(move |x| -2.0 * dp1.eval(x)),
                Box::new(move |x| real(x.abs().powf(beta) - ddp.eval(x) - dp.eval(x).powi(2))),
            )
        }
        HamiltonianKind::Anharmonic { beta } => (
            -1.0,
            Box::new(|_| 0.0),
            Box::new(move |x| real(x.abs().powf(beta))),
        ),
    }
}

/// Central-difference matrix of `kind` on a uniform grid of at least 500
/// interior points.
pub fn fd_matrix(
    kind: HamiltonianKind,
    grid: Arc<QuadratureRule>,
) -> Result<DifferentialHamiltonian> {
    let h = grid
        .spacing()
        .ok_or_else(|| Error::Structure("finite differences need a uniform grid".into()))?;
    if grid.len() < FD_MIN_POINTS {
        return Err(Error::Resolution(format!(
            "finite-difference grid has {} points, need at least {FD_MIN_POINTS}",
            grid.len()
        )));
    }
    if let HamiltonianKind::PerturbedAnharmonic { beta, .. }
    | HamiltonianKind::PerturbedAnharmonicAdjoint { beta, .. }
    | HamiltonianKind::Anharmonic { beta } = &kind
    {
        if !(*beta > 2.0) {
            return Err(Error::Domain(format!(
                "anharmonic exponent must exceed 2, got {beta}"
            )));
        }
    }
    let (c2, c1, c0) = coefficients(&kind);
    let n = grid.len();
    let (mut lower, mut diag, mut upper) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &x in grid.nodes() {
        let drift = c1(x) / (2.0 * h);
        lower.push(Complex64::new(c2 / (h * h) - drift, 0.0));
        diag.push(c0(x) - 2.0 * c2 / (h * h));
        upper.push(Complex64::new(c2 / (h * h) + drift, 0.0));
    }
    if diag
        .iter()
        .chain(&lower)
        .chain(&upper)
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::Magnitude(
            "non-finite finite-difference coefficients".into(),
        ));
    }
    Ok(DifferentialHamiltonian {
        kind,
        grid,
        lower,
        diag,
        upper,
    })
}

impl DifferentialHamiltonian {
    pub fn kind(&self) -> &HamiltonianKind {
        &self.kind
    }

    pub fn grid(&self) -> &Arc<QuadratureRule> {
        &self.grid
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    /// Coefficient of f_{j-1} in row j (row 0's entry is unused).
    pub fn lower(&self) -> &[Complex64] {
        &self.lower
    }

    /// Coefficient of f_{j+1} in row j (the last row's entry is unused).
    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    /// Matrix-vector product with zero Dirichlet values outside the grid.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.diag.len();
        if v.len() != n {
            return Err(Error::Structure(format!(
                "vector of length {} for a {n}-point operator",
                v.len()
            )));
        }
        Ok((0..n)
            .map(|j| {
                let mut s = self.diag[j] * v[j];
                if j > 0 {
                    s += self.lower[j] * v[j - 1];
                }
                if j + 1 < n {
                    s += self.upper[j] * v[j + 1];
                }
                s
            })
            .collect())
    }

    /// max |H_jk - conj(H_kj)|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.diag.len();
        let mut worst = self
            .diag
            .iter()
            .fold(0.0f64, |m, d| m.max(2.0 * d.im.abs()));
        for j in 0..n - 1 {
            worst = worst.max((self.upper[j] - self.lower[j + 1].conj()).norm());
        }
        worst
    }
}

/// ‖H f - λ f‖₂ / ‖f‖₂ over the interior nodes. `f` must be sampled on the
/// operator's grid and negligible (≤ 1e-8 of its peak) at both ends.
pub fn eigen_residual(
    hd: &DifferentialHamiltonian,
    f: &FunctionRep,
    lambda: Complex64,
) -> Result<f64> {
    let s = f
        .as_sampled()
        .filter(|s| s.grid().same_grid(&hd.grid))
        .ok_or_else(|| {
            Error::Structure("eigen residual needs samples on the operator grid".into())
        })?;
    let v = s.values();
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.norm()));
    if peak == 0.0 {
        return Err(Error::Domain("eigen residual of the zero function".into()));
    }
    let edge = v[0].norm().max(v[v.len() - 1].norm());
    if edge > BOUNDARY_TOL * peak {
        return Err(Error::Resolution(format!(
            "boundary value {:.3e} of peak exceeds {BOUNDARY_TOL:e}; widen the grid",
            edge / peak
        )));
    }
    let hv = hd.apply(v)?;
    let num: f64 = hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum();
    let den: f64 = v.iter().map(|b| b.norm_sqr()).sum();
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gauss_hermite_rule, uniform_rule, BasisSet};
    use crate::grs::build_system;
    use crate::metric::MetricOperatorQ;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(points: usize) -> Arc<QuadratureRule> {
        Arc::new(uniform_rule(12.0, points).unwrap())
    }

    fn sampled(grid: &Arc<QuadratureRule>, f: impl Fn(f64) -> Complex64) -> FunctionRep {
        FunctionRep::from_fn(grid.clone(), f).unwrap()
    }

    #[test]
    fn structure_of_matrices() {
        let g = grid(800);
        let ho = fd_matrix(HamiltonianKind::ShiftedHo { a: 0.0 }, g.clone()).unwrap();
        assert_eq!(ho.hermitian_defect(), 0.0);
        let shifted = fd_matrix(HamiltonianKind::ShiftedHo { a: 0.5 }, g.clone()).unwrap();
        assert!(shifted.hermitian_defect() > 0.0);
        for (x, d) in g.nodes().iter().zip(shifted.diag()) {
            assert!((d.im - x).abs() < 1e-12);
        }
        assert!(
            fd_matrix(HamiltonianKind::Example1, g.clone())
                .unwrap()
                .hermitian_defect()
                > 0.0
        );
        let zero = Expr::Const(0.0);
        let p0 = fd_matrix(
            HamiltonianKind::PerturbedAnharmonic { beta: 4.0, p: zero },
            g.clone(),
        )
        .unwrap();
        let an = fd_matrix(HamiltonianKind::Anharmonic { beta: 4.0 }, g.clone()).unwrap();
        assert_eq!(p0.diag(), an.diag());
        assert_eq!(p0.lower(), an.lower());
        assert_eq!(p0.upper(), an.upper());
        assert_eq!(an.hermitian_defect(), 0.0);
    }

    #[test]
    fn rejects_coarse_or_nonuniform_grids() {
        assert!(matches!(
            fd_matrix(HamiltonianKind::Example1, grid(100)),
            Err(Error::Resolution(_))
        ));
        let gh = Arc::new(gauss_hermite_rule(600, 1.0).unwrap());
        assert!(matches!(
            fd_matrix(HamiltonianKind::Example1, gh),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn example_one_ground_states() {
        let g = grid(4000);
        let h = fd_matrix(HamiltonianKind::Example1, g.clone()).unwrap();
        let phi0 = sampled(&g, |x| c((-0.75 * x * x).exp(), 0.0));
        assert!(eigen_residual(&h, &phi0, c(0.5, 0.0)).unwrap() < 5e-3);
        let ha = fd_matrix(HamiltonianKind::Example1Adjoint, g.clone()).unwrap();
        let psi1 = sampled(&g, |x| c(x * (-0.25 * x * x).exp(), 0.0));
        assert!(eigen_residual(&ha, &psi1, c(1.5, 0.0)).unwrap() < 5e-3);
        assert!(eigen_residual(&ha, &psi1, c(0.5, 0.0)).unwrap() > 0.5);
    }

    #[test]
    fn boundary_mass_is_a_resolution_error() {
        let g = grid(1000);
        let h = fd_matrix(HamiltonianKind::Example1, g.clone()).unwrap();
        let wide = sampled(&g, |x| c((-0.01 * x * x).exp(), 0.0));
        assert!(matches!(
            eigen_residual(&h, &wide, c(0.5, 0.0)),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn spectral_hamiltonian_on_eigenvectors() {
        let n = 8;
        let gh = Arc::new(gauss_hermite_rule(2 * n + 40, 1.0).unwrap());
        let sys = build_system(
            MetricOperatorQ::translation(0.5).unwrap(),
            Arc::new(BasisSet::hermite(n + 64)),
            n,
            gh,
        )
        .unwrap();
        let lambdas: Vec<Complex64> = (0..n).map(|k| c(2.0 * k as f64 + 1.25, 0.0)).collect();
        let h = SpectralHamiltonian::new(lambdas.clone(), &sys, Direction::PhiPsi).unwrap();
        let ws = sys.workspace();
        let out = h.apply(&sys.phi()[2]).unwrap();
        assert!(ws.distance(&out, &sys.phi()[2].scale(lambdas[2])).unwrap() < 1e-8);
        let adj = SpectralHamiltonian::new(lambdas, &sys, Direction::PsiPhi).unwrap();
        let one = c(1.0, 0.0);
        let f = ws
            .combine(&[(one, &sys.phi()[0]), (c(0.0, 2.0), &sys.phi()[3])])
            .unwrap();
        let g = ws
            .combine(&[(c(0.5, 0.0), &sys.psi()[1]), (one, &sys.psi()[3])])
            .unwrap();
        let lhs = ws.inner(&h.apply(&f).unwrap(), &g).unwrap();
        let rhs = ws.inner(&f, &adj.apply(&g).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-8);
        assert!(SpectralHamiltonian::new(vec![one], &sys, Direction::PhiPsi).is_err());
    }
}
