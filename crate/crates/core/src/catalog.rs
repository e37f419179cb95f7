//! Ready-made systems: the shifted harmonic oscillator, the Gaussian
//! example Q = -x²/2 and the perturbed anharmonic oscillator, plus the
//! closed form of the Krein overlaps of the Gaussian example.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{
    anharmonic_eigenbasis, gauss_hermite_rule, hermite_half_width, uniform_rule, BasisSet,
    QuadratureRule,
};
use crate::defaults::{
    ANHARMONIC_HALF_WIDTH, ANHARMONIC_POINTS, HERMITE_BASIS_MARGIN, ODDNESS_TOL, QUADRATURE_MARGIN,
    TRANSLATION_CAP,
};
use crate::error::{Error, Result};
use crate::function::FunctionRep;
use crate::grs::{build_system, BiorthogonalSystem};
use crate::krein::{Product, Workspace};
use crate::metric::{Exponent, Expr, MetricOperatorQ};
use crate::specfun::{hyp2f1_terminating, log_factorial, log_gamma, Hyp2F1Terminating};

/// Largest index accepted by [`overlap_closed_form`].
pub const MAX_OVERLAP_INDEX: usize = 30;

/// Default perturbation p(x) = ½ arctan x.
pub const DEFAULT_P: &str = "(scale 0.5 (atan x))";

/// Default anharmonic exponent.
pub const DEFAULT_BETA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleId {
    ShiftedHo,
    Example1,
    PerturbedAnharmonic,
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ShiftedHo => "shifted-ho",
            Self::Example1 => "example1",
            Self::PerturbedAnharmonic => "perturbed-anharmonic",
        })
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "shifted-ho" => Ok(Self::ShiftedHo),
            "example1" => Ok(Self::Example1),
            "perturbed-anharmonic" => Ok(Self::PerturbedAnharmonic),
            other => Err(Error::Domain(format!("unknown example {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleParams {
    /// Q = 2ia d/dx on the Hermite basis.
    ShiftedHo { a: f64 },
    /// Q = -x²/2 on the Hermite basis.
    Example1,
    /// Q = 2p(x) on the eigenbasis of -d² + |x|^β.
    PerturbedAnharmonic { beta: f64, p: Expr },
}

/// Optional overrides of the numerical settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NumericSettings {
    /// Gauss-Hermite order (Hermite-basis examples).
    pub quad_order: Option<usize>,
    /// Uniform grid half-width.
    pub grid_l: Option<f64>,
    /// Uniform grid interior points. For Hermite-basis examples, setting
    /// this switches the working grid from Gauss-Hermite to uniform.
    pub grid_points: Option<usize>,
    /// Cap on |a| for the translation generator (at most 2).
    pub translation_cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleSpec {
    pub params: ExampleParams,
    pub n: usize,
    pub settings: NumericSettings,
}

impl ExampleSpec {
    pub fn shifted_ho(a: f64, n: usize) -> Self {
        Self {
            params: ExampleParams::ShiftedHo { a },
            n,
            settings: NumericSettings::default(),
        }
    }

    pub fn example1(n: usize) -> Self {
        Self {
            params: ExampleParams::Example1,
            n,
            settings: NumericSettings::default(),
        }
    }

    pub fn perturbed_anharmonic(beta: f64, p: Expr, n: usize) -> Self {
        Self {
            params: ExampleParams::PerturbedAnharmonic { beta, p },
            n,
            settings: NumericSettings::default(),
        }
    }

    /// β = 4, p = ½ arctan x.
    pub fn default_perturbed_anharmonic(n: usize) -> Self {
        let p = Expr::parse(DEFAULT_P).unwrap_or(Expr::Const(0.0));
        Self::perturbed_anharmonic(DEFAULT_BETA, p, n)
    }

    pub fn with_settings(mut self, settings: NumericSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn id(&self) -> ExampleId {
        match self.params {
            ExampleParams::ShiftedHo { .. } => ExampleId::ShiftedHo,
            ExampleParams::Example1 => ExampleId::Example1,
            ExampleParams::PerturbedAnharmonic { .. } => ExampleId::PerturbedAnharmonic,
        }
    }

    /// The metric generator of this example.
    pub fn generator(&self) -> Result<MetricOperatorQ> {
        match &self.params {
            ExampleParams::ShiftedHo { a } => MetricOperatorQ::translation_with_cap(
                *a,
                self.settings.translation_cap.unwrap_or(TRANSLATION_CAP),
            ),
            ExampleParams::Example1 => Ok(MetricOperatorQ::multiplication(Expr::Mul(vec![
                Expr::Const(-0.5),
                Expr::Pow(Box::new(Expr::X), 2),
            ]))),
            ExampleParams::PerturbedAnharmonic { p, .. } => {
                Ok(MetricOperatorQ::multiplication(Expr::Mul(vec![
                    Expr::Const(2.0),
                    p.clone(),
                ])))
            }
        }
    }

    /// The working quadrature grid.
    pub fn working_grid(&self) -> Result<Arc<QuadratureRule>> {
        let s = &self.settings;
        let rule = match &self.params {
            ExampleParams::PerturbedAnharmonic { .. } => uniform_rule(
                s.grid_l.unwrap_or(ANHARMONIC_HALF_WIDTH),
                s.grid_points.unwrap_or(ANHARMONIC_POINTS),
            )?,
            params => match s.grid_points {
                Some(points) => uniform_rule(
                    s.grid_l.unwrap_or_else(|| hermite_half_width(self.n)),
                    points,
                )?,
                None => {
                    let scale = if matches!(params, ExampleParams::Example1) {
                        0.5
                    } else {
                        1.0
                    };
                    gauss_hermite_rule(
                        s.quad_order.unwrap_or(2 * self.n + QUADRATURE_MARGIN),
                        scale,
                    )?
                }
            },
        };
        Ok(Arc::new(rule))
    }

    /// The orthonormal basis of this example.
    pub fn basis(&self, grid: &Arc<QuadratureRule>) -> Result<Arc<BasisSet>> {
        match &self.params {
            ExampleParams::PerturbedAnharmonic { beta, .. } => Ok(Arc::new(anharmonic_eigenbasis(
                *beta,
                grid.clone(),
                self.n,
            )?)),
            _ => Ok(Arc::new(BasisSet::hermite(self.n + HERMITE_BASIS_MARGIN))),
        }
    }

    fn validate(&self, grid: &QuadratureRule) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("truncation must be positive".into()));
        }
        if let ExampleParams::PerturbedAnharmonic { beta, p } = &self.params {
            if !(*beta > 2.0) {
                return Err(Error::Domain(format!(
                    "anharmonic exponent must exceed 2, got {beta}"
                )));
            }
            let worst = grid
                .nodes()
                .iter()
                .fold(0.0f64, |m, &x| m.max((p.eval(x) + p.eval(-x)).abs()));
            if !(worst <= ODDNESS_TOL) {
                return Err(Error::Domain(format!(
                    "perturbation p must be odd (defect {worst:.3e})"
                )));
            }
        }
        Ok(())
    }
}

/// Build the biorthogonal system described by `spec`.
pub fn make_example(spec: &ExampleSpec) -> Result<BiorthogonalSystem> {
    let grid = spec.working_grid()?;
    spec.validate(&grid)?;
    let q = spec.generator()?;
    let basis = spec.basis(&grid)?;
    build_system(q, basis, spec.n, grid)
}

/// |[φₙ, φₘ]| for the Gaussian example in closed form:
/// √(2^{n+m+1} / (3^{n+m+1} π n! m!)) Γ((n+m+1)/2) |₂F₁(-m, -n; (1-m-n)/2; 3/2)|,
/// and zero when n + m is odd. The prefactor is evaluated in log space.
pub fn overlap_closed_form(n: usize, m: usize) -> Result<f64> {
    if n > MAX_OVERLAP_INDEX || m > MAX_OVERLAP_INDEX {
        return Err(Error::Domain(format!(
            "overlap indices must not exceed {MAX_OVERLAP_INDEX}, got ({n}, {m})"
        )));
    }
    if (n + m) % 2 == 1 {
        return Ok(0.0);
    }
    let s = (n + m) as f64;
    let ln_pref = 0.5
        * ((s + 1.0) * (2f64.ln() - 3f64.ln())
            - std::f64::consts::PI.ln()
            - log_factorial(n)
            - log_factorial(m))
        + log_gamma((s + 1.0) / 2.0)?;
    let f = hyp2f1_terminating(Hyp2F1Terminating::new(m, -(n as f64), (1.0 - s) / 2.0, 1.5))?;
    Ok(ln_pref.exp() * f.abs())
}

/// Krein Gram matrix [φₙ, φₘ], n, m ≤ n_max, of the Gaussian example by
/// Gauss-Hermite quadrature for the weight e^{-3x²/2} of the integrand
/// φₙ(-x)φₘ(x), which makes the rule exact.
pub fn overlap_quadrature(n_max: usize) -> Result<Array2<Complex64>> {
    let spec = ExampleSpec::example1(n_max + 1);
    let q = spec.generator()?;
    let grid = Arc::new(gauss_hermite_rule(n_max + QUADRATURE_MARGIN, 1.5)?);
    let ws = Workspace::new(grid);
    let basis = Arc::new(BasisSet::hermite(n_max + 1));
    let phi: Vec<FunctionRep> = (0..=n_max)
        .map(|n| {
            ws.apply_exp(
                &q,
                Exponent::Half,
                &FunctionRep::basis_vector(basis.clone(), n)?,
            )
        })
        .collect::<Result<_>>()?;
    ws.gram(&phi, Product::Krein)
}

/// Largest relative difference between closed form and quadrature over the
/// entries with n + m even, and the largest |quadrature| with n + m odd.
pub fn overlap_agreement(quadrature: &Array2<Complex64>) -> Result<(f64, f64)> {
    let mut rel = 0.0f64;
    let mut odd = 0.0f64;
    for ((n, m), v) in quadrature.indexed_iter() {
        if (n + m) % 2 == 1 {
            odd = odd.max(v.norm());
        } else {
            let exact = overlap_closed_form(n, m)?;
            rel = rel.max((v.norm() - exact).abs() / exact);
        }
    }
    Ok((rel, odd))
}
