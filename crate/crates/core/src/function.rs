//! Function representations: coefficient expansions over a [`BasisSet`]
//! and raw samples on a [`QuadratureRule`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{BasisSet, QuadratureRule};
use crate::error::{Error, Result};

/// f(x) = Σ_k coeffs[k] e_k(x + shift).
///
/// A nonzero complex `shift` is only meaningful for the analytic Hermite
/// basis; it is how translations e^{tQ} with Q = 2ia d/dx act exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub(crate) basis: Arc<BasisSet>,
    pub(crate) coeffs: Vec<Complex64>,
    pub(crate) shift: Complex64,
}

impl Expansion {
    pub fn basis(&self) -> &Arc<BasisSet> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    pub fn is_shifted(&self) -> bool {
        self.shift != Complex64::new(0.0, 0.0)
    }
}

/// Values f(xᵢ) on the nodes of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub(crate) grid: Arc<QuadratureRule>,
    pub(crate) values: Vec<Complex64>,
}

impl Sampled {
    pub fn grid(&self) -> &Arc<QuadratureRule> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionRep {
    Expansion(Expansion),
    Sampled(Sampled),
}

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

impl FunctionRep {
    /// Σ coeffs[k] e_k over `basis`.
    pub fn expansion(basis: Arc<BasisSet>, coeffs: Vec<Complex64>) -> Result<Self> {
        Self::shifted_expansion(basis, coeffs, Complex64::new(0.0, 0.0))
    }

    /// Σ coeffs[k] e_k(x + shift); shifts require the Hermite basis.
    pub fn shifted_expansion(
        basis: Arc<BasisSet>,
        coeffs: Vec<Complex64>,
        shift: Complex64,
    ) -> Result<Self> {
        if coeffs.len() > basis.size() {
            return Err(Error::Structure(format!(
                "{} coefficients exceed basis size {}",
                coeffs.len(),
                basis.size()
            )));
        }
        if !all_finite(&coeffs) || !(shift.re.is_finite() && shift.im.is_finite()) {
            return Err(Error::Magnitude("non-finite expansion coefficients".into()));
        }
        if shift != Complex64::new(0.0, 0.0) && !basis.is_hermite() {
            return Err(Error::Structure(
                "only Hermite expansions can be shifted".into(),
            ));
        }
        Ok(Self::Expansion(Expansion {
            basis,
            coeffs,
            shift,
        }))
    }

    /// The basis vector e_n.
    pub fn basis_vector(basis: Arc<BasisSet>, n: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::expansion(basis, coeffs)
    }

    pub fn sampled(grid: Arc<QuadratureRule>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Structure(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if !all_finite(&values) {
            return Err(Error::Magnitude("non-finite samples".into()));
        }
        Ok(Self::Sampled(Sampled { grid, values }))
    }

    /// Samples of `f` on the nodes of `grid`.
    pub fn from_fn(grid: Arc<QuadratureRule>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::sampled(grid, values)
    }

    /// Coefficients ⟨f, e_k⟩, k < count, of a real function on the Hermite
    /// basis, by quadrature on `grid`.
    pub fn project_hermite(
        basis: Arc<BasisSet>,
        grid: &QuadratureRule,
        count: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !basis.is_hermite() {
            return Err(Error::Structure(
                "projection needs the Hermite basis".into(),
            ));
        }
        if count == 0 {
            return Self::expansion(basis, Vec::new());
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); count];
        for (&x, &w) in grid.nodes().iter().zip(grid.line_weights()) {
            let fx = f(x) * w;
            let e = crate::basis::hermite_functions(count - 1, Complex64::new(x, 0.0))?;
            for (c, ek) in coeffs.iter_mut().zip(&e) {
                *c += fx * ek.conj();
            }
        }
        Self::expansion(basis, coeffs)
    }

    pub fn as_expansion(&self) -> Option<&Expansion> {
        match self {
            Self::Expansion(e) => Some(e),
            Self::Sampled(_) => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&Sampled> {
        match self {
            Self::Sampled(s) => Some(s),
            Self::Expansion(_) => None,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, Self::Sampled(_))
    }

    /// Explicit conversion to samples on `grid`.
    pub fn to_samples(&self, grid: &Arc<QuadratureRule>) -> Result<FunctionRep> {
        match self {
            Self::Sampled(s) => {
                if s.grid.same_grid(grid) {
                    Ok(self.clone())
                } else {
                    Err(Error::Structure(
                        "cannot resample between different grids".into(),
                    ))
                }
            }
            Self::Expansion(e) => {
                let values = e.basis.sample_expansion(&e.coeffs, e.shift, grid)?;
                Self::sampled(grid.clone(), values)
            }
        }
    }

    /// Pointwise evaluation at a complex argument (Hermite expansions only).
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Self::Expansion(e) if e.basis.is_hermite() => {
                if e.coeffs.is_empty() {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let values = crate::basis::hermite_functions(e.coeffs.len() - 1, z + e.shift)?;
                Ok(values.iter().zip(&e.coeffs).map(|(v, c)| v * c).sum())
            }
            _ => Err(Error::Structure(
                "only Hermite expansions can be evaluated off the grid".into(),
            )),
        }
    }

    /// c·f in the same representation.
    pub fn scale(&self, c: Complex64) -> FunctionRep {
        match self {
            Self::Expansion(e) => Self::Expansion(Expansion {
                coeffs: e.coeffs.iter().map(|v| v * c).collect(),
                ..e.clone()
            }),
            Self::Sampled(s) => Self::Sampled(Sampled {
                grid: s.grid.clone(),
                values: s.values.iter().map(|v| v * c).collect(),
            }),
        }
    }

    /// Σ cᵢ fᵢ when every term shares one representation: expansions over
    /// the same family with an identical shift, or samples on one grid.
    pub fn linear_combination(terms: &[(Complex64, &FunctionRep)]) -> Result<FunctionRep> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Structure("empty linear combination".into()));
        };
        match first {
            Self::Expansion(head) => {
                let mut basis = head.basis.clone();
                let mut coeffs: Vec<Complex64> = Vec::new();
                for (c, f) in terms {
                    let Self::Expansion(e) = f else {
                        return Err(Error::Structure("mixed representations".into()));
                    };
                    if !e.basis.same_family(&head.basis) || e.shift != head.shift {
                        return Err(Error::Structure(
                            "expansions differ in basis or shift".into(),
                        ));
                    }
                    if e.basis.size() > basis.size() {
                        basis = e.basis.clone();
                    }
                    if coeffs.len() < e.coeffs.len() {
                        coeffs.resize(e.coeffs.len(), Complex64::new(0.0, 0.0));
                    }
                    for (acc, v) in coeffs.iter_mut().zip(&e.coeffs) {
                        *acc += c * v;
                    }
                }
                Self::shifted_expansion(basis, coeffs, head.shift)
            }
            Self::Sampled(head) => {
                let mut values = vec![Complex64::new(0.0, 0.0); head.values.len()];
                for (c, f) in terms {
                    let Self::Sampled(s) = f else {
                        return Err(Error::Structure("mixed representations".into()));
                    };
                    if !s.grid.same_grid(&head.grid) {
                        return Err(Error::Structure("samples live on different grids".into()));
                    }
                    for (acc, v) in values.iter_mut().zip(&s.values) {
                        *acc += c * v;
                    }
                }
                Self::sampled(head.grid.clone(), values)
            }
        }
    }
}
