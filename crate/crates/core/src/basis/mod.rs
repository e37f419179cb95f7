//! Orthonormal bases {e_n}: analytic Hermite functions and the numerically
//! computed anharmonic-oscillator eigenbasis, plus the quadrature rules
//! that integrate them.

use std::sync::Arc;

use num_complex::Complex64;

use crate::defaults::MAX_IMAG_ARGUMENT;
use crate::error::{Error, Result};

mod anharmonic;
mod hermite;
mod quadrature;
pub mod tridiag;

pub use anharmonic::{anharmonic_eigenbasis, anharmonic_tridiagonal};
pub use hermite::{hermite_function, hermite_functions};
pub use quadrature::{
    gauss_hermite_rule, hermite_half_width, hermite_uniform_rule, uniform_rule, QuadratureKind,
    QuadratureRule,
};

#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    HermiteAnalytic,
    AnharmonicNumeric {
        beta: f64,
        grid: Arc<QuadratureRule>,
        /// Eigenvector samples, normalized so that h·Σ v² = 1.
        vectors: Vec<Vec<f64>>,
        energies: Vec<f64>,
    },
}

/// A finite orthonormal family e_0, …, e_{size-1} with known parity.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub(crate) kind: BasisKind,
    pub(crate) size: usize,
    pub(crate) parity_signs: Vec<i8>,
}

impl BasisSet {
    /// The first `size` Hermite functions.
    pub fn hermite(size: usize) -> Self {
        let parity_signs = (0..size).map(|n| if n % 2 == 0 { 1 } else { -1 }).collect();
        Self {
            kind: BasisKind::HermiteAnalytic,
            size,
            parity_signs,
        }
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// J e_n = parity_signs[n] e_n.
    pub fn parity_signs(&self) -> &[i8] {
        &self.parity_signs
    }

    pub fn is_hermite(&self) -> bool {
        matches!(self.kind, BasisKind::HermiteAnalytic)
    }

    pub fn energies(&self) -> Option<&[f64]> {
        match &self.kind {
            BasisKind::AnharmonicNumeric { energies, .. } => Some(energies),
            BasisKind::HermiteAnalytic => None,
        }
    }

    /// Grid carrying a numeric basis.
    pub fn grid(&self) -> Option<&Arc<QuadratureRule>> {
        match &self.kind {
            BasisKind::AnharmonicNumeric { grid, .. } => Some(grid),
            BasisKind::HermiteAnalytic => None,
        }
    }

    pub fn vector(&self, n: usize) -> Option<&[f64]> {
        match &self.kind {
            BasisKind::AnharmonicNumeric { vectors, .. } => vectors.get(n).map(Vec::as_slice),
            BasisKind::HermiteAnalytic => None,
        }
    }

    /// Whether coefficient vectors over `self` and `other` describe the same
    /// functions index by index.
    pub fn same_family(&self, other: &BasisSet) -> bool {
        match (&self.kind, &other.kind) {
            (BasisKind::HermiteAnalytic, BasisKind::HermiteAnalytic) => true,
            (BasisKind::AnharmonicNumeric { .. }, BasisKind::AnharmonicNumeric { .. }) => {
                std::ptr::eq(self, other) || self == other
            }
            _ => false,
        }
    }

    /// Largest max-norm residual of J e_n - parity_signs[n] e_n, relative to
    /// max|e_n|. Zero by construction for Hermite functions.
    pub fn parity_defect(&self) -> f64 {
        match &self.kind {
            BasisKind::HermiteAnalytic => 0.0,
            BasisKind::AnharmonicNumeric { vectors, .. } => vectors
                .iter()
                .zip(&self.parity_signs)
                .map(|(v, &s)| {
                    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    v.iter()
                        .zip(v.iter().rev())
                        .fold(0.0f64, |m, (a, b)| m.max((b - s as f64 * a).abs()))
                        / peak
                })
                .fold(0.0, f64::max),
        }
    }

    /// Samples of Σ_k c_k e_k(x + shift) on the nodes of `grid`.
    pub fn sample_expansion(
        &self,
        coeffs: &[Complex64],
        shift: Complex64,
        grid: &QuadratureRule,
    ) -> Result<Vec<Complex64>> {
        if coeffs.len() > self.size {
            return Err(Error::Structure(format!(
                "{} coefficients exceed basis size {}",
                coeffs.len(),
                self.size
            )));
        }
        match &self.kind {
            BasisKind::HermiteAnalytic => {
                hermite::check_imag(shift, MAX_IMAG_ARGUMENT)?;
                if coeffs.is_empty() {
                    return Ok(vec![Complex64::new(0.0, 0.0); grid.len()]);
                }
                grid.nodes()
                    .iter()
                    .map(|&x| {
                        let values =
                            hermite_functions(coeffs.len() - 1, Complex64::new(x, 0.0) + shift)?;
                        Ok(values.iter().zip(coeffs).map(|(e, c)| e * c).sum())
                    })
                    .collect()
            }
            BasisKind::AnharmonicNumeric {
                grid: own, vectors, ..
            } => {
                if shift != Complex64::new(0.0, 0.0) {
                    return Err(Error::Structure(
                        "numeric bases cannot be evaluated at shifted arguments".into(),
                    ));
                }
                if !own.same_grid(grid) {
                    return Err(Error::Structure(
                        "numeric basis sampled on a grid other than its own".into(),
                    ));
                }
                let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
                for (v, c) in vectors.iter().zip(coeffs) {
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += c * x;
                    }
                }
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_gram_is_identity() {
        // ⟨e_n, e_m⟩ via the e^{-x²} rule after folding out the weight.
        let n_max = 40;
        let rule = gauss_hermite_rule(n_max + 10, 1.0).unwrap();
        let samples: Vec<Vec<Complex64>> = rule
            .nodes()
            .iter()
            .map(|&x| hermite_functions(n_max - 1, Complex64::new(x, 0.0)).unwrap())
            .collect();
        for n in 0..n_max {
            for m in 0..n_max {
                let g: f64 = samples
                    .iter()
                    .zip(rule.line_weights())
                    .map(|(s, w)| w * (s[n] * s[m]).re)
                    .sum();
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((g - expected).abs() < 1e-10, "({n},{m}) = {g}");
            }
        }
    }

    #[test]
    fn contour_shift_identity() {
        // ∫ e_n(x+ia) e_m(x+ia) dx = δ_nm
        let rule = gauss_hermite_rule(90, 1.0).unwrap();
        for a in [-1.0, -0.3, 0.5, 1.0] {
            let shift = Complex64::new(0.0, a);
            let samples: Vec<Vec<Complex64>> = rule
                .nodes()
                .iter()
                .map(|&x| hermite_functions(19, Complex64::new(x, 0.0) + shift).unwrap())
                .collect();
            for n in 0..20 {
                for m in 0..20 {
                    let g: Complex64 = samples
                        .iter()
                        .zip(rule.line_weights())
                        .map(|(s, w)| s[n] * s[m] * w)
                        .sum();
                    let expected = if n == m { 1.0 } else { 0.0 };
                    assert!((g - expected).norm() < 1e-8, "a={a} ({n},{m}) = {g}");
                }
            }
        }
    }

    #[test]
    fn hermite_parity_signs_alternate() {
        let b = BasisSet::hermite(6);
        assert_eq!(b.parity_signs(), &[1, -1, 1, -1, 1, -1]);
        assert_eq!(b.parity_defect(), 0.0);
    }

    #[test]
    fn sample_expansion_checks_sizes_and_grids() {
        let b = BasisSet::hermite(3);
        let grid = gauss_hermite_rule(8, 1.0).unwrap();
        let too_many = vec![Complex64::new(1.0, 0.0); 4];
        assert!(b
            .sample_expansion(&too_many, Complex64::new(0.0, 0.0), &grid)
            .is_err());

        let numeric =
            anharmonic_eigenbasis(4.0, Arc::new(uniform_rule(6.0, 400).unwrap()), 2).unwrap();
        let other = uniform_rule(6.0, 401).unwrap();
        let c = [Complex64::new(1.0, 0.0)];
        assert!(matches!(
            numeric.sample_expansion(&c, Complex64::new(0.0, 0.0), &other),
            Err(Error::Structure(_))
        ));
        assert!(numeric
            .sample_expansion(&c, Complex64::new(0.0, 0.0), numeric.grid().unwrap())
            .is_ok());
    }
}
