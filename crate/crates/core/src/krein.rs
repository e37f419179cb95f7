//! Hilbert and Krein inner products, the fundamental symmetry J and Gram
//! matrices of function families.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::basis::QuadratureRule;
use crate::error::{Error, Result};
use crate::function::{Expansion, FunctionRep, Sampled};
use crate::metric::{Exponent, MetricOperatorQ, Sign};

/// The fundamental symmetry J of the Krein space. Only parity,
/// (Jf)(x) = f(-x), is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FundamentalSymmetryJ {
    #[default]
    Parity,
}

impl FundamentalSymmetryJ {
    pub fn apply(&self, f: &FunctionRep) -> Result<FunctionRep> {
        match self {
            Self::Parity => apply_parity(f),
        }
    }
}

/// (Jf)(x) = f(-x). Expansions flip odd coefficients and the sign of the
/// shift; samples are reversed, which needs a mirror-symmetric grid.
pub fn apply_parity(f: &FunctionRep) -> Result<FunctionRep> {
    match f {
        FunctionRep::Expansion(e) => {
            let signs = e.basis.parity_signs();
            let coeffs = e
                .coeffs
                .iter()
                .zip(signs)
                .map(|(c, &s)| c * s as f64)
                .collect();
            Ok(FunctionRep::Expansion(Expansion {
                basis: e.basis.clone(),
                coeffs,
                shift: -e.shift,
            }))
        }
        FunctionRep::Sampled(s) => {
            if !s.grid.is_symmetric() {
                return Err(Error::Structure(
                    "parity on samples needs a symmetric grid".into(),
                ));
            }
            Ok(FunctionRep::Sampled(Sampled {
                grid: s.grid.clone(),
                values: s.values.iter().rev().copied().collect(),
            }))
        }
    }
}

/// ⟨f, g⟩, linear in the first slot.
///
/// Defined for unshifted expansions over the same family (coefficient sum)
/// or samples on one grid (quadrature). Anything else must be converted
/// explicitly, for instance through a [`Workspace`].
pub fn inner(f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
    match (f, g) {
        (FunctionRep::Expansion(a), FunctionRep::Expansion(b)) => {
            if !a.basis.same_family(&b.basis) {
                return Err(Error::Structure("expansions over different bases".into()));
            }
            if a.is_shifted() || b.is_shifted() {
                return Err(Error::Structure(
                    "shifted expansions are not orthonormal; sample them first".into(),
                ));
            }
            Ok(a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(c, d)| c * d.conj())
                .sum())
        }
        (FunctionRep::Sampled(a), FunctionRep::Sampled(b)) => {
            if !a.grid.same_grid(&b.grid) {
                return Err(Error::Structure("samples on different grids".into()));
            }
            Ok(a.values
                .iter()
                .zip(&b.values)
                .zip(a.grid.line_weights())
                .map(|((u, v), w)| u * v.conj() * w)
                .sum())
        }
        _ => Err(Error::Structure(
            "inner product between expansion and samples; convert explicitly".into(),
        )),
    }
}

/// [f, g] = ⟨Jf, g⟩.
pub fn krein_inner(f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
    inner(&apply_parity(f)?, g)
}

/// Which sesquilinear form a Gram matrix evaluates.
#[derive(Debug, Clone, Copy)]
pub enum Product<'a> {
    Hilbert,
    Krein,
    /// ⟨f, g⟩_{±Q} = ⟨e^{±Q/2} f, e^{±Q/2} g⟩.
    Weighted(&'a MetricOperatorQ, Sign),
}

/// Strict Gram matrix Mₙₘ = product(familyₙ, familyₘ) without any
/// representation conversion. Weighted products need a [`Workspace`].
pub fn gram_matrix(family: &[FunctionRep], product: Product<'_>) -> Result<Array2<Complex64>> {
    if family.is_empty() {
        return Err(Error::Structure("Gram matrix of an empty family".into()));
    }
    let transformed: Vec<FunctionRep> = match product {
        Product::Hilbert => family.to_vec(),
        Product::Krein => family.iter().map(apply_parity).collect::<Result<_>>()?,
        Product::Weighted(q, sign) => {
            let family: Vec<FunctionRep> = family
                .iter()
                .map(|f| crate::metric::apply_exp_q(q, sign.half(), f))
                .collect::<Result<_>>()?;
            return pairwise(&family, &family);
        }
    };
    pairwise(&transformed, family)
}

fn pairwise(left: &[FunctionRep], right: &[FunctionRep]) -> Result<Array2<Complex64>> {
    let mut out = Array2::zeros((left.len(), right.len()));
    for (i, f) in left.iter().enumerate() {
        for (j, g) in right.iter().enumerate() {
            out[[i, j]] = inner(f, g)?;
        }
    }
    Ok(out)
}

/// Largest |Mₙₘ - conj(Mₘₙ)|.
pub fn hermitian_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

/// A working grid that reconciles representations.
///
/// Operations that are exact in coefficient form stay there; anything that
/// mixes representations, or involves shifted expansions, is sampled on the
/// working grid first. The conversion is explicit in that every such
/// product goes through this type.
#[derive(Debug, Clone)]
pub struct Workspace {
    grid: Arc<QuadratureRule>,
}

fn directly_compatible(f: &FunctionRep, g: &FunctionRep) -> bool {
    match (f, g) {
        (FunctionRep::Expansion(a), FunctionRep::Expansion(b)) => {
            !a.is_shifted() && !b.is_shifted() && a.basis.same_family(&b.basis)
        }
        (FunctionRep::Sampled(a), FunctionRep::Sampled(b)) => a.grid.same_grid(&b.grid),
        _ => false,
    }
}

impl Workspace {
    pub fn new(grid: Arc<QuadratureRule>) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> &Arc<QuadratureRule> {
        &self.grid
    }

    /// f sampled on the working grid.
    pub fn sample(&self, f: &FunctionRep) -> Result<FunctionRep> {
        f.to_samples(&self.grid)
    }

    pub fn inner(&self, f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
        if directly_compatible(f, g) {
            inner(f, g)
        } else {
            inner(&self.sample(f)?, &self.sample(g)?)
        }
    }

    pub fn krein_inner(&self, f: &FunctionRep, g: &FunctionRep) -> Result<Complex64> {
        self.inner(&apply_parity(f)?, g)
    }

    pub fn norm(&self, f: &FunctionRep) -> Result<f64> {
        Ok(self.inner(f, f)?.re.max(0.0).sqrt())
    }

    /// Σ cᵢ fᵢ, in coefficient form when possible and on the grid otherwise.
    pub fn combine(&self, terms: &[(Complex64, &FunctionRep)]) -> Result<FunctionRep> {
        match FunctionRep::linear_combination(terms) {
            Ok(f) => Ok(f),
            Err(Error::Structure(_)) => {
                let sampled: Vec<FunctionRep> = terms
                    .iter()
                    .map(|(_, f)| self.sample(f))
                    .collect::<Result<_>>()?;
                let terms: Vec<(Complex64, &FunctionRep)> = terms
                    .iter()
                    .zip(&sampled)
                    .map(|((c, _), f)| (*c, f))
                    .collect();
                FunctionRep::linear_combination(&terms)
            }
            Err(e) => Err(e),
        }
    }

    /// ‖f - g‖.
    pub fn distance(&self, f: &FunctionRep, g: &FunctionRep) -> Result<f64> {
        let one = Complex64::new(1.0, 0.0);
        self.norm(&self.combine(&[(one, f), (-one, g)])?)
    }

    /// e^{tQ} f, sampling f first when Q acts pointwise.
    pub fn apply_exp(
        &self,
        q: &MetricOperatorQ,
        t: Exponent,
        f: &FunctionRep,
    ) -> Result<FunctionRep> {
        match (q, f) {
            (MetricOperatorQ::Multiplication { .. }, FunctionRep::Expansion(_)) => {
                crate::metric::apply_exp_q(q, t, &self.sample(f)?)
            }
            _ => crate::metric::apply_exp_q(q, t, f),
        }
    }

    /// ⟨f, g⟩_{±Q} = ⟨e^{±Q/2} f, e^{±Q/2} g⟩.
    pub fn weighted_inner(
        &self,
        q: &MetricOperatorQ,
        sign: Sign,
        f: &FunctionRep,
        g: &FunctionRep,
    ) -> Result<Complex64> {
        self.inner(
            &self.apply_exp(q, sign.half(), f)?,
            &self.apply_exp(q, sign.half(), g)?,
        )
    }

    pub fn product(
        &self,
        product: Product<'_>,
        f: &FunctionRep,
        g: &FunctionRep,
    ) -> Result<Complex64> {
        match product {
            Product::Hilbert => self.inner(f, g),
            Product::Krein => self.krein_inner(f, g),
            Product::Weighted(q, sign) => self.weighted_inner(q, sign, f, g),
        }
    }

    /// Gram matrix of `family` under `product`.
    pub fn gram(&self, family: &[FunctionRep], product: Product<'_>) -> Result<Array2<Complex64>> {
        self.cross_gram(family, family, product)
    }

    /// Mₙₘ = product(leftₙ, rightₘ).
    pub fn cross_gram(
        &self,
        left: &[FunctionRep],
        right: &[FunctionRep],
        product: Product<'_>,
    ) -> Result<Array2<Complex64>> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Structure("Gram matrix of an empty family".into()));
        }
        let prepare = |family: &[FunctionRep], first: bool| -> Result<Vec<FunctionRep>> {
            family
                .iter()
                .map(|f| {
                    let f = match product {
                        Product::Krein if first => apply_parity(f)?,
                        Product::Weighted(q, sign) => self.apply_exp(q, sign.half(), f)?,
                        _ => f.clone(),
                    };
                    match &f {
                        FunctionRep::Expansion(e) if !e.is_shifted() => Ok(f),
                        _ => self.sample(&f),
                    }
                })
                .collect()
        };
        let mut l = prepare(left, true)?;
        let mut r = prepare(right, false)?;
        // Mixed families are brought onto the grid together.
        let mixed = l.iter().chain(&r).any(FunctionRep::is_sampled)
            && l.iter().chain(&r).any(|f| !f.is_sampled());
        if mixed {
            l = l.iter().map(|f| self.sample(f)).collect::<Result<_>>()?;
            r = r.iter().map(|f| self.sample(f)).collect::<Result<_>>()?;
        }
        pairwise(&l, &r)
    }
}
