//! Dual pairs φₙ = e^{Q/2}eₙ, ψₙ = e^{-Q/2}eₙ and the Hilbert-space
//! identities they satisfy.

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{BasisSet, QuadratureRule};
use crate::defaults::DECAY_THRESHOLD;
use crate::error::{Error, Result};
use crate::function::FunctionRep;
use crate::krein::{Product, Workspace};
use crate::metric::{signed_decay_score, Exponent, MetricOperatorQ, Sign};

/// A truncated biorthogonal pair of sequences built from an orthonormal
/// basis and a metric generator.
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    basis: Arc<BasisSet>,
    q: MetricOperatorQ,
    n: usize,
    ws: Workspace,
    basis_reps: Vec<FunctionRep>,
    phi: Vec<FunctionRep>,
    psi: Vec<FunctionRep>,
    signs: Option<Vec<i8>>,
    min_decay_score: f64,
}

impl BiorthogonalSystem {
    pub fn basis(&self) -> &Arc<BasisSet> {
        &self.basis
    }

    pub fn q(&self) -> &MetricOperatorQ {
        &self.q
    }

    /// Truncation N.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn workspace(&self) -> &Workspace {
        &self.ws
    }

    /// eₙ in the representation the system works in.
    pub fn basis_vectors(&self) -> &[FunctionRep] {
        &self.basis_reps
    }

    pub fn phi(&self) -> &[FunctionRep] {
        &self.phi
    }

    pub fn psi(&self) -> &[FunctionRep] {
        &self.psi
    }

    /// The sign sequence δₙ = [φₙ, φₙ], once attached.
    pub fn signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    pub fn with_signs(mut self, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != self.n || signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Structure(
                "sign sequence must hold N entries of ±1".into(),
            ));
        }
        self.signs = Some(signs);
        Ok(self)
    }

    /// Smallest decay score seen while building.
    pub fn min_decay_score(&self) -> f64 {
        self.min_decay_score
    }

    /// 1 - smallest decay score.
    pub fn decay_deficit(&self) -> f64 {
        1.0 - self.min_decay_score
    }
}

/// Build the pair with the default decay threshold.
pub fn build_system(
    q: MetricOperatorQ,
    basis: Arc<BasisSet>,
    n: usize,
    grid: Arc<QuadratureRule>,
) -> Result<BiorthogonalSystem> {
    build_system_with_threshold(q, basis, n, grid, DECAY_THRESHOLD)
}

/// Build φₙ, ψₙ for n < N. Multiplication generators work on samples of
/// the basis on `grid`; translations and diagonal generators stay in
/// coefficient form. `grid` is also the working grid for every product.
pub fn build_system_with_threshold(
    q: MetricOperatorQ,
    basis: Arc<BasisSet>,
    n: usize,
    grid: Arc<QuadratureRule>,
    threshold: f64,
) -> Result<BiorthogonalSystem> {
    if n == 0 || n > basis.size() {
        return Err(Error::Domain(format!(
            "truncation {n} must lie in 1..={}",
            basis.size()
        )));
    }
    let ws = Workspace::new(grid);
    let mut basis_reps = Vec::with_capacity(n);
    let mut phi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    let mut min_score = 1.0f64;
    for k in 0..n {
        let mut e = FunctionRep::basis_vector(basis.clone(), k)?;
        if matches!(q, MetricOperatorQ::Multiplication { .. }) {
            e = ws.sample(&e)?;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let score = signed_decay_score(&q, sign, &e, &ws);
            if score < threshold {
                return Err(Error::DomainDecay {
                    n: k,
                    sign: sign.as_i8(),
                    score,
                    threshold,
                });
            }
            min_score = min_score.min(score);
        }
        phi.push(ws.apply_exp(&q, Exponent::Half, &e)?);
        psi.push(ws.apply_exp(&q, Exponent::MinusHalf, &e)?);
        basis_reps.push(e);
    }
    Ok(BiorthogonalSystem {
        basis,
        q,
        n,
        ws,
        basis_reps,
        phi,
        psi,
        signs: None,
        min_decay_score: min_score,
    })
}

fn identity_defect(m: &ndarray::Array2<Complex64>) -> f64 {
    m.indexed_iter().fold(0.0f64, |worst, ((i, j), v)| {
        let id = if i == j { 1.0 } else { 0.0 };
        worst.max((v - id).norm())
    })
}

/// max |⟨φₙ, ψₘ⟩ - δₙₘ|.
pub fn biorthogonality_defect(sys: &BiorthogonalSystem) -> Result<f64> {
    Ok(identity_defect(&sys.ws.cross_gram(
        &sys.phi,
        &sys.psi,
        Product::Hilbert,
    )?))
}

/// max |⟨φₙ, φₘ⟩_{-Q} - δₙₘ| and max |⟨ψₙ, ψₘ⟩_{Q} - δₙₘ|.
pub fn weighted_orthonormality_defect(sys: &BiorthogonalSystem) -> Result<(f64, f64)> {
    let phi = sys
        .ws
        .gram(&sys.phi, Product::Weighted(&sys.q, Sign::Minus))?;
    let psi = sys
        .ws
        .gram(&sys.psi, Product::Weighted(&sys.q, Sign::Plus))?;
    Ok((identity_defect(&phi), identity_defect(&psi)))
}

/// max ‖e^{-Q/2}φₙ - eₙ‖.
pub fn reconstruction_defect(sys: &BiorthogonalSystem) -> Result<f64> {
    let mut worst = 0.0f64;
    for (phi, e) in sys.phi.iter().zip(&sys.basis_reps) {
        let back = sys.ws.apply_exp(&sys.q, Exponent::MinusHalf, phi)?;
        worst = worst.max(sys.ws.distance(&back, e)?);
    }
    Ok(worst)
}

fn check_safe(sys: &BiorthogonalSystem, f: &FunctionRep, label: &str) -> Result<()> {
    for sign in [Sign::Plus, Sign::Minus] {
        let score = signed_decay_score(&sys.q, sign, f, &sys.ws);
        if score < DECAY_THRESHOLD {
            return Err(Error::Domain(format!(
                "{label} leaves the decay-safe domain of e^{{{:+}Q/2}} (score {score:.3e})",
                sign.as_i8()
            )));
        }
    }
    Ok(())
}

/// The two resolution-of-identity defects
/// |⟨f,g⟩ - Σ ⟨f,φₙ⟩⟨ψₙ,g⟩| and |⟨f,g⟩ - Σ ⟨f,ψₙ⟩⟨φₙ,g⟩| over n < N.
pub fn gq_basis_defect(
    sys: &BiorthogonalSystem,
    f: &FunctionRep,
    g: &FunctionRep,
) -> Result<(f64, f64)> {
    check_safe(sys, f, "f")?;
    check_safe(sys, g, "g")?;
    let ws = &sys.ws;
    let fg = ws.inner(f, g)?;
    let mut phi_psi = Complex64::new(0.0, 0.0);
    let mut psi_phi = Complex64::new(0.0, 0.0);
    for (phi, psi) in sys.phi.iter().zip(&sys.psi) {
        phi_psi += ws.inner(f, phi)? * ws.inner(psi, g)?;
        psi_phi += ws.inner(f, psi)? * ws.inner(phi, g)?;
    }
    Ok(((fg - phi_psi).norm(), (fg - psi_phi).norm()))
}

/// Σ|cₙ|² against the quadrature value of ⟨G₀f, f⟩ = ⟨Σcₙψₙ, Σcₘφₘ⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G0Check {
    pub exact: f64,
    pub quadrature: Complex64,
}

impl G0Check {
    pub fn defect(&self) -> f64 {
        (self.quadrature - self.exact).norm()
    }
}

pub fn g0_quadratic_check(sys: &BiorthogonalSystem, c: &[Complex64]) -> Result<G0Check> {
    if c.is_empty() || c.len() > sys.n {
        return Err(Error::Domain(format!(
            "coefficient vector length {} must lie in 1..={}",
            c.len(),
            sys.n
        )));
    }
    let psi_terms: Vec<(Complex64, &FunctionRep)> = c.iter().copied().zip(&sys.psi).collect();
    let phi_terms: Vec<(Complex64, &FunctionRep)> = c.iter().copied().zip(&sys.phi).collect();
    let g0f = sys.ws.combine(&psi_terms)?;
    let f = sys.ws.combine(&phi_terms)?;
    Ok(G0Check {
        exact: c.iter().map(|v| v.norm_sqr()).sum(),
        quadrature: sys.ws.inner(&g0f, &f)?,
    })
}

/// ⟨f, g⟩_{±Q} = ⟨e^{±Q/2} f, e^{±Q/2} g⟩.
pub fn weighted_inner(
    ws: &Workspace,
    q: &MetricOperatorQ,
    sign: Sign,
    f: &FunctionRep,
    g: &FunctionRep,
) -> Result<Complex64> {
    ws.weighted_inner(q, sign, f, g)
}
