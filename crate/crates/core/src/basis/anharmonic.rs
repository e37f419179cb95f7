//! Finite-difference eigenbasis of H_β = -d²/dx² + |x|^β.

use std::sync::Arc;

use super::quadrature::QuadratureRule;
use super::tridiag::{inverse_iteration, lowest_eigenvalues};
use super::{BasisKind, BasisSet};
use crate::defaults::TOL_PARITY;
use crate::error::{Error, Result};

/// Diagonal and off-diagonal of the central-difference H_β with Dirichlet
/// ends on a uniform grid.
pub fn anharmonic_tridiagonal(beta: f64, grid: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = grid
        .spacing()
        .ok_or_else(|| Error::Structure("anharmonic basis needs a uniform grid".into()))?;
    let inv_h2 = 1.0 / (h * h);
    let diag = grid
        .nodes()
        .iter()
        .map(|x| 2.0 * inv_h2 + x.abs().powf(beta))
        .collect();
    let off = vec![-inv_h2; grid.len() - 1];
    Ok((diag, off))
}

/// Lowest `k` eigenpairs of the discretized anharmonic oscillator.
///
/// Eigenvectors are normalized in the grid inner product h·Σ v² = 1 and
/// sign-fixed so that, scanning from the left end, the first component above
/// 1e-6·max|v| is positive. Parity signs are measured and must alternate
/// starting even.
pub fn anharmonic_eigenbasis(beta: f64, grid: Arc<QuadratureRule>, k: usize) -> Result<BasisSet> {
    if !(beta > 2.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "anharmonic exponent must exceed 2, got {beta}"
        )));
    }
    if !grid.is_uniform() || !grid.is_symmetric() {
        return Err(Error::Structure(
            "anharmonic basis needs a symmetric uniform grid".into(),
        ));
    }
    if k == 0 || 4 * k > grid.len() {
        return Err(Error::Domain(format!(
            "requested {k} eigenvectors on {} points (at most points/4)",
            grid.len()
        )));
    }
    let h = grid.spacing().unwrap_or(1.0);
    let (diag, off) = anharmonic_tridiagonal(beta, &grid)?;
    let energies = lowest_eigenvalues(&diag, &off, k)?;
    if energies.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Resolution(
            "anharmonic energies are not strictly increasing".into(),
        ));
    }

    let mut vectors = Vec::with_capacity(k);
    let mut parity_signs = Vec::with_capacity(k);
    for (n, &energy) in energies.iter().enumerate() {
        let mut v = inverse_iteration(&diag, &off, energy)?;
        let norm = 1.0 / h.sqrt();
        v.iter_mut().for_each(|x| *x *= norm);
        fix_sign(&mut v);

        let overlap: f64 = v.iter().zip(v.iter().rev()).map(|(a, b)| a * b).sum();
        let sign: i8 = if overlap >= 0.0 { 1 } else { -1 };
        let expected: i8 = if n % 2 == 0 { 1 } else { -1 };
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let defect = v
            .iter()
            .zip(v.iter().rev())
            .fold(0.0f64, |m, (a, b)| m.max((b - sign as f64 * a).abs()))
            / peak;
        if sign != expected || defect > TOL_PARITY {
            return Err(Error::Resolution(format!(
                "eigenvector {n} has parity {sign:+} with defect {defect:.3e}; grid too coarse"
            )));
        }
        parity_signs.push(sign);
        vectors.push(v);
    }

    Ok(BasisSet {
        kind: BasisKind::AnharmonicNumeric {
            beta,
            grid,
            vectors,
            energies,
        },
        size: k,
        parity_signs,
    })
}

fn fix_sign(v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-6 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
