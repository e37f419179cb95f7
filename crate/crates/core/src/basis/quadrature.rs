use serde::Serialize;

use super::hermite::christoffel_and_ratio;
use super::tridiag::symmetric_eigenvalues;
use crate::defaults::MAX_QUADRATURE_ORDER;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadratureKind {
    /// Gauss-Hermite rule for the weight e^{-scale·x²}.
    GaussHermite { scale: f64 },
    /// Interior nodes of a uniform Dirichlet grid on (-L, L), weight h.
    UniformTrapezoid { half_width: f64, points: usize },
}

/// Nodes and weights on the real line.
///
/// `weights` integrate against the rule's own weight function;
/// `line_weights` integrate plain functions, ∫ f dx ≈ Σ Wᵢ f(xᵢ). For
/// Gauss-Hermite rules Wᵢ = wᵢ e^{s xᵢ²}, computed directly in log space
/// so the outermost nodes keep full relative accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    line_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn line_weights(&self) -> &[f64] {
        &self.line_weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest |x| over the nodes.
    pub fn extent(&self) -> f64 {
        self.nodes.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Grid spacing of a uniform rule.
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            QuadratureKind::UniformTrapezoid { half_width, points } => {
                Some(2.0 * half_width / (points as f64 + 1.0))
            }
            QuadratureKind::GaussHermite { .. } => None,
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, QuadratureKind::UniformTrapezoid { .. })
    }

    /// Nodes mirror exactly: x[i] = -x[n-1-i].
    pub fn is_symmetric(&self) -> bool {
        let n = self.nodes.len();
        (0..n).all(|i| self.nodes[i] == -self.nodes[n - 1 - i])
    }

    /// ∫ f(x) w(x) dx with the rule's weight function.
    pub fn integrate_weighted(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// ∫ f(x) dx.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.line_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// A rule from raw nodes and plain-line weights, for tests of grid guards.
    #[cfg(test)]
    pub(crate) fn from_parts(nodes: Vec<f64>, line_weights: Vec<f64>) -> Self {
        Self {
            kind: QuadratureKind::UniformTrapezoid {
                half_width: 1.0,
                points: nodes.len(),
            },
            weights: line_weights.clone(),
            nodes,
            line_weights,
        }
    }

    /// Same rule object (cheap identity) or identical nodes and weights.
    pub fn same_grid(&self, other: &QuadratureRule) -> bool {
        std::ptr::eq(self, other)
            || (self.nodes == other.nodes && self.line_weights == other.line_weights)
    }
}

/// Gauss-Hermite rule of the given order for the weight e^{-scale·x²}.
///
/// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
/// the Hermite recurrence (off-diagonal √(k/2)), refined by one Newton step
/// and mirrored exactly; weights come from the Christoffel function
/// 1 / Σ_{k<order} h_k(xᵢ)², then the rule is rescaled by 1/√scale.
pub fn gauss_hermite_rule(order: usize, scale: f64) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(Error::Domain(format!(
            "Gauss-Hermite order must lie in 1..={MAX_QUADRATURE_ORDER}, got {order}"
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!(
            "Gauss-Hermite scale must be positive, got {scale}"
        )));
    }
    let diag = vec![0.0; order];
    let off: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = symmetric_eigenvalues(&diag, &off)?;

    let newton_scale = (2.0 * order as f64).sqrt();
    for x in nodes.iter_mut() {
        let (_, ratio) = christoffel_and_ratio(order, *x);
        let step = ratio / newton_scale;
        if step.is_finite() {
            *x -= step;
        }
    }
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }

    let root = scale.sqrt();
    let mut weights = Vec::with_capacity(order);
    let mut line_weights = Vec::with_capacity(order);
    for &x in &nodes {
        let (ln_sum, _) = christoffel_and_ratio(order, x);
        line_weights.push((-ln_sum).exp() / root);
        weights.push((-ln_sum - x * x).exp() / root);
    }
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
        let lw = 0.5 * (line_weights[i] + line_weights[j]);
        line_weights[i] = lw;
        line_weights[j] = lw;
    }
    let nodes = nodes.into_iter().map(|x| x / root).collect();
    Ok(QuadratureRule {
        kind: QuadratureKind::GaussHermite { scale },
        nodes,
        weights,
        line_weights,
    })
}

/// Uniform grid of `points` interior nodes on (-L, L), spacing
/// h = 2L/(points+1), all weights h. Endpoints carry the Dirichlet zeros.
pub fn uniform_rule(half_width: f64, points: usize) -> Result<QuadratureRule> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::Domain(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    if points < 2 {
        return Err(Error::Domain(format!(
            "uniform grid needs at least 2 points, got {points}"
        )));
    }
    let h = 2.0 * half_width / (points as f64 + 1.0);
    let mut nodes: Vec<f64> = (0..points)
        .map(|j| -half_width + (j as f64 + 1.0) * h)
        .collect();
    for i in 0..points / 2 {
        let j = points - 1 - i;
        nodes[j] = -nodes[i];
    }
    if points % 2 == 1 {
        nodes[points / 2] = 0.0;
    }
    Ok(QuadratureRule {
        kind: QuadratureKind::UniformTrapezoid { half_width, points },
        nodes,
        weights: vec![h; points],
        line_weights: vec![h; points],
    })
}

/// Half-width heuristic for Hermite work up to index n: √(2n+1) + 6.
pub fn hermite_half_width(n_max: usize) -> f64 {
    (2.0 * n_max as f64 + 1.0).sqrt() + 6.0
}

/// Uniform grid following the Hermite extent heuristic with at least 16
/// points per unit length.
pub fn hermite_uniform_rule(n_max: usize) -> Result<QuadratureRule> {
    let half_width = hermite_half_width(n_max);
    let points = (2.0 * half_width * 16.0).ceil() as usize;
    uniform_rule(half_width, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;
    use std::f64::consts::PI;

    #[test]
    fn one_point_rule() {
        let r = gauss_hermite_rule(1, 1.0).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn order_twenty_moments() {
        let r = gauss_hermite_rule(20, 1.0).unwrap();
        let total: f64 = r.weights().iter().sum();
        assert!((total - PI.sqrt()).abs() < 1e-13);
        let second = r.integrate_weighted(|x| x * x);
        assert!((second - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    fn gaussian_moment(k: usize, s: f64) -> f64 {
        // ∫ x^k e^{-s x²} dx = Γ((k+1)/2) / s^{(k+1)/2} for even k
        if k % 2 == 1 {
            0.0
        } else {
            let p = (k as f64 + 1.0) / 2.0;
            (log_gamma(p).unwrap() - p * s.ln()).exp()
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2q_minus_1() {
        for &(q, s) in &[(8usize, 1.0), (15, 0.5), (24, 1.5), (40, 2.0)] {
            let r = gauss_hermite_rule(q, s).unwrap();
            for k in 0..2 * q {
                let exact = gaussian_moment(k, s);
                let got = r.integrate_weighted(|x| x.powi(k as i32));
                let scale = gaussian_moment(k + (k % 2), s);
                assert!(
                    (got - exact).abs() <= 1e-12 * scale,
                    "q={q} s={s} k={k}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn structure_invariants() {
        for q in [2usize, 7, 64, 301] {
            let r = gauss_hermite_rule(q, 0.5).unwrap();
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.line_weights().iter().all(|&w| w > 0.0));
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.is_symmetric());
        }
    }

    #[test]
    fn line_weights_integrate_plain_gaussians() {
        // ∫ e^{-x²} dx with a scale-1/2 rule is not polynomial in the weight
        // but converges spectrally.
        let r = gauss_hermite_rule(80, 0.5).unwrap();
        assert!((r.integrate(|x| (-x * x).exp()) - PI.sqrt()).abs() < 1e-13);
        let big = gauss_hermite_rule(1024, 1.0).unwrap();
        assert!((big.integrate(|x| (-x * x).exp()) - PI.sqrt()).abs() < 1e-12);
        assert!(big.line_weights().iter().all(|w| w.is_finite() && *w > 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_hermite_rule(0, 1.0).is_err());
        assert!(gauss_hermite_rule(1025, 1.0).is_err());
        assert!(gauss_hermite_rule(4, 0.0).is_err());
        assert!(uniform_rule(-1.0, 10).is_err());
    }

    #[test]
    fn uniform_grid_is_symmetric_and_integrates_gaussians() {
        let r = uniform_rule(8.0, 2001).unwrap();
        assert!(r.is_symmetric());
        assert_eq!(r.nodes()[1000], 0.0);
        assert!((r.integrate(|x| (-x * x).exp()) - PI.sqrt()).abs() < 1e-13);
        assert!((r.spacing().unwrap() - 16.0 / 2002.0).abs() < 1e-15);
    }

    #[test]
    fn hermite_extent_heuristic() {
        let r = hermite_uniform_rule(16).unwrap();
        assert!((r.extent() - hermite_half_width(16)).abs() < 0.1);
        assert!(r.len() as f64 >= 16.0 * 2.0 * hermite_half_width(16));
    }
}
