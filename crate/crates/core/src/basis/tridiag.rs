//! Symmetric tridiagonal eigensolvers.
//!
//! `diag` holds the main diagonal d[0..n], `off` the coupling e[0..n-1]
//! between d[i] and d[i+1].

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// All eigenvalues by the implicit QL method with Wilkinson-type shifts,
/// sorted ascending.
pub fn symmetric_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    check_shape(n, off)?;
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::Numeric(format!(
                    "implicit QL did not converge for eigenvalue {l} after {MAX_QL_SWEEPS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence of LDLᵀ pivots).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..n {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues by Sturm bisection, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    check_shape(n, off)?;
    if k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        let (mut a, mut b) = (lo, hi);
        let mut converged = false;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if b - a <= 2.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
                || mid == a
                || mid == b
            {
                converged = true;
                break;
            }
            if sturm_count(diag, off, mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "bisection for eigenvalue {idx} did not converge"
            )));
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Unit-norm eigenvector for the eigenvalue `lambda` by inverse iteration.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    check_shape(n, off)?;
    let scale = diag
        .iter()
        .chain(off)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let lu = TridiagLu::factor(diag, off, lambda, f64::EPSILON * scale);
    // deterministic, non-symmetric start so no parity sector is missed
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i * 7919) % 13) as f64 / 13.0)
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        lu.solve(&mut v);
        if !normalize(&mut v) {
            return Err(Error::Numeric(format!(
                "inverse iteration broke down at {lambda}"
            )));
        }
    }
    let residual = residual_norm(diag, off, lambda, &v);
    if residual > 1e-6 * scale {
        return Err(Error::Numeric(format!(
            "inverse iteration residual {residual:.3e} too large at {lambda}"
        )));
    }
    Ok(v)
}

/// ‖(T - λ)v‖₂ for unit v.
pub fn residual_norm(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut r = (diag[i] - lambda) * v[i];
        if i > 0 {
            r += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            r += off[i] * v[i + 1];
        }
        acc += r * r;
    }
    acc.sqrt()
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

fn check_shape(n: usize, off: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("empty tridiagonal matrix".into()));
    }
    if off.len() + 1 != n {
        return Err(Error::Structure(format!(
            "off-diagonal has length {} for a {n}x{n} matrix",
            off.len()
        )));
    }
    Ok(())
}

/// LU factorization of T - λI with partial pivoting (fill-in on a second
/// superdiagonal).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], lambda: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|x| x - lambda).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // T = tridiag(-1, 2, -1) has eigenvalues 2 - 2 cos(kπ/(n+1)).
    fn laplacian(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let exact = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        (vec![2.0; n], vec![-1.0; n - 1], exact)
    }

    #[test]
    fn ql_matches_laplacian_spectrum() {
        let (d, e, exact) = laplacian(50);
        let got = symmetric_eigenvalues(&d, &e).unwrap();
        for (g, x) in got.iter().zip(&exact) {
            assert!((g - x).abs() < 1e-13, "{g} vs {x}");
        }
    }

    #[test]
    fn bisection_matches_ql() {
        let d: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let e: Vec<f64> = (0..39).map(|i| 0.5 + (i as f64 * 0.11).cos()).collect();
        let all = symmetric_eigenvalues(&d, &e).unwrap();
        let low = lowest_eigenvalues(&d, &e, 10).unwrap();
        for (a, b) in low.iter().zip(&all) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn inverse_iteration_gives_eigenvectors() {
        let (d, e, exact) = laplacian(200);
        for &lam in exact.iter().take(5) {
            let v = inverse_iteration(&d, &e, lam).unwrap();
            assert!(residual_norm(&d, &e, lam, &v) < 1e-12);
        }
    }

    #[test]
    fn one_by_one() {
        assert_eq!(symmetric_eigenvalues(&[3.5], &[]).unwrap(), vec![3.5]);
        assert_eq!(lowest_eigenvalues(&[3.5], &[], 1).unwrap()[0], 3.5);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            symmetric_eigenvalues(&[1.0, 2.0], &[]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            lowest_eigenvalues(&[1.0], &[], 2),
            Err(Error::Domain(_))
        ));
    }
}
