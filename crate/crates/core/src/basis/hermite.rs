//! Normalized Hermite functions e_n(z) = (2ⁿ n! √π)^{-1/2} H_n(z) e^{-z²/2}
//! for real and complex arguments.

use num_complex::Complex64;

use crate::defaults::{MAX_HERMITE_DEGREE, MAX_IMAG_ARGUMENT};
use crate::error::{Error, Result};

/// ln π^{-1/4}
const LN_E0: f64 = -0.286_182_471_462_350_5;
const RESCALE: f64 = 1e200;
// squared magnitudes are accumulated, so this must stay below √f64::MAX
const RESCALE_SQ_SAFE: f64 = 1e100;

/// e_n(z) with the default degree and imaginary-part limits.
pub fn hermite_function(n: usize, z: Complex64) -> Result<Complex64> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::Domain(format!(
            "Hermite function index {n} exceeds {MAX_HERMITE_DEGREE}"
        )));
    }
    check_imag(z, MAX_IMAG_ARGUMENT)?;
    Ok(hermite_functions(n, z)?[n])
}

pub(crate) fn check_imag(z: Complex64, bound: f64) -> Result<()> {
    if z.im.abs() > bound {
        return Err(Error::Magnitude(format!(
            "|Im z| = {} exceeds the evaluation bound {bound}",
            z.im.abs()
        )));
    }
    Ok(())
}

/// e_0(z), …, e_n(z) by the normalized three-term recurrence
/// ẽ_{k+1} = z √(2/(k+1)) ẽ_k - √(k/(k+1)) ẽ_{k-1}.
///
/// The Gaussian factor is applied last, with a running log-scale, so large
/// |z| and high degrees neither underflow nor overflow in the recurrence.
pub fn hermite_functions(n: usize, z: Complex64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(n + 1);
    let gauss = -0.5 * z * z;
    let mut log_scale = 0.0f64;
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        let value = cur * (gauss + log_scale + LN_E0).exp();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Magnitude(format!("e_{k}({z}) is not representable")));
        }
        out.push(value);
        if k == n {
            break;
        }
        let kf = k as f64;
        let next = z * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    Ok(out)
}

/// Real-argument helper for quadrature construction: returns
/// (ln Σ_{k<q} e_k(x)², h_q(x) / h_{q-1}(x)) where h_k = e_k e^{x²/2}.
pub(crate) fn christoffel_and_ratio(q: usize, x: f64) -> (f64, f64) {
    // Work with h_k / h_0 scaled; e_k² = h_k² e^{-x²}.
    let mut log_scale = 0.0f64;
    let mut sum = 0.0f64;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    for k in 0..q {
        sum += cur * cur;
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_SQ_SAFE {
            cur /= RESCALE_SQ_SAFE;
            prev /= RESCALE_SQ_SAFE;
            sum /= RESCALE_SQ_SAFE * RESCALE_SQ_SAFE;
            log_scale += RESCALE_SQ_SAFE.ln();
        }
    }
    let ln_sum = sum.ln() + 2.0 * log_scale + 2.0 * LN_E0 - x * x;
    (ln_sum, cur / prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{hermite_poly, log_factorial};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spot_values() {
        let e0 = hermite_function(0, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(e0.re, PI.powf(-0.25), max_relative = 1e-15);
        assert_relative_eq!(e0.re, 0.751_125_544_4, epsilon = 1e-10);
        assert_eq!(hermite_function(1, c(0.0, 0.0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn imaginary_axis_ground_state() {
        // e_0(ia) = π^{-1/4} e^{a²/2}
        for a in [0.25, 0.5, 1.0, 2.0] {
            let v = hermite_function(0, c(0.0, a)).unwrap();
            assert_relative_eq!(
                v.re,
                PI.powf(-0.25) * (a * a / 2.0).exp(),
                max_relative = 1e-14
            );
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn matches_closed_form_with_polynomials() {
        for &z in &[c(0.3, 0.0), c(-1.7, 0.4), c(2.2, -0.9)] {
            let all = hermite_functions(30, z).unwrap();
            for (n, v) in all.iter().enumerate() {
                let norm = (-0.5 * (n as f64 * 2f64.ln() + log_factorial(n) + 0.5 * PI.ln())).exp();
                let expected = hermite_poly(n, z).unwrap() * norm * (-0.5 * z * z).exp();
                assert!(
                    (v - expected).norm() <= 1e-12 * expected.norm().max(1e-3),
                    "n={n} z={z}"
                );
            }
        }
    }

    #[test]
    fn large_argument_does_not_underflow_early() {
        // e_900 is of order one near its turning point √1801 ≈ 42.4
        let v = hermite_functions(900, c(41.0, 0.0)).unwrap();
        assert!(v[900].norm() > 1e-3 && v[900].norm() < 1.0);
        assert_eq!(v[0].norm(), 0.0);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            hermite_function(513, c(0.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hermite_function(3, c(0.0, 4.5)),
            Err(Error::Magnitude(_))
        ));
    }
}
