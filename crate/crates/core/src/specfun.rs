//! Scalar special functions: log-gamma, terminating Gauss hypergeometric
//! series and physicists' Hermite polynomials.

use num_complex::Complex64;

use crate::defaults::MAX_HERMITE_DEGREE;
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos approximation, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range.
        return Ok(log_gamma(x + 1.0)? - x.ln());
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln())
}

/// ln n! computed exactly by summation for small n and via log-gamma above.
pub fn log_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        // n + 1 > 0, so log_gamma cannot fail here.
        log_gamma(n as f64 + 1.0).unwrap_or(f64::NAN)
    }
}

/// Parameters of ₂F₁(-m, b; c; z), a polynomial of degree m in z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Terminating {
    pub m: usize,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Terminating {
    pub fn new(m: usize, b: f64, c: f64, z: f64) -> Self {
        Self { m, b, c, z }
    }

    /// Number of terms in the series.
    pub fn terms(&self) -> usize {
        self.m + 1
    }
}

/// Sums ₂F₁(-m, b; c; z) = Σ_{k=0}^{m} (-m)_k (b)_k / ((c)_k k!) z^k term by
/// term using the ratio of consecutive terms.
pub fn hyp2f1_terminating(p: Hyp2F1Terminating) -> Result<f64> {
    let Hyp2F1Terminating { m, b, c, z } = p;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..m {
        let kf = k as f64;
        let numerator = (kf - m as f64) * (b + kf);
        if numerator == 0.0 || term == 0.0 {
            // every later term carries this zero factor
            break;
        }
        let denom = c + kf;
        if denom == 0.0 {
            return Err(Error::Pole { c, k });
        }
        term *= numerator / (denom * (kf + 1.0)) * z;
        sum += term;
    }
    if !sum.is_finite() {
        return Err(Error::Magnitude(format!("2F1 series overflowed for {p:?}")));
    }
    Ok(sum)
}

/// Physicists' Hermite polynomial H_n(z) by the three-term recurrence.
pub fn hermite_poly(n: usize, z: Complex64) -> Result<Complex64> {
    hermite_poly_with_limit(n, z, MAX_HERMITE_DEGREE)
}

/// [`hermite_poly`] with an explicit degree limit.
pub fn hermite_poly_with_limit(n: usize, z: Complex64, max_degree: usize) -> Result<Complex64> {
    if n > max_degree {
        return Err(Error::Domain(format!(
            "Hermite degree {n} exceeds the configured maximum {max_degree}"
        )));
    }
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::Magnitude(format!(
                "H_{n}({z}) overflows at degree {}",
                k + 1
            )));
        }
    }
    Ok(cur)
}
