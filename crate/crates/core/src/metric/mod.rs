//! Metric generators Q and the action of e^{tQ} for t ∈ {±1, ±½}.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::BasisSet;
use crate::defaults::{
    DECAY_OUTER_FRACTION, MAX_IMAG_ARGUMENT, ODDNESS_TOL, TRANSLATION_CAP, TRANSLATION_CAP_WIDE,
};
use crate::error::{Error, Result};
use crate::function::{Expansion, FunctionRep, Sampled};
use crate::krein::{apply_parity, Workspace};

mod expr;

pub use expr::Expr;

#[derive(Debug, Clone, PartialEq)]
pub enum MetricOperatorQ {
    /// (Qf)(x) = q(x) f(x).
    Multiplication { q: Expr },
    /// Q = 2ia d/dx, so (e^{tQ} f)(x) = f(x + 2iat).
    Translation { a: f64 },
    /// Q e_n = q_n e_n.
    DiagonalHermite { q: Vec<f64> },
}

impl MetricOperatorQ {
    pub fn multiplication(q: Expr) -> Self {
        Self::Multiplication { q }
    }

    /// Multiplication by a function given in the prefix grammar of [`Expr`].
    pub fn parse_multiplication(src: &str) -> Result<Self> {
        Ok(Self::Multiplication {
            q: Expr::parse(src)?,
        })
    }

    /// Translation generator with the default cap |a| ≤ 1.
    pub fn translation(a: f64) -> Result<Self> {
        Self::translation_with_cap(a, TRANSLATION_CAP)
    }

    /// Translation generator with an explicit cap, at most 2.
    pub fn translation_with_cap(a: f64, cap: f64) -> Result<Self> {
        if !(cap > 0.0 && cap <= TRANSLATION_CAP_WIDE) {
            return Err(Error::Domain(format!(
                "translation cap must lie in (0, {TRANSLATION_CAP_WIDE}], got {cap}"
            )));
        }
        if !a.is_finite() || a == 0.0 || a.abs() > cap {
            return Err(Error::Domain(format!(
                "translation parameter must satisfy 0 < |a| ≤ {cap}, got {a}"
            )));
        }
        Ok(Self::Translation { a })
    }

    pub fn diagonal(q: Vec<f64>) -> Result<Self> {
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "diagonal generator needs finite entries".into(),
            ));
        }
        Ok(Self::DiagonalHermite { q })
    }
}

impl fmt::Display for MetricOperatorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Multiplication { q } => write!(f, "multiplication {q}"),
            Self::Translation { a } => write!(f, "translation a={a}"),
            Self::DiagonalHermite { q } => write!(f, "diagonal {q:?}"),
        }
    }
}

/// The exponents t of e^{tQ} in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Half,
    MinusHalf,
    One,
    MinusOne,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Self::Half => 0.5,
            Self::MinusHalf => -0.5,
            Self::One => 1.0,
            Self::MinusOne => -1.0,
        }
    }
}

/// Sign of the weighted product ⟨·,·⟩_{±Q}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// ±½
    pub fn half(self) -> Exponent {
        match self {
            Self::Plus => Exponent::Half,
            Self::Minus => Exponent::MinusHalf,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }
}

/// e^{tQ} f.
///
/// Multiplication acts on samples; translations shift the argument of a
/// Hermite expansion; diagonal generators scale coefficients. Other
/// pairings are structure errors ([`Workspace::apply_exp`] samples
/// expansions for multiplication generators).
pub fn apply_exp_q(q: &MetricOperatorQ, t: Exponent, f: &FunctionRep) -> Result<FunctionRep> {
    let t = t.value();
    match (q, f) {
        (MetricOperatorQ::Multiplication { q }, FunctionRep::Sampled(s)) => {
            let values: Vec<Complex64> = s
                .values
                .iter()
                .zip(s.grid.nodes())
                .map(|(v, &x)| v * (t * q.eval(x)).exp())
                .collect();
            if values
                .iter()
                .any(|v| !(v.re.is_finite() && v.im.is_finite()))
            {
                return Err(Error::Magnitude(format!(
                    "e^{{{t}·q}} overflows on the grid"
                )));
            }
            Ok(FunctionRep::Sampled(Sampled {
                grid: s.grid.clone(),
                values,
            }))
        }
        (MetricOperatorQ::Translation { a }, FunctionRep::Expansion(e)) if e.basis.is_hermite() => {
            let shift = e.shift + Complex64::new(0.0, 2.0 * a * t);
            if shift.im.abs() > MAX_IMAG_ARGUMENT {
                return Err(Error::Magnitude(format!(
                    "translation to Im z = {} exceeds {MAX_IMAG_ARGUMENT}",
                    shift.im
                )));
            }
            Ok(FunctionRep::Expansion(Expansion { shift, ..e.clone() }))
        }
        (MetricOperatorQ::DiagonalHermite { q }, FunctionRep::Expansion(e)) if !e.is_shifted() => {
            if e.coeffs.len() > q.len() {
                return Err(Error::Structure(format!(
                    "diagonal generator has {} entries but the expansion has {}",
                    q.len(),
                    e.coeffs.len()
                )));
            }
            let coeffs = e
                .coeffs
                .iter()
                .zip(q)
                .map(|(c, qn)| c * (t * qn).exp())
                .collect();
            FunctionRep::shifted_expansion(e.basis.clone(), coeffs, e.shift)
        }
        _ => Err(Error::Structure(format!(
            "e^{{tQ}} for {q} does not act on this representation"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anticommutation {
    Yes,
    No,
    Undetermined,
}

/// Structural answer to JQ = -QJ plus the numeric residual
/// max_f ‖J e^{-Q} f - e^{Q} J f‖ / ‖f‖ over a few test functions.
#[derive(Debug, Clone, PartialEq)]
pub struct AnticommutationReport {
    pub verdict: Anticommutation,
    /// `None` when the residual could not be computed.
    pub evidence: Option<f64>,
}

const EVIDENCE_FUNCTIONS: usize = 4;

pub fn anticommutes_with_parity(q: &MetricOperatorQ, ws: &Workspace) -> AnticommutationReport {
    let verdict = match q {
        MetricOperatorQ::Multiplication { q } => {
            let grid = ws.grid();
            if !grid.is_symmetric() {
                Anticommutation::Undetermined
            } else {
                let worst = grid
                    .nodes()
                    .iter()
                    .fold(0.0f64, |m, &x| m.max((q.eval(x) + q.eval(-x)).abs()));
                if !worst.is_finite() {
                    Anticommutation::Undetermined
                } else if worst <= ODDNESS_TOL {
                    Anticommutation::Yes
                } else {
                    Anticommutation::No
                }
            }
        }
        MetricOperatorQ::Translation { .. } => Anticommutation::Yes,
        MetricOperatorQ::DiagonalHermite { q } => {
            if q.iter().all(|v| *v == 0.0) {
                Anticommutation::Yes
            } else {
                Anticommutation::No
            }
        }
    };
    AnticommutationReport {
        verdict,
        evidence: anticommutation_residual(q, ws).ok(),
    }
}

fn anticommutation_residual(q: &MetricOperatorQ, ws: &Workspace) -> Result<f64> {
    let size = match q {
        MetricOperatorQ::DiagonalHermite { q } => q.len().min(EVIDENCE_FUNCTIONS),
        _ => EVIDENCE_FUNCTIONS,
    };
    let basis = Arc::new(BasisSet::hermite(size));
    let mut worst = 0.0f64;
    for n in 0..size {
        let f = FunctionRep::basis_vector(basis.clone(), n)?;
        let lhs = apply_parity(&ws.apply_exp(q, Exponent::MinusOne, &f)?)?;
        let rhs = ws.apply_exp(q, Exponent::One, &apply_parity(&f)?)?;
        worst = worst.max(ws.distance(&lhs, &rhs)? / ws.norm(&f)?);
    }
    Ok(worst)
}

/// Heuristic for e^{±Q/2} f staying square integrable.
///
/// For each sign, the L² mass of e^{±Q/2} f on the working grid beyond
/// (1 - 0.1)·extent is compared with the mass a flat profile would put
/// there; the score is 1 - min(1, outer/flat), minimized over both signs.
/// Decaying functions score near 1, non-decaying ones near 0.
pub fn domain_decay_score(q: &MetricOperatorQ, f: &FunctionRep, ws: &Workspace) -> f64 {
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|s| signed_decay_score(q, s, f, ws))
        .fold(1.0, f64::min)
}

/// Decay score of e^{sign·Q/2} f alone.
pub fn signed_decay_score(q: &MetricOperatorQ, sign: Sign, f: &FunctionRep, ws: &Workspace) -> f64 {
    let Ok(g) = ws.apply_exp(q, sign.half(), f).and_then(|g| ws.sample(&g)) else {
        return 0.0;
    };
    let Some(s) = g.as_sampled() else {
        return 0.0;
    };
    let grid = s.grid();
    let cut = (1.0 - DECAY_OUTER_FRACTION) * grid.extent();
    let mut total = 0.0;
    let mut outer = 0.0;
    for ((v, &x), &w) in s.values().iter().zip(grid.nodes()).zip(grid.line_weights()) {
        let m = v.norm_sqr() * w;
        total += m;
        if x.abs() >= cut {
            outer += m;
        }
    }
    if !total.is_finite() || !outer.is_finite() {
        return 0.0;
    }
    if total == 0.0 {
        return 1.0;
    }
    1.0 - (outer / total / DECAY_OUTER_FRACTION).min(1.0)
}
