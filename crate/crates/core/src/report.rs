//! Machine-readable verification reports (JSON) and matrix artifacts (CSV).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// One defect-type check: passes when |value| ≤ tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// `null` in JSON when the computation itself failed.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn defect(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_owned(),
            value,
            tolerance,
            pass: value.abs() <= tolerance,
            wall_time_s: 0.0,
            detail: None,
        }
    }

    /// Run `f`, time it and record its value; an error becomes a failed
    /// check carrying the message.
    pub fn timed(name: &str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> Self {
        Self::timed_with_detail(name, tolerance, || f().map(|v| (v, None)))
    }

    pub fn timed_with_detail(
        name: &str,
        tolerance: f64,
        f: impl FnOnce() -> Result<(f64, Option<String>)>,
    ) -> Self {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed().as_secs_f64();
        let mut check = match outcome {
            Ok((value, detail)) => Self {
                detail,
                ..Self::defect(name, value, tolerance)
            },
            Err(e) => Self {
                detail: Some(e.to_string()),
                ..Self::defect(name, f64::NAN, tolerance)
            },
        };
        check.wall_time_s = elapsed;
        check
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub example: String,
    pub params: BTreeMap<String, Value>,
    pub settings: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(example: impl Into<String>) -> Self {
        let mut settings = BTreeMap::new();
        settings.insert("version".to_owned(), Value::from(env!("CARGO_PKG_VERSION")));
        Self {
            example: example.into(),
            params: BTreeMap::new(),
            settings,
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn setting(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.settings.insert(key.to_owned(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Every recorded `pass` agrees with |value| ≤ tolerance.
    pub fn is_self_consistent(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.pass == (c.value.abs() <= c.tolerance))
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// One line per check, for terminals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(
                out,
                "[{}] {:<28} value={:<12.4e} tol={:.1e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            );
            if let Some(d) = &c.detail {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
        }
        out
    }
}

/// CSV with header `n,m,value_re,value_im`, one row per entry.
pub fn matrix_csv(m: &Array2<Complex64>) -> String {
    let mut out = String::from("n,m,value_re,value_im\n");
    for ((n, k), v) in m.indexed_iter() {
        let _ = writeln!(out, "{n},{k},{:e},{:e}", v.re, v.im);
    }
    out
}

pub fn write_matrix_csv(path: &Path, m: &Array2<Complex64>) -> Result<()> {
    std::fs::write(path, matrix_csv(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = VerificationReport::new("none");
        let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["checks"], Value::Array(vec![]));
        assert!(r.all_pass());
    }

    #[test]
    fn failing_and_erroring_checks() {
        let mut r = VerificationReport::new("x").param("n", 3);
        r.push(Check::defect("ok", 1e-9, 1e-8));
        r.push(Check::defect("bad", 2e-8, 1e-8));
        r.push(Check::timed("err", 1.0, || {
            Err(Error::Numeric("boom".into()))
        }));
        assert!(!r.all_pass());
        assert!(r.is_self_consistent());
        let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["checks"][2]["value"], Value::Null);
        assert_eq!(v["checks"][2]["pass"], Value::Bool(false));
        assert!(v["checks"][2]["detail"].as_str().unwrap().contains("boom"));
        assert_eq!(v["params"]["n"], 3);
    }

    #[test]
    fn identity_matrix_csv() {
        let m = Array2::from_diag(&ndarray::arr1(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let csv = matrix_csv(&m);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,m,value_re,value_im");
        assert_eq!(lines.len(), 5);
        let re: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert_eq!(re, vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn json_and_csv_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = VerificationReport::new("x").param("a", 0.5);
        r.push(Check::defect("ok", 1e-12, 1e-8).with_detail("fine"));
        let path = dir.path().join("r.json");
        r.write_json(&path).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["checks"][0]["detail"], "fine");
        assert_eq!(v["params"]["a"], 0.5);

        let m = Array2::from_elem((2, 3), Complex64::new(0.25, -1.0));
        let path = dir.path().join("m.csv");
        write_matrix_csv(&path, &m).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().nth(6).unwrap().starts_with("1,2,"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let r = VerificationReport::new("x");
        assert!(matches!(
            r.write_json(Path::new("/nonexistent/dir/out.json")),
            Err(Error::Io(_))
        ));
    }
}
