//! `grslab`: build the catalog systems, run their verification suites and
//! write JSON reports and CSV matrices.
//!
//! Settings are resolved as flags, then the key=value file named by the
//! `GRSLAB_CONFIG` environment variable, then built-in defaults. Exit code
//! 0 means every check passed, 1 that at least one failed, 2 a usage error.
//!
//! The `--p` flag takes a prefix expression in x:
//!
//! ```text
//! expr := number | x
//!       | (add expr expr ...) | (sub expr expr) | (mul expr expr ...)
//!       | (neg expr) | (scale number expr) | (pow expr k)
//!       | (atan expr) | (tanh expr) | (gauss c) | (recip expr)
//! ```
//!
//! for example `(scale 0.5 (atan x))`; `(gauss c)` is e^{-c x²}.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use grslab::catalog::{
    make_example, ExampleId, ExampleSpec, NumericSettings, DEFAULT_BETA, DEFAULT_P,
};
use grslab::csymmetry::Verdict;
use grslab::defaults::{OVERLAP_TABLE_MAX, TRUNCATION};
use grslab::krein::Product;
use grslab::metric::Expr;
use grslab::report::{write_matrix_csv, VerificationReport};
use grslab::verify::{verify_example, verify_overlap, VerifyOptions};

const CONFIG_ENV: &str = "GRSLAB_CONFIG";
const CONFIG_KEYS: &[&str] = &[
    "n",
    "a",
    "beta",
    "p",
    "quad_order",
    "grid_l",
    "grid_points",
    "tol_biorth",
    "tol_krein",
    "expect",
    "n_max",
];

#[derive(Parser)]
#[command(
    name = "grslab",
    version,
    about = "Verify generalized Riesz systems and Krein-space orthonormal sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog system and run its verification suite.
    Verify(VerifyArgs),
    /// Compare the closed-form Krein overlaps with quadrature.
    Overlap(OverlapArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// shifted-ho, example1 or perturbed-anharmonic
    example: String,
    /// Truncation N.
    #[arg(long)]
    n: Option<usize>,
    /// Translation parameter of the shifted oscillator.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Anharmonic exponent.
    #[arg(long)]
    beta: Option<f64>,
    /// Odd perturbation p(x), as a prefix expression.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    grid_l: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    tol_biorth: Option<f64>,
    #[arg(long)]
    tol_krein: Option<f64>,
    /// Expected classification: first_type, not_j_orthonormal or undetermined.
    #[arg(long)]
    expect: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the Krein Gram matrix [φₙ, φₘ] here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OverlapArgs {
    /// Largest index n, m of the table.
    #[arg(long)]
    n_max: Option<usize>,
    /// Write the quadrature overlap matrix here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// A usage problem detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn load_config() -> anyhow::Result<BTreeMap<String, String>> {
    match std::env::var_os(CONFIG_ENV) {
        Some(path) => parse_config(Path::new(&path)),
        None => Ok(BTreeMap::new()),
    }
}

fn parse_config(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        let key = key.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!(
                "{}:{}: unknown key {key:?}",
                path.display(),
                i + 1
            )));
        }
        out.insert(key, value.trim().to_owned());
    }
    Ok(out)
}

/// Flag value, else config value, else `None`.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    config: &BTreeMap<String, String>,
    key: &str,
) -> anyhow::Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    config
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| usage(format!("config key {key}: {e}")))
        })
        .transpose()
}

fn finish(report: &VerificationReport, json: Option<&Path>) -> anyhow::Result<ExitCode> {
    print!("{}", report.summary());
    if let Some(path) = json {
        report
            .write_json(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let config = load_config()?;
    let id: ExampleId = args.example.parse().map_err(|e| usage(format!("{e}")))?;
    let n = resolve(args.n, &config, "n")?.unwrap_or(TRUNCATION);
    let settings = NumericSettings {
        quad_order: resolve(args.quad_order, &config, "quad_order")?,
        grid_l: resolve(args.grid_l, &config, "grid_l")?,
        grid_points: resolve(args.grid_points, &config, "grid_points")?,
        translation_cap: None,
    };
    let spec = match id {
        ExampleId::ShiftedHo => {
            let a = resolve(args.a, &config, "a")?.ok_or_else(|| usage("shifted-ho needs --a"))?;
            ExampleSpec::shifted_ho(a, n)
        }
        ExampleId::Example1 => ExampleSpec::example1(n),
        ExampleId::PerturbedAnharmonic => {
            let beta = resolve(args.beta, &config, "beta")?.unwrap_or(DEFAULT_BETA);
            let p_src = resolve(args.p, &config, "p")?.unwrap_or_else(|| DEFAULT_P.to_owned());
            let p = Expr::parse(&p_src).map_err(|e| usage(format!("--p: {e}")))?;
            ExampleSpec::perturbed_anharmonic(beta, p, n)
        }
    }
    .with_settings(settings);
    let expect = resolve(args.expect, &config, "expect")?
        .map(|s| {
            s.parse::<Verdict>()
                .map_err(|e| usage(format!("--expect: {e}")))
        })
        .transpose()?;
    let opts = VerifyOptions {
        tol_biorth: resolve(args.tol_biorth, &config, "tol_biorth")?,
        tol_krein: resolve(args.tol_krein, &config, "tol_krein")?,
        expect,
        ..VerifyOptions::default()
    };
    for (name, tol) in [
        ("tol-biorth", opts.tol_biorth),
        ("tol-krein", opts.tol_krein),
    ] {
        if let Some(t) = tol {
            if !(t >= 0.0 && t.is_finite()) {
                bail!(usage(format!("--{name} must be a non-negative number")));
            }
        }
    }

    let report = verify_example(&spec, &opts);
    if let Some(path) = &args.csv {
        let sys = make_example(&spec).map_err(|e| anyhow!("{e}"))?;
        let gram = sys
            .workspace()
            .gram(sys.phi(), Product::Krein)
            .map_err(|e| anyhow!("{e}"))?;
        write_matrix_csv(path, &gram).with_context(|| format!("writing {}", path.display()))?;
    }
    finish(&report, args.json.as_deref())
}

fn run_overlap(args: OverlapArgs) -> anyhow::Result<ExitCode> {
    let config = load_config()?;
    let n_max = resolve(args.n_max, &config, "n_max")?.unwrap_or(OVERLAP_TABLE_MAX);
    let (report, matrix) = verify_overlap(n_max);
    if let (Some(path), Some(m)) = (&args.csv, &matrix) {
        write_matrix_csv(path, m).with_context(|| format!("writing {}", path.display()))?;
    }
    finish(&report, args.json.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Overlap(args) => run_overlap(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cfg");
        std::fs::write(&path, "# comment\nn = 8\ntol-krein=1e-5\n").unwrap();
        let c = parse_config(&path).unwrap();
        assert_eq!(c["n"], "8");
        assert_eq!(c["tol_krein"], "1e-5");
        assert_eq!(resolve::<usize>(None, &c, "n").unwrap(), Some(8));
        assert_eq!(resolve(Some(3usize), &c, "n").unwrap(), Some(3));
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(parse_config(&path).unwrap_err().is::<Usage>());
        std::fs::write(&path, "n 8\n").unwrap();
        assert!(parse_config(&path).is_err());
    }
}
