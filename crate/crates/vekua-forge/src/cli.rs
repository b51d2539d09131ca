//! Batch front end: problem files in, reports and grid files out.
//!
//! A problem file is TOML with a `[system]` table of coefficient expression
//! strings (a11 and a22 required, the rest default to "0"), a `[region]`
//! table, an optional `[solution]` table with a manufactured pair, and an
//! optional top-level `tolerance`.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or config error,
//! 2 ellipticity failure, 3 verification failure.

use std::fmt;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffexpr::{parse_expr, ParseError};
use crate::ellsys::{
    make_constant_structure_family, Classification, EllipticSystem, Region, SolutionPair,
};
use crate::rewrite::rewrite_at;
use crate::verify::{grid_verify, vekua_residual};
use crate::Expr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ELLIPTIC: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Worker-count override; rayon's default (available parallelism) otherwise.
pub const THREADS_ENV: &str = "VEKUA_FORGE_THREADS";

pub const CSV_HEADER: &str =
    "x,y,alpha,beta,A_re,A_im,B_re,B_im,F_re,F_im,delta,residual_re,residual_im";

#[derive(Parser, Debug)]
#[command(
    name = "vekua-forge",
    version,
    about = "Rewrite elliptic first-order systems in the plane as Vekua equations and verify the rewrite"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check ellipticity of a system over its region
    Classify {
        /// Problem file (TOML)
        #[arg(long)]
        config: PathBuf,
        /// Override the config grid, e.g. 40x40
        #[arg(long)]
        grid: Option<GridSpec>,
    },
    /// Rewrite the system at every grid node and write coefficient records
    Transform {
        /// Problem file (TOML)
        #[arg(long)]
        config: PathBuf,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Override the config grid, e.g. 40x40
        #[arg(long)]
        grid: Option<GridSpec>,
    },
    /// Check a manufactured solution's Vekua residual over the grid
    Verify {
        /// Problem file (TOML); must contain a [solution] table
        #[arg(long)]
        config: PathBuf,
        /// Residual tolerance (overrides the config value)
        #[arg(long)]
        tol: Option<f64>,
        /// Override the config grid, e.g. 40x40
        #[arg(long)]
        grid: Option<GridSpec>,
    },
    /// Write a ready-to-run problem file for a family with constant
    /// structure parameters (alpha0, beta0) and free functions lambda, mu
    GenerateFamily {
        #[arg(allow_negative_numbers = true)]
        alpha0: f64,
        #[arg(allow_negative_numbers = true)]
        beta0: f64,
        lambda: String,
        mu: String,
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Grid override parsed from "NXxNY".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<GridSpec, String> {
        let (a, b) = s
            .split_once('x')
            .ok_or_else(|| format!("expected NXxNY (e.g. 20x20), got `{s}`"))?;
        let nx = a.parse().map_err(|_| format!("bad grid count `{a}`"))?;
        let ny = b.parse().map_err(|_| format!("bad grid count `{b}`"))?;
        Ok(GridSpec { nx, ny })
    }
}

// ---------------------------------------------------------------------------
// Problem files

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub system: SystemConfig,
    pub region: RegionConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionConfig>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub a11: String,
    #[serde(default = "zero")]
    pub a12: String,
    #[serde(default = "zero")]
    pub a21: String,
    pub a22: String,
    #[serde(default = "zero")]
    pub a1: String,
    #[serde(default = "zero")]
    pub a2: String,
    #[serde(default = "zero")]
    pub b1: String,
    #[serde(default = "zero")]
    pub b2: String,
    #[serde(default = "zero")]
    pub f1: String,
    #[serde(default = "zero")]
    pub f2: String,
}

fn zero() -> String {
    "0".to_owned()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionConfig {
    pub u: String,
    pub v: String,
}

/// A loaded problem: expressions parsed, region validated, tolerance
/// defaulted to 1e-10.
#[derive(Debug)]
pub struct Problem {
    pub system: EllipticSystem,
    pub region: Region,
    pub solution: Option<SolutionPair>,
    pub tolerance: f64,
}

#[derive(Debug)]
pub enum ConfigError {
    Read {
        path: PathBuf,
        source: io::Error,
    },
    Toml {
        path: PathBuf,
        message: String,
    },
    /// An expression string that does not parse, cited by config field.
    Expression {
        field: &'static str,
        text: String,
        source: ParseError,
    },
    Region(String),
    Tolerance(f64),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Read { path, source } => {
                write!(f, "cannot read {}: {source}", path.display())
            }
            ConfigError::Toml { path, message } => {
                write!(f, "{}: {message}", path.display())
            }
            ConfigError::Expression {
                field,
                text,
                source,
            } => write!(f, "config field {field} = {text:?}: {source}"),
            ConfigError::Region(msg) => write!(f, "invalid region: {msg}"),
            ConfigError::Tolerance(t) => {
                write!(f, "tolerance must be positive and finite, got {t}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

impl ProblemConfig {
    pub fn resolve(&self) -> Result<Problem, ConfigError> {
        let field = |name: &'static str, text: &str| -> Result<Expr, ConfigError> {
            parse_expr(text).map_err(|source| ConfigError::Expression {
                field: name,
                text: text.to_owned(),
                source,
            })
        };
        let s = &self.system;
        let system = EllipticSystem {
            a11: field("system.a11", &s.a11)?,
            a12: field("system.a12", &s.a12)?,
            a21: field("system.a21", &s.a21)?,
            a22: field("system.a22", &s.a22)?,
            a1: field("system.a1", &s.a1)?,
            a2: field("system.a2", &s.a2)?,
            b1: field("system.b1", &s.b1)?,
            b2: field("system.b2", &s.b2)?,
            f1: field("system.f1", &s.f1)?,
            f2: field("system.f2", &s.f2)?,
        };
        let r = &self.region;
        let region = Region::new(r.x_min, r.x_max, r.y_min, r.y_max, r.nx, r.ny)
            .map_err(|e| ConfigError::Region(e.to_string()))?;
        let solution = match &self.solution {
            Some(sol) => Some(SolutionPair {
                u: field("solution.u", &sol.u)?,
                v: field("solution.v", &sol.v)?,
            }),
            None => None,
        };
        let tolerance = self.tolerance.unwrap_or(1e-10);
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(ConfigError::Tolerance(tolerance));
        }
        Ok(Problem {
            system,
            region,
            solution,
            tolerance,
        })
    }
}

pub fn load_problem(path: &Path, grid: Option<GridSpec>) -> Result<Problem, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    let config: ProblemConfig = toml::from_str(&text).map_err(|e| ConfigError::Toml {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let mut problem = config.resolve()?;
    if let Some(g) = grid {
        let r = &problem.region;
        problem.region = Region::new(r.x_min, r.x_max, r.y_min, r.y_max, g.nx, g.ny)
            .map_err(|e| ConfigError::Region(e.to_string()))?;
    }
    Ok(problem)
}

// ---------------------------------------------------------------------------
// Grid records

/// One grid node's rewrite output. Field names match the CSV header and the
/// JSON-lines keys exactly.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "A_re")]
    pub a_re: f64,
    #[serde(rename = "A_im")]
    pub a_im: f64,
    #[serde(rename = "B_re")]
    pub b_re: f64,
    #[serde(rename = "B_im")]
    pub b_im: f64,
    #[serde(rename = "F_re")]
    pub f_re: f64,
    #[serde(rename = "F_im")]
    pub f_im: f64,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_im: Option<f64>,
}

/// Replaces a record whose point failed to evaluate.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub x: f64,
    pub y: f64,
    pub error: String,
}

impl OutputRecord {
    fn all_finite(&self) -> bool {
        let fixed = [
            self.x, self.y, self.alpha, self.beta, self.a_re, self.a_im, self.b_re, self.b_im,
            self.f_re, self.f_im, self.delta,
        ];
        fixed.iter().all(|v| v.is_finite())
            && self.residual_re.is_none_or(f64::is_finite)
            && self.residual_im.is_none_or(f64::is_finite)
    }

    /// Comma-separated row under [`CSV_HEADER`]; floats in round-trip
    /// (shortest re-readable) decimal form, residual columns empty when no
    /// solution was supplied.
    pub fn csv_row(&self) -> String {
        let mut row = format!(
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            self.x,
            self.y,
            self.alpha,
            self.beta,
            self.a_re,
            self.a_im,
            self.b_re,
            self.b_im,
            self.f_re,
            self.f_im,
            self.delta
        );
        match (self.residual_re, self.residual_im) {
            (Some(re), Some(im)) => {
                row.push_str(&format!(",{re:?},{im:?}"));
            }
            _ => row.push_str(",,"),
        }
        row
    }
}

pub fn node_record(
    sys: &EllipticSystem,
    sol: Option<&SolutionPair>,
    x: f64,
    y: f64,
) -> Result<OutputRecord, ErrorRecord> {
    let fail = |e: &dyn fmt::Display| ErrorRecord {
        x,
        y,
        error: e.to_string(),
    };
    let data = rewrite_at(sys, x, y).map_err(|e| fail(&e))?;
    let delta = sys.delta(x, y).map_err(|e| fail(&e))?;
    let residual = match sol {
        Some(p) => Some(vekua_residual(sys, p, x, y).map_err(|e| fail(&e))?),
        None => None,
    };
    let record = OutputRecord {
        x,
        y,
        alpha: data.structure.alpha,
        beta: data.structure.beta,
        a_re: data.a.re,
        a_im: data.a.im,
        b_re: data.b.re,
        b_im: data.b.im,
        f_re: data.f.re,
        f_im: data.f.im,
        delta,
        residual_re: residual.map(|r| r.re),
        residual_im: residual.map(|r| r.im),
    };
    if !record.all_finite() {
        return Err(fail(&"non-finite value in record"));
    }
    Ok(record)
}

fn write_records(
    w: &mut dyn io::Write,
    rows: &[Result<OutputRecord, ErrorRecord>],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for row in rows {
                match row {
                    Ok(rec) => writeln!(w, "{}", rec.csv_row())?,
                    // data rows stay machine-readable; consumers skip '#'
                    Err(e) => writeln!(w, "# error at ({:?}, {:?}): {}", e.x, e.y, e.error)?,
                }
            }
        }
        Format::Jsonl => {
            for row in rows {
                let line = match row {
                    Ok(rec) => serde_json::to_string(rec),
                    Err(e) => serde_json::to_string(e),
                }
                .expect("records contain only finite numbers and strings");
                writeln!(w, "{line}")?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands

pub fn cmd_classify(config_path: &Path, grid: Option<GridSpec>) -> i32 {
    let problem = match load_problem(config_path, grid) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match problem.system.classify(&problem.region) {
        Ok(Classification::Elliptic) => {
            println!("Elliptic");
            EXIT_OK
        }
        Ok(witness) => {
            println!("{witness}");
            EXIT_NOT_ELLIPTIC
        }
        // a coefficient undefined somewhere on the region: ellipticity is
        // not certifiable, which the contract treats as a failed check
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NOT_ELLIPTIC
        }
    }
}

pub fn cmd_transform(
    config_path: &Path,
    out: Option<&Path>,
    format: Format,
    grid: Option<GridSpec>,
) -> i32 {
    let problem = match load_problem(config_path, grid) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match problem.system.classify(&problem.region) {
        Ok(Classification::Elliptic) => {}
        Ok(witness) => {
            eprintln!("{witness}");
            return EXIT_NOT_ELLIPTIC;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NOT_ELLIPTIC;
        }
    }

    let nodes: Vec<(f64, f64)> = problem.region.nodes().collect();
    let sol = problem.solution.as_ref();
    let rows: Vec<Result<OutputRecord, ErrorRecord>> = nodes
        .par_iter()
        .map(|&(x, y)| node_record(&problem.system, sol, x, y))
        .collect();
    let errors = rows.iter().filter(|r| r.is_err()).count();

    let written = match out {
        Some(path) => fs::File::create(path)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn io::Write>)
            .and_then(|mut w| write_records(&mut w, &rows, format).and_then(|()| w.flush())),
        None => {
            let stdout = io::stdout();
            write_records(&mut stdout.lock(), &rows, format)
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    let dest = out.map_or_else(|| "stdout".to_owned(), |p| p.display().to_string());
    eprintln!(
        "transform: wrote {} records ({errors} errors) to {dest}",
        rows.len() - errors
    );
    EXIT_OK
}

pub fn cmd_verify(config_path: &Path, tol: Option<f64>, grid: Option<GridSpec>) -> i32 {
    let problem = match load_problem(config_path, grid) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let Some(solution) = problem.solution.as_ref() else {
        eprintln!("error: verify requires a [solution] table with u and v");
        return EXIT_USAGE;
    };
    match problem.system.classify(&problem.region) {
        Ok(Classification::Elliptic) => {}
        Ok(witness) => {
            eprintln!("{witness}");
            return EXIT_NOT_ELLIPTIC;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NOT_ELLIPTIC;
        }
    }

    let tolerance = tol.unwrap_or(problem.tolerance);
    let report = match grid_verify(&problem.system, solution, &problem.region, tolerance) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    match report.worst_point {
        Some((x, y)) => println!(
            "max |residual|  = {:?} at ({x:?}, {y:?})",
            report.max_abs_residual
        ),
        None => println!("max |residual|  = (no points evaluated)"),
    }
    println!("mean |residual| = {:?}", report.mean_abs_residual);
    println!(
        "points evaluated: {} (skipped: {})",
        report.points_evaluated,
        report.skipped.len()
    );
    println!("tolerance: {tolerance:?}");
    println!("result: {}", if report.pass { "PASS" } else { "FAIL" });
    println!(
        "{}",
        serde_json::to_string(&report).expect("report is finite numbers and strings")
    );
    if report.pass {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

pub fn cmd_generate_family(alpha0: f64, beta0: f64, lambda: &str, mu: &str, out: &Path) -> i32 {
    let lambda_expr = match parse_expr(lambda) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: lambda = {lambda:?}: {e}");
            return EXIT_USAGE;
        }
    };
    let mu_expr = match parse_expr(mu) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: mu = {mu:?}: {e}");
            return EXIT_USAGE;
        }
    };
    let sys = match make_constant_structure_family(alpha0, beta0, &lambda_expr, &mu_expr) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NOT_ELLIPTIC;
        }
    };
    let config = ProblemConfig {
        tolerance: Some(1e-10),
        system: SystemConfig {
            a11: sys.a11.to_string(),
            a12: sys.a12.to_string(),
            a21: sys.a21.to_string(),
            a22: sys.a22.to_string(),
            a1: sys.a1.to_string(),
            a2: sys.a2.to_string(),
            b1: sys.b1.to_string(),
            b2: sys.b2.to_string(),
            f1: sys.f1.to_string(),
            f2: sys.f2.to_string(),
        },
        region: RegionConfig {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 20,
            ny: 20,
        },
        solution: None,
    };
    let text = match toml::to_string_pretty(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot serialize config: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = fs::write(out, text) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_USAGE;
    }
    eprintln!("generate-family: wrote {}", out.display());
    EXIT_OK
}

/// Dispatches a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    configure_threads();
    match cli.command {
        Command::Classify { config, grid } => cmd_classify(&config, grid),
        Command::Transform {
            config,
            out,
            format,
            grid,
        } => cmd_transform(&config, out.as_deref(), format, grid),
        Command::Verify { config, tol, grid } => cmd_verify(&config, tol, grid),
        Command::GenerateFamily {
            alpha0,
            beta0,
            lambda,
            mu,
            out,
        } => cmd_generate_family(alpha0, beta0, &lambda, &mu, &out),
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        match value.parse::<usize>() {
            // build_global fails if a pool already exists; keep that one
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            Err(_) => eprintln!("warning: ignoring non-numeric {THREADS_ENV}={value:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    const IDENTITY: &str = r#"
        [system]
        a11 = "1"
        a22 = "1"
        [region]
        x_min = 0.0
        x_max = 1.0
        y_min = 0.0
        y_max = 1.0
        nx = 2
        ny = 2
    "#;

    #[test]
    fn config_defaults_and_tolerance() {
        let config: ProblemConfig = toml::from_str(IDENTITY).unwrap();
        assert_eq!(config.system.a12, "0");
        assert_eq!(config.system.f2, "0");
        assert_eq!(config.tolerance, None);
        let problem = config.resolve().unwrap();
        assert_eq!(problem.tolerance, 1e-10);
        assert!(problem.solution.is_none());
        assert_eq!(problem.region.node_count(), 4);
    }

    #[test]
    fn config_missing_required_field_rejected() {
        let err = toml::from_str::<ProblemConfig>(
            "[system]\na11 = \"1\"\n[region]\nx_min = 0.0\nx_max = 1.0\ny_min = 0.0\ny_max = 1.0\nnx = 2\nny = 2\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("a22"));
    }

    #[test]
    fn config_unknown_key_rejected() {
        let err = toml::from_str::<ProblemConfig>(&format!("{IDENTITY}\n[system2]\nq = \"1\"\n"))
            .unwrap_err();
        assert!(err.to_string().contains("system2"));
    }

    #[test]
    fn config_bad_expression_cites_field() {
        let text = IDENTITY.replace("a22 = \"1\"", "a22 = \"1\"\na12 = \"1 +\"");
        let config: ProblemConfig = toml::from_str(&text).unwrap();
        let err = config.resolve().unwrap_err();
        let message = err.to_string();
        assert!(message.contains("system.a12"), "{message}");
        assert!(message.contains("offset 3"), "{message}");
    }

    #[test]
    fn config_rejects_bad_tolerance() {
        let text = format!("tolerance = -1e-10\n{IDENTITY}");
        let config: ProblemConfig = toml::from_str(&text).unwrap();
        assert!(matches!(
            config.resolve(),
            Err(ConfigError::Tolerance(t)) if t == -1e-10
        ));
    }

    #[test]
    fn grid_spec_parses() {
        assert_eq!("20x20".parse(), Ok(GridSpec { nx: 20, ny: 20 }));
        assert_eq!("3x7".parse(), Ok(GridSpec { nx: 3, ny: 7 }));
        assert!("20".parse::<GridSpec>().is_err());
        assert!("ax7".parse::<GridSpec>().is_err());
        assert!("20x".parse::<GridSpec>().is_err());
    }

    #[test]
    fn csv_row_round_trip_formatting() {
        let rec = OutputRecord {
            x: 0.1,
            y: 0.30000000000000004,
            alpha: 1.0,
            beta: -0.5,
            a_re: 1e-17,
            a_im: 0.0,
            b_re: 2.5,
            b_im: -3.0,
            f_re: 0.0,
            f_im: 0.0,
            delta: 1.0,
            residual_re: None,
            residual_im: None,
        };
        assert_eq!(
            rec.csv_row(),
            "0.1,0.30000000000000004,1.0,-0.5,1e-17,0.0,2.5,-3.0,0.0,0.0,1.0,,"
        );
        for field in rec.csv_row().split(',').filter(|s| !s.is_empty()) {
            let _: f64 = field.parse().expect("round-trip parse");
        }
    }

    #[test]
    fn node_record_identity_system() {
        let sys = EllipticSystem::classical();
        let rec = node_record(&sys, None, 0.25, 0.75).unwrap();
        assert_eq!(rec.alpha, 1.0);
        assert_eq!(rec.beta, 0.0);
        assert_eq!(
            (rec.a_re, rec.a_im, rec.b_re, rec.b_im),
            (0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(rec.delta, 1.0);
        assert_eq!(rec.residual_re, None);
    }

    #[test]
    fn classify_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let ok = write_config(&dir, "ok.toml", IDENTITY);
        assert_eq!(cmd_classify(&ok, None), EXIT_OK);

        let bad = write_config(
            &dir,
            "bad.toml",
            &IDENTITY
                .replace("a11 = \"1\"", "a11 = \"x\"")
                .replace("x_min = 0.0", "x_min = -1.0"),
        );
        assert_eq!(cmd_classify(&bad, None), EXIT_NOT_ELLIPTIC);

        let syntax = write_config(&dir, "syn.toml", &IDENTITY.replace("\"1\"", "\"1 +\""));
        assert_eq!(cmd_classify(&syntax, None), EXIT_USAGE);

        assert_eq!(
            cmd_classify(&dir.path().join("absent.toml"), None),
            EXIT_USAGE
        );
    }

    #[test]
    fn classify_grid_override_changes_sampling() {
        // a11 = 1 everywhere except a dip below zero strictly between the
        // 2x2 corner nodes; only the finer override grid can see it
        let dir = tempfile::tempdir().unwrap();
        let text = IDENTITY.replace("a11 = \"1\"", "a11 = \"1 - 2*exp(-20*(x - 0.5)^2)\"");
        let path = write_config(&dir, "dip.toml", &text);
        assert_eq!(cmd_classify(&path, None), EXIT_OK);
        assert_eq!(
            cmd_classify(&path, Some(GridSpec { nx: 9, ny: 2 })),
            EXIT_NOT_ELLIPTIC
        );
    }

    #[test]
    fn transform_writes_golden_identity_csv() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(&dir, "id.toml", IDENTITY);
        let out = dir.path().join("out.csv");
        assert_eq!(
            cmd_transform(&config, Some(&out), Format::Csv, None),
            EXIT_OK
        );
        let body = fs::read_to_string(&out).unwrap();
        let expected = format!(
            "{CSV_HEADER}\n\
             0.0,0.0,1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0,,\n\
             1.0,0.0,1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0,,\n\
             0.0,1.0,1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0,,\n\
             1.0,1.0,1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0,,\n"
        );
        assert_eq!(body, expected);
    }

    #[test]
    fn transform_not_elliptic_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "ne.toml",
            &IDENTITY.replace("a22 = \"1\"", "a22 = \"-1\""),
        );
        let out = dir.path().join("out.csv");
        assert_eq!(
            cmd_transform(&config, Some(&out), Format::Csv, None),
            EXIT_NOT_ELLIPTIC
        );
        assert!(!out.exists());
    }

    #[test]
    fn transform_emits_error_records_for_unevaluable_rhs() {
        // classification checks only the principal part, so f1 = 1/x slips
        // through and must surface as a per-point error record at x = 0
        let dir = tempfile::tempdir().unwrap();
        let text = IDENTITY.replace("a22 = \"1\"", "a22 = \"1\"\nf1 = \"1/x\"");
        let config = write_config(&dir, "rhs.toml", &text);
        let out = dir.path().join("out.csv");
        assert_eq!(
            cmd_transform(&config, Some(&out), Format::Csv, None),
            EXIT_OK
        );
        let body = fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = body.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(
            lines[1].starts_with("# error at (0.0, 0.0):"),
            "{}",
            lines[1]
        );
        assert!(lines[1].contains("division by zero"), "{}", lines[1]);
        assert!(lines[2].starts_with("1.0,0.0,"));
        assert!(lines[3].starts_with("# error at (0.0, 1.0):"));
    }

    #[test]
    fn transform_jsonl_records() {
        let dir = tempfile::tempdir().unwrap();
        let text = IDENTITY.replace("[region]", "[solution]\nu = \"x\"\nv = \"y\"\n[region]");
        let config = write_config(&dir, "sol.toml", &text);
        let out = dir.path().join("out.jsonl");
        assert_eq!(
            cmd_transform(&config, Some(&out), Format::Jsonl, None),
            EXIT_OK
        );
        let body = fs::read_to_string(&out).unwrap();
        let first: serde_json::Value = serde_json::from_str(body.lines().next().unwrap()).unwrap();
        assert_eq!(first["x"], 0.0);
        assert_eq!(first["alpha"], 1.0);
        assert_eq!(first["A_re"], 0.0);
        assert_eq!(first["residual_re"], 0.0);
        assert_eq!(body.lines().count(), 4);
    }

    #[test]
    fn verify_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let passing = IDENTITY.replace("[region]", "[solution]\nu = \"x\"\nv = \"y\"\n[region]");
        let config = write_config(&dir, "pass.toml", &passing);
        assert_eq!(cmd_verify(&config, None, None), EXIT_OK);

        // no [solution] table
        let bare = write_config(&dir, "bare.toml", IDENTITY);
        assert_eq!(cmd_verify(&bare, None, None), EXIT_USAGE);

        // a genuinely noisy fixture: variable a22 makes the residual small
        // but nonzero, so an unachievable tolerance must fail
        let noisy = IDENTITY
            .replace("a22 = \"1\"", "a22 = \"2 + x^2\"")
            .replace(
                "[region]",
                "[solution]\nu = \"x^2*y\"\nv = \"x*y\"\n[region]",
            )
            .replace("nx = 2", "nx = 20")
            .replace("ny = 2", "ny = 20");
        let noisy = write_config(&dir, "noisy.toml", &noisy);
        assert_eq!(cmd_verify(&noisy, None, None), EXIT_OK);
        assert_eq!(cmd_verify(&noisy, Some(1e-22), None), EXIT_VERIFICATION);

        let not_elliptic = write_config(
            &dir,
            "ne.toml",
            &passing.replace("a11 = \"1\"", "a11 = \"-1\""),
        );
        assert_eq!(cmd_verify(&not_elliptic, None, None), EXIT_NOT_ELLIPTIC);
    }

    #[test]
    fn generate_family_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("family.toml");
        assert_eq!(cmd_generate_family(4.0, -2.0, "exp(x)", "y", &out), EXIT_OK);
        let problem = load_problem(&out, None).unwrap();
        assert!(matches!(
            problem.system.classify(&problem.region),
            Ok(Classification::Elliptic)
        ));
        // structure parameters constant across the region
        let s0 = problem.system.structure_params(0.0, 0.0).unwrap();
        let s1 = problem.system.structure_params(0.7, 0.3).unwrap();
        assert_eq!(s0.alpha, 4.0);
        assert!((s1.alpha - 4.0).abs() <= 1e-14);
        assert!((s1.beta + 2.0).abs() <= 1e-14);

        assert_eq!(
            cmd_generate_family(1.0, 2.0, "1", "0", &dir.path().join("ne.toml")),
            EXIT_NOT_ELLIPTIC
        );
        assert_eq!(
            cmd_generate_family(1.0, 0.0, "1 +", "0", &dir.path().join("syn.toml")),
            EXIT_USAGE
        );
    }

    #[test]
    fn generated_identity_family_matches_classical_config() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("id.toml");
        assert_eq!(cmd_generate_family(1.0, 0.0, "1", "0", &out), EXIT_OK);
        let problem = load_problem(&out, None).unwrap();
        assert_eq!(problem.system, EllipticSystem::classical());
    }
}
