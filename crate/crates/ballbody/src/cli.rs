//! Command-line front end: parse body descriptions, run functionals,
//! duality checks, inequality suites, floating-body sweeps, extremal
//! searches and the midpoint scan, and emit machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one inequality violated,
//! 2 input/usage error, 3 numerical non-convergence.
//!
//! Reports are JSON (stable key order, round-trip floats) or CSV (header
//! row, 17-significant-digit scientific notation). The environment variable
//! `BALLBODY_THREADS` caps worker parallelism.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::body::{ball_body_violation, Body, BodySpec};
use crate::curvature::curvature_duality_residual;
use crate::error::{Error, Result};
use crate::floating;
use crate::functionals;
use crate::inequalities::{self, InequalityKind, InequalityRecord};
use crate::sphere::{make_grid, GridScheme, SphereGrid};

#[derive(Debug, Parser)]
#[command(name = "ballbody", version, about = "Numerical toolkit for ball-bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute Ω^c, Ω, S, M* and the volume of a body
    Functionals {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        /// Monte Carlo seed (required for dim >= 4)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Max curvature-duality residual over a grid
    DualCheck {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the inequality suite on a body
    Verify {
        #[arg(long)]
        body: PathBuf,
        /// "all" or one inequality kind (e.g. SANTALO_PRODUCT)
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Floating-body sweep over decreasing cut volumes with a limit fit
    Floating {
        #[arg(long)]
        body: PathBuf,
        /// Comma-separated decreasing cut volumes, e.g. 1e-2,3e-3,1e-3,3e-4,1e-4
        #[arg(long)]
        deltas: String,
        #[arg(long, default_value_t = 256)]
        directions: usize,
        /// Read the deltas as fractions of Vol(K) instead of absolute volumes
        #[arg(long)]
        relative: bool,
        /// Also write a plain-text data file (delta, ratio, fit, target per row)
        #[arg(long)]
        emit_gnuplot: Option<PathBuf>,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Maximize Ω^c over a family of bodies
    Search {
        /// "balls" or "trig2d"
        #[arg(long, default_value = "balls")]
        family: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan the symmetrized ball functional around radius ½
    Scan {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Window "lo,hi" inside (0,1)
        #[arg(long, default_value = "0.4,0.6")]
        window: String,
        #[arg(long, default_value_t = 401)]
        steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

// ---------------------------------------------------------------------------
// report payloads
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct FunctionalsOut {
    body: BodySpec,
    report: functionals::FunctionalReport,
}

#[derive(Debug, Serialize)]
struct DualCheckOut {
    body: BodySpec,
    max_residual: f64,
    tolerance: f64,
    directions: usize,
    non_smooth_skipped: usize,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct VerifyOut {
    body: BodySpec,
    records: Vec<InequalityRecord>,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    delta: f64,
    deficit: f64,
    ratio: f64,
    directions: usize,
    fit_estimate: f64,
    target: f64,
    rel_error: f64,
}

#[derive(Debug, Serialize)]
struct SweepOut {
    body: BodySpec,
    rows: Vec<SweepRow>,
    fit_estimate: f64,
    fit_residual: f64,
    target: f64,
    rel_error: f64,
}

#[derive(Debug, Serialize)]
struct SearchOut {
    family: String,
    dim: usize,
    argmax: Vec<f64>,
    value: f64,
    expected_radius: f64,
}

#[derive(Debug, Serialize)]
struct ScanOut {
    dim: usize,
    window: (f64, f64),
    steps: usize,
    best_r: f64,
    gain: f64,
    second_difference: f64,
    second_derivative_closed_form: f64,
    predicted_sign_ok: bool,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a report. JSON keeps struct field order; CSV rows carry
/// full-precision scientific decimals.
pub fn report_serialize<T: Serialize>(report: &T, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)
                .map_err(|e| Error::InvalidArgument(format!("serialization: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let value = serde_json::to_value(report)
                .map_err(|e| Error::InvalidArgument(format!("serialization: {e}")))?;
            Ok(csv_from_value(&value).into_bytes())
        }
    }
}

/// CSV rendering: a top-level array (or the first array field of an object)
/// becomes the rows; scalar fields of each row become columns.
fn csv_from_value(value: &serde_json::Value) -> String {
    let rows: &Vec<serde_json::Value> = match value {
        serde_json::Value::Array(rows) => rows,
        serde_json::Value::Object(map) => {
            match map.values().find_map(|v| v.as_array()) {
                Some(rows) => {
                    return csv_rows(rows);
                }
                None => {
                    // single-record object: one header + one row
                    return csv_rows(&vec![value.clone()]);
                }
            }
        }
        _ => return String::new(),
    };
    csv_rows(rows)
}

fn csv_rows(rows: &Vec<serde_json::Value>) -> String {
    let mut out = String::new();
    let mut headers: Vec<String> = Vec::new();
    if let Some(serde_json::Value::Object(first)) = rows.first() {
        headers = first.keys().cloned().collect();
    }
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        if let serde_json::Value::Object(map) = row {
            let cells: Vec<String> = headers
                .iter()
                .map(|h| match map.get(h) {
                    Some(serde_json::Value::Number(n)) => match n.as_f64() {
                        Some(f) if n.is_f64() => fmt17(f),
                        _ => n.to_string(),
                    },
                    Some(serde_json::Value::Bool(b)) => b.to_string(),
                    Some(serde_json::Value::String(s)) => s.clone(),
                    Some(other) => other.to_string(),
                    None => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

fn load_body(path: &Path) -> Result<Body> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let spec: BodySpec = serde_json::from_str(&text).map_err(|e| {
        Error::InvalidArgument(format!(
            "malformed body JSON at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    spec.into_body()
}

/// Grid from one resolution knob: angle count in 2D, polar count in 3D
/// (2 res² nodes), Monte Carlo sample count with a mandatory seed above.
fn build_grid(dim: usize, resolution: usize, seed: Option<u64>) -> Result<SphereGrid> {
    match dim {
        2 => make_grid(2, resolution, GridScheme::UniformAngle2D),
        3 => make_grid(3, resolution.max(4), GridScheme::ProductGaussTrapezoid3D),
        _ => {
            let seed = seed.ok_or_else(|| {
                Error::InvalidArgument("--seed is required for dimension >= 4".into())
            })?;
            make_grid(dim, resolution, GridScheme::MonteCarlo { seed })
        }
    }
}

fn write_output(bytes: &[u8], output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Error::InvalidArgument(format!("stdout: {e}")))
        }
    }
}

fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } => 3,
        _ => 2,
    }
}

/// Exit code from a record list: 1 when any inequality failed.
pub fn exit_code_for_records(records: &[InequalityRecord]) -> i32 {
    if records.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("BALLBODY_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
}

// ---------------------------------------------------------------------------
// command execution
// ---------------------------------------------------------------------------

fn run_command(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Functionals {
            body,
            resolution,
            seed,
            output,
            format,
        } => {
            let k = load_body(body)?;
            let grid = build_grid(k.dim(), *resolution, *seed)?;
            let report = functionals::report(&k, &grid)?;
            let out = FunctionalsOut {
                body: BodySpec::from_body(&k),
                report,
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(0)
        }
        Command::DualCheck {
            body,
            resolution,
            tolerance,
            seed,
            output,
            format,
        } => {
            let k = load_body(body)?;
            let grid = build_grid(k.dim(), *resolution, *seed)?;
            let mut max_residual: f64 = 0.0;
            let mut skipped = 0usize;
            for u in grid.nodes() {
                let check = curvature_duality_residual(&k, u)?;
                if check.smooth {
                    max_residual = max_residual.max(check.residual);
                } else {
                    skipped += 1;
                }
            }
            let pass = max_residual <= *tolerance;
            let out = DualCheckOut {
                body: BodySpec::from_body(&k),
                max_residual,
                tolerance: *tolerance,
                directions: grid.len(),
                non_smooth_skipped: skipped,
                pass,
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Verify {
            body,
            suite,
            resolution,
            tolerance,
            seed,
            output,
            format,
        } => {
            if *resolution < 64 {
                return Err(Error::InvalidArgument(
                    "verify needs --resolution >= 64".into(),
                ));
            }
            let k = load_body(body)?;
            let grid = build_grid(k.dim(), *resolution, *seed)?;
            // class membership gate: report the offending direction
            let probe = build_grid(k.dim(), (*resolution).min(512), *seed)?;
            if let Some((dir, radii)) = ball_body_violation(&k, &probe, 1e-6)? {
                return Err(Error::UnsupportedBody(format!(
                    "body is not a ball-body: radii {radii:?} at direction {:?}",
                    dir.coords()
                )));
            }
            let records = if suite == "all" {
                inequalities::verify_all(&k, &grid, *tolerance)?
            } else {
                let kind = InequalityKind::parse(suite).ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown inequality kind {suite}"))
                })?;
                vec![inequalities::verify(kind, &k, &grid, *tolerance)?]
            };
            let code = exit_code_for_records(&records);
            let out = VerifyOut {
                body: BodySpec::from_body(&k),
                records,
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(code)
        }
        Command::Floating {
            body,
            deltas,
            directions,
            relative,
            emit_gnuplot,
            resolution,
            output,
            format,
        } => {
            let k = load_body(body)?;
            let mut parsed: Vec<f64> = Vec::new();
            for part in deltas.split(',') {
                parsed.push(part.trim().parse::<f64>().map_err(|e| {
                    Error::InvalidArgument(format!("bad delta {part:?}: {e}"))
                })?);
            }
            if *relative {
                let vol = floating::exact_area(&k)?;
                for d in parsed.iter_mut() {
                    *d *= vol;
                }
            }
            let sweep = floating::sweep(&k, &parsed, *directions)?;
            let grid = build_grid(k.dim(), *resolution, None)?;
            let target = floating::floating_constant(k.dim())? * functionals::omega_c(&k, &grid)?;
            let rel_error = (sweep.estimate - target).abs() / target;
            let rows: Vec<SweepRow> = sweep
                .results
                .iter()
                .map(|r| SweepRow {
                    delta: r.delta,
                    deficit: r.volume_deficit,
                    ratio: r.ratio,
                    directions: r.directions_used,
                    fit_estimate: sweep.estimate,
                    target,
                    rel_error,
                })
                .collect();
            if let Some(path) = emit_gnuplot {
                let mut text = String::from("# delta ratio fit target\n");
                for r in &rows {
                    text.push_str(&format!(
                        "{} {} {} {}\n",
                        fmt17(r.delta),
                        fmt17(r.ratio),
                        fmt17(r.fit_estimate),
                        fmt17(r.target)
                    ));
                }
                fs::write(path, text).map_err(|e| {
                    Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            let out = SweepOut {
                body: BodySpec::from_body(&k),
                rows,
                fit_estimate: sweep.estimate,
                fit_residual: sweep.fit_residual,
                target,
                rel_error,
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(0)
        }
        Command::Search {
            family,
            dim,
            resolution,
            seed,
            output,
            format,
        } => {
            let grid = build_grid(*dim, *resolution, *seed)?;
            let expected = *dim as f64 / (*dim as f64 + 1.0);
            let out = match family.as_str() {
                "balls" => {
                    let (r, value) = inequalities::extremal_search_balls(*dim, &grid)?;
                    SearchOut {
                        family: family.clone(),
                        dim: *dim,
                        argmax: vec![r],
                        value,
                        expected_radius: expected,
                    }
                }
                "trig2d" => {
                    let ((a, eps), value) = inequalities::extremal_search_trig2d(&grid)?;
                    SearchOut {
                        family: family.clone(),
                        dim: *dim,
                        argmax: vec![a, eps],
                        value,
                        expected_radius: expected,
                    }
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown family {other}; use balls or trig2d"
                    )))
                }
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(0)
        }
        Command::Scan {
            dim,
            window,
            steps,
            output,
            format,
        } => {
            let parts: Vec<&str> = window.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::InvalidArgument("window must be lo,hi".into()));
            }
            let lo: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("bad window: {e}")))?;
            let hi: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("bad window: {e}")))?;
            let (best_r, gain) = inequalities::santalo_midpoint_scan(*dim, (lo, hi), *steps)?;
            let (second_diff, closed) = inequalities::midpoint_second_derivative(*dim, 1e-3)?;
            // the midpoint stops being a maximum from dimension 4 on
            let predicted_positive = *dim >= 4;
            let sign_ok = if predicted_positive {
                gain > 0.0 && closed > 0.0
            } else {
                gain <= 1e-12 && closed < 0.0
            };
            let out = ScanOut {
                dim: *dim,
                window: (lo, hi),
                steps: *steps,
                best_r,
                gain,
                second_difference: second_diff,
                second_derivative_closed_form: closed,
                predicted_sign_ok: sign_ok,
            };
            write_output(&report_serialize(&out, *format)?, output.as_ref())?;
            Ok(if sign_ok { 0 } else { 1 })
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    run_from(std::env::args())
}

/// Parses and runs; usable from tests with explicit argument lists.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for_error(&e)
        }
    }
}
