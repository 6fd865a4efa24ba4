//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 when the engines disagree,
//! 1 on internal errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangements::{hyperplane_predegree_capped, ArrangementError, HyperplaneArrangement};
use crate::configuration::{ConfigError, ConfigTag, LineConfiguration};
use crate::excess::{assemble_bezout, Engine};
use crate::predegree::closed_form_predegree_capped;
use crate::series::{parse_rational, rational_to_string, TruncatedSeries, PLANE_CAP};
use crate::stabilizer::{component_count, StabilizerElements, StabilizerError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("engines disagree:\n{diff}")]
    Disagreement { report: Box<Report>, diff: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Disagreement { .. } => EXIT_DISAGREEMENT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ArrangementError> for CliError {
    fn from(e: ArrangementError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<StabilizerError> for CliError {
    fn from(e: StabilizerError) -> Self {
        match e {
            StabilizerError::InternalInconsistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "lineorbit", version, about = "Predegree polynomials and orbit-closure degrees of plane line configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Adjusted predegree polynomial and predegree table.
    Predegree(PredegreeArgs),
    /// Run all three engines and compare them coefficient by coefficient.
    Verify(InputArgs),
    /// Small-orbit type and orbit dimension.
    Classify(InputArgs),
    /// Stabilizer component count with the enumerated finite group.
    Stabilizer(InputArgs),
    /// Orbit-closure degree = predegree / components.
    Degree(InputArgs),
    /// Transversal hyperplane arrangement in P^n.
    Arrangement(ArrangementArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Configuration JSON file.
    #[arg(required_unless_present = "batch", conflicts_with = "batch")]
    pub input: Option<PathBuf>,
    /// Process every *.json file in a directory.
    #[arg(long, value_name = "DIR")]
    pub batch: Option<PathBuf>,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PredegreeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also run both blow-up engines and require exact agreement.
    #[arg(long)]
    pub verify: bool,
    /// Series cap override (default 8).
    #[arg(long, value_name = "K")]
    pub cap: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ArrangementArgs {
    /// Ambient dimension n of P^n.
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated hyperplane multiplicities.
    #[arg(long, value_delimiter = ',', required = true)]
    pub mults: Vec<u64>,
    /// Series cap override (default n^2 + 2n).
    #[arg(long, value_name = "K")]
    pub cap: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

/// Everything the configuration subcommands print.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub classification: ConfigTag,
    pub orbit_dim: u32,
    /// True for abstract (coordinate-free) input.
    pub formal: bool,
    /// Coefficients of `t^j` as `"p/q"` strings.
    pub polynomial: Vec<String>,
    /// `f_j * d_j` for each `j`.
    pub predegree_table: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_degree: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_agreement: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_elements: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_component: Option<String>,
}

impl Report {
    pub fn polynomial_series(&self) -> Option<TruncatedSeries> {
        TruncatedSeries::from_fraction_strings(&self.polynomial).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub dim: usize,
    pub mults: Vec<u64>,
    pub cap: usize,
    pub polynomial: Vec<String>,
    pub predegree_table: Vec<String>,
    pub top_predegree: String,
}

/// What to compute beyond the polynomial.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub verify: bool,
    pub cap: Option<usize>,
    pub stabilizer: bool,
    pub elements: bool,
}

fn table_strings(p: &TruncatedSeries) -> Vec<String> {
    p.predegree_table().iter().map(rational_to_string).collect()
}

fn engine_diff(closed: &TruncatedSeries, explicit: &TruncatedSeries, chow: &TruncatedSeries) -> String {
    let mut out = String::new();
    for j in 0..=closed.cap() {
        let (a, b, c) = (closed.coeff(j), explicit.coeff(j), chow.coeff(j));
        if a != b || a != c {
            let _ = writeln!(
                out,
                "  t^{j}: closed form {}, explicit {}, chow {}",
                rational_to_string(&a),
                rational_to_string(&b),
                rational_to_string(&c)
            );
        }
    }
    out
}

/// Builds the report for one configuration.
pub fn build_report(cfg: &LineConfiguration, opts: ReportOptions) -> Result<Report, CliError> {
    let cap = opts.cap.unwrap_or(PLANE_CAP);
    if cap == 0 {
        return Err(CliError::Input("--cap must be at least 1".into()));
    }
    let class = cfg.classify();
    let poly = closed_form_predegree_capped(cfg, cap);
    let mut report = Report {
        source: None,
        classification: class.tag,
        orbit_dim: class.orbit_dim,
        formal: cfg.is_formal(),
        polynomial: poly.to_fraction_strings(),
        predegree_table: table_strings(&poly),
        components: None,
        orbit_degree: None,
        engine_agreement: None,
        stabilizer_group: None,
        stabilizer_elements: None,
        identity_component: None,
    };

    if opts.stabilizer {
        let full = if cap == PLANE_CAP {
            poly.clone()
        } else {
            closed_form_predegree_capped(cfg, PLANE_CAP)
        };
        let stab = component_count(cfg, &full).map_err(|e| match e {
            StabilizerError::NeedsCoordinates(tag) => CliError::Input(format!(
                "{e}\nhint: {tag} component counts depend on the actual line positions; \
                 rewrite the input as {{\"lines\": [{{\"coeffs\": [..], \"mult\": ..}}]}}"
            )),
            other => other.into(),
        })?;
        report.components = Some(stab.components);
        report.orbit_degree = Some(stab.orbit_degree.to_string());
        report.identity_component = Some(stab.identity_component.to_string());
        if let Some(elements) = &stab.elements {
            report.stabilizer_group = Some(
                match elements {
                    StabilizerElements::Pgl2(_) => "PGL(2) on the pencil of concurrent lines",
                    StabilizerElements::Pgl3(_) => "PGL(3) on the dual plane",
                }
                .to_string(),
            );
            if opts.elements {
                let mats = match elements {
                    StabilizerElements::Pgl2(g) => g.iter().map(|m| matrix_strings(&m.to_rational())).collect(),
                    StabilizerElements::Pgl3(g) => g.iter().map(|m| matrix_strings(&m.to_rational())).collect(),
                };
                report.stabilizer_elements = Some(mats);
            }
        }
    }

    if opts.verify {
        if cap > PLANE_CAP {
            return Err(CliError::Input(format!(
                "--verify compares the engines up to t^{PLANE_CAP}; use --cap <= {PLANE_CAP}"
            )));
        }
        let explicit = assemble_bezout(cfg, Engine::Explicit).with_cap(PLANE_CAP).truncate(cap).expect("cap <= 8").with_cap(cap);
        let chow = assemble_bezout(cfg, Engine::Chow).truncate(cap).expect("cap <= 8").with_cap(cap);
        let agree = explicit == poly && chow == poly;
        report.engine_agreement = Some(agree);
        if !agree {
            let diff = engine_diff(&poly, &explicit, &chow);
            return Err(CliError::Disagreement {
                report: Box::new(report),
                diff,
            });
        }
    }
    Ok(report)
}

fn matrix_strings(m: &[Vec<crate::series::Rational>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(rational_to_string).collect())
        .collect()
}

pub fn load_configuration(path: &Path) -> Result<LineConfiguration, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    LineConfiguration::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn cmd_predegree(path: &Path, verify: bool, cap: Option<usize>) -> Result<Report, CliError> {
    let cfg = load_configuration(path)?;
    build_report(
        &cfg,
        ReportOptions {
            verify,
            cap,
            ..Default::default()
        },
    )
}

pub fn cmd_classify(path: &Path) -> Result<Report, CliError> {
    build_report(&load_configuration(path)?, ReportOptions::default())
}

pub fn cmd_stabilizer(path: &Path) -> Result<Report, CliError> {
    build_report(
        &load_configuration(path)?,
        ReportOptions {
            stabilizer: true,
            elements: true,
            ..Default::default()
        },
    )
}

pub fn cmd_degree(path: &Path) -> Result<Report, CliError> {
    build_report(
        &load_configuration(path)?,
        ReportOptions {
            stabilizer: true,
            ..Default::default()
        },
    )
}

pub fn cmd_arrangement(dim: usize, mults: Vec<u64>, cap: Option<usize>) -> Result<ArrangementReport, CliError> {
    let arr = HyperplaneArrangement::new(dim, mults)?;
    let cap = cap.unwrap_or(arr.cap());
    let poly = hyperplane_predegree_capped(&arr, cap);
    let top = poly.predegree_at(cap);
    Ok(ArrangementReport {
        dim,
        mults: arr.mults().to_vec(),
        cap,
        polynomial: poly.to_fraction_strings(),
        predegree_table: table_strings(&poly),
        top_predegree: rational_to_string(&top),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum View {
    Predegree,
    Verify,
    Classify,
    Stabilizer,
    Degree,
}

fn render_text(report: &Report, view: View) -> String {
    let mut out = String::new();
    if let Some(src) = &report.source {
        let _ = writeln!(out, "{src}");
    }
    let formal = if report.formal { " [formal]" } else { "" };
    let _ = writeln!(
        out,
        "classification  {} (orbit dimension {}){formal}",
        report.classification, report.orbit_dim
    );
    match view {
        View::Classify => {}
        View::Degree => {
            let pre = &report.predegree_table[report.orbit_dim as usize];
            let _ = writeln!(
                out,
                "predegree {pre}, components {}, degree {}",
                report.components.unwrap_or(0),
                report.orbit_degree.as_deref().unwrap_or("?")
            );
        }
        View::Stabilizer => {
            let _ = writeln!(out, "components      {}", report.components.unwrap_or(0));
            if let Some(id) = &report.identity_component {
                let _ = writeln!(out, "identity comp.  {id}");
            }
            if let Some(group) = &report.stabilizer_group {
                let _ = writeln!(out, "finite part     {group}");
            }
            for m in report.stabilizer_elements.iter().flatten() {
                let rows: Vec<String> = m.iter().map(|r| r.join(" ")).collect();
                let _ = writeln!(out, "  [{}]", rows.join("; "));
            }
            let _ = writeln!(out, "orbit degree    {}", report.orbit_degree.as_deref().unwrap_or("?"));
        }
        View::Predegree | View::Verify => {
            if let Some(p) = report.polynomial_series() {
                let _ = writeln!(out, "polynomial      {p}");
            }
            let coeffs: Vec<String> = report
                .polynomial
                .iter()
                .map(|c| parse_rational(c).map_or_else(|_| c.clone(), |q| rational_to_string(&q)))
                .collect();
            let width = coeffs
                .iter()
                .map(|s| s.len())
                .max()
                .unwrap_or(0)
                .max("coefficient".len());
            let _ = writeln!(out, "{:>3}  {:<width$}  f_j*d_j", "j", "coefficient");
            for (j, (c, p)) in coeffs.iter().zip(&report.predegree_table).enumerate() {
                let _ = writeln!(out, "{j:>3}  {c:<width$}  {p}");
            }
            if let Some(agree) = report.engine_agreement {
                let _ = writeln!(
                    out,
                    "engines         {}",
                    if agree { "agree (closed form, explicit, chow)" } else { "DISAGREE" }
                );
            }
        }
    }
    out
}

fn render_arrangement(r: &ArrangementReport) -> String {
    let mut out = String::new();
    let mults: Vec<String> = r.mults.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "arrangement     P^{} with multiplicities {}", r.dim, mults.join(","));
    if let Ok(p) = TruncatedSeries::from_fraction_strings(&r.polynomial) {
        let _ = writeln!(out, "polynomial      {p}");
    }
    let _ = writeln!(out, "top predegree   {} (j = {})", r.top_predegree, r.cap);
    out
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report") + "\n"
}

fn run_one(path: &Path, cmd: &Command) -> Result<Report, CliError> {
    let mut report = match cmd {
        Command::Predegree(a) => cmd_predegree(path, a.verify, a.cap),
        Command::Verify(_) => cmd_predegree(path, true, None),
        Command::Classify(_) => cmd_classify(path),
        Command::Stabilizer(_) => cmd_stabilizer(path),
        Command::Degree(_) => cmd_degree(path),
        Command::Arrangement(_) => unreachable!("arrangement takes no input file"),
    }?;
    report.source = Some(path.display().to_string());
    Ok(report)
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Serialize)]
struct BatchEntry<'a> {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Runs the CLI on explicit arguments, writing to the given streams. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };

    if let Command::Arrangement(a) = &cli.command {
        return match cmd_arrangement(a.dim, a.mults.clone(), a.cap) {
            Ok(r) => {
                let text = if a.json { json(&r) } else { render_arrangement(&r) };
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                e.exit_code()
            }
        };
    }

    let (input, view) = match &cli.command {
        Command::Predegree(a) => (&a.input, View::Predegree),
        Command::Verify(a) => (a, View::Verify),
        Command::Classify(a) => (a, View::Classify),
        Command::Stabilizer(a) => (a, View::Stabilizer),
        Command::Degree(a) => (a, View::Degree),
        Command::Arrangement(_) => unreachable!(),
    };

    let files = match (&input.input, &input.batch) {
        (Some(p), None) => vec![p.clone()],
        (None, Some(dir)) => match json_files(dir) {
            Ok(f) => f,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return e.exit_code();
            }
        },
        _ => unreachable!("clap enforces exactly one input"),
    };

    let results: Vec<Result<Report, CliError>> = files
        .par_iter()
        .map(|p| run_one(p, &cli.command))
        .collect();

    let mut code = EXIT_OK;
    let worse = |code: i32, new: i32| -> i32 {
        let rank = |c| match c {
            EXIT_OK => 0,
            EXIT_INPUT => 1,
            EXIT_DISAGREEMENT => 2,
            _ => 3,
        };
        if rank(new) > rank(code) {
            new
        } else {
            code
        }
    };

    if input.json {
        let entries: Vec<BatchEntry> = files
            .iter()
            .zip(&results)
            .map(|(f, r)| match r {
                Ok(rep) => BatchEntry {
                    file: f.display().to_string(),
                    report: Some(rep),
                    error: None,
                },
                Err(CliError::Disagreement { report, diff }) => BatchEntry {
                    file: f.display().to_string(),
                    report: Some(report),
                    error: Some(format!("engines disagree:\n{diff}")),
                },
                Err(e) => BatchEntry {
                    file: f.display().to_string(),
                    report: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        let text = if input.batch.is_some() {
            json(&entries)
        } else {
            match &results[0] {
                Ok(r) => json(r),
                Err(CliError::Disagreement { report, .. }) => json(report.as_ref()),
                Err(_) => String::new(),
            }
        };
        let _ = out.write_all(text.as_bytes());
    }

    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(rep) => {
                if !input.json {
                    if i > 0 {
                        let _ = writeln!(out);
                    }
                    let _ = out.write_all(render_text(rep, view).as_bytes());
                }
            }
            Err(e) => {
                if let (false, CliError::Disagreement { report, .. }) = (input.json, e) {
                    let _ = out.write_all(render_text(report, view).as_bytes());
                }
                let _ = writeln!(err, "error: {}: {e}", files[i].display());
                code = worse(code, e.exit_code());
            }
        }
    }
    code
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
