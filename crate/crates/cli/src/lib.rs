//! Commands behind the `mapcalc` binary: identity suites, convergence studies
//! and demos, each producing machine-readable output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use mapcalc_core::forms::{Fd, Form};
use mapcalc_core::grassmannian::{EmbeddedSubmanifold, EmbeddingGates, MarsdenWeinstein};
use mapcalc_core::mapping::{MapPoint, MapTangent};
use mapcalc_core::mechanics::branes::{constrain_map, constrain_tangent};
use mapcalc_core::mechanics::{brane_catalog, brane_twist_check, dual_pair_demo, r4_system, BraneGates, BraneOutcome};
use mapcalc_core::random::TestRng;
use mapcalc_core::source::SourceDomain;
use mapcalc_core::suites::{convergence_study, run_suites, ConvergenceStudy, SuiteConfig, VerificationReport};

pub const DEMOS: [&str; 3] = ["mw-links", "dualpair", "branes"];
pub const DEFAULT_LEVELS: [usize; 4] = [32, 64, 128, 256];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("i/o on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] mapcalc_core::Error),
}

impl CliError {
    /// Process exit code: every error is a usage or configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other}; expected json or csv")),
        }
    }
}

/// The JSON config file: every field optional, flags override it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub suites: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub nodes: Option<usize>,
    pub trials: Option<usize>,
    pub fd_trials: Option<usize>,
    pub fd_step: Option<f64>,
    pub identity: Option<String>,
    pub levels: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flag values shared by the subcommands.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub nodes: Option<usize>,
}

fn file_config(o: &Overrides) -> CliResult<FileConfig> {
    o.config.as_deref().map(FileConfig::load).transpose().map(Option::unwrap_or_default)
}

/// Resolved suite configuration: defaults, then the file, then flags.
pub fn suite_config(file: &FileConfig, o: &Overrides) -> SuiteConfig {
    let d = SuiteConfig::default();
    SuiteConfig {
        seed: o.seed.or(file.seed).unwrap_or(d.seed),
        nodes: o.nodes.or(file.nodes).unwrap_or(d.nodes),
        trials: file.trials.unwrap_or(d.trials),
        fd_trials: file.fd_trials.unwrap_or(d.fd_trials),
        fd_step: file.fd_step.unwrap_or(d.fd_step),
    }
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("id,suite,domain,nodes,seed,trials,residual,tolerance,bound,order,at_floor,status,anchor\n");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6e},{:.1e},{},{},{},{},\"{}\"",
            r.id,
            r.suite,
            r.domain,
            r.nodes,
            r.seed,
            r.trials,
            r.residual,
            r.tolerance,
            tag(&r.bound),
            opt(r.order),
            r.at_floor,
            tag(&r.status),
            r.anchor
        );
    }
    out
}

/// Runs the suites and writes the report to `out`.
pub fn cmd_verify(suites: &[String], o: &Overrides, out: &Path, format: Format) -> CliResult<VerificationReport> {
    let file = file_config(o)?;
    let names: Vec<String> = if suites.is_empty() { file.suites.clone().unwrap_or_default() } else { suites.to_vec() };
    if names.is_empty() {
        return Err(CliError::Usage(format!(
            "no suite selected; pass --suite with one of: {}",
            mapcalc_core::suites::SUITES.join(", ")
        )));
    }
    let cfg = suite_config(&file, o);
    let report = run_suites(&names, &cfg).map_err(|e| match e {
        mapcalc_core::Error::Invalid(msg) => CliError::Usage(msg),
        other => CliError::Core(other),
    })?;
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => report_csv(&report),
    };
    write(out, &text)?;
    Ok(report)
}

pub fn converge_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::from("nodes,step,residual\n");
    for r in &study.rows {
        let _ = writeln!(out, "{},{:.6e},{:.6e}", r.nodes, r.step, r.residual);
    }
    out
}

/// Fitted order, `floor`, or `n/a` for a single level.
pub fn order_label(study: &ConvergenceStudy) -> String {
    match &study.fit {
        None => "n/a".into(),
        Some(f) if f.at_floor => "floor".into(),
        Some(f) => opt(f.order),
    }
}

pub fn cmd_converge(identity: Option<&str>, levels: &[usize], o: &Overrides, out: Option<&Path>, format: Format) -> CliResult<ConvergenceStudy> {
    let file = file_config(o)?;
    let identity = identity.map(str::to_string).or(file.identity.clone()).unwrap_or_else(|| "derivation".into());
    let levels: Vec<usize> = if !levels.is_empty() {
        levels.to_vec()
    } else if let Some(n) = o.nodes {
        vec![n]
    } else {
        file.levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec())
    };
    let seed = suite_config(&file, o).seed;
    let study = convergence_study(&identity, &levels, seed).map_err(|e| match e {
        mapcalc_core::Error::Invalid(msg) => CliError::Usage(msg),
        other => CliError::Core(other),
    })?;
    if let Some(path) = out {
        let text = match format {
            Format::Json => json(&study),
            Format::Csv => converge_csv(&study),
        };
        write(path, &text)?;
    }
    Ok(study)
}

/// Summary of a demo run and the files it wrote.
#[derive(Clone, Debug, Serialize)]
pub struct DemoOutput {
    pub name: String,
    pub passed: bool,
    pub csv: PathBuf,
    pub summary: PathBuf,
}

pub fn cmd_demo(name: &str, o: &Overrides, out_dir: &Path) -> CliResult<DemoOutput> {
    let cfg = suite_config(&file_config(o)?, o);
    let (csv, summary, passed) = match name {
        "mw-links" => boxed(mw_links(&cfg)?),
        "dualpair" => boxed(dualpair(&cfg)?),
        "branes" => boxed(branes(&cfg)?),
        other => {
            return Err(CliError::Usage(format!("unknown demo {other}; available demos: {}", DEMOS.join(", "))));
        }
    };
    let csv_path = out_dir.join(format!("{name}.csv"));
    let summary_path = out_dir.join("summary.json");
    write(&csv_path, &csv)?;
    write(&summary_path, &json(&summary))?;
    Ok(DemoOutput { name: name.into(), passed, csv: csv_path, summary: summary_path })
}

fn boxed<T: Serialize>((csv, summary, passed): (String, T, bool)) -> (String, serde_json::Value, bool) {
    (csv, serde_json::to_value(summary).expect("summaries serialize"), passed)
}

#[derive(Serialize)]
struct MwSummary {
    nodes: usize,
    seed: u64,
    circle_value: f64,
    expected: f64,
    circle_error: f64,
    tolerance: f64,
    loops: usize,
    max_reversal_gap: f64,
    passed: bool,
}

/// `ν̃` on the unit circle and on seeded perturbed loops, with each loop's
/// value after reversing its orientation.
fn mw_links(cfg: &SuiteConfig) -> CliResult<(String, MwSummary, bool)> {
    const TOLERANCE: f64 = 1e-8;
    let dom = Arc::new(SourceDomain::circle(cfg.nodes)?);
    let mw = MarsdenWeinstein::new(&Form::volume(3))?;
    let mut csv = String::from("loop,nodes,value,reversed\n");
    let unit = EmbeddedSubmanifold::new(
        MapPoint::from_fn(dom.clone(), 3, |s| vec![s[0].cos(), s[0].sin(), 0.0])?,
        EmbeddingGates::default(),
    )?;
    let ez = MapTangent::from_fn(&dom, 3, |_| vec![0.0, 0.0, 1.0])?;
    let radial = MapTangent::from_fn(&dom, 3, |s| vec![s[0].cos(), s[0].sin(), 0.0])?;
    let mut rows = vec![("unit-circle".to_string(), unit, ez, radial)];
    let mut rng = TestRng::new(cfg.seed, "demo/mw-links");
    for i in 0..4 {
        let bumps: Vec<_> = (0..3).map(|_| rng.periodic_fn(1, 2, 2).scale(0.04)).collect();
        let f = MapPoint::from_fn(dom.clone(), 3, |s| {
            vec![s[0].cos() + bumps[0].value(s), s[0].sin() + bumps[1].value(s), bumps[2].value(s)]
        })?;
        let n = EmbeddedSubmanifold::new(f, EmbeddingGates::default())?;
        rows.push((format!("loop-{i}"), n, rng.map_tangent(&dom, 3)?, rng.map_tangent(&dom, 3)?));
    }
    let mut circle_value = 0.0;
    let mut max_gap = 0.0f64;
    for (name, n, x, y) in &rows {
        let value = mw.eval(n, x, y)?;
        let (rev, carry) = n.reversed()?;
        let reversed = mw.eval(&rev, &carry(x), &carry(y))?;
        max_gap = max_gap.max((value + reversed).abs());
        if name == "unit-circle" {
            circle_value = value;
        }
        let _ = writeln!(csv, "{name},{},{value:.15e},{reversed:.15e}", cfg.nodes);
    }
    let expected = 2.0 * std::f64::consts::PI;
    let circle_error = (circle_value - expected).abs();
    let passed = circle_error < TOLERANCE;
    let summary = MwSummary {
        nodes: cfg.nodes,
        seed: cfg.seed,
        circle_value,
        expected,
        circle_error,
        tolerance: TOLERANCE,
        loops: rows.len(),
        max_reversal_gap: max_gap,
        passed,
    };
    Ok((csv, summary, passed))
}

#[derive(Serialize)]
struct DualPairSummary {
    seed: u64,
    torus_side: usize,
    hamiltonians: Vec<String>,
    hamiltonian_residual: f64,
    exact_residual: f64,
    exact_route_gap: f64,
    commutation: f64,
    commutation_exact: bool,
    cocycle_values: Vec<f64>,
    cocycle_spread: f64,
    passed: bool,
}

/// Momentum samples of both commuting actions along a homotopy of tori in
/// `R⁴`.
fn dualpair(cfg: &SuiteConfig) -> CliResult<(String, DualPairSummary, bool)> {
    let side = cfg.torus_side();
    let dom = Arc::new(SourceDomain::torus2(side, side)?);
    let report = dual_pair_demo(&r4_system(), dom, cfg.seed, 8)?;
    let mut csv = String::from("t");
    for h in &report.hamiltonians {
        let _ = write!(csv, ",ham_{h}");
    }
    for j in 0..report.samples.first().map_or(0, |s| s.exact_side.len()) {
        let _ = write!(csv, ",exact_{j}");
    }
    csv.push_str(",flux\n");
    for s in &report.samples {
        let _ = write!(csv, "{:.4}", s.t);
        for v in s.hamiltonian_side.iter().chain(&s.exact_side) {
            let _ = write!(csv, ",{v:.12e}");
        }
        let _ = writeln!(csv, ",{:.12e}", s.flux);
    }
    let commutation_exact = report.commutation == 0.0;
    let passed = commutation_exact && report.hamiltonian_residual < 1e-6 && report.exact_residual < 1e-6;
    let summary = DualPairSummary {
        seed: cfg.seed,
        torus_side: side,
        hamiltonians: report.hamiltonians.clone(),
        hamiltonian_residual: report.hamiltonian_residual,
        exact_residual: report.exact_residual,
        exact_route_gap: report.exact_route_gap,
        commutation: report.commutation,
        commutation_exact,
        cocycle_values: report.cocycle_values.clone(),
        cocycle_spread: report.cocycle_spread,
        passed,
    };
    Ok((csv, summary, passed))
}

#[derive(Serialize)]
struct BraneRow {
    case: String,
    outcome: BraneOutcome,
}

#[derive(Serialize)]
struct BraneSummary {
    seed: u64,
    interval_nodes: usize,
    tolerance: f64,
    cases: Vec<BraneRow>,
    passed: bool,
}

/// The brane catalog on seeded constrained maps of the interval.
fn branes(cfg: &SuiteConfig) -> CliResult<(String, BraneSummary, bool)> {
    const TOLERANCE: f64 = 1e-5;
    let dom = Arc::new(SourceDomain::interval(cfg.interval_nodes())?);
    let mut csv = String::from("case,outcome,consistency,residual,untwisted\n");
    let mut cases = Vec::new();
    let mut passed = true;
    for case in brane_catalog() {
        let mut rng = TestRng::new(cfg.seed, &format!("demo/branes/{}", case.name));
        let m = case.h.dim();
        let f = constrain_map(&case, &rng.map_point(&dom, m)?)?;
        let ys = (0..case.h.degree())
            .map(|_| constrain_tangent(&case, &f, &rng.map_tangent(&dom, m)?))
            .collect::<Result<Vec<_>, _>>()?;
        let outcome = brane_twist_check(&case, &f, &ys, Fd::new(cfg.fd_step), BraneGates::default(), cfg.seed)?;
        match &outcome {
            BraneOutcome::Checked { consistency, residual, untwisted } => {
                passed &= *residual < TOLERANCE;
                let _ = writeln!(csv, "{},checked,{consistency:.3e},{residual:.3e},{untwisted:.3e}", case.name);
            }
            BraneOutcome::Rejected { consistency } => {
                let _ = writeln!(csv, "{},rejected,{consistency:.3e},,", case.name);
            }
            BraneOutcome::Inapplicable { .. } => {
                passed = false;
                let _ = writeln!(csv, "{},inapplicable,,,", case.name);
            }
        }
        cases.push(BraneRow { case: case.name.clone(), outcome });
    }
    passed &= cases.iter().any(|c| matches!(c.outcome, BraneOutcome::Rejected { .. }));
    let summary = BraneSummary { seed: cfg.seed, interval_nodes: cfg.interval_nodes(), tolerance: TOLERANCE, cases, passed };
    Ok((csv, summary, passed))
}
