//! Seeded verification suites for the calculus on mapping spaces and the
//! mechanics built on it.
//!
//! Every check evaluates a residual on seeded random data, trial by trial.
//! Finite-difference checks additionally refit the worst trial over a step
//! ladder and must show second-order convergence unless they sit at the
//! machine floor. The order is fitted to the excess of each ladder residual
//! over the residual at the configured step, which removes the part of the
//! error that does not depend on the step (quadrature and interpolation).
//! A ladder whose residuals spread less than the machine floor shows no
//! step dependence and counts as being at the floor, as does a ladder that
//! grows under refinement while staying far below the tolerance.

mod bar;
mod boundary;
mod branes;
mod cocycles;
mod converge;
mod data;
mod fiber;
mod hat;
mod momentum;
mod tilda;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::{assess, step_ladder, OrderFit, MACHINE_FLOOR, MIN_ORDER};
use crate::error::{Error, Result};
use crate::forms::Fd;
use crate::random::TestRng;
use crate::source::SourceDomain;

pub use converge::{convergence_study, ConvergenceRow, ConvergenceStudy, CONVERGENCE_IDENTITIES};

/// Suite identifiers in execution order.
pub const SUITES: [&str; 8] =
    ["hat-calculus", "bar-calculus", "tilda-calculus", "fiber-rules", "boundary", "momentum", "cocycles", "branes"];

/// Coarsest step and level count of the refit ladder.
pub const LADDER_COARSEST: f64 = 1e-2;
pub const LADDER_LEVELS: usize = 4;
/// Ladders that grow under refinement while staying this far below the
/// tolerance are dominated by roundoff.
pub const ROUNDOFF_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

/// How the residual of a check is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discretization {
    /// Both sides agree up to rounding.
    Exact,
    /// Spectrally accurate quadrature or differentiation.
    Spectral,
    /// Central differences; the observed order is fitted.
    FiniteDifference,
}

/// Whether the residual must stay below the tolerance or exceed it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub id: String,
    pub anchor: String,
    pub suite: String,
    pub domain: String,
    pub nodes: usize,
    pub seed: u64,
    pub trials: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub discretization: Discretization,
    pub order: Option<f64>,
    pub at_floor: bool,
    pub status: Status,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Circle node count; the torus uses `max(nodes/4, 32)` per side and the
    /// interval `2·nodes`.
    pub nodes: usize,
    /// Trials of the cheap algebraic checks.
    pub trials: usize,
    /// Trials of the finite-difference checks.
    pub fd_trials: usize,
    pub fd_step: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 1729, nodes: 128, trials: 100, fd_trials: 6, fd_step: 1e-4 }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::Invalid(format!("nodes must be at least 8, got {}", self.nodes)));
        }
        if self.trials == 0 || self.fd_trials == 0 {
            return Err(Error::Invalid("trial counts must be positive".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(Error::Invalid(format!("fd_step must lie in (0, 1), got {}", self.fd_step)));
        }
        Ok(())
    }

    pub fn torus_side(&self) -> usize {
        (self.nodes / 4).max(32)
    }

    pub fn interval_nodes(&self) -> usize {
        2 * self.nodes
    }

    pub(crate) fn domain(&self, label: &str) -> Result<Arc<SourceDomain>> {
        let dom = match label {
            "circle" => SourceDomain::circle(self.nodes)?,
            "torus" => SourceDomain::torus2(self.torus_side(), self.torus_side())?,
            "interval" => SourceDomain::interval(self.interval_nodes())?,
            other => return Err(Error::Invalid(format!("unknown domain {other}"))),
        };
        Ok(Arc::new(dom))
    }
}

/// Settings and conventions that shape every residual in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub machine_floor: f64,
    pub roundoff_margin: f64,
    pub min_order: f64,
    pub step_ladder: Vec<f64>,
    pub torus_side: usize,
    pub interval_nodes: usize,
    pub residual_scale: String,
    pub conventions: Vec<String>,
}

impl Environment {
    fn new(cfg: &SuiteConfig) -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            machine_floor: MACHINE_FLOOR,
            roundoff_margin: ROUNDOFF_MARGIN,
            min_order: MIN_ORDER,
            step_ladder: step_ladder(LADDER_COARSEST, LADDER_LEVELS),
            torus_side: cfg.torus_side(),
            interval_nodes: cfg.interval_nodes(),
            residual_scale: "|a - b| / max(1, |a|, |b|)".into(),
            conventions: vec![
                "hat pairing: first tangent fills the first slot of the target form".into(),
                "fiber integration: target arguments first, then the source frame".into(),
                "interval boundary: outward orientation, sign -1 at s = 0 and +1 at s = 1".into(),
                "hamiltonian fields: i_X omega = dh".into(),
                "Lie algebra bracket of vector fields: [X, Y]^op = -(DY X - DX Y)".into(),
                "right inverse of d on the torus: zero-mean potential".into(),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: SuiteConfig,
    pub suites: Vec<String>,
    pub environment: Environment,
    pub records: Vec<TestRecord>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &TestRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }
}

/// Runs the named suites in order, skipping repeats. An empty selection is
/// an error.
pub fn run_suites(names: &[String], cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if names.is_empty() {
        return Err(Error::Invalid("no suite selected".into()));
    }
    let mut suites: Vec<String> = Vec::new();
    for name in names {
        if !SUITES.contains(&name.as_str()) {
            return Err(Error::Invalid(format!("unknown suite {name}; known suites: {}", SUITES.join(", "))));
        }
        if !suites.contains(name) {
            suites.push(name.clone());
        }
    }
    let mut records = Vec::new();
    for name in &suites {
        records.extend(run_suite(name, cfg)?);
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = records.iter().all(|r| r.status != Status::Fail);
    Ok(VerificationReport { config: cfg.clone(), suites, environment: Environment::new(cfg), records, passed })
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<TestRecord>> {
    let checks = match name {
        "hat-calculus" => hat::checks(cfg)?,
        "bar-calculus" => bar::checks(cfg)?,
        "tilda-calculus" => tilda::checks(cfg)?,
        "fiber-rules" => fiber::checks(cfg)?,
        "boundary" => boundary::checks(cfg)?,
        "momentum" => momentum::checks(cfg)?,
        "cocycles" => cocycles::checks(cfg)?,
        "branes" => return branes::records(cfg),
        other => return Err(Error::Invalid(format!("unknown suite {other}"))),
    };
    Ok(checks.into_iter().map(|c| c.run(name, cfg)).collect())
}

type Eval = Box<dyn Fn(&mut TestRng, Fd) -> Result<f64> + Send + Sync>;

/// One residual evaluated over seeded trials.
pub(crate) struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub domain: String,
    pub nodes: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub bound: Bound,
    pub discretization: Discretization,
    pub eval: Eval,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        anchor: &'static str,
        dom: (&str, usize),
        trials: usize,
        tolerance: f64,
        discretization: Discretization,
        eval: impl Fn(&mut TestRng, Fd) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            anchor,
            domain: dom.0.to_string(),
            nodes: dom.1,
            trials,
            tolerance,
            bound: Bound::Upper,
            discretization,
            eval: Box::new(eval),
        }
    }

    pub fn lower_bound(mut self) -> Self {
        self.bound = Bound::Lower;
        self
    }

    fn trial(&self, cfg: &SuiteConfig, t: usize, step: f64) -> Result<f64> {
        let mut rng = TestRng::trial(cfg.seed, &self.id, t);
        let r = (self.eval)(&mut rng, Fd::new(step))?;
        Ok(if r.is_finite() { r } else { f64::MAX })
    }

    fn run(self, suite: &str, cfg: &SuiteConfig) -> TestRecord {
        let results: Vec<Result<f64>> = (0..self.trials).into_par_iter().map(|t| self.trial(cfg, t, cfg.fd_step)).collect();
        let mut record = TestRecord {
            id: self.id.clone(),
            anchor: self.anchor.to_string(),
            suite: suite.to_string(),
            domain: self.domain.clone(),
            nodes: self.nodes,
            seed: cfg.seed,
            trials: self.trials,
            residual: f64::MAX,
            tolerance: self.tolerance,
            bound: self.bound,
            discretization: self.discretization,
            order: None,
            at_floor: false,
            status: Status::Fail,
            note: String::new(),
        };
        let residuals = match results.into_iter().collect::<Result<Vec<f64>>>() {
            Ok(r) => r,
            Err(e) => {
                record.note = e.to_string();
                return record;
            }
        };
        let pick = match self.bound {
            Bound::Upper => residuals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)),
            Bound::Lower => residuals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)),
        };
        let (worst, residual) = pick.map(|(i, r)| (i, *r)).expect("at least one trial");
        record.residual = residual;

        let fit = if self.discretization == Discretization::FiniteDifference && self.bound == Bound::Upper {
            let hs = step_ladder(LADDER_COARSEST, LADDER_LEVELS);
            match hs.iter().map(|&h| self.trial(cfg, worst, h)).collect::<Result<Vec<f64>>>() {
                Ok(rs) => {
                    let excess: Vec<f64> = rs.iter().map(|r| (r - residual).abs()).collect();
                    record.note = format!(
                        "ladder residuals {}",
                        rs.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(" ")
                    );
                    let hi = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
                    let growing = rs.last() >= rs.first();
                    if hi - lo < MACHINE_FLOOR || (growing && hi < ROUNDOFF_MARGIN * self.tolerance) {
                        OrderFit { order: None, at_floor: true }
                    } else {
                        assess(&hs, &excess)
                    }
                }
                Err(e) => {
                    record.note = e.to_string();
                    return record;
                }
            }
        } else {
            OrderFit { order: None, at_floor: residual < MACHINE_FLOOR }
        };
        record.order = fit.order;
        record.at_floor = fit.at_floor;
        let within = match self.bound {
            Bound::Upper => residual < self.tolerance,
            Bound::Lower => residual > self.tolerance,
        };
        let converges = self.discretization != Discretization::FiniteDifference
            || self.bound == Bound::Lower
            || fit.acceptable(MIN_ORDER);
        record.status = if within && converges { Status::Pass } else { Status::Fail };
        if within && !converges {
            record.note = format!("observed order below {MIN_ORDER}; {}", record.note);
        }
        record
    }
}

/// `|a − b| / max(1, |a|, |b|)`.
pub(crate) fn gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

pub(crate) fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(label, node count)` of a configured domain.
pub(crate) fn label(cfg: &SuiteConfig, name: &'static str) -> (&'static str, usize) {
    let n = match name {
        "circle" => cfg.nodes,
        "torus" => cfg.torus_side() * cfg.torus_side(),
        _ => cfg.interval_nodes(),
    };
    (name, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { nodes: 32, trials: 3, fd_trials: 2, ..SuiteConfig::default() }
    }

    #[test]
    fn rejects_unknown_and_empty_suite_lists() {
        assert!(run_suites(&[], &small()).is_err());
        assert!(run_suites(&["nope".into()], &small()).is_err());
    }

    #[test]
    fn failing_finite_difference_check_reports_its_ladder() {
        let check = Check::new("t.fd", "test", ("circle", 8), 2, 1e-3, Discretization::FiniteDifference, |_, fd| {
            Ok(1e-6 + fd.step)
        });
        let rec = check.run("test", &small());
        assert_eq!(rec.status, Status::Fail);
        assert!(rec.order.is_some_and(|p| (p - 1.0).abs() < 0.05), "{rec:?}");
        assert!(rec.note.contains("order"));
    }

    #[test]
    fn roundoff_dominated_ladder_is_at_the_floor() {
        let check = Check::new("t.roundoff", "test", ("circle", 8), 2, 1e-6, Discretization::FiniteDifference, |_, fd| {
            Ok(1e-16 / fd.step)
        });
        let rec = check.run("test", &small());
        assert!(rec.at_floor && rec.status == Status::Pass, "{rec:?}");
        let large = Check::new("t.large", "test", ("circle", 8), 2, 1e-6, Discretization::FiniteDifference, |_, fd| {
            Ok(1e-11 / fd.step)
        });
        assert_eq!(large.run("test", &small()).status, Status::Fail);
    }

    #[test]
    fn errors_fail_the_record() {
        let check = Check::new("t.err", "test", ("circle", 8), 2, 1.0, Discretization::Exact, |_, _| {
            Err(Error::Invalid("boom".into()))
        });
        let rec = check.run("test", &small());
        assert_eq!(rec.status, Status::Fail);
        assert_eq!(rec.note, "invalid argument: boom");
    }

    #[test]
    fn lower_bound_checks_pass_above_the_threshold() {
        let check = Check::new("t.low", "test", ("circle", 8), 2, 0.5, Discretization::Exact, |_, _| Ok(1.0)).lower_bound();
        assert_eq!(check.run("test", &small()).status, Status::Pass);
    }
}
