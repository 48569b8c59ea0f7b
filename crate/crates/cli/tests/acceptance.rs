//! Acceptance criteria for the verification harness. Runs as a plain binary
//! and prints one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use mapcalc_core::suites::{run_suites, Bound, Discretization, Status, SuiteConfig, TestRecord, VerificationReport};

const TWO_ROUTE_TOL: f64 = 1e-6;
const TWO_ROUTE_CASES: usize = 100;
const TWO_ROUTE_BUDGET: Duration = Duration::from_secs(60);
const MAX_NODES: usize = 256;
const HAT_TOL: f64 = 1e-6;
const MIN_ORDER: f64 = 1.9;
const BOUNDARY_TOL: f64 = 1e-6;
const WITNESS_MIN: f64 = 0.5;
const FIBER_TOL: f64 = 1e-6;
const VANISHING_TOL: f64 = 1e-10;
const VANISHING_CASES: usize = 20;
const MW_VALUE_TOL: f64 = 1e-8;
const MW_NODES: usize = 128;
const HORIZONTAL_TOL: f64 = 1e-8;
const MW_CLOSED_TOL: f64 = 1e-6;
const MOMENTUM_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL: f64 = 1e-10;
const IDEMPOTENT_TOL: f64 = 1e-12;
const RIGHT_INVERSE_CASES: usize = 50;
const BRANE_TOL: f64 = 1e-5;

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(names: &[&str]) -> (VerificationReport, Duration) {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let start = Instant::now();
    let report = run_suites(&names, &SuiteConfig::default()).expect("suites run");
    (report, start.elapsed())
}

fn select<'a>(report: &'a VerificationReport, prefix: &str) -> Vec<&'a TestRecord> {
    report.records.iter().filter(|r| r.id.starts_with(prefix)).collect()
}

fn one<'a>(report: &'a VerificationReport, id: &str) -> &'a TestRecord {
    report.records.iter().find(|r| r.id == id).unwrap_or_else(|| panic!("missing record {id}"))
}

/// Every record present, passing, and below `tol`; returns the worst residual.
fn all_below(records: &[&TestRecord], tol: f64) -> Result<f64, String> {
    if records.is_empty() {
        return Err("no records".into());
    }
    let mut worst = 0.0f64;
    for r in records {
        if r.status != Status::Pass || r.residual >= tol {
            return Err(format!("{} residual {:.3e} status {:?}", r.id, r.residual, r.status));
        }
        worst = worst.max(r.residual);
    }
    Ok(worst)
}

/// Nodes along each axis of the record's source domain.
fn per_axis(r: &TestRecord) -> usize {
    if r.domain == "torus" {
        (r.nodes as f64).sqrt().round() as usize
    } else {
        r.nodes
    }
}

fn outcome(result: Result<String, String>) -> Outcome {
    match result {
        Ok(detail) => Outcome { passed: true, detail },
        Err(detail) => Outcome { passed: false, detail },
    }
}

fn two_route(hat: &VerificationReport, elapsed: Duration) -> Outcome {
    outcome((|| {
        let recs = select(hat, "hat.two-route.");
        if recs.len() != 3 {
            return Err(format!("expected three domains, found {}", recs.len()));
        }
        if let Some(r) = recs.iter().find(|r| r.trials < TWO_ROUTE_CASES || per_axis(r) > MAX_NODES) {
            return Err(format!("{} ran {} cases at N = {}", r.id, r.trials, per_axis(r)));
        }
        let worst = all_below(&recs, TWO_ROUTE_TOL)?;
        if elapsed > TWO_ROUTE_BUDGET {
            return Err(format!("took {elapsed:?}"));
        }
        Ok(format!("worst gap {worst:.2e} over {} cases per domain in {:.1}s", recs[0].trials, elapsed.as_secs_f64()))
    })())
}

fn hat_suite(hat: &VerificationReport) -> Outcome {
    outcome((|| {
        let recs: Vec<_> = hat.records.iter().filter(|r| !r.id.starts_with("hat.two-route.")).collect();
        let worst = all_below(&recs, HAT_TOL)?;
        let fd: Vec<_> = recs.iter().filter(|r| r.discretization == Discretization::FiniteDifference).collect();
        for r in &fd {
            if !r.at_floor && !r.order.is_some_and(|p| p >= MIN_ORDER) {
                return Err(format!("{} order {:?}", r.id, r.order));
            }
        }
        let floor = fd.iter().filter(|r| r.at_floor).count();
        Ok(format!("{} identities, worst {worst:.2e}; {} fitted at order >= {MIN_ORDER}, {floor} at machine floor", recs.len(), fd.len() - floor))
    })())
}

fn boundary(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let with_term = all_below(&[one(report, "boundary.derivation.interval")], BOUNDARY_TOL)?;
        let witness = one(report, "boundary.witness.interval");
        if witness.bound != Bound::Lower || witness.residual < WITNESS_MIN {
            return Err(format!("dropping the boundary term leaves residual {:.3e}", witness.residual));
        }
        Ok(format!("with term {with_term:.2e}; without it {:.3}", witness.residual))
    })())
}

fn fiber_rules(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let recs: Vec<_> = select(report, "fiber.").into_iter().filter(|r| r.bound == Bound::Upper).collect();
        for rule in ["target-pullback", "target-lie", "interior", "stokes", "source-invariance", "source-lie"] {
            if !recs.iter().any(|r| r.id.starts_with(&format!("fiber.{rule}."))) {
                return Err(format!("rule {rule} not exercised"));
            }
        }
        let worst = all_below(&recs, FIBER_TOL)?;
        let wrong = one(report, "fiber.stokes-sign.interval");
        if wrong.status != Status::Pass {
            return Err(format!("the opposite boundary sign also satisfies the rule ({:.3e})", wrong.residual));
        }
        Ok(format!("{} checks, worst {worst:.2e}; opposite sign gives {:.2e}", recs.len(), wrong.residual))
    })())
}

fn vanishing(hat: &VerificationReport) -> Outcome {
    outcome((|| {
        let recs = select(hat, "hat.exact-closed-vanishing.");
        if let Some(r) = recs.iter().find(|r| r.trials < VANISHING_CASES) {
            return Err(format!("{} ran {} cases", r.id, r.trials));
        }
        let worst = all_below(&recs, VANISHING_TOL)?;
        Ok(format!("worst {worst:.2e} on {} domains", recs.len()))
    })())
}

fn marsden_weinstein(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let value = one(report, "tilda.mw.unit-circle");
        if value.nodes != MW_NODES {
            return Err(format!("evaluated at N = {}", value.nodes));
        }
        let v = all_below(&[value], MW_VALUE_TOL)?;
        let h = all_below(&[one(report, "tilda.mw.horizontality")], HORIZONTAL_TOL)?;
        let c = all_below(&[one(report, "tilda.mw.closed")], MW_CLOSED_TOL)?;
        Ok(format!("|value - 2pi| {v:.2e}, horizontality {h:.2e}, closedness {c:.2e}"))
    })())
}

fn momentum(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let mut recs = Vec::new();
        for prefix in ["momentum.se2.", "momentum.diffham.", "momentum.diffex.", "cocycle."] {
            let group = select(report, prefix);
            if group.is_empty() {
                return Err(format!("no {prefix} records"));
            }
            recs.extend(group);
        }
        let worst = all_below(&recs, MOMENTUM_TOL)?;
        Ok(format!("{} momentum and cocycle checks, worst {worst:.2e}", recs.len()))
    })())
}

fn right_inverse(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let trip = one(report, "right-inverse.round-trip");
        let idem = one(report, "right-inverse.projection-idempotent");
        if trip.trials < RIGHT_INVERSE_CASES || idem.trials < RIGHT_INVERSE_CASES {
            return Err("fewer than fifty stream functions".into());
        }
        let a = all_below(&[trip], ROUND_TRIP_TOL)?;
        let b = all_below(&[idem], IDEMPOTENT_TOL)?;
        Ok(format!("round trip {a:.2e}, idempotency {b:.2e}"))
    })())
}

fn branes(report: &VerificationReport) -> Outcome {
    outcome((|| {
        let closed: Vec<_> = select(report, "branes.").into_iter().filter(|r| r.id.ends_with(".closed")).collect();
        let worst = all_below(&closed, BRANE_TOL)?;
        let rejected = one(report, "branes.inconsistent.rejected");
        if rejected.status != Status::Pass {
            return Err("the inconsistent pair was not rejected".into());
        }
        Ok(format!("{} cataloged cases, worst {worst:.2e}; inconsistent pair rejected", closed.len()))
    })())
}

fn determinism() -> Outcome {
    outcome((|| {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let config = dir.path().join("config.json");
        std::fs::write(&config, r#"{"seed": 1729, "nodes": 128, "suites": ["hat-calculus", "fiber-rules", "boundary", "momentum", "cocycles", "branes"]}"#)
            .map_err(|e| e.to_string())?;
        let mut reports = Vec::new();
        for i in 0..2 {
            let out = dir.path().join(format!("report-{i}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_mapcalc"))
                .arg("verify")
                .arg("--config")
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if status.status.code() != Some(0) {
                return Err(format!("verify exited with {:?}", status.status.code()));
            }
            reports.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        if reports[0] != reports[1] {
            return Err("reports differ".into());
        }
        Ok(format!("two runs produced identical {}-byte reports", reports[0].len()))
    })())
}

fn main() {
    let (hat, hat_elapsed) = run(&["hat-calculus"]);
    let (rest, _) = run(&["fiber-rules", "boundary", "tilda-calculus", "momentum", "cocycles", "branes"]);
    let results = [
        ("two-route hat pairing", two_route(&hat, hat_elapsed)),
        ("hat-calculus suite", hat_suite(&hat)),
        ("boundary formula on the interval", boundary(&rest)),
        ("fiber-integration rules", fiber_rules(&rest)),
        ("exact against closed vanishing", vanishing(&hat)),
        ("Marsden-Weinstein value", marsden_weinstein(&rest)),
        ("momentum maps and cocycles", momentum(&rest)),
        ("right inverse of d on the torus", right_inverse(&rest)),
        ("brane twist", branes(&rest)),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("{} criterion {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
