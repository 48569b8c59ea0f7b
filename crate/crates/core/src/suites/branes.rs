//! Closedness of the twisted form `Ĥ − ∂*B̂^∂` on maps of the interval with
//! endpoints on a brane.

use std::sync::Arc;

use crate::error::Result;
use crate::forms::Fd;
use crate::mapping::{MapPoint, MapTangent};
use crate::mechanics::branes::{constrain_map, constrain_tangent};
use crate::mechanics::{brane_catalog, brane_twist_check, BraneCase, BraneGates, BraneOutcome};
use crate::random::TestRng;
use crate::source::SourceDomain;

use super::{Bound, Check, Discretization::*, Status, SuiteConfig, TestRecord};

const TOLERANCE: f64 = 1e-5;
const MAGNETIC_FLOOR: f64 = 1e-3;

fn data(case: &BraneCase, dom: &Arc<SourceDomain>, rng: &mut TestRng) -> Result<(MapPoint, Vec<MapTangent>)> {
    let m = case.h.dim();
    let f = constrain_map(case, &rng.map_point(dom, m)?)?;
    let ys = (0..case.h.degree())
        .map(|_| constrain_tangent(case, &f, &rng.map_tangent(dom, m)?))
        .collect::<Result<_>>()?;
    Ok((f, ys))
}

fn outcome(case: &BraneCase, dom: &Arc<SourceDomain>, rng: &mut TestRng, fd: Fd, seed: u64) -> Result<BraneOutcome> {
    let (f, ys) = data(case, dom, rng)?;
    brane_twist_check(case, &f, &ys, fd, BraneGates::default(), seed)
}

pub(crate) fn records(cfg: &SuiteConfig) -> Result<Vec<TestRecord>> {
    let dom = cfg.domain("interval")?;
    let lb = ("interval", cfg.interval_nodes());
    let seed = cfg.seed;
    let mut checks = Vec::new();
    let catalog = brane_catalog();
    for case in catalog.iter().filter(|c| c.name != "inconsistent").cloned() {
        let d = dom.clone();
        let id = format!("branes.{}.closed", case.name);
        let c = case.clone();
        checks.push(Check::new(id, "twisted form is closed on maps with endpoints on the brane", lb, cfg.fd_trials, TOLERANCE, FiniteDifference, move |rng, fd| {
            match outcome(&c, &d, rng, fd, seed)? {
                BraneOutcome::Checked { residual, .. } => Ok(residual),
                other => Err(crate::error::Error::Precondition(format!("{other:?}"))),
            }
        }));
    }
    let tilted = catalog.iter().find(|c| c.name == "tilted-hyperplane").cloned().expect("cataloged");
    let d = dom.clone();
    checks.push(Check::new("branes.tilted-hyperplane.magnetic-term-needed", "the untwisted form is not closed", lb, 3, MAGNETIC_FLOOR, Exact, move |rng, fd| {
        match outcome(&tilted, &d, rng, fd, seed)? {
            BraneOutcome::Checked { untwisted, .. } => Ok(untwisted),
            _ => Ok(0.0),
        }
    }).lower_bound());
    let bad = catalog.iter().find(|c| c.name == "inconsistent").cloned().expect("cataloged");
    let d = dom.clone();
    checks.push(Check::new("branes.inconsistent.rejected", "pullback of H that is not dB is rejected", lb, 1, BraneGates::default().consistency, Exact, move |rng, fd| {
        match outcome(&bad, &d, rng, fd, seed)? {
            BraneOutcome::Rejected { consistency } => Ok(consistency),
            _ => Ok(0.0),
        }
    }).lower_bound());

    let mut out: Vec<TestRecord> = checks.into_iter().map(|c| c.run("branes", cfg)).collect();
    out.push(tangency_record(cfg, &dom)?);
    Ok(out)
}

/// A tangent leaving the brane at an endpoint: the check does not apply.
fn tangency_record(cfg: &SuiteConfig, dom: &Arc<SourceDomain>) -> Result<TestRecord> {
    let case = brane_catalog().into_iter().find(|c| c.name == "exact-plane").expect("cataloged");
    let id = "branes.exact-plane.normal-tangent".to_string();
    let mut rng = TestRng::trial(cfg.seed, &id, 0);
    let (f, mut ys) = data(&case, dom, &mut rng)?;
    ys[0] = MapTangent::from_fn(dom, 3, |_| vec![0.0, 0.0, 1.0])?;
    let normal = case.brane.normal_component(ys[0].at(0));
    let result = brane_twist_check(&case, &f, &ys, Fd::new(cfg.fd_step), BraneGates::default(), cfg.seed)?;
    let (status, note) = match result {
        BraneOutcome::Inapplicable { reason } => (Status::Inapplicable, reason),
        other => (Status::Fail, format!("expected an inapplicable outcome, got {other:?}")),
    };
    Ok(TestRecord {
        id,
        anchor: "tangents must stay tangent to the brane at the endpoints".into(),
        suite: "branes".into(),
        domain: "interval".into(),
        nodes: cfg.interval_nodes(),
        seed: cfg.seed,
        trials: 1,
        residual: normal,
        tolerance: BraneGates::default().tangency,
        bound: Bound::Upper,
        discretization: Exact,
        order: None,
        at_floor: false,
        status,
        note,
    })
}
