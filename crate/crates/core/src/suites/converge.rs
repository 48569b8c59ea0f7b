//! Residuals of one identity under joint refinement of the source mesh and
//! the finite-difference step.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convergence::{assess, OrderFit, MIN_ORDER};
use crate::error::{Error, Result};
use crate::forms::Fd;
use crate::mapping::{hat_pairing, hat_pairing_fiber};
use crate::random::TestRng;
use crate::source::SourceDomain;

use super::boundary::derivation_terms;
use super::data::hat_case;
use super::gap;

pub const CONVERGENCE_IDENTITIES: [&str; 3] = ["derivation", "boundary", "two-route"];

/// Step at `n` nodes: `STEP_SCALE / n`.
pub const STEP_SCALE: f64 = 0.32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub step: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub identity: String,
    pub domain: String,
    pub seed: u64,
    pub rows: Vec<ConvergenceRow>,
    /// Absent for a single level.
    pub fit: Option<OrderFit>,
    pub min_order: f64,
}

impl ConvergenceStudy {
    pub fn acceptable(&self) -> bool {
        self.fit.as_ref().is_some_and(|f| f.acceptable(MIN_ORDER))
    }
}

fn level(identity: &str, n: usize, seed: u64) -> Result<(String, f64, f64)> {
    let step = STEP_SCALE / n as f64;
    let fd = Fd::new(step);
    let mut rng = TestRng::trial(seed, &format!("converge/{identity}"), 0);
    match identity {
        "derivation" | "two-route" => {
            let dom = Arc::new(SourceDomain::circle(n)?);
            let c = hat_case(&mut rng, &dom, 3, usize::from(identity == "derivation"), 0)?;
            let residual = if identity == "derivation" {
                let (lhs, bulk, edge) = derivation_terms(&c.omega, &c.alpha, &dom, &c.f, &c.ys, fd)?;
                gap(lhs, bulk + edge)
            } else {
                let a = hat_pairing(&c.omega, &c.alpha, &dom)?.eval_owned(&c.f, &c.ys)?;
                gap(a, hat_pairing_fiber(&c.omega, &c.alpha, &dom)?.eval_owned(&c.f, &c.ys)?)
            };
            Ok(("circle".into(), step, residual))
        }
        "boundary" => {
            let dom = Arc::new(SourceDomain::interval(2 * n + 1)?);
            let c = hat_case(&mut rng, &dom, 3, 1, 0)?;
            let (lhs, bulk, edge) = derivation_terms(&c.omega, &c.alpha, &dom, &c.f, &c.ys, fd)?;
            Ok(("interval".into(), step, gap(lhs, bulk + edge)))
        }
        other => Err(Error::Invalid(format!(
            "unknown identity {other}; known identities: {}",
            CONVERGENCE_IDENTITIES.join(", ")
        ))),
    }
}

/// Residual of `identity` at each node count, with the fitted order in the
/// step when more than one level is given.
pub fn convergence_study(identity: &str, levels: &[usize], seed: u64) -> Result<ConvergenceStudy> {
    if levels.is_empty() {
        return Err(Error::Invalid("at least one refinement level is required".into()));
    }
    if let Some(&n) = levels.iter().find(|&&n| n < 8) {
        return Err(Error::Invalid(format!("node counts must be at least 8, got {n}")));
    }
    let mut rows = Vec::new();
    let mut domain = String::new();
    for &n in levels {
        let (d, step, residual) = level(identity, n, seed)?;
        domain = d;
        rows.push(ConvergenceRow { nodes: n, step, residual });
    }
    let fit = (rows.len() > 1).then(|| {
        let hs: Vec<f64> = rows.iter().map(|r| r.step).collect();
        let rs: Vec<f64> = rows.iter().map(|r| r.residual).collect();
        assess(&hs, &rs)
    });
    Ok(ConvergenceStudy { identity: identity.into(), domain, seed, rows, fit, min_order: MIN_ORDER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_converges_at_second_order() {
        let s = convergence_study("derivation", &[32, 64, 128, 256], 3).unwrap();
        let fit = s.fit.clone().unwrap();
        assert!(s.acceptable(), "{s:?}");
        assert!(fit.at_floor || fit.order.unwrap() < 2.5, "{s:?}");
    }

    #[test]
    fn single_level_has_no_fit() {
        let s = convergence_study("two-route", &[32], 3).unwrap();
        assert!(s.fit.is_none());
        assert!(!s.acceptable());
    }

    #[test]
    fn unknown_identity_is_an_error() {
        assert!(convergence_study("nope", &[32], 3).is_err());
    }
}
