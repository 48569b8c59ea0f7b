//! Calculus rules for fiber integration over `S` of forms on `S × R^m`.

use std::sync::Arc;

use crate::error::Result;
use crate::forms::{fiber_integrate_form, Form, ScalarFn, SmoothMap};
use crate::random::TestRng;
use crate::source::SourceDomain;

use super::data::{field_parts, fiber_form, nonlinear_map, product_field};
use super::{gap, label, sign, Check, Discretization::*, SuiteConfig};

const M: usize = 3;

fn eval_random(rng: &mut TestRng, w: &Form) -> (Vec<f64>, Vec<Vec<f64>>) {
    let x = rng.vector(w.dim(), -1.0, 1.0);
    let vs = (0..w.degree()).map(|_| rng.vector(w.dim(), -1.0, 1.0)).collect();
    (x, vs)
}

/// `s + 0.3 sin(...)` shears of the periodic chart, orientation preserving.
fn periodic_diffeo(dom: &SourceDomain, m: usize) -> SmoothMap {
    let c = dom.chart_dim();
    let total = c + m;
    let comps = (0..total)
        .map(|i| {
            let id = ScalarFn::coordinate(total, i);
            if i < c {
                let mut k = vec![0.0; total];
                k[(i + 1) % c] = 1.0;
                id.add(&ScalarFn::wave(0.3, &k, 0.4))
            } else {
                id
            }
        })
        .collect();
    SmoothMap::from_components(comps)
}

fn degree(rng: &mut TestRng, k: usize, min_extra: usize) -> usize {
    k + min_extra + rng.index(3 - min_extra)
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in ["circle", "torus", "interval"] {
        let dom = cfg.domain(name)?;
        let lb = label(cfg, name);
        let (c, k) = (dom.chart_dim(), dom.dim());
        let d = dom.clone();
        out.push(Check::new(format!("fiber.target-pullback.{name}"), "fiber integration commutes with target pullbacks", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let n = degree(rng, k, 0);
            let w = fiber_form(rng, c, M, n);
            let f = nonlinear_map(rng, 2, M);
            let lhs = fiber_integrate_form(&w, d.clone())?.pullback(&f)?;
            let rhs = fiber_integrate_form(&w.pullback(&f.product_with_identity(c))?, d.clone())?;
            let (x, vs) = eval_random(rng, &lhs);
            Ok(gap(lhs.eval_vecs(&x, &vs), rhs.eval_vecs(&x, &vs)))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("fiber.target-lie.{name}"), "fiber integration commutes with target Lie derivatives", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let n = degree(rng, k, 0);
            let w = fiber_form(rng, c, M, n);
            let parts = field_parts(rng, M);
            let x_field = product_field(&parts, M, 0);
            let lifted = product_field(&parts, c + M, c);
            let lhs = fiber_integrate_form(&w, d.clone())?.lie_derivative(&x_field, fd)?;
            let rhs = fiber_integrate_form(&w.lie_derivative(&lifted, fd)?, d.clone())?;
            let (x, vs) = eval_random(rng, &lhs);
            Ok(gap(lhs.eval_vecs(&x, &vs), rhs.eval_vecs(&x, &vs)))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("fiber.interior.{name}"), "fiber integration commutes with target interior products", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let n = degree(rng, k, 1);
            let w = fiber_form(rng, c, M, n);
            let parts = field_parts(rng, M);
            let lhs = fiber_integrate_form(&w, d.clone())?.interior(&product_field(&parts, M, 0))?;
            let rhs = fiber_integrate_form(&w.interior(&product_field(&parts, c + M, c))?, d.clone())?;
            let (x, vs) = eval_random(rng, &lhs);
            Ok(gap(lhs.eval_vecs(&x, &vs), rhs.eval_vecs(&x, &vs)))
        }));
        let d = dom.clone();
        let boundary = dom.boundary();
        out.push(Check::new(format!("fiber.stokes.{name}"), "exterior derivative of a fiber integral with boundary term", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let n = degree(rng, k, 0);
            let beta = fiber_form(rng, c, M, n);
            let lhs = fiber_integrate_form(&beta, d.clone())?.exterior_derivative(fd);
            let inner = fiber_integrate_form(&beta.exterior_derivative(fd), d.clone())?;
            let (x, vs) = eval_random(rng, &lhs);
            let mut rhs = inner.eval_vecs(&x, &vs);
            if let Some(b) = &boundary {
                rhs += sign(n - k) * fiber_integrate_form(&beta, b.domain.clone())?.eval_vecs(&x, &vs);
            }
            Ok(gap(lhs.eval_vecs(&x, &vs), rhs))
        }));
    }
    let dom = cfg.domain("interval")?;
    let boundary = dom.boundary().expect("the interval has a boundary");
    out.push(Check::new("fiber.stokes-sign.interval", "the opposite boundary sign breaks the identity", label(cfg, "interval"), 5, 1e-3, Exact, move |rng, fd| {
        let n = degree(rng, 1, 0);
        let beta = fiber_form(rng, 1, M, n);
        let lhs = fiber_integrate_form(&beta, dom.clone())?.exterior_derivative(fd);
        let inner = fiber_integrate_form(&beta.exterior_derivative(fd), dom.clone())?;
        let (x, vs) = eval_random(rng, &lhs);
        let wrong = inner.eval_vecs(&x, &vs) - sign(n - 1) * fiber_integrate_form(&beta, boundary.domain.clone())?.eval_vecs(&x, &vs);
        Ok(gap(lhs.eval_vecs(&x, &vs), wrong))
    }).lower_bound());
    for name in ["circle", "torus"] {
        let dom = cfg.domain(name)?;
        let lb = label(cfg, name);
        let (c, k) = (dom.chart_dim(), dom.dim());
        let d = dom.clone();
        out.push(Check::new(format!("fiber.source-invariance.{name}"), "invariance under orientation-preserving source maps", lb, cfg.trials.min(20), 1e-10, Spectral, move |rng, _| {
            let n = degree(rng, k, 0);
            let w = fiber_form(rng, c, M, n);
            let lhs = fiber_integrate_form(&w.pullback(&periodic_diffeo(&d, M))?, d.clone())?;
            let rhs = fiber_integrate_form(&w, d.clone())?;
            let (x, vs) = eval_random(rng, &lhs);
            Ok(gap(lhs.eval_vecs(&x, &vs), rhs.eval_vecs(&x, &vs)))
        }));
        let d: Arc<SourceDomain> = dom.clone();
        out.push(Check::new(format!("fiber.source-lie.{name}"), "fiber integral of a source Lie derivative vanishes", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let n = degree(rng, k, 0);
            let w = fiber_form(rng, c, M, n);
            let parts: Vec<ScalarFn> = (0..c).map(|_| rng.periodic_fn(c, 2, 2).embed(c + M, 0)).collect();
            let z = crate::forms::VectorField::from_components(
                parts.into_iter().chain((0..M).map(|_| ScalarFn::zero(c + M))).collect(),
            );
            let v = fiber_integrate_form(&w.lie_derivative(&z, fd)?, d.clone())?;
            let (x, vs) = eval_random(rng, &v);
            Ok(v.eval_vecs(&x, &vs).abs())
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn fiber_rules_pass_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 4, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("fiber-rules", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
