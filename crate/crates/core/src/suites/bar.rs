//! Identities of the bar map `ω ↦ ω̄ = (ω·μ)^`.

use std::sync::Arc;

use crate::error::Result;
use crate::forms::Form;
use crate::mapping::{
    bar_direct, bar_map, field_m, gram_matrix, lie_flow_m, map_space_d, map_space_interior, numerical_rank,
    pull_by_source_diffeo, pull_by_target_map, MapTangent,
};
use crate::source::SourceDomain;

use super::data::{grid_shift, nonlinear_map, refs};
use super::{gap, label, Check, Discretization::*, SuiteConfig};

const M: usize = 3;

fn tangents(rng: &mut crate::random::TestRng, d: &SourceDomain, m: usize, n: usize) -> Result<Vec<MapTangent>> {
    (0..n).map(|_| rng.map_tangent(d, m)).collect()
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in ["circle", "torus"] {
        let dom = cfg.domain(name)?;
        let lb = label(cfg, name);
        let d = dom.clone();
        out.push(Check::new(format!("bar.two-route.{name}"), "bar map against direct quadrature", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let p = rng.index(M + 1);
            let omega = rng.form(M, p);
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, p)?;
            Ok(gap(bar_map(&omega, &d)?.eval_owned(&f, &ys)?, bar_direct(&omega).eval_owned(&f, &ys)?))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.derivation.{name}"), "exterior derivative commutes with the bar map", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let p = rng.index(M);
            let omega = rng.form(M, p);
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, p + 1)?;
            let lhs = map_space_d(&bar_map(&omega, &d)?, fd).eval_owned(&f, &ys)?;
            let rhs = bar_map(&omega.exterior_derivative(fd), &d)?.eval_owned(&f, &ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.target-naturality.{name}"), "bar map commutes with target pullbacks", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let p = rng.index(M + 1);
            let omega = rng.form(M, p);
            let eta = nonlinear_map(rng, 2, M);
            let f = rng.map_point(&d, 2)?;
            let ys = tangents(rng, &d, 2, p)?;
            let lhs = pull_by_target_map(&bar_map(&omega, &d)?, &eta).eval_owned(&f, &ys)?;
            let rhs = bar_map(&omega.pullback(&eta)?, &d)?.eval_owned(&f, &ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.interior.{name}"), "bar map commutes with interior products", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let p = 1 + rng.index(M);
            let omega = rng.form(M, p);
            let x = rng.vector_field(M);
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, p - 1)?;
            let lhs = map_space_interior(&bar_map(&omega, &d)?, &field_m(&x)).eval_owned(&f, &ys)?;
            let rhs = bar_map(&omega.interior(&x)?, &d)?.eval_owned(&f, &ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.lie.{name}"), "bar map commutes with Lie derivatives", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let p = rng.index(M + 1);
            let omega = rng.form(M, p);
            let x = rng.vector_field(M);
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, p)?;
            let lhs = lie_flow_m(&bar_map(&omega, &d)?, &x, fd).eval_owned(&f, &ys)?;
            let rhs = bar_map(&omega.lie_derivative(&x, fd)?, &d)?.eval_owned(&f, &ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.source-invariance.{name}"), "invariance under volume-preserving source maps", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let p = rng.index(M + 1);
            let omega = rng.form(M, p);
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, p)?;
            let cells: Vec<usize> = d.shape().iter().map(|&n| rng.index(n)).collect();
            let w = bar_map(&omega, &d)?;
            let lhs = pull_by_source_diffeo(&w, &grid_shift(&d, &cells)?).eval_owned(&f, &ys)?;
            Ok(gap(lhs, w.eval_owned(&f, &ys)?))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("bar.closed.{name}"), "bar of a closed 2-form is closed", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let omega = rng.form(M, 1).analytic_derivative().expect("coefficient form");
            let f = rng.map_point(&d, M)?;
            let ys = tangents(rng, &d, M, 3)?;
            Ok(map_space_d(&bar_map(&omega, &d)?, fd).eval(&f, &refs(&ys))?.abs())
        }));
    }

    let small = Arc::new(SourceDomain::circle(16)?);
    out.push(Check::new("bar.nondegenerate.circle", "bar of an area form has full rank", ("circle", 16), 5, 0.5, Exact, move |rng, _| {
        let f = rng.map_point(&small, 2)?;
        let g = gram_matrix(&bar_map(&Form::volume(2), &small)?, &f)?;
        Ok((numerical_rank(&g, 1e-10) as f64 - 2.0 * small.len() as f64).abs())
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn bar_calculus_passes_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 4, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("bar-calculus", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
