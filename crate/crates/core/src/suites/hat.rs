//! Identities of the hat pairing `(ω·α)^` on closed sources.

use crate::error::Result;
use crate::forms::{Form, ScalarFn, VectorField};
use crate::mapping::{
    field_m, field_s, hat_pairing, hat_pairing_fiber, lie_flow_m, lie_flow_s, map_space_d, map_space_interior,
    map_space_lie, pull_by_source_diffeo, pull_by_target_map, MapSpaceForm,
};
use crate::source::{SourceForm, SourceVectorField};

use super::data::{grid_shift, hat_case, nonlinear_map, refs, source_field};
use super::{gap, label, sign, Check, Discretization::*, SuiteConfig};

const M: usize = 3;

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in ["circle", "torus", "interval"] {
        let dom = cfg.domain(name)?;
        let lb = label(cfg, name);
        let d = dom.clone();
        out.push(Check::new(format!("hat.two-route.{name}"), "pointwise and fiber-integral routes agree", lb, cfg.trials, 1e-6, Exact, move |rng, _| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            let a = hat_pairing(&c.omega, &c.alpha, &d)?.eval_owned(&c.f, &c.ys)?;
            let b = hat_pairing_fiber(&c.omega, &c.alpha, &d)?.eval_owned(&c.f, &c.ys)?;
            Ok(gap(a, b))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.target-naturality.{name}"), "pullback by a target map", lb, cfg.trials.min(20), 1e-9, Exact, move |rng, _| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            let eta = nonlinear_map(rng, 2, M);
            let f = rng.map_point(&d, 2)?;
            let ys = c.ys.iter().map(|_| rng.map_tangent(&d, 2)).collect::<Result<Vec<_>>>()?;
            let lhs = pull_by_target_map(&hat_pairing(&c.omega, &c.alpha, &d)?, &eta).eval_owned(&f, &ys)?;
            let rhs = hat_pairing(&c.omega.pullback(&eta)?, &c.alpha, &d)?.eval_owned(&f, &ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.target-interior.{name}"), "interior product with a lifted target field", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let c = hat_case(rng, &d, M, 0, 1)?;
            if c.ys.is_empty() {
                return Ok(0.0);
            }
            let x = rng.vector_field(M);
            let lhs = map_space_interior(&hat_pairing(&c.omega, &c.alpha, &d)?, &field_m(&x)).eval_owned(&c.f, &c.ys[1..])?;
            let rhs = hat_pairing(&c.omega.interior(&x)?, &c.alpha, &d)?.eval_owned(&c.f, &c.ys[1..])?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.target-lie.{name}"), "Lie derivative along a lifted target field", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let c = hat_case(rng, &d, M, 0, 1)?;
            let x = rng.vector_field(M);
            let lhs = lie_flow_m(&hat_pairing(&c.omega, &c.alpha, &d)?, &x, fd).eval_owned(&c.f, &c.ys)?;
            let rhs = hat_pairing(&c.omega.lie_derivative(&x, fd)?, &c.alpha, &d)?.eval_owned(&c.f, &c.ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.source-interior.{name}"), "interior product with a source field", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            if c.ys.is_empty() {
                return Ok(0.0);
            }
            let z = SourceVectorField::Chart(VectorField::from_components(source_field(rng, &d)));
            let lhs = map_space_interior(&hat_pairing(&c.omega, &c.alpha, &d)?, &field_s(&z)).eval_owned(&c.f, &c.ys[1..])?;
            let rhs = if c.q == 0 {
                0.0
            } else {
                sign(c.p) * hat_pairing(&c.omega, &c.alpha.interior(&d, &z)?, &d)?.eval_owned(&c.f, &c.ys[1..])?
            };
            Ok(gap(lhs, rhs))
        }));
    }

    for name in ["circle", "torus"] {
        let dom = cfg.domain(name)?;
        let lb = label(cfg, name);
        let d = dom.clone();
        out.push(Check::new(format!("hat.derivation.{name}"), "exterior derivative of the hat pairing", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let c = hat_case(rng, &d, M, 1, 0)?;
            let lhs = map_space_d(&hat_pairing(&c.omega, &c.alpha, &d)?, fd).eval_owned(&c.f, &c.ys)?;
            let mut rhs = hat_pairing(&c.omega.exterior_derivative(fd), &c.alpha, &d)?.eval_owned(&c.f, &c.ys)?;
            if c.q < d.dim() {
                let da = c.alpha.exterior_derivative(&d, fd)?;
                rhs += sign(c.p) * hat_pairing(&c.omega, &da, &d)?.eval_owned(&c.f, &c.ys)?;
            }
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.exact-closed-vanishing.{name}"), "exact target form against a closed source form", lb, 20, 1e-10, Spectral, move |rng, _| {
            let k = d.dim();
            let p = if k == 1 { 1 } else { 1 + rng.index(2) };
            let q = k - p;
            let beta = rng.form(M, p - 1);
            let omega = beta.analytic_derivative().expect("coefficient form");
            let alpha = if q == 0 {
                SourceForm::constant(d.chart_dim(), rng.uniform(-1.0, 1.0))
            } else {
                let g = rng.source_fn(&d);
                let terms = (0..2)
                    .map(|j| (vec![j], g.partial(j).add(&ScalarFn::constant(2, rng.uniform(-1.0, 1.0)))))
                    .collect();
                SourceForm::Chart(Form::from_coefficients(2, 1, terms)?)
            };
            let f = rng.map_point(&d, M)?;
            Ok(hat_pairing(&omega, &alpha, &d)?.eval(&f, &[])?.abs())
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.source-naturality.{name}"), "pullback by a source diffeomorphism", lb, cfg.trials.min(20), 1e-10, Exact, move |rng, _| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            let cells: Vec<usize> = d.shape().iter().map(|&n| rng.index(n)).collect();
            let psi = grid_shift(&d, &cells)?;
            let lhs = pull_by_source_diffeo(&hat_pairing(&c.omega, &c.alpha, &d)?, &psi).eval_owned(&c.f, &c.ys)?;
            let rhs = hat_pairing(&c.omega, &c.alpha.pullback(&psi)?, &d)?.eval_owned(&c.f, &c.ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.source-lie.{name}"), "Lie derivative along a source field", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            let z = VectorField::from_components(source_field(rng, &d));
            let w = hat_pairing(&c.omega, &c.alpha, &d)?;
            let lhs = map_space_lie(&w, &field_s(&SourceVectorField::Chart(z.clone())), fd)?.eval_owned(&c.f, &c.ys)?;
            let rhs = hat_pairing(&c.omega, &c.alpha.lie_derivative(&z, fd)?, &d)?.eval_owned(&c.f, &c.ys)?;
            Ok(gap(lhs, rhs))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.cartan-vs-flow.{name}"), "Cartan formula against the flow of a source field", lb, cfg.fd_trials, 1e-5, FiniteDifference, move |rng, fd| {
            let c = hat_case(rng, &d, M, 0, 0)?;
            let z = VectorField::from_components(source_field(rng, &d));
            let w = hat_pairing(&c.omega, &c.alpha, &d)?;
            let cartan = map_space_lie(&w, &field_s(&SourceVectorField::Chart(z.clone())), fd)?.eval_owned(&c.f, &c.ys)?;
            let flow = lie_flow_s(&w, &z, fd).eval_owned(&c.f, &c.ys)?;
            Ok(gap(cartan, flow))
        }));
        let d = dom.clone();
        out.push(Check::new(format!("hat.dd.{name}"), "the exterior derivative squares to zero", lb, cfg.fd_trials, 1e-6, Exact, move |rng, fd| {
            let c = hat_case(rng, &d, M, 2, 0)?;
            let w: MapSpaceForm = hat_pairing(&c.omega, &c.alpha, &d)?;
            Ok(map_space_d(&map_space_d(&w, fd), fd).eval(&c.f, &refs(&c.ys))?.abs())
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn hat_calculus_passes_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 4, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("hat-calculus", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
