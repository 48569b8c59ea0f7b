//! Identities of the tilda map on oriented embedded loops in `R^3`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::{Form, SmoothMap};
use crate::grassmannian::{diffm_action_on_n, push_sections, tilda_eval, EmbeddedSubmanifold, EmbeddingGates, MarsdenWeinstein};
use crate::mapping::{
    generator_m, hat_map, hat_pairing_fiber, lie_flow_m, map_space_d, pullback_action, transport_tangent, MapPoint,
    MapTangent,
};
use crate::source::{SourceDomain, SourceForm};

use super::data::{embedded_loop, grid_shift, refs, variable_volume};
use super::{gap, Check, Discretization::*, SuiteConfig};

fn sections(rng: &mut crate::random::TestRng, d: &SourceDomain, n: usize) -> Result<Vec<MapTangent>> {
    (0..n).map(|_| rng.map_tangent(d, 3)).collect()
}

fn linear(rows: [f64; 9]) -> Result<SmoothMap> {
    SmoothMap::affine(DMatrix::from_row_slice(3, 3, &rows), nalgebra::DVector::zeros(3))
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let dom = Arc::new(SourceDomain::circle(cfg.nodes)?);
    let lb = ("circle", cfg.nodes);
    let few = cfg.trials.min(20);
    let mut out = Vec::new();

    let d = dom.clone();
    out.push(Check::new("tilda.mw.unit-circle", "Marsden-Weinstein form on the unit circle", lb, 1, 1e-8, Exact, move |_, _| {
        let f = MapPoint::from_fn(d.clone(), 3, |s| vec![s[0].cos(), s[0].sin(), 0.0])?;
        let n = EmbeddedSubmanifold::new(f, EmbeddingGates::default())?;
        let ez = MapTangent::from_fn(&d, 3, |_| vec![0.0, 0.0, 1.0])?;
        let radial = MapTangent::from_fn(&d, 3, |s| vec![s[0].cos(), s[0].sin(), 0.0])?;
        Ok((MarsdenWeinstein::new(&Form::volume(3))?.eval(&n, &ez, &radial)? - 2.0 * PI).abs())
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.mw.horizontality", "tangential directions are in the kernel", lb, few, 1e-8, Exact, move |rng, _| {
        let n = embedded_loop(rng, &d)?;
        let mw = MarsdenWeinstein::new(&variable_volume(rng))?;
        let ys = sections(rng, &d, 2)?;
        let z = rng.source_fn(&d);
        let along = MapTangent::new(3, (0..d.len()).flat_map(|i| n.rep().push_tangent(i, &[z.value(d.node(i))])).collect())?;
        let shifted = mw.eval(&n, &ys[0].add(&along)?, &ys[1])?;
        Ok(gap(shifted, mw.eval(&n, &ys[0], &ys[1])?))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.mw.closed", "Marsden-Weinstein form is closed", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let n = embedded_loop(rng, &d)?;
        let mw = MarsdenWeinstein::new(&variable_volume(rng))?;
        let ys = sections(rng, &d, 3)?;
        Ok(map_space_d(&mw.hat(&d)?, fd).eval(n.rep(), &refs(&ys))?.abs())
    }));
    let small = Arc::new(SourceDomain::circle(12)?);
    out.push(Check::new("tilda.mw.kernel-rank", "kernel of the hat representative is tangential", ("circle", 12), 5, 0.5, Exact, move |rng, _| {
        let n = embedded_loop(rng, &small)?;
        let g = MarsdenWeinstein::new(&Form::volume(3))?.gram(&n)?;
        Ok((crate::mapping::numerical_rank(&g, 1e-10) as f64 - 2.0 * small.len() as f64).abs())
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.orientation-reversal", "reversing orientation flips the sign", lb, few, 1e-10, Exact, move |rng, _| {
        let n = embedded_loop(rng, &d)?;
        let mw = MarsdenWeinstein::new(&variable_volume(rng))?;
        let ys = sections(rng, &d, 2)?;
        let (rev, carry) = n.reversed()?;
        let a = mw.eval(&n, &ys[0], &ys[1])?;
        let b = mw.eval(&rev, &carry(&ys[0]), &carry(&ys[1]))?;
        Ok((a + b).abs() / a.abs().max(1.0))
    }));
    for (name, rows) in [
        ("rotation", [0.6, -0.8, 0.0, 0.8, 0.6, 0.0, 0.0, 0.0, 1.0]),
        ("shear", [1.0, 0.7, 0.0, 0.0, 1.0, -0.4, 0.0, 0.0, 1.0]),
        ("scaling", [1.5, 0.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0, 1.2]),
    ] {
        let d = dom.clone();
        out.push(Check::new(format!("tilda.diffm.{name}"), "linear maps scale the volume form by their determinant", lb, few, 1e-10, Exact, move |rng, _| {
            let phi = linear(rows)?;
            let det = DMatrix::from_row_slice(3, 3, &rows).determinant();
            let n = embedded_loop(rng, &d)?;
            let mw = MarsdenWeinstein::new(&Form::volume(3))?;
            let ys = sections(rng, &d, 2)?;
            let moved = diffm_action_on_n(&phi, &n)?;
            let lhs = mw.eval(&moved, &push_sections(&phi, &n, &ys[0])?, &push_sections(&phi, &n, &ys[1])?)?;
            Ok(gap(lhs, det * mw.eval(&n, &ys[0], &ys[1])?))
        }));
    }
    let d = dom.clone();
    out.push(Check::new("tilda.interior", "interior product with a lifted field", lb, few, 1e-10, Exact, move |rng, _| {
        let n = embedded_loop(rng, &d)?;
        let p = 2 + rng.index(2);
        let omega = rng.form(3, p);
        let x = rng.vector_field(3);
        let ys = sections(rng, &d, p - 2)?;
        let mut with_x = vec![generator_m(&x, n.rep())?];
        with_x.extend(ys.iter().cloned());
        Ok(gap(tilda_eval(&omega, &n, &with_x)?, tilda_eval(&omega.interior(&x)?, &n, &ys)?))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.derivative", "exterior derivative commutes with the tilda map", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let n = embedded_loop(rng, &d)?;
        let omega = rng.form(3, 2);
        let ys = sections(rng, &d, 2)?;
        let lhs = map_space_d(&hat_map(&omega, &d)?, fd).eval_owned(n.rep(), &ys)?;
        Ok(gap(lhs, tilda_eval(&omega.exterior_derivative(fd), &n, &ys)?))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.lie", "Lie derivative commutes with the tilda map", lb, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let n = embedded_loop(rng, &d)?;
        let p = 2 + rng.index(2);
        let omega = rng.form(3, p);
        let x = rng.vector_field(3);
        let ys = sections(rng, &d, omega.degree() - 1)?;
        let lhs = lie_flow_m(&hat_map(&omega, &d)?, &x, fd).eval_owned(n.rep(), &ys)?;
        Ok(gap(lhs, tilda_eval(&omega.lie_derivative(&x, fd)?, &n, &ys)?))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.reparametrization", "independence of the representative", lb, few, 1e-10, Exact, move |rng, _| {
        let n = embedded_loop(rng, &d)?;
        let p = 2 + rng.index(2);
        let omega = rng.form(3, p);
        let ys = sections(rng, &d, omega.degree() - 1)?;
        let psi = grid_shift(&d, &[1 + rng.index(d.len() - 1)])?;
        let moved = EmbeddedSubmanifold::new(pullback_action(&psi, n.rep())?, n.gates())?;
        let carried = ys.iter().map(|y| transport_tangent(&psi, n.rep(), y)).collect::<Result<Vec<_>>>()?;
        Ok(gap(tilda_eval(&omega, &moved, &carried)?, tilda_eval(&omega, &n, &ys)?))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.fiber-route", "tilda map through fiber integration", lb, few, 1e-10, Exact, move |rng, _| {
        let n = embedded_loop(rng, &d)?;
        let p = 1 + rng.index(3);
        let omega = rng.form(3, p);
        let ys = sections(rng, &d, omega.degree() - 1)?;
        let fiber = hat_pairing_fiber(&omega, &SourceForm::constant(1, 1.0), &d)?.eval_owned(n.rep(), &ys)?;
        Ok(gap(tilda_eval(&omega, &n, &ys)?, fiber))
    }));
    let d = dom.clone();
    out.push(Check::new("tilda.embedding-gate", "non-embedded loops are rejected", lb, 1, 0.5, Exact, move |_, _| {
        let collapsed = MapPoint::from_fn(d.clone(), 3, |_| vec![0.0; 3])?;
        let double = MapPoint::from_fn(d.clone(), 3, |s| vec![(2.0 * s[0]).cos(), (2.0 * s[0]).sin(), 0.0])?;
        let rejected = [collapsed, double]
            .into_iter()
            .filter(|f| matches!(EmbeddedSubmanifold::new(f.clone(), EmbeddingGates::default()), Err(Error::NotEmbedding(_))))
            .count();
        Ok(2.0 - rejected as f64)
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn tilda_calculus_passes_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 4, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("tilda-calculus", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
