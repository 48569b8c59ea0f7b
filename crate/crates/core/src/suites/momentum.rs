//! Momentum maps on mapping spaces: lifted actions, `Diff_ham(M)` and
//! exact volume-preserving diffeomorphisms of the torus, together with the
//! right inverse of `d` that the last one needs.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forms::{Form, ScalarFn};
use crate::mapping::MapPoint;
use crate::mechanics::{momentum_diffex, momentum_residual_diffex, r4_system, HamiltonianSystem, LiftedGAction};
use crate::random::TestRng;
use crate::source::{gradient, projection_p, right_inverse_b, SourceDomain, EXACTNESS_THRESHOLD};

use super::{gap, label, Check, Discretization::*, SuiteConfig};

/// `ω₀ + dβ` on `R⁴` with the standard `ω₀` and a seeded 1-form `β`.
pub(crate) fn closed_r4_form(rng: &mut TestRng) -> Result<Form> {
    let exact = rng.form(4, 1).analytic_derivative().expect("coefficient form").scale(0.3);
    r4_system().omega().add(&exact)
}

/// Seeded zero-mean stream function sampled on the torus.
pub(crate) fn stream(rng: &mut TestRng, dom: &SourceDomain) -> Vec<f64> {
    let a = rng.periodic_fn(2, 3, 3);
    let vals: Vec<f64> = (0..dom.len()).map(|i| a.value(dom.node(i))).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    vals.into_iter().map(|v| v - mean).collect()
}

fn sample_points(rng: &mut TestRng, dim: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| rng.vector(dim, -2.0, 2.0)).collect()
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let circle = cfg.domain("circle")?;
    let torus = cfg.domain("torus")?;
    let (lc, lt) = (label(cfg, "circle"), label(cfg, "torus"));
    let few = cfg.trials.min(20);
    let mut out = Vec::new();

    out.push(Check::new("momentum.se2.target", "momentum of the special Euclidean action on the plane", lc, few, 1e-12, Exact, |rng, _| {
        let (sys, g) = (HamiltonianSystem::planar(), LiftedGAction::se2());
        let pts = sample_points(rng, 2, 8);
        Ok(g.momentum_residual(&sys, &pts).max(g.structure_residual(&pts)))
    }));
    let d = circle.clone();
    out.push(Check::new("momentum.se2.maps", "lifted momentum identity on loops in the plane", lc, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let (sys, g) = (HamiltonianSystem::planar(), LiftedGAction::se2());
        let f = rng.map_point(&d, 2)?;
        let y = rng.map_tangent(&d, 2)?;
        (0..g.len()).map(|a| g.momentum_residual_on_maps(&sys, a, &f, &y, fd)).try_fold(0.0, |acc, r| Ok(f64::max(acc, r?)))
    }));
    out.push(Check::new("momentum.diffham.target", "hamiltonian fields of the planar catalog", lc, few, 1e-10, Exact, |rng, _| {
        let sys = HamiltonianSystem::planar();
        let pts = sample_points(rng, 2, 8);
        Ok(sys.catalog().iter().map(|hf| sys.hamiltonian_residual(hf, &pts)).fold(0.0, f64::max))
    }));
    let d = circle.clone();
    out.push(Check::new("momentum.diffham.circle", "hamiltonian diffeomorphism momentum on loops", lc, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let sys = HamiltonianSystem::planar();
        let f = rng.map_point(&d, 2)?;
        let y = rng.map_tangent(&d, 2)?;
        sys.catalog().iter().map(|hf| sys.momentum_residual(hf, &f, &y, fd)).try_fold(0.0, |acc, r| Ok(f64::max(acc, r?)))
    }));
    let d = torus.clone();
    out.push(Check::new("momentum.diffham.torus", "hamiltonian diffeomorphism momentum on tori in R^4", lt, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let sys = r4_system();
        let f = rng.map_point(&d, 4)?;
        let y = rng.map_tangent(&d, 4)?;
        sys.catalog().iter().map(|hf| sys.momentum_residual(hf, &f, &y, fd)).try_fold(0.0, |acc, r| Ok(f64::max(acc, r?)))
    }));
    let d = circle.clone();
    out.push(Check::new("momentum.diffham.normalization", "unnormalized hamiltonians are rejected", lc, 1, 0.5, Exact, move |rng, _| {
        let sys = HamiltonianSystem::planar();
        let mut hf = sys.catalog()[0].clone();
        hf.h = hf.h.add(&ScalarFn::constant(2, 1.0));
        let f = rng.map_point(&d, 2)?;
        Ok(match sys.momentum(&hf, &f) {
            Err(Error::Precondition(_)) => 0.0,
            _ => 1.0,
        })
    }));
    let d = torus.clone();
    out.push(Check::new("momentum.diffex.torus", "exact volume-preserving momentum on tori in R^4", lt, cfg.fd_trials, 1e-6, FiniteDifference, move |rng, fd| {
        let omega = closed_r4_form(rng)?;
        let f = rng.map_point(&d, 4)?;
        let y = rng.map_tangent(&d, 4)?;
        let alpha = stream(rng, &d);
        momentum_residual_diffex(&omega, &f, &alpha, &y, fd)
    }));
    let d = torus.clone();
    out.push(Check::new("momentum.diffex.routes", "hat-pairing and direct routes to the momentum agree", lt, few, 1e-10, Exact, move |rng, _| {
        let omega = closed_r4_form(rng)?;
        let f = rng.map_point(&d, 4)?;
        let j = momentum_diffex(&omega, &f, &stream(rng, &d))?;
        Ok(gap(j.hat_route, j.direct_route))
    }));
    let d = torus.clone();
    out.push(Check::new("momentum.diffex.clifford", "momentum of the Clifford torus", lt, 1, 1e-10, Exact, move |_, _| {
        let f = MapPoint::from_fn(d.clone(), 4, |s| vec![s[0].cos(), s[0].sin(), s[1].cos(), s[1].sin()])?;
        let omega = Form::basis(4, &[0, 2]);
        let alpha: Vec<f64> = (0..d.len()).map(|i| d.node(i)[0].sin() * d.node(i)[1].sin()).collect();
        let j = momentum_diffex(&omega, &f, &alpha)?;
        Ok((j.hat_route - PI * PI).abs().max((j.direct_route - PI * PI).abs()))
    }));
    let d = torus.clone();
    out.push(Check::new("momentum.diffex.not-closed", "target forms that are not closed are rejected", lt, 1, 0.5, Exact, move |rng, _| {
        let omega = Form::from_coefficients(4, 2, vec![(vec![0, 1], ScalarFn::coordinate(4, 2))])?;
        let f = rng.map_point(&d, 4)?;
        Ok(match momentum_diffex(&omega, &f, &stream(rng, &d)) {
            Err(Error::NotExact { .. }) => 0.0,
            _ => 1.0,
        })
    }));

    let d: Arc<SourceDomain> = torus.clone();
    out.push(Check::new("right-inverse.round-trip", "d after the right inverse of d is the identity on exact forms", lt, 50, 1e-10, Spectral, move |rng, _| {
        let alpha = stream(rng, &d);
        let da = gradient(&d, &alpha)?;
        let again = gradient(&d, &right_inverse_b(&d, &da, EXACTNESS_THRESHOLD)?)?;
        let pairs = da.dx.iter().zip(&again.dx).chain(da.dy.iter().zip(&again.dy));
        Ok(pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }));
    let d = torus.clone();
    out.push(Check::new("right-inverse.projection-idempotent", "the complementary projection is idempotent", lt, 50, 1e-12, Spectral, move |rng, _| {
        let shift = rng.uniform(-1.0, 1.0);
        let alpha: Vec<f64> = stream(rng, &d).into_iter().map(|v| v + shift).collect();
        let once = projection_p(&d, &alpha)?;
        let twice = projection_p(&d, &once)?;
        Ok(once.iter().zip(&twice).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }));
    let d = torus.clone();
    out.push(Check::new("right-inverse.rejects-non-exact", "non-exact 1-forms are rejected", lt, 1, 0.5, Exact, move |_, _| {
        let beta = crate::source::OneForm { dx: vec![1.0; d.len()], dy: vec![0.0; d.len()] };
        Ok(match right_inverse_b(&d, &beta, EXACTNESS_THRESHOLD) {
            Err(Error::NotExact { .. }) => 0.0,
            _ => 1.0,
        })
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn momentum_suite_passes_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 3, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("momentum", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
