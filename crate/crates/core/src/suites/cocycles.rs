//! Non-equivariance cocycles of the momentum maps and their algebraic
//! identities.

use crate::error::Result;
use crate::forms::{Form, ScalarFn};
use crate::mechanics::{
    cocycle_diffex, cocycle_diffex_defining, lichnerowicz, r4_system, stream_field, HamiltonianSystem, LiftedGAction,
};
use crate::mechanics::diffex::{cocycle_factors, cocycle_spread, field_bracket, straight_homotopy};
use crate::source::SourceDomain;

use super::momentum::{closed_r4_form, stream};
use super::{gap, label, Check, Discretization::*, SuiteConfig};

fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| ((a + 1)..n).flat_map(move |b| ((b + 1)..n).map(move |c| (a, b, c))))
}

/// `σ` of the lifted action extended bilinearly from the generators.
fn lifted_sigma(g: &LiftedGAction, sys: &HamiltonianSystem, u: &[f64], v: &[f64]) -> f64 {
    let x0 = sys.base_point().to_vec();
    let mut total = 0.0;
    for (a, ua) in u.iter().enumerate() {
        for (b, vb) in v.iter().enumerate() {
            total += ua * vb * g.cocycle_at(sys, a, b, &x0);
        }
    }
    total
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let circle = cfg.domain("circle")?;
    let torus = cfg.domain("torus")?;
    let (lc, lt) = (label(cfg, "circle"), label(cfg, "torus"));
    let mut out = Vec::new();

    let d = circle.clone();
    out.push(Check::new("cocycle.diffham.routes", "hamiltonian cocycle formula against its definition", lc, 10, 1e-6, Exact, move |rng, _| {
        let sys = HamiltonianSystem::planar();
        let n = sys.catalog().len();
        let (a, b) = (rng.index(n), rng.index(n));
        let (x, y) = (&sys.catalog()[a].field, &sys.catalog()[b].field);
        let f = rng.map_point(&d, 2)?;
        Ok(gap(sys.cocycle_defining(x, y, &f)?, sys.cocycle(x, y)))
    }));
    let d = circle.clone();
    out.push(Check::new("cocycle.diffham.independence.circle", "hamiltonian cocycle does not depend on the loop", lc, 1, 1e-8, Exact, move |rng, _| {
        let sys = HamiltonianSystem::planar();
        let cat = sys.catalog();
        let mut worst = 0.0f64;
        for (a, b) in [(0, 1), (2, 3), (4, 5), (1, 5)] {
            let values = (0..10).map(|_| sys.cocycle_defining(&cat[a].field, &cat[b].field, &rng.map_point(&d, 2)?)).collect::<Result<Vec<_>>>()?;
            worst = worst.max(spread(&values));
        }
        Ok(worst)
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.diffham.independence.torus", "hamiltonian cocycle does not depend on the torus", lt, 1, 1e-8, Exact, move |rng, _| {
        let sys = r4_system();
        let cat = sys.catalog();
        let mut worst = 0.0f64;
        for (a, b) in [(0, 1), (1, 2), (2, 3)] {
            let values = (0..4).map(|_| sys.cocycle_defining(&cat[a].field, &cat[b].field, &rng.map_point(&d, 4)?)).collect::<Result<Vec<_>>>()?;
            worst = worst.max(spread(&values));
        }
        Ok(worst)
    }));
    out.push(Check::new("cocycle.diffham.antisymmetry", "hamiltonian cocycle is antisymmetric", lc, 1, 1e-14, Exact, |_, _| {
        let sys = HamiltonianSystem::planar();
        let cat = sys.catalog();
        let mut worst = 0.0f64;
        for a in cat {
            for b in cat {
                worst = worst.max((sys.cocycle(&a.field, &b.field) + sys.cocycle(&b.field, &a.field)).abs());
            }
        }
        Ok(worst)
    }));
    out.push(Check::new("cocycle.diffham.cyclic", "hamiltonian cocycle satisfies the cyclic identity", lc, 1, 1e-10, Exact, |_, _| {
        let sys = HamiltonianSystem::planar();
        let cat = sys.catalog();
        let br = HamiltonianSystem::bracket_op;
        let mut worst = 0.0f64;
        for (a, b, c) in triples(cat.len()) {
            let (x, y, z) = (&cat[a].field, &cat[b].field, &cat[c].field);
            let s = sys.cocycle(&br(x, y), z) + sys.cocycle(&br(y, z), x) + sys.cocycle(&br(z, x), y);
            worst = worst.max(s.abs());
        }
        Ok(worst)
    }));
    let d = circle.clone();
    out.push(Check::new("cocycle.se2.independence", "lifted cocycle equals its value on the target", lc, cfg.trials.min(20), 1e-12, Exact, move |rng, _| {
        let (sys, g) = (HamiltonianSystem::planar(), LiftedGAction::se2());
        let f = rng.map_point(&d, 2)?;
        let mut worst = 0.0f64;
        for a in 0..g.len() {
            for b in 0..g.len() {
                let on_maps = g.cocycle_on_maps(&sys, a, b, &f)?;
                worst = worst.max((on_maps - g.cocycle_at(&sys, a, b, sys.base_point())).abs());
            }
        }
        Ok(worst)
    }));
    out.push(Check::new("cocycle.se2.cyclic", "lifted cocycle satisfies the cyclic identity", lc, 1, 1e-12, Exact, |_, _| {
        let (sys, g) = (HamiltonianSystem::planar(), LiftedGAction::se2());
        let n = g.len();
        let mut worst = 0.0f64;
        for (a, b, c) in triples(n) {
            let s = lifted_sigma(&g, &sys, &g.structure[a][b], &unit(n, c))
                + lifted_sigma(&g, &sys, &g.structure[b][c], &unit(n, a))
                + lifted_sigma(&g, &sys, &g.structure[c][a], &unit(n, b));
            worst = worst.max(s.abs());
        }
        for a in 0..n {
            for b in 0..n {
                worst = worst.max((lifted_sigma(&g, &sys, &unit(n, a), &unit(n, b)) + lifted_sigma(&g, &sys, &unit(n, b), &unit(n, a))).abs());
            }
        }
        Ok(worst)
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.diffex.routes", "exact volume-preserving cocycle formula against its definition", lt, 10, 1e-6, Spectral, move |rng, _| {
        let omega = closed_r4_form(rng)?;
        let f = rng.map_point(&d, 4)?;
        let (a1, a2) = (stream(rng, &d), stream(rng, &d));
        Ok(gap(cocycle_diffex(&omega, &f, &a1, &a2)?, cocycle_diffex_defining(&omega, &f, &a1, &a2)?))
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.diffex.factorization", "cocycle is the mean pairing times the flux", lt, 10, 1e-10, Spectral, move |rng, _| {
        let omega = closed_r4_form(rng)?;
        let f = rng.map_point(&d, 4)?;
        let (a1, a2) = (stream(rng, &d), stream(rng, &d));
        let (mean, flux) = cocycle_factors(&omega, &f, &a1, &a2)?;
        Ok(gap(cocycle_diffex(&omega, &f, &a1, &a2)?, mean * flux))
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.diffex.homotopy", "cocycle is constant along a homotopy of maps", lt, 3, 1e-6, Spectral, move |rng, _| {
        let omega = closed_r4_form(rng)?;
        let path = straight_homotopy(&rng.map_point(&d, 4)?, &rng.map_point(&d, 4)?, 4)?;
        let (a1, a2) = (stream(rng, &d), stream(rng, &d));
        Ok(cocycle_spread(&omega, &path, &a1, &a2)?.1)
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.diffex.antisymmetry", "exact volume-preserving cocycle is antisymmetric", lt, 5, 1e-8, Spectral, move |rng, _| {
        let omega = closed_r4_form(rng)?;
        let f = rng.map_point(&d, 4)?;
        let (a1, a2) = (stream(rng, &d), stream(rng, &d));
        Ok((cocycle_diffex_defining(&omega, &f, &a1, &a2)? + cocycle_diffex_defining(&omega, &f, &a2, &a1)?).abs())
    }));

    let d = torus.clone();
    out.push(Check::new("cocycle.lichnerowicz.constant", "Lichnerowicz cocycle of a constant form", lt, 1, 1e-12, Exact, move |_, _| {
        let n = d.len();
        let ex: Vec<f64> = (0..n).flat_map(|_| [1.0, 0.0]).collect();
        let ey: Vec<f64> = (0..n).flat_map(|_| [0.0, 1.0]).collect();
        let v = lichnerowicz(&d, &Form::volume(2).scale(1.7), &ex, &ey, 1.0 / (4.0 * std::f64::consts::PI.powi(2)))?;
        Ok((v - 1.7).abs())
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.lichnerowicz.antisymmetry", "Lichnerowicz cocycle is antisymmetric", lt, 5, 1e-12, Exact, move |rng, _| {
        let eta = lichnerowicz_form(rng);
        let (x, y) = (stream_field(&d, &stream(rng, &d))?, stream_field(&d, &stream(rng, &d))?);
        Ok((lichnerowicz(&d, &eta, &x, &y, 1.0)? + lichnerowicz(&d, &eta, &y, &x, 1.0)?).abs())
    }));
    let d = torus.clone();
    out.push(Check::new("cocycle.lichnerowicz.cyclic", "Lichnerowicz cocycle satisfies the cyclic identity", lt, 5, 1e-8, Spectral, move |rng, _| {
        let eta = lichnerowicz_form(rng);
        let fields = (0..3).map(|_| stream_field(&d, &stream(rng, &d))).collect::<Result<Vec<_>>>()?;
        cyclic_lichnerowicz(&d, &eta, &fields)
    }));
    Ok(out)
}

fn lichnerowicz_form(rng: &mut crate::random::TestRng) -> Form {
    let coeff = ScalarFn::constant(2, 1.0).add(&rng.periodic_fn(2, 2, 2).scale(0.5));
    Form::from_coefficients(2, 2, vec![(vec![0, 1], coeff)]).expect("2-form on the plane")
}

/// Cyclic sum relative to the size of its largest term.
fn cyclic_lichnerowicz(d: &SourceDomain, eta: &Form, v: &[Vec<f64>]) -> Result<f64> {
    let sigma = |a: &[f64], b: &[f64]| lichnerowicz(d, eta, a, b, 1.0);
    let terms = [
        sigma(&field_bracket(d, &v[0], &v[1])?, &v[2])?,
        sigma(&field_bracket(d, &v[1], &v[2])?, &v[0])?,
        sigma(&field_bracket(d, &v[2], &v[0])?, &v[1])?,
    ];
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::Status;

    #[test]
    fn cocycle_suite_passes_on_a_small_configuration() {
        let cfg = SuiteConfig { nodes: 64, trials: 3, fd_trials: 2, ..SuiteConfig::default() };
        for check in checks(&cfg).unwrap() {
            let rec = check.run("cocycles", &cfg);
            assert_eq!(rec.status, Status::Pass, "{rec:?}");
        }
    }
}
