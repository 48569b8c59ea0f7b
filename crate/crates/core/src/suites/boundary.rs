//! The derivation identity on the interval, where the boundary contributes.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::forms::{Fd, Form, ScalarFn, SmoothMap};
use crate::mapping::{
    hat_pairing, map_space_d, pull_by_restriction, pushforward_action, restrict_boundary, MapPoint, MapSpaceForm,
    MapTangent,
};
use crate::source::{SourceDomain, SourceForm};

use super::data::hat_case;
use super::{gap, label, sign, Check, Discretization::*, SuiteConfig};

const M: usize = 3;

/// `(dŴ, (dω·α)^ + (−1)^p (ω·dα)^, (−1)^{p+q−k} r_∂*(ω·α|_∂)^)` at `(f; Y…)`.
pub(crate) fn derivation_terms(
    omega: &Form,
    alpha: &SourceForm,
    dom: &SourceDomain,
    f: &MapPoint,
    ys: &[MapTangent],
    fd: Fd,
) -> Result<(f64, f64, f64)> {
    let (p, q, k) = (omega.degree(), alpha.degree(), dom.dim());
    let lhs = map_space_d(&hat_pairing(omega, alpha, dom)?, fd).eval_owned(f, ys)?;
    let mut bulk = hat_pairing(&omega.exterior_derivative(fd), alpha, dom)?.eval_owned(f, ys)?;
    if q < k {
        bulk += sign(p) * hat_pairing(omega, &alpha.exterior_derivative(dom, fd)?, dom)?.eval_owned(f, ys)?;
    }
    let mut edge = 0.0;
    if let Some(b) = dom.boundary() {
        if let Some(restricted) = alpha.restrict_to_boundary(&b.node_map) {
            let w: MapSpaceForm = hat_pairing(omega, &restricted, &b.domain)?;
            edge = sign(p + q - k) * pull_by_restriction(&w).eval_owned(f, ys)?;
        }
    }
    Ok((lhs, bulk, edge))
}

pub(crate) fn checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let dom = cfg.domain("interval")?;
    let lb = label(cfg, "interval");
    let mut out = Vec::new();

    let d = dom.clone();
    out.push(Check::new("boundary.derivation.interval", "exterior derivative of the hat pairing with boundary term", lb, cfg.fd_trials.max(4), 1e-6, FiniteDifference, move |rng, fd| {
        let c = hat_case(rng, &d, M, 1, 0)?;
        let (lhs, bulk, edge) = derivation_terms(&c.omega, &c.alpha, &d, &c.f, &c.ys, fd)?;
        Ok(gap(lhs, bulk + edge))
    }));
    let d = dom.clone();
    out.push(Check::new("boundary.witness.interval", "dropping the boundary term breaks the identity", lb, 1, 0.5, Exact, move |_, fd| {
        let (lhs, bulk, _) = witness_terms(&d, fd)?;
        Ok((lhs - bulk).abs())
    }).lower_bound());
    let d = dom.clone();
    out.push(Check::new("boundary.witness-complete.interval", "the boundary term restores the identity on the witness", lb, 1, 1e-6, FiniteDifference, move |_, fd| {
        let (lhs, bulk, edge) = witness_terms(&d, fd)?;
        Ok(gap(lhs, bulk + edge))
    }));
    let d = dom.clone();
    out.push(Check::new("boundary.restriction-naturality.interval", "restriction to the boundary commutes with target maps", lb, cfg.trials.min(20), 1e-12, Exact, move |rng, _| {
        let f = rng.map_point(&d, M)?;
        let a = DMatrix::from_vec(2, M, rng.vector(2 * M, -1.0, 1.0));
        let phi = SmoothMap::affine(a, DVector::from_vec(rng.vector(2, -1.0, 1.0)))?;
        let one = restrict_boundary(&pushforward_action(&phi, &f)?)?;
        let two = pushforward_action(&phi, &restrict_boundary(&f)?)?;
        Ok(one.values().iter().zip(two.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    }));
    Ok(out)
}

/// `ω = x dy` on `R²`, `α = 1`, `f(s) = (s, s²)`, `Y = ∂_y`: the boundary
/// term equals `x(f(1)) − x(f(0)) = 1`.
fn witness_terms(dom: &Arc<SourceDomain>, fd: Fd) -> Result<(f64, f64, f64)> {
    let omega = Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::coordinate(2, 0))])?;
    let f = MapPoint::from_fn(dom.clone(), 2, |s| vec![s[0], s[0] * s[0]])?;
    let y = MapTangent::from_fn(dom, 2, |_| vec![0.0, 1.0])?;
    derivation_terms(&omega, &SourceForm::constant(1, 1.0), dom, &f, &[y], fd)
}
