//! Seeded test data shared by the suites.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::forms::algebra::multi_indices;
use crate::forms::{Form, ScalarFn, SmoothMap, VectorField};
use crate::grassmannian::{EmbeddedSubmanifold, EmbeddingGates};
use crate::mapping::{MapPoint, MapTangent};
use crate::random::TestRng;
use crate::source::{SourceDomain, SourceForm};

pub(crate) struct HatCase {
    pub omega: Form,
    pub alpha: SourceForm,
    pub f: MapPoint,
    pub ys: Vec<MapTangent>,
    pub p: usize,
    pub q: usize,
}

/// Random `(ω, α, f, Y…)` with `p ≥ min_p`, `p + q ≥ k`, at most two slots
/// of `(ω·α)^` plus `extra` tangents.
pub(crate) fn hat_case(rng: &mut TestRng, dom: &Arc<SourceDomain>, m: usize, extra: usize, min_p: usize) -> Result<HatCase> {
    let k = dom.dim();
    let q = rng.index(k + 1);
    let lo = min_p.max(k - q);
    let hi = (k - q + 2).min(m).max(lo);
    let p = lo + rng.index(hi - lo + 1);
    let omega = rng.form(m, p);
    let alpha = rng.source_form(dom, q);
    let f = rng.map_point(dom, m)?;
    let ys = (0..p + q - k + extra).map(|_| rng.map_tangent(dom, m)).collect::<Result<_>>()?;
    Ok(HatCase { omega, alpha, f, ys, p, q })
}

/// Sum of plane waves on `R^c × R^m`, periodic with integer frequencies in
/// the first `c` coordinates.
pub(crate) fn mixed_fn(rng: &mut TestRng, c: usize, m: usize) -> ScalarFn {
    let mut acc = ScalarFn::constant(c + m, rng.uniform(-0.5, 0.5));
    for _ in 0..3 {
        let mut k: Vec<f64> = (0..c).map(|_| rng.index(7) as f64 - 3.0).collect();
        k.extend(rng.vector(m, -1.2, 1.2));
        acc = acc.add(&ScalarFn::wave(rng.uniform(-1.0, 1.0), &k, rng.uniform(0.0, 2.0 * PI)));
    }
    acc
}

/// A `degree`-form on `R^c × R^m` with `mixed_fn` coefficients.
pub(crate) fn fiber_form(rng: &mut TestRng, c: usize, m: usize, degree: usize) -> Form {
    let terms = multi_indices(c + m, degree).into_iter().map(|idx| (idx, mixed_fn(rng, c, m))).collect();
    Form::from_coefficients(c + m, degree, terms).expect("valid multi-indices")
}

/// Vector field components on the chart of `dom`, periodic where `dom` is.
pub(crate) fn source_field(rng: &mut TestRng, dom: &SourceDomain) -> Vec<ScalarFn> {
    (0..dom.chart_dim()).map(|_| rng.source_fn(dom).scale(0.5)).collect()
}

pub(crate) fn field_parts(rng: &mut TestRng, dim: usize) -> Vec<ScalarFn> {
    (0..dim).map(|_| rng.trig_fn(dim, 2, 1.0)).collect()
}

/// `0 × X` or `Z × 0` on `R^c × R^m`.
pub(crate) fn product_field(parts: &[ScalarFn], total: usize, offset: usize) -> VectorField {
    let comps = (0..total)
        .map(|i| {
            if i >= offset && i < offset + parts.len() {
                parts[i - offset].embed(total, offset)
            } else {
                ScalarFn::zero(total)
            }
        })
        .collect();
    VectorField::from_components(comps)
}

/// A rigid translation of a periodic chart by whole grid cells.
pub(crate) fn grid_shift(dom: &SourceDomain, cells: &[usize]) -> Result<SmoothMap> {
    let shift: Vec<f64> = dom.shape().iter().zip(cells).map(|(&n, &c)| 2.0 * PI * c as f64 / n as f64).collect();
    let c = shift.len();
    SmoothMap::affine(DMatrix::identity(c, c), DVector::from_vec(shift))
}

/// Affine part plus bounded trigonometric part, `R^m_in → R^m_out`.
pub(crate) fn nonlinear_map(rng: &mut TestRng, m_in: usize, m_out: usize) -> SmoothMap {
    let comps = (0..m_out)
        .map(|_| {
            (0..m_in)
                .fold(ScalarFn::constant(m_in, rng.uniform(-0.5, 0.5)), |acc, j| {
                    acc.add(&ScalarFn::coordinate(m_in, j).scale(rng.uniform(-1.0, 1.0)))
                })
                .add(&rng.trig_fn(m_in, 2, 1.0).scale(0.5))
        })
        .collect();
    SmoothMap::from_components(comps)
}

/// The unit circle in the `xy`-plane plus a small seeded perturbation.
pub(crate) fn embedded_loop(rng: &mut TestRng, dom: &Arc<SourceDomain>) -> Result<EmbeddedSubmanifold> {
    let bumps: Vec<ScalarFn> = (0..3).map(|_| rng.periodic_fn(1, 2, 2).scale(0.04)).collect();
    let f = MapPoint::from_fn(dom.clone(), 3, |s| {
        let t = s[0];
        vec![t.cos() + bumps[0].value(s), t.sin() + bumps[1].value(s), bumps[2].value(s)]
    })?;
    EmbeddedSubmanifold::new(f, EmbeddingGates::default())
}

/// A volume form `(1 + small wave) dx∧dy∧dz` on `R^3`.
pub(crate) fn variable_volume(rng: &mut TestRng) -> Form {
    let coeff = ScalarFn::constant(3, 1.0).add(&rng.trig_fn(3, 2, 1.0).scale(0.2));
    Form::from_coefficients(3, 3, vec![(vec![0, 1, 2], coeff)]).expect("top-degree form")
}

pub(crate) fn refs(ys: &[MapTangent]) -> Vec<&MapTangent> {
    ys.iter().collect()
}
