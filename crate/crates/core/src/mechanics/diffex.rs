//! The group of exact volume-preserving diffeomorphisms of `(T², μ)` acting
//! on `F(T², M)` for an exact 2-form `ω` on `M = R^m`, with `μ` normalized.
//!
//! `X_α` is defined by `i_{X_α} μ = dα`, so with `μ = dx∧dy / 4π²` it is
//! `4π² (∂_y α, −∂_x α)`. Momentum values use the zero-mean right inverse.

use crate::error::{Error, Result};
use crate::forms::{Fd, Form};
use crate::mapping::{
    bar_map, field_s, generator_s, hat_map, hat_pairing, map_space_d, map_space_interior, MapPoint, MapTangent,
    Target,
};
use crate::source::{
    exact_divfree_field, gradient, projection_p, right_inverse_b, DomainKind, OneForm, SourceDomain, SourceForm,
    SourceVectorField, EXACTNESS_THRESHOLD,
};

/// Rejection threshold for closedness of `ω` at the sampled points.
pub const CLOSEDNESS_THRESHOLD: f64 = 1e-6;

/// Closedness threshold for potentials of brackets, whose nodal products
/// carry aliasing error.
const BRACKET_EXACTNESS: f64 = 1e-6;

fn require_torus(f: &MapPoint) -> Result<&SourceDomain> {
    let dom = f.domain();
    if dom.kind() != DomainKind::Torus2 {
        return Err(Error::UnsupportedDomain(format!("{:?}: needs the 2-torus", dom.kind())));
    }
    if f.target() != &Target::Euclidean {
        return Err(Error::Precondition("exact forms are taken on R^m".into()));
    }
    Ok(dom)
}

/// `μ`-density: the constant `c` with `μ = c dx∧dy`.
fn density(dom: &SourceDomain) -> f64 {
    1.0 / dom.volume()
}

/// Largest `|dω|` on coordinate frames at the given points.
pub fn closedness_residual(omega: &Form, points: &[&[f64]]) -> f64 {
    let d = omega.exterior_derivative(Fd::default());
    let m = omega.dim();
    let frames = crate::forms::algebra::multi_indices(m, d.degree());
    let mut worst = 0.0f64;
    for x in points {
        for idx in &frames {
            let vs: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            worst = worst.max(d.eval_vecs(x, &vs).abs());
        }
    }
    worst
}

fn require_exact(omega: &Form, f: &MapPoint) -> Result<()> {
    if omega.degree() != 2 {
        return Err(Error::Degree(format!("expected a 2-form, got degree {}", omega.degree())));
    }
    let points: Vec<&[f64]> = (0..f.len()).step_by((f.len() / 16).max(1)).map(|i| f.value(i)).collect();
    let residual = closedness_residual(omega, &points);
    if residual > CLOSEDNESS_THRESHOLD {
        return Err(Error::NotExact { residual, threshold: CLOSEDNESS_THRESHOLD });
    }
    Ok(())
}

/// `X_α`, node-major with two components per node.
pub fn stream_field(dom: &SourceDomain, alpha: &[f64]) -> Result<Vec<f64>> {
    let c = density(dom);
    Ok(exact_divfree_field(dom, alpha)?.into_iter().map(|v| v / c).collect())
}

/// Vector-field bracket `[X, Y] = X·∇Y − Y·∇X` of node-major fields.
pub fn field_bracket(dom: &SourceDomain, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let comp = |v: &[f64], c: usize| v.iter().skip(c).step_by(2).copied().collect::<Vec<f64>>();
    let (xs, ys) = ([comp(x, 0), comp(x, 1)], [comp(y, 0), comp(y, 1)]);
    let mut out = vec![0.0; x.len()];
    for c in 0..2 {
        let dy = [dom.differentiate(&ys[c], 0)?, dom.differentiate(&ys[c], 1)?];
        let dx = [dom.differentiate(&xs[c], 0)?, dom.differentiate(&xs[c], 1)?];
        for i in 0..dom.len() {
            out[2 * i + c] =
                xs[0][i] * dy[0][i] + xs[1][i] * dy[1][i] - ys[0][i] * dx[0][i] - ys[1][i] * dx[1][i];
        }
    }
    Ok(out)
}

/// The zero-mean potential `β` with `i_V μ = dβ` for a divergence-free `V`.
fn field_potential(dom: &SourceDomain, v: &[f64]) -> Result<Vec<f64>> {
    let c = density(dom);
    let beta = OneForm {
        dx: v.iter().skip(1).step_by(2).map(|vy| -c * vy).collect(),
        dy: v.iter().step_by(2).map(|vx| c * vx).collect(),
    };
    right_inverse_b(dom, &beta, BRACKET_EXACTNESS)
}

/// The two routes to `⟨J(f), X_α⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffexMomentum {
    /// `(ω · b(dα))^(f)` through the hat pairing.
    pub hat_route: f64,
    /// `Σ_i w_i ω(f_i; ∂_x f, ∂_y f) (α_i − ᾱ)` directly from `Tf`.
    pub direct_route: f64,
}

/// `⟨J(f), X_α⟩ = ∫_S f*ω ∧ b(dα)`.
pub fn momentum_diffex(omega: &Form, f: &MapPoint, alpha: &[f64]) -> Result<DiffexMomentum> {
    let dom = require_torus(f)?;
    require_exact(omega, f)?;
    let potential = right_inverse_b(dom, &gradient(dom, alpha)?, EXACTNESS_THRESHOLD)?;
    let hat_route = hat_pairing(omega, &SourceForm::scalar_field(potential), dom)?.eval(f, &[])?;
    let mean = alpha.iter().zip(dom.weights()).map(|(a, w)| a * w).sum::<f64>() / dom.volume();
    let direct_route = (0..f.len())
        .map(|i| {
            let c = omega.eval(f.value(i), &[f.tangent(i, 0), f.tangent(i, 1)]);
            dom.signed_weight(i) * c * (alpha[i] - mean)
        })
        .sum();
    Ok(DiffexMomentum { hat_route, direct_route })
}

/// `|d(ω·b(dα))^ − i_{X̂_α} ω̄|` at `f` on `y`.
pub fn momentum_residual_diffex(omega: &Form, f: &MapPoint, alpha: &[f64], y: &MapTangent, fd: Fd) -> Result<f64> {
    let dom = require_torus(f)?;
    let potential = right_inverse_b(dom, &gradient(dom, alpha)?, EXACTNESS_THRESHOLD)?;
    let j = hat_pairing(omega, &SourceForm::scalar_field(potential), dom)?;
    let lhs = map_space_d(&j, fd).eval(f, &[y])?;
    let x = SourceVectorField::Nodal { k: 2, values: stream_field(dom, alpha)? };
    let rhs = map_space_interior(&bar_map(omega, dom)?, &field_s(&x)).eval(f, &[y])?;
    Ok((lhs - rhs).abs())
}

/// `μ(Y, X) = i_X i_Y μ` for node-major fields.
fn mu_pair(dom: &SourceDomain, y: &[f64], x: &[f64]) -> Vec<f64> {
    let c = density(dom);
    (0..dom.len()).map(|i| c * (y[2 * i] * x[2 * i + 1] - y[2 * i + 1] * x[2 * i])).collect()
}

/// `σ(X_{α₁}, X_{α₂}) = ∫_S f*ω ∧ P(i_{X_{α₁}} i_{X_{α₂}} μ)`.
pub fn cocycle_diffex(omega: &Form, f: &MapPoint, alpha1: &[f64], alpha2: &[f64]) -> Result<f64> {
    let dom = require_torus(f)?;
    require_exact(omega, f)?;
    let (x, y) = (stream_field(dom, alpha1)?, stream_field(dom, alpha2)?);
    let g = projection_p(dom, &mu_pair(dom, &y, &x))?;
    hat_pairing(omega, &SourceForm::scalar_field(g), dom)?.eval(f, &[])
}

/// `mean(i_X i_Y μ)` and `∫_S f*ω`, whose product is the cocycle.
pub fn cocycle_factors(omega: &Form, f: &MapPoint, alpha1: &[f64], alpha2: &[f64]) -> Result<(f64, f64)> {
    let dom = require_torus(f)?;
    let (x, y) = (stream_field(dom, alpha1)?, stream_field(dom, alpha2)?);
    let g = mu_pair(dom, &y, &x);
    let mean = g.iter().zip(dom.weights()).map(|(v, w)| v * w).sum::<f64>() / dom.volume();
    Ok((mean, hat_map(omega, dom)?.eval(f, &[])?))
}

/// `⟨J(f), [X, Y]⟩ − ω̄(X̂, Ŷ)(f)` with the group bracket `[X, Y] = −(X·∇Y − Y·∇X)`.
pub fn cocycle_diffex_defining(omega: &Form, f: &MapPoint, alpha1: &[f64], alpha2: &[f64]) -> Result<f64> {
    let dom = require_torus(f)?;
    let (x, y) = (stream_field(dom, alpha1)?, stream_field(dom, alpha2)?);
    let lie: Vec<f64> = field_bracket(dom, &x, &y)?.into_iter().map(|v| -v).collect();
    let potential = field_potential(dom, &lie)?;
    let pairing = hat_pairing(omega, &SourceForm::scalar_field(potential), dom)?.eval(f, &[])?;
    let xh = generator_s(&SourceVectorField::Nodal { k: 2, values: x }, f)?;
    let yh = generator_s(&SourceVectorField::Nodal { k: 2, values: y }, f)?;
    Ok(pairing - bar_map(omega, dom)?.eval(f, &[&xh, &yh])?)
}

/// `f_t = (1 − t) f₀ + t f₁` at `steps + 1` equally spaced times.
pub fn straight_homotopy(f0: &MapPoint, f1: &MapPoint, steps: usize) -> Result<Vec<MapPoint>> {
    if f0.values().len() != f1.values().len() {
        return Err(Error::DimensionMismatch { expected: f0.values().len(), found: f1.values().len() });
    }
    (0..=steps)
        .map(|s| {
            let t = s as f64 / steps.max(1) as f64;
            let values = f0.values().iter().zip(f1.values()).map(|(a, b)| (1.0 - t) * a + t * b).collect();
            MapPoint::new(f0.domain().clone(), f0.dim(), values)
        })
        .collect()
}

/// Cocycle values along a homotopy and their spread `max − min`.
pub fn cocycle_spread(omega: &Form, path: &[MapPoint], alpha1: &[f64], alpha2: &[f64]) -> Result<(Vec<f64>, f64)> {
    let values: Vec<f64> = path.iter().map(|f| cocycle_diffex(omega, f, alpha1, alpha2)).collect::<Result<_>>()?;
    let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((values, spread))
}
