//! The left actions of `Diff(M)` and `Diff(S)` on `F(S, M)`, their
//! infinitesimal generators, pull-backs of map-space forms along them, and
//! restriction to the boundary of `S`.

use nalgebra::DVector;

use super::form::{MapField, MapSpaceForm};
use super::point::{MapPoint, MapTangent, Target};
use crate::error::{Error, Result};
use crate::forms::{DiffeoChart, SmoothMap, VectorField};
use crate::source::SourceVectorField;

/// `φ·f = φ ∘ f`, node by node.
///
/// For flat-torus targets `φ` must commute with the period lattice
/// translations (translations and periodic perturbations of the identity);
/// the drift of the lift is kept.
pub fn pushforward_action(phi: &SmoothMap, f: &MapPoint) -> Result<MapPoint> {
    if phi.dim_in() != f.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim_in(), found: f.dim() });
    }
    if matches!(f.target(), Target::FlatTorus { .. }) && phi.dim_out() != f.dim() {
        return Err(Error::PeriodicTarget);
    }
    f.map_values(|x| phi.apply(x), phi.dim_out())
}

/// `ψ·f = f ∘ ψ⁻¹`, by resampling `f` at `ψ⁻¹(s_i)`.
pub fn pullback_action(psi: &DiffeoChart, f: &MapPoint) -> Result<MapPoint> {
    let points = inverse_nodes(psi, f)?;
    f.with_resampled(f.resample(&points)?)
}

/// `ψ·Y = Y ∘ ψ⁻¹`, the tangent map of the `Diff(S)` action.
pub fn transport_tangent(psi: &DiffeoChart, f: &MapPoint, y: &MapTangent) -> Result<MapTangent> {
    let points = inverse_nodes(psi, f)?;
    MapTangent::new(y.dim(), f.domain().resample(y.values(), y.dim(), &points)?)
}

fn inverse_nodes(psi: &DiffeoChart, f: &MapPoint) -> Result<Vec<Vec<f64>>> {
    let dom = f.domain();
    if psi.dim_in() != dom.chart_dim() {
        return Err(Error::DimensionMismatch { expected: dom.chart_dim(), found: psi.dim_in() });
    }
    (0..f.len()).map(|i| psi.apply_inverse(dom.node(i))).collect()
}

/// `X̄(f) = X ∘ f`.
pub fn generator_m(x: &VectorField, f: &MapPoint) -> Result<MapTangent> {
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: f.dim() });
    }
    MapTangent::along(f, |p| x.at(p))
}

/// `Ẑ(f) = −T f ∘ Z`.
pub fn generator_s(z: &SourceVectorField, f: &MapPoint) -> Result<MapTangent> {
    let dom = f.domain();
    let values: Vec<f64> = (0..f.len())
        .flat_map(|i| {
            let zi = z.at_node(dom, i);
            f.push_tangent(i, &zi).into_iter().map(|v| -v)
        })
        .collect();
    MapTangent::new(f.dim(), values)
}

/// `X̄` as a vector field on `F(S, M)`.
pub fn field_m(x: &VectorField) -> MapField {
    let x = x.clone();
    MapField::new("gen-M", move |f| generator_m(&x, f))
}

/// `Ẑ` as a vector field on `F(S, M)`.
pub fn field_s(z: &SourceVectorField) -> MapField {
    let z = z.clone();
    MapField::new("gen-S", move |f| generator_s(&z, f))
}

/// `η̄*W` for `η: M₁ → M₂`: `(η̄*W)_f(Y…) = W_{η∘f}(Tη·Y…)`.
pub fn pull_by_target_map(w: &MapSpaceForm, eta: &SmoothMap) -> MapSpaceForm {
    let (w, eta) = (w.clone(), eta.clone());
    MapSpaceForm::new(w.degree(), format!("pull-M({})", w.tag()), move |f, ys| {
        let g = pushforward_action(&eta, f)?;
        let jac: Vec<_> = (0..f.len()).map(|i| eta.jacobian_at(f.value(i))).collect();
        let pushed: Vec<MapTangent> = ys
            .iter()
            .map(|y| {
                y.map_nodes(eta.dim_out(), |i, v| (&jac[i] * DVector::from_column_slice(v)).iter().copied().collect())
            })
            .collect::<Result<_>>()?;
        w.eval_owned(&g, &pushed)
    })
}

/// `ψ̂*W` for a diffeomorphism `ψ` of `S`.
pub fn pull_by_source_diffeo(w: &MapSpaceForm, psi: &DiffeoChart) -> MapSpaceForm {
    let (w, psi) = (w.clone(), psi.clone());
    MapSpaceForm::new(w.degree(), format!("pull-S({})", w.tag()), move |f, ys| {
        let g = pullback_action(&psi, f)?;
        let moved: Vec<MapTangent> = ys.iter().map(|y| transport_tangent(&psi, f, y)).collect::<Result<_>>()?;
        w.eval_owned(&g, &moved)
    })
}

/// `r_∂ f = f|_{∂S}`.
pub fn restrict_boundary(f: &MapPoint) -> Result<MapPoint> {
    let b = f
        .domain()
        .boundary()
        .ok_or_else(|| Error::UnsupportedDomain(format!("{:?} has no boundary", f.domain().kind())))?;
    let values: Vec<f64> = b.node_map.iter().flat_map(|&i| f.value(i).to_vec()).collect();
    MapPoint::new(b.domain, f.dim(), values)
}

/// `T r_∂ · Y = Y|_{∂S}`.
pub fn restrict_tangent(f: &MapPoint, y: &MapTangent) -> Result<MapTangent> {
    let b = f
        .domain()
        .boundary()
        .ok_or_else(|| Error::UnsupportedDomain(format!("{:?} has no boundary", f.domain().kind())))?;
    Ok(y.select(&b.node_map))
}

/// `r_∂*W` for a form `W` on `F(∂S, M)`.
pub fn pull_by_restriction(w: &MapSpaceForm) -> MapSpaceForm {
    let w = w.clone();
    MapSpaceForm::new(w.degree(), format!("r∂*({})", w.tag()), move |f, ys| {
        let g = restrict_boundary(f)?;
        let restricted: Vec<MapTangent> = ys.iter().map(|y| restrict_tangent(f, y)).collect::<Result<_>>()?;
        w.eval_owned(&g, &restricted)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::SourceDomain;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn loop_map(n: usize) -> MapPoint {
        let dom = Arc::new(SourceDomain::circle(n).unwrap());
        MapPoint::from_fn(dom, 2, |s| vec![s[0].cos() + 0.2 * (2.0 * s[0]).sin(), s[0].sin()]).unwrap()
    }

    #[test]
    fn identity_and_rotation_act_nodewise() {
        let f = loop_map(16);
        let id = pushforward_action(&SmoothMap::identity(2), &f).unwrap();
        assert_eq!(id.values(), f.values());
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = SmoothMap::affine(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]), DVector::zeros(2)).unwrap();
        let g = pushforward_action(&rot, &f).unwrap();
        for i in 0..16 {
            let (x, y) = (f.value(i)[0], f.value(i)[1]);
            assert_eq!(g.value(i), &[c * x - s * y, s * x + c * y]);
        }
    }

    #[test]
    fn rigid_shift_resamples_exactly_on_grid_and_spectrally_off_grid() {
        let f = loop_map(32);
        let on_grid = 2.0 * PI * 3.0 / 32.0;
        for (shift, tol) in [(on_grid, 0.0), (0.123, 1e-13)] {
            let psi = SmoothMap::affine(DMatrix::identity(1, 1), DVector::from_element(1, shift)).unwrap();
            let g = pullback_action(&psi, &f).unwrap();
            for i in 0..32 {
                let t = f.domain().node(i)[0] - shift;
                let e = [t.cos() + 0.2 * (2.0 * t).sin(), t.sin()];
                assert!((g.value(i)[0] - e[0]).abs() <= tol + 1e-15 && (g.value(i)[1] - e[1]).abs() <= tol + 1e-15);
            }
        }
        let no_inverse = SmoothMap::new(1, 1, |s| s.to_vec());
        assert!(matches!(pullback_action(&no_inverse, &f), Err(Error::MissingInverse)));
    }

    #[test]
    fn generators() {
        let dom = Arc::new(SourceDomain::circle(32).unwrap());
        let f = MapPoint::from_fn(dom.clone(), 2, |s| vec![s[0].cos(), s[0].sin()]).unwrap();
        let c = generator_m(&VectorField::constant(&[0.5, -1.0]), &f).unwrap();
        assert!((0..32).all(|i| c.at(i) == [0.5, -1.0]));
        let z = generator_s(&SourceVectorField::Chart(VectorField::constant(&[1.0])), &f).unwrap();
        for i in 0..32 {
            let s = dom.node(i)[0];
            assert!((z.at(i)[0] - s.sin()).abs() < 1e-13 && (z.at(i)[1] + s.cos()).abs() < 1e-13);
        }
        let zero = generator_s(&SourceVectorField::Chart(VectorField::zero(1)), &f).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn restriction_to_the_boundary() {
        let dom = Arc::new(SourceDomain::interval(17).unwrap());
        let f = MapPoint::from_fn(dom, 2, |s| vec![s[0], 0.0]).unwrap();
        let r = restrict_boundary(&f).unwrap();
        assert_eq!(r.values(), &[0.0, 0.0, 1.0, 0.0]);
        let shift = SmoothMap::affine(DMatrix::identity(2, 2), DVector::from_vec(vec![1.0, 2.0])).unwrap();
        let a = restrict_boundary(&pushforward_action(&shift, &f).unwrap()).unwrap();
        let b = pushforward_action(&shift, &r).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(restrict_boundary(&loop_map(8)).is_err());
    }
}
