//! Exterior calculus on `F(S, M)` for flat targets, by finite differences
//! along constant extensions of tangent vectors.

use nalgebra::DMatrix;

use super::actions::{pull_by_source_diffeo, pull_by_target_map};
use super::form::{MapField, MapSpaceForm};
use super::point::{MapPoint, MapTangent, Target};
use crate::error::{Error, Result};
use crate::forms::{Fd, VectorField};

/// `dW(Y₀, …, Y_n) = Σ_i (−1)^i D_{Y_i}[W(Y₀, …, Ŷ_i, …, Y_n)]`.
///
/// Constant vector fields on a flat target commute, so no bracket terms
/// appear. Maps into flat tori are rejected: perturb a Euclidean lift instead.
pub fn map_space_d(w: &MapSpaceForm, fd: Fd) -> MapSpaceForm {
    let w = w.clone();
    MapSpaceForm::new(w.degree() + 1, format!("d({})", w.tag()), move |f, ys| {
        if f.target() != &Target::Euclidean {
            return Err(Error::PeriodicTarget);
        }
        let mut total = 0.0;
        for i in 0..ys.len() {
            let rest: Vec<&MapTangent> = ys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, y)| *y).collect();
            let g = |t: f64| w.eval(&f.perturbed(ys[i], t)?, &rest);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * fd.try_derivative(g)?;
        }
        Ok(total)
    })
}

/// `i_T W`, with `T` in the first slot; zero on functions.
pub fn map_space_interior(w: &MapSpaceForm, t: &MapField) -> MapSpaceForm {
    if w.degree() == 0 {
        return MapSpaceForm::zero(0);
    }
    let (w, t) = (w.clone(), t.clone());
    MapSpaceForm::new(w.degree() - 1, format!("i[{}]({})", t.tag(), w.tag()), move |f, ys| {
        let tf = t.at(f)?;
        let mut args: Vec<&MapTangent> = vec![&tf];
        args.extend_from_slice(ys);
        w.eval(f, &args)
    })
}

/// `L_T W = i_T dW + d i_T W`.
pub fn map_space_lie(w: &MapSpaceForm, t: &MapField, fd: Fd) -> Result<MapSpaceForm> {
    let first = map_space_interior(&map_space_d(w, fd), t);
    if w.degree() == 0 {
        return Ok(first);
    }
    let second = map_space_d(&map_space_interior(w, t), fd);
    first.add(&second)
}

/// `L_{X̄} W = d/dt|₀ (φ̄_t)* W` with `φ_t` the flow of `X` on `M`.
pub fn lie_flow_m(w: &MapSpaceForm, x: &VectorField, fd: Fd) -> MapSpaceForm {
    let (w, x) = (w.clone(), x.clone());
    MapSpaceForm::new(w.degree(), format!("L-flow-M({})", w.tag()), move |f, ys| {
        fd.try_derivative(|t| {
            if t == 0.0 {
                return w.eval(f, ys);
            }
            pull_by_target_map(&w, &x.flow(t)).eval(f, ys)
        })
    })
}

/// `L_{Ẑ} W = d/dt|₀ (ψ̂_t)* W` with `ψ_t` the flow of `Z` on the chart of `S`.
pub fn lie_flow_s(w: &MapSpaceForm, z: &VectorField, fd: Fd) -> MapSpaceForm {
    let (w, z) = (w.clone(), z.clone());
    MapSpaceForm::new(w.degree(), format!("L-flow-S({})", w.tag()), move |f, ys| {
        fd.try_derivative(|t| {
            if t == 0.0 {
                return w.eval(f, ys);
            }
            pull_by_source_diffeo(&w, &z.flow(t)).eval(f, ys)
        })
    })
}

/// Matrix of a 2-form on the nodal basis `{e_{i,c}}` of `T_f F(S, M)`,
/// indexed by `i·m + c`.
pub fn gram_matrix(w: &MapSpaceForm, f: &MapPoint) -> Result<DMatrix<f64>> {
    if w.degree() != 2 {
        return Err(Error::Degree(format!("Gram matrix of a {}-form", w.degree())));
    }
    let (n, m) = (f.len(), f.dim());
    let basis: Vec<MapTangent> = (0..n * m).map(|j| MapTangent::basis(n, m, j / m, j % m)).collect();
    let mut g = DMatrix::zeros(n * m, n * m);
    for a in 0..n * m {
        for b in (a + 1)..n * m {
            let v = w.eval(f, &[&basis[a], &basis[b]])?;
            g[(a, b)] = v;
            g[(b, a)] = -v;
        }
    }
    Ok(g)
}

/// Rank of a matrix: singular values above `rel_tol` times the largest.
pub fn numerical_rank(g: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = g.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::hat::{bar_map, hat_pairing};
    use crate::forms::{Form, ScalarFn};
    use crate::source::{SourceDomain, SourceForm};
    use std::sync::Arc;

    fn loop_map() -> MapPoint {
        let dom = Arc::new(SourceDomain::circle(16).unwrap());
        MapPoint::from_fn(dom, 2, |s| vec![s[0].cos(), 0.5 * s[0].sin() + 0.1]).unwrap()
    }

    #[test]
    fn d_of_a_constant_is_zero_and_dd_vanishes() {
        let f = loop_map();
        let y = MapTangent::from_fn(f.domain(), 2, |s| vec![s[0].sin(), 1.0]).unwrap();
        let c = MapSpaceForm::new(0, "c", |_, _| Ok(3.0));
        assert_eq!(map_space_d(&c, Fd::default()).eval(&f, &[&y]).unwrap(), 0.0);

        let h = Form::function(ScalarFn::wave(1.0, &[0.7, 1.1], 0.2));
        let w = hat_pairing(&h, &SourceForm::Chart(Form::volume(1)), f.domain()).unwrap();
        let dd = map_space_d(&map_space_d(&w, Fd::new(1e-3)), Fd::new(1e-3));
        let z = MapTangent::from_fn(f.domain(), 2, |s| vec![1.0, s[0].cos()]).unwrap();
        assert!(dd.eval(&f, &[&y, &z]).unwrap().abs() < 1e-8);
    }

    #[test]
    fn interior_of_a_function_is_zero() {
        let f = loop_map();
        let w = MapSpaceForm::new(0, "c", |_, _| Ok(3.0));
        let t = MapField::constant(MapTangent::zero(16, 2));
        assert_eq!(map_space_interior(&w, &t).eval(&f, &[]).unwrap(), 0.0);
    }

    #[test]
    fn gram_of_bar_area_is_weighted_symplectic_matrix() {
        let f = loop_map();
        let g = gram_matrix(&bar_map(&Form::volume(2), f.domain()).unwrap(), &f).unwrap();
        for i in 0..16 {
            assert!((g[(2 * i, 2 * i + 1)] - 1.0 / 16.0).abs() < 1e-15);
        }
        assert_eq!(numerical_rank(&g, 1e-10), 32);
    }
}
