//! The hat pairing `Ω^p(M) × Ω^q(S) → Ω^{p+q−k}(F(S, M))` and the hat and
//! bar maps derived from it.
//!
//! Tangent arguments are contracted as
//! `(ω·α)^_f(Y¹, …, Y^r) = ∫_S f*(ω(Y¹, …, Y^r, ·)) ∧ α`, the first tangent
//! going into the first slot of `ω`.

use std::sync::Arc;

use super::form::MapSpaceForm;
use super::point::{MapPoint, MapTangent};
use crate::error::{Error, Result};
use crate::forms::algebra::shuffles;
use crate::forms::{fiber_integrate, Form, Mixed, ProductForm};
use crate::source::{SourceDomain, SourceForm};

fn check_degrees(omega: &Form, alpha: &SourceForm, k: usize) -> Result<usize> {
    let (p, q) = (omega.degree(), alpha.degree());
    if q > k {
        return Err(Error::Degree(format!("a {q}-form on a {k}-dimensional source")));
    }
    if p + q < k {
        return Err(Error::Degree(format!("hat pairing needs p + q ≥ k, got p = {p}, q = {q}, k = {k}")));
    }
    Ok(p + q - k)
}

fn check_point(omega: &Form, alpha: &SourceForm, k: usize, f: &MapPoint) -> Result<()> {
    if f.domain().dim() != k {
        return Err(Error::DimensionMismatch { expected: k, found: f.domain().dim() });
    }
    if f.dim() != omega.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), found: f.dim() });
    }
    if let SourceForm::Nodal(n) = alpha {
        let len = n.components().first().map(Vec::len).unwrap_or(f.len());
        if len != f.len() {
            return Err(Error::DimensionMismatch { expected: len, found: f.len() });
        }
    }
    Ok(())
}

/// `(ω·α)^` by the pointwise formula with the restricted pull-back.
pub fn hat_pairing(omega: &Form, alpha: &SourceForm, dom: &SourceDomain) -> Result<MapSpaceForm> {
    let k = dom.dim();
    let r = check_degrees(omega, alpha, k)?;
    let q = alpha.degree();
    let table = Arc::new(shuffles(k, k - q));
    let (omega, alpha) = (omega.clone(), alpha.clone());
    Ok(MapSpaceForm::new(r, "hat", move |f, ys| {
        check_point(&omega, &alpha, k, f)?;
        let dom = f.domain();
        let frame = dom.frame();
        let mut total = 0.0;
        for i in 0..f.len() {
            let x = f.value(i);
            let mut acc = 0.0;
            for sh in table.iter() {
                let mut args: Vec<&[f64]> = ys.iter().map(|y| y.at(i)).collect();
                args.extend(sh.first.iter().map(|&a| f.tangent(i, a)));
                let va: Vec<&[f64]> = sh.second.iter().map(|&a| frame[a].as_slice()).collect();
                let a_val = alpha.eval_at(dom, i, &va);
                if a_val != 0.0 {
                    acc += sh.sign * omega.eval(x, &args) * a_val;
                }
            }
            total += dom.signed_weight(i) * acc;
        }
        Ok(total)
    }))
}

/// `ev*ω` on `S × F(S, M)`: `(ev*ω)(a_j, Y_j) = ω(f(s); T_s f(a_j) + Y_j(s))`.
pub fn ev_pullback(omega: &Form) -> ProductForm<MapPoint, MapTangent> {
    let omega = omega.clone();
    ProductForm::new(omega.degree(), move |s, f: &MapPoint, args: &[Mixed<'_, MapTangent>]| {
        let vecs: Vec<Vec<f64>> = args
            .iter()
            .map(|a| {
                let mut v = f.push_tangent(s.index, a.s);
                if let Some(y) = a.v {
                    for (o, yv) in v.iter_mut().zip(y.at(s.index)) {
                        *o += yv;
                    }
                }
                v
            })
            .collect();
        Ok(omega.eval_vecs(f.value(s.index), &vecs))
    })
}

/// `pr*α` on `S × F(S, M)`, evaluated on the source domain of the base map.
pub fn pr_pullback(alpha: &SourceForm) -> ProductForm<MapPoint, MapTangent> {
    let alpha = alpha.clone();
    ProductForm::new(alpha.degree(), move |s, f: &MapPoint, args: &[Mixed<'_, MapTangent>]| {
        let vs: Vec<&[f64]> = args.iter().map(|a| a.s).collect();
        Ok(alpha.eval_at(f.domain(), s.index, &vs))
    })
}

/// `(ω·α)^ = ∮_S ev*ω ∧ pr*α`, the definitional route.
pub fn hat_pairing_fiber(omega: &Form, alpha: &SourceForm, dom: &SourceDomain) -> Result<MapSpaceForm> {
    let k = dom.dim();
    let r = check_degrees(omega, alpha, k)?;
    let w = ev_pullback(omega).wedge(&pr_pullback(alpha));
    let (omega, alpha) = (omega.clone(), alpha.clone());
    Ok(MapSpaceForm::new(r, "hat-fiber", move |f, ys| {
        check_point(&omega, &alpha, k, f)?;
        fiber_integrate(&w, f.domain(), f, ys)
    }))
}

/// `ω̂ = (ω·1)^`, lowering the degree by `dim S`.
pub fn hat_map(omega: &Form, dom: &SourceDomain) -> Result<MapSpaceForm> {
    Ok(hat_pairing(omega, &SourceForm::constant(dom.chart_dim(), 1.0), dom)?.with_tag("hat-map"))
}

/// `ω̄ = (ω·μ)^` with the normalized volume form `μ` of `S`.
pub fn bar_map(omega: &Form, dom: &SourceDomain) -> Result<MapSpaceForm> {
    Ok(hat_pairing(omega, &SourceForm::Chart(dom.volume_form(true)), dom)?.with_tag("bar"))
}

/// `ω̄_f(Y¹, …, Y^p) = ∫_S ω(Y¹, …, Y^p) μ` evaluated directly.
pub fn bar_direct(omega: &Form) -> MapSpaceForm {
    let omega = omega.clone();
    MapSpaceForm::new(omega.degree(), "bar-direct", move |f, ys| {
        if f.dim() != omega.dim() {
            return Err(Error::DimensionMismatch { expected: omega.dim(), found: f.dim() });
        }
        let dom = f.domain();
        let vol = dom.volume();
        Ok((0..f.len())
            .map(|i| {
                let args: Vec<&[f64]> = ys.iter().map(|y| y.at(i)).collect();
                dom.signed_weight(i) * omega.eval(f.value(i), &args)
            })
            .sum::<f64>()
            / vol)
    })
}

/// `f ↦ ∫_S f*ω ∧ α` restricted to maps, with `ω` of degree `k − q`;
/// the scalar case of [`hat_pairing`].
pub fn hat_function(omega: &Form, alpha: &SourceForm, dom: &SourceDomain) -> Result<MapSpaceForm> {
    let h = hat_pairing(omega, alpha, dom)?;
    if h.degree() != 0 {
        return Err(Error::Degree(format!("expected a function on F, got degree {}", h.degree())));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::ScalarFn;
    use std::f64::consts::PI;

    fn unit_circle(n: usize) -> MapPoint {
        let dom = Arc::new(SourceDomain::circle(n).unwrap());
        MapPoint::from_fn(dom, 2, |s| vec![s[0].cos(), s[0].sin()]).unwrap()
    }

    #[test]
    fn radial_field_on_the_unit_circle_gives_two_pi() {
        let f = unit_circle(64);
        let dom = f.domain().clone();
        let y = MapTangent::from_fn(&dom, 2, |s| vec![s[0].cos(), s[0].sin()]).unwrap();
        let one = SourceForm::constant(1, 1.0);
        for w in [hat_pairing(&Form::volume(2), &one, &dom).unwrap(), hat_pairing_fiber(&Form::volume(2), &one, &dom).unwrap()] {
            assert!((w.eval(&f, &[&y]).unwrap() - 2.0 * PI).abs() < 1e-12);
        }
        let ex = MapTangent::from_fn(&dom, 2, |_| vec![1.0, 0.0]).unwrap();
        assert!(hat_pairing(&Form::volume(2), &one, &dom).unwrap().eval(&f, &[&ex]).unwrap().abs() < 1e-13);
    }

    #[test]
    fn exact_form_against_a_closed_function_vanishes() {
        let f = unit_circle(32);
        let dh = Form::coordinate(2, 0);
        let w = hat_pairing(&dh, &SourceForm::constant(1, 1.0), f.domain()).unwrap();
        assert_eq!(w.degree(), 0);
        assert!(w.eval(&f, &[]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn bar_of_area_on_constant_tangents_is_one() {
        let f = unit_circle(16);
        let dom = f.domain().clone();
        let ex = MapTangent::from_fn(&dom, 2, |_| vec![1.0, 0.0]).unwrap();
        let ey = MapTangent::from_fn(&dom, 2, |_| vec![0.0, 1.0]).unwrap();
        for w in [bar_map(&Form::volume(2), &dom).unwrap(), bar_direct(&Form::volume(2))] {
            assert!((w.eval(&f, &[&ex, &ey]).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn function_against_source_volume_is_a_quadrature() {
        let f = unit_circle(32);
        let dom = f.domain().clone();
        let h = Form::function(ScalarFn::monomial(2, 1.0, &[2, 0]));
        let vol = SourceForm::Chart(Form::volume(1));
        let expect = PI;
        for w in [hat_pairing(&h, &vol, &dom).unwrap(), hat_pairing_fiber(&h, &vol, &dom).unwrap()] {
            assert!((w.eval(&f, &[]).unwrap() - expect).abs() < 1e-13);
        }
        assert!(hat_pairing(&Form::constant(2, 1.0), &SourceForm::constant(1, 1.0), &dom).is_err());
    }
}
