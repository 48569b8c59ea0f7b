//! Forms on products `S × V` and integration over the `S` factor.
//!
//! A [`ProductForm`] is evaluated at a node of `S` and a point of `V` on
//! mixed tangent vectors `(a, v)` with `a ∈ T_s S` in chart coordinates and
//! `v ∈ T_x V`. The `V` side is generic so that the same code integrates
//! forms on `S × R^m` and on `S × F(S, M)`.
//!
//! Fiber integration places the `V` arguments first and the oriented frame
//! of `T_s S` last:
//!
//! `(∮_S w)(x; Z¹, …, Z^{n−k}) = ∫_S w_{(s,x)}((0,Z¹), …, (0,Z^{n−k}), (e_1,0), …, (e_k,0))`.

use std::fmt;
use std::sync::Arc;

use super::algebra::shuffles;
use super::Form;
use crate::error::{Error, Result};
use crate::source::{SourceDomain, SourceForm};

/// A node of a source domain together with its chart coordinates.
#[derive(Clone, Copy, Debug)]
pub struct SourcePoint<'a> {
    pub index: usize,
    pub coords: &'a [f64],
}

/// A tangent vector to `S × V`; `v = None` stands for the zero vector.
#[derive(Debug)]
pub struct Mixed<'a, T: ?Sized> {
    pub s: &'a [f64],
    pub v: Option<&'a T>,
}

impl<T: ?Sized> Clone for Mixed<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T: ?Sized> Copy for Mixed<'_, T> {}

type ProductEval<P, T> = dyn Fn(SourcePoint<'_>, &P, &[Mixed<'_, T>]) -> Result<f64> + Send + Sync;

/// An `n`-form on `S × V`.
pub struct ProductForm<P: ?Sized, T: ?Sized> {
    degree: usize,
    eval: Arc<ProductEval<P, T>>,
}

impl<P: ?Sized, T: ?Sized> Clone for ProductForm<P, T> {
    fn clone(&self) -> Self {
        Self { degree: self.degree, eval: self.eval.clone() }
    }
}

impl<P: ?Sized, T: ?Sized> fmt::Debug for ProductForm<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProductForm").field("degree", &self.degree).finish()
    }
}

impl<P: ?Sized + 'static, T: ?Sized + 'static> ProductForm<P, T> {
    pub fn new<F>(degree: usize, eval: F) -> Self
    where
        F: Fn(SourcePoint<'_>, &P, &[Mixed<'_, T>]) -> Result<f64> + Send + Sync + 'static,
    {
        Self { degree, eval: Arc::new(eval) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, s: SourcePoint<'_>, x: &P, args: &[Mixed<'_, T>]) -> Result<f64> {
        if args.len() != self.degree {
            return Err(Error::Degree(format!("product form of degree {} given {} vectors", self.degree, args.len())));
        }
        (self.eval)(s, x, args)
    }

    /// `pr_S^* α` for a form `α` on `S`.
    pub fn from_source(alpha: SourceForm, dom: Arc<SourceDomain>) -> Self {
        Self::new(alpha.degree(), move |s, _x, args| {
            let vs: Vec<&[f64]> = args.iter().map(|a| a.s).collect();
            Ok(alpha.eval_at(&dom, s.index, &vs))
        })
    }

    /// Exterior product by the shuffle sum over mixed arguments.
    pub fn wedge(&self, other: &Self) -> Self {
        let (p, q) = (self.degree, other.degree);
        let table = Arc::new(shuffles(p + q, p));
        let (a, b) = (self.clone(), other.clone());
        Self::new(p + q, move |s, x, args| {
            let mut total = 0.0;
            for sh in table.iter() {
                let va: Vec<Mixed<'_, T>> = sh.first.iter().map(|&i| args[i]).collect();
                let vb: Vec<Mixed<'_, T>> = sh.second.iter().map(|&i| args[i]).collect();
                total += sh.sign * a.eval(s, x, &va)? * b.eval(s, x, &vb)?;
            }
            Ok(total)
        })
    }
}

impl ProductForm<[f64], [f64]> {
    /// View a form on `R^c × R^m` (the first `c` coordinates being the chart
    /// of `S`) as a product form.
    pub fn from_chart(w: &Form, c: usize) -> Result<Self> {
        if w.dim() < c {
            return Err(Error::DimensionMismatch { expected: c, found: w.dim() });
        }
        let m = w.dim() - c;
        let w = w.clone();
        Ok(Self::new(w.degree(), move |s, x, args| {
            if x.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: x.len() });
            }
            let mut point = s.coords.to_vec();
            point.extend_from_slice(x);
            let vecs: Vec<Vec<f64>> = args
                .iter()
                .map(|a| {
                    let mut v = a.s.to_vec();
                    match a.v {
                        Some(z) => v.extend_from_slice(z),
                        None => v.extend(std::iter::repeat_n(0.0, m)),
                    }
                    v
                })
                .collect();
            Ok(w.eval_vecs(&point, &vecs))
        }))
    }
}

/// `(∮_S w)(x; zs)` by quadrature over the nodes of `dom`.
pub fn fiber_integrate<P: ?Sized + 'static, T: ?Sized + 'static>(
    w: &ProductForm<P, T>,
    dom: &SourceDomain,
    x: &P,
    zs: &[&T],
) -> Result<f64> {
    let k = dom.dim();
    if w.degree() < k {
        return Err(Error::Degree(format!("cannot integrate a {}-form over a {k}-dimensional fiber", w.degree())));
    }
    if zs.len() != w.degree() - k {
        return Err(Error::Degree(format!("fiber integral of degree {} given {} vectors", w.degree() - k, zs.len())));
    }
    let zero = vec![0.0; dom.chart_dim()];
    let frame = dom.frame();
    let mut args: Vec<Mixed<'_, T>> = zs.iter().map(|&z| Mixed { s: &zero, v: Some(z) }).collect();
    args.extend(frame.iter().map(|e| Mixed { s: e.as_slice(), v: None }));
    let mut total = 0.0;
    for i in 0..dom.len() {
        let sp = SourcePoint { index: i, coords: dom.node(i) };
        total += dom.signed_weight(i) * w.eval(sp, x, &args)?;
    }
    Ok(total)
}

/// Fiber integral of a form on `R^c × R^m`, as an `(n − k)`-form on `R^m`.
pub fn fiber_integrate_form(w: &Form, dom: Arc<SourceDomain>) -> Result<Form> {
    let c = dom.chart_dim();
    let k = dom.dim();
    if w.degree() < k {
        return Err(Error::Degree(format!("cannot integrate a {}-form over a {k}-dimensional fiber", w.degree())));
    }
    let pf = ProductForm::from_chart(w, c)?;
    let m = w.dim() - c;
    Ok(Form::new(m, w.degree() - k, move |x, zs| {
        fiber_integrate(&pf, &dom, x, zs).expect("shapes checked at construction")
    }))
}

/// `∫_S α` for a `k`-form on a `k`-dimensional domain.
pub fn integrate(alpha: &SourceForm, dom: &SourceDomain) -> Result<f64> {
    if alpha.degree() != dom.dim() {
        return Err(Error::Degree(format!(
            "integrand of degree {} over a {}-dimensional domain",
            alpha.degree(),
            dom.dim()
        )));
    }
    let frame = dom.frame();
    let vs: Vec<&[f64]> = frame.iter().map(|e| e.as_slice()).collect();
    Ok((0..dom.len()).map(|i| dom.signed_weight(i) * alpha.eval_at(dom, i, &vs)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::ScalarFn;
    use std::f64::consts::PI;

    #[test]
    fn integration_examples() {
        let circle = SourceDomain::circle(64).unwrap();
        let v = integrate(&SourceForm::Chart(Form::volume(1)), &circle).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-14);

        let torus = SourceDomain::torus2(32, 32).unwrap();
        let sin2 = ScalarFn::constant(2, 0.5).add(&ScalarFn::cos_wave(-0.5, &[2.0, 0.0], 0.0));
        let a = Form::from_coefficients(2, 2, vec![(vec![0, 1], sin2)]).unwrap();
        let v = integrate(&SourceForm::Chart(a), &torus).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-12);

        let interval = SourceDomain::interval(33).unwrap();
        let v = integrate(&SourceForm::Chart(Form::volume(1)), &interval).unwrap();
        assert!((v - 1.0).abs() < 1e-14);

        assert!(integrate(&SourceForm::constant(1, 1.0), &circle).is_err());
    }

    #[test]
    fn fiber_integral_of_source_volume_is_constant() {
        let dom = Arc::new(SourceDomain::circle(32).unwrap());
        let w = Form::coordinate(3, 0);
        let fi = fiber_integrate_form(&w, dom).unwrap();
        assert_eq!(fi.degree(), 0);
        assert!((fi.eval(&[0.3, -1.0], &[]) - 2.0 * PI).abs() < 1e-13);
        assert!(fiber_integrate_form(&Form::constant(3, 1.0), Arc::new(SourceDomain::circle(8).unwrap())).is_err());
    }

    #[test]
    fn base_arguments_come_first() {
        // w = ds ∧ dx on R_s × R_x: ∮ w (Z) = w((0,Z),(1,0)) · 2π = −2π Z
        let dom = Arc::new(SourceDomain::circle(16).unwrap());
        let w = Form::basis(2, &[0, 1]);
        let fi = fiber_integrate_form(&w, dom).unwrap();
        assert!((fi.eval(&[0.0], &[&[1.0]]) + 2.0 * PI).abs() < 1e-13);
    }
}
