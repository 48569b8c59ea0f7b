//! Differential forms on flat charts, represented by pointwise evaluators.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use super::algebra::{basis_eval, shuffles, sort_sign};
use super::maps::{SmoothMap, VectorField};
use super::scalar::ScalarFn;
use crate::error::{Error, Result};

type Evaluator = dyn Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync;
type Thunk = dyn Fn() -> Form + Send + Sync;

/// Finite-difference configuration: central differences of half-width `step`,
/// optionally Richardson-extrapolated from `step` and `step / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fd {
    pub step: f64,
    pub richardson: bool,
}

impl Default for Fd {
    fn default() -> Self {
        Self { step: 1e-4, richardson: false }
    }
}

impl Fd {
    pub fn new(step: f64) -> Self {
        assert!(step > 0.0, "finite-difference step must be positive");
        Self { step, richardson: false }
    }

    pub fn richardson(step: f64) -> Self {
        Self { step, richardson: true }
    }

    /// Derivative at `t = 0` of `g`.
    pub fn derivative<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        let central = |h: f64| (g(h) - g(-h)) / (2.0 * h);
        if self.richardson {
            (4.0 * central(self.step / 2.0) - central(self.step)) / 3.0
        } else {
            central(self.step)
        }
    }

    pub fn try_derivative<G: Fn(f64) -> Result<f64>>(&self, g: G) -> Result<f64> {
        let central = |h: f64| -> Result<f64> { Ok((g(h)? - g(-h)?) / (2.0 * h)) };
        if self.richardson {
            Ok((4.0 * central(self.step / 2.0)? - central(self.step)?) / 3.0)
        } else {
            central(self.step)
        }
    }
}

/// A degree-`p` form on `R^m`, evaluated at a point on `p` tangent vectors.
#[derive(Clone)]
pub struct Form {
    degree: usize,
    dim: usize,
    eval: Arc<Evaluator>,
    analytic_d: Option<Arc<Thunk>>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("degree", &self.degree)
            .field("dim", &self.dim)
            .field("analytic_d", &self.analytic_d.is_some())
            .finish()
    }
}

impl Form {
    pub fn new<F>(dim: usize, degree: usize, eval: F) -> Self
    where
        F: Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync + 'static,
    {
        Self { degree, dim, eval: Arc::new(eval), analytic_d: None }
    }

    /// Attach an exact exterior derivative, produced lazily.
    pub fn with_analytic_d<F>(mut self, d: F) -> Self
    where
        F: Fn() -> Form + Send + Sync + 'static,
    {
        self.analytic_d = Some(Arc::new(d));
        self
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        Self::new(dim, degree, |_, _| 0.0).with_analytic_d(move || Form::zero(dim, degree + 1))
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::new(dim, 0, move |_, _| c).with_analytic_d(move || Form::zero(dim, 1))
    }

    /// `dx^i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::basis(dim, &[i])
    }

    /// `dx^{i_0} ∧ … ∧ dx^{i_{p-1}}` with constant coefficient 1.
    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        Self::from_coefficients(dim, idx.len(), vec![(idx.to_vec(), ScalarFn::constant(dim, 1.0))])
            .expect("valid basis index")
    }

    /// The coordinate volume form `dx^0 ∧ … ∧ dx^{m-1}`.
    pub fn volume(dim: usize) -> Self {
        Self::basis(dim, &(0..dim).collect::<Vec<_>>())
    }

    /// A 0-form from a coefficient function.
    pub fn function(f: ScalarFn) -> Self {
        let dim = f.dim();
        Self::from_coefficients(dim, 0, vec![(vec![], f)]).expect("0-form")
    }

    /// `Σ_I c_I(x) dx^I`. Multi-indices need not be sorted; repeated indices
    /// contribute nothing. The exterior derivative is exact.
    pub fn from_coefficients(dim: usize, degree: usize, terms: Vec<(Vec<usize>, ScalarFn)>) -> Result<Self> {
        let mut normalized: Vec<(Vec<usize>, ScalarFn)> = Vec::new();
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::Degree(format!(
                    "multi-index {idx:?} does not have length {degree}"
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::DimensionMismatch { expected: dim, found: bad + 1 });
            }
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
            let sign = sort_sign(&idx);
            if sign == 0.0 || c.is_zero() {
                continue;
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let c = c.scale(sign);
            match normalized.iter_mut().find(|(i, _)| *i == sorted) {
                Some((_, acc)) => *acc = acc.add(&c),
                None => normalized.push((sorted, c)),
            }
        }
        Ok(Self::coefficient_form(dim, degree, Arc::new(normalized)))
    }

    fn coefficient_form(dim: usize, degree: usize, terms: Arc<Vec<(Vec<usize>, ScalarFn)>>) -> Self {
        let ev = terms.clone();
        let form = Self::new(dim, degree, move |x, vs| {
            ev.iter().map(|(idx, c)| c.value(x) * basis_eval(idx, vs)).sum()
        });
        form.with_analytic_d(move || {
            let mut dterms = Vec::new();
            for (idx, c) in terms.iter() {
                for l in 0..dim {
                    if idx.contains(&l) {
                        continue;
                    }
                    let mut j = vec![l];
                    j.extend_from_slice(idx);
                    dterms.push((j, c.partial(l)));
                }
            }
            Form::from_coefficients(dim, degree + 1, dterms).expect("derived terms are valid")
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_analytic_d(&self) -> bool {
        self.analytic_d.is_some()
    }

    pub fn analytic_derivative(&self) -> Option<Form> {
        self.analytic_d.as_ref().map(|d| d())
    }

    pub fn eval(&self, x: &[f64], vs: &[&[f64]]) -> f64 {
        assert_eq!(vs.len(), self.degree, "form of degree {} given {} vectors", self.degree, vs.len());
        (self.eval)(x, vs)
    }

    pub fn eval_vecs(&self, x: &[f64], vs: &[Vec<f64>]) -> f64 {
        let refs: Vec<&[f64]> = vs.iter().map(|v| v.as_slice()).collect();
        self.eval(x, &refs)
    }

    pub fn scale(&self, c: f64) -> Form {
        let a = self.clone();
        let out = Form::new(self.dim, self.degree, move |x, vs| c * a.eval(x, vs));
        match &self.analytic_d {
            Some(d) => {
                let d = d.clone();
                out.with_analytic_d(move || d().scale(c))
            }
            None => out,
        }
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same(other)?;
        let (a, b) = (self.clone(), other.clone());
        let out = Form::new(self.dim, self.degree, move |x, vs| a.eval(x, vs) + b.eval(x, vs));
        Ok(match (&self.analytic_d, &other.analytic_d) {
            (Some(da), Some(db)) => {
                let (da, db) = (da.clone(), db.clone());
                out.with_analytic_d(move || da().add(&db()).expect("same shape"))
            }
            _ => out,
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.scale(-1.0))
    }

    fn check_same(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!("cannot add degrees {} and {}", self.degree, other.degree)));
        }
        Ok(())
    }

    /// Exterior product by the shuffle sum.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let (p, q) = (self.degree, other.degree);
        let table = Arc::new(shuffles(p + q, p));
        let (a, b) = (self.clone(), other.clone());
        let out = Form::new(self.dim, p + q, move |x, vs| {
            table
                .iter()
                .map(|s| {
                    let va: Vec<&[f64]> = s.first.iter().map(|&i| vs[i]).collect();
                    let vb: Vec<&[f64]> = s.second.iter().map(|&i| vs[i]).collect();
                    s.sign * a.eval(x, &va) * b.eval(x, &vb)
                })
                .sum()
        });
        Ok(match (&self.analytic_d, &other.analytic_d) {
            (Some(_), Some(_)) => {
                let (a, b) = (self.clone(), other.clone());
                out.with_analytic_d(move || {
                    let da = a.analytic_derivative().expect("present");
                    let db = b.analytic_derivative().expect("present");
                    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                    da.wedge(&b)
                        .and_then(|t1| t1.add(&a.wedge(&db)?.scale(sign)))
                        .expect("same chart")
                })
            }
            _ => out,
        })
    }

    /// `i_X a`, inserting `X` into the first slot.
    pub fn interior(&self, x: &VectorField) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::InteriorOfFunction);
        }
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let (a, x) = (self.clone(), x.clone());
        Ok(Form::new(self.dim, self.degree - 1, move |p, vs| {
            let xv = x.at(p);
            let mut args: Vec<&[f64]> = Vec::with_capacity(vs.len() + 1);
            args.push(&xv);
            args.extend_from_slice(vs);
            a.eval(p, &args)
        }))
    }

    /// Interior product with the degree-0 convention: `i_X` of a function is zero.
    pub fn interior_or_zero(&self, x: &VectorField) -> Result<Form> {
        if self.degree == 0 {
            Ok(Form::zero(self.dim, 0))
        } else {
            self.interior(x)
        }
    }

    /// The exact derivative when one is attached, otherwise the coordinate
    /// formula with coordinate partial derivatives.
    pub fn exterior_derivative(&self, fd: Fd) -> Form {
        if let Some(d) = &self.analytic_d {
            return d();
        }
        self.fd_exterior_derivative(fd)
    }

    /// Finite-difference exterior derivative, ignoring any analytic one.
    pub fn fd_exterior_derivative(&self, fd: Fd) -> Form {
        let a = self.clone();
        let dim = self.dim;
        Form::new(dim, self.degree + 1, move |x, vs| {
            let mut total = 0.0;
            for i in 0..vs.len() {
                let rest: Vec<&[f64]> =
                    vs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v).collect();
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                for (j, &c) in vs[i].iter().enumerate().filter(|(_, c)| **c != 0.0) {
                    let g = |t: f64| {
                        let mut xt = x.to_vec();
                        xt[j] += t;
                        a.eval(&xt, &rest)
                    };
                    total += sign * c * fd.derivative(g);
                }
            }
            total
        })
    }

    /// `φ* a` for `φ` mapping into this form's chart.
    pub fn pullback(&self, phi: &SmoothMap) -> Result<Form> {
        if phi.dim_out() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: phi.dim_out() });
        }
        let (a, map) = (self.clone(), phi.clone());
        let out = Form::new(phi.dim_in(), self.degree, move |x, vs| {
            let y = map.apply(x);
            if vs.is_empty() {
                return a.eval(&y, &[]);
            }
            let j = map.jacobian_at(x);
            let pushed: Vec<Vec<f64>> = vs
                .iter()
                .map(|v| (&j * DVector::from_column_slice(v)).iter().copied().collect())
                .collect();
            a.eval_vecs(&y, &pushed)
        });
        Ok(match &self.analytic_d {
            Some(_) => {
                let (a, map) = (self.clone(), phi.clone());
                out.with_analytic_d(move || {
                    a.analytic_derivative().expect("present").pullback(&map).expect("checked")
                })
            }
            None => out,
        })
    }

    /// Cartan formula `L_X = i_X d + d i_X`; for functions `L_X h = dh(X)`.
    pub fn lie_derivative(&self, x: &VectorField, fd: Fd) -> Result<Form> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let da = self.exterior_derivative(fd);
        if self.degree == 0 {
            return da.interior(x);
        }
        let first = da.interior(x)?;
        let second = self.interior(x)?.exterior_derivative(fd);
        first.add(&second)
    }

    /// `d/dt (φ_t^X)* a` at `t = 0` by central differences of the flow.
    pub fn lie_derivative_flow(&self, x: &VectorField, fd: Fd) -> Result<Form> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let (a, x) = (self.clone(), x.clone());
        Ok(Form::new(self.dim, self.degree, move |p, vs| {
            fd.derivative(|t| {
                if t == 0.0 {
                    return a.eval(p, vs);
                }
                a.pullback(&x.flow(t)).expect("same chart").eval(p, vs)
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    const EX: [f64; 2] = [1.0, 0.0];
    const EY: [f64; 2] = [0.0, 1.0];

    fn dx() -> Form {
        Form::coordinate(2, 0)
    }
    fn dy() -> Form {
        Form::coordinate(2, 1)
    }

    #[test]
    fn wedge_examples() {
        let w = dx().wedge(&dy()).unwrap();
        assert_eq!(w.eval(&[0.3, 0.1], &[&EX, &EY]), 1.0);
        assert_eq!(w.eval(&[0.3, 0.1], &[&EY, &EX]), -1.0);
        let z = dx().wedge(&dx()).unwrap();
        assert_eq!(z.eval(&[0.0, 0.0], &[&[0.4, 1.2], &[-2.0, 0.5]]), 0.0);
        assert!(Form::coordinate(3, 0).wedge(&dy()).is_err());
    }

    #[test]
    fn interior_examples() {
        let w = dx().wedge(&dy()).unwrap();
        let ix = w.interior(&VectorField::constant(&EX)).unwrap();
        let iy = w.interior(&VectorField::constant(&EY)).unwrap();
        let v = [0.7, -1.3];
        assert!((ix.eval(&[0.0, 0.0], &[&v]) - v[1]).abs() < 1e-15);
        assert!((iy.eval(&[0.0, 0.0], &[&v]) + v[0]).abs() < 1e-15);
        let x = VectorField::new(2, |p| vec![p[1], p[0] * p[0]]);
        let twice = w.interior(&x).unwrap().interior(&x).unwrap();
        assert_eq!(twice.eval(&[0.4, 0.9], &[]), 0.0);
        assert_eq!(Form::constant(2, 1.0).interior(&x).unwrap_err(), Error::InteriorOfFunction);
    }

    #[test]
    fn derivative_examples() {
        let xdy = Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::coordinate(2, 0))]).unwrap();
        let d = xdy.fd_exterior_derivative(Fd::default());
        assert!((d.eval(&[0.2, 0.5], &[&EX, &EY]) - 1.0).abs() < 1e-10);
        let dd = dx().wedge(&dy()).unwrap().fd_exterior_derivative(Fd::default());
        assert!(dd.degree() == 3);
        let sin_dy = Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::wave(1.0, &[1.0, 0.0], 0.0))]).unwrap();
        let d = sin_dy.fd_exterior_derivative(Fd::new(1e-4));
        assert!((d.eval(&[0.0, 0.0], &[&EX, &EY]) - 1.0).abs() < 1e-8);
        let exact = sin_dy.exterior_derivative(Fd::default());
        assert!((exact.eval(&[0.0, 0.0], &[&EX, &EY]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pullback_of_dy_along_the_circle() {
        let f = SmoothMap::new(1, 2, |t| vec![t[0].cos(), t[0].sin()]);
        let pb = dy().pullback(&f).unwrap();
        for th in [0.0, 0.4, 2.0, 5.5] {
            assert!((pb.eval(&[th], &[&[1.0]]) - f64::cos(th)).abs() < 1e-9);
        }
        let id = dx().wedge(&dy()).unwrap().pullback(&SmoothMap::identity(2)).unwrap();
        assert_eq!(id.eval(&[0.1, 0.2], &[&EX, &EY]), 1.0);
        assert!(dy().pullback(&SmoothMap::identity(3)).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let xdy = Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::coordinate(2, 0))]).unwrap();
        let l = xdy.lie_derivative(&VectorField::constant(&EX), Fd::default()).unwrap();
        let v = [0.3, 0.8];
        assert!((l.eval(&[0.5, -0.2], &[&v]) - v[1]).abs() < 1e-8);

        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -3.0, -1.0]);
        let x = VectorField::linear(a, DVector::zeros(2));
        let vol = dx().wedge(&dy()).unwrap();
        let l = vol.lie_derivative(&x, Fd::default()).unwrap();
        assert!(l.eval(&[0.3, 0.4], &[&EX, &EY]).abs() < 1e-8);
        let lf = vol.lie_derivative_flow(&x, Fd::default()).unwrap();
        assert!(lf.eval(&[0.3, 0.4], &[&EX, &EY]).abs() < 1e-8);
    }
}
