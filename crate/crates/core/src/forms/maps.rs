//! Smooth maps between flat charts and vector fields on them.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::scalar::ScalarFn;
use crate::error::{Error, Result};

type PointFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// Central-difference width used for Jacobians that are not supplied.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// A smooth map `R^n → R^m`, with an optional inverse (making it a diffeomorphism
/// chart) and an optional analytic Jacobian.
#[derive(Clone)]
pub struct SmoothMap {
    dim_in: usize,
    dim_out: usize,
    forward: Arc<PointFn>,
    inverse: Option<Arc<PointFn>>,
    jacobian: Option<Arc<JacobianFn>>,
}

/// Name used throughout for maps that are meant to be invertible.
pub type DiffeoChart = SmoothMap;

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothMap")
            .field("dim_in", &self.dim_in)
            .field("dim_out", &self.dim_out)
            .field("invertible", &self.inverse.is_some())
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl SmoothMap {
    pub fn new<F>(dim_in: usize, dim_out: usize, forward: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self { dim_in, dim_out, forward: Arc::new(forward), inverse: None, jacobian: None }
    }

    pub fn with_inverse<F>(mut self, inverse: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn with_jacobian<F>(mut self, jacobian: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    pub fn identity(dim: usize) -> Self {
        Self::affine(DMatrix::identity(dim, dim), DVector::zeros(dim))
            .expect("identity is invertible")
    }

    /// `x ↦ A x + b`. Square invertible `A` also yields the inverse.
    pub fn affine(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let (m, n) = a.shape();
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: b.len() });
        }
        let (af, bf) = (a.clone(), b.clone());
        let mut map = Self::new(n, m, move |x| {
            let x = DVector::from_column_slice(x);
            (&af * x + &bf).iter().copied().collect()
        });
        let aj = a.clone();
        map = map.with_jacobian(move |_| aj.clone());
        if m == n {
            if let Some(inv) = a.clone().try_inverse() {
                map = map.with_inverse(move |y| {
                    let y = DVector::from_column_slice(y);
                    (&inv * (y - &b)).iter().copied().collect()
                });
            }
        }
        Ok(map)
    }

    /// Map given by coefficient functions, with exact Jacobian.
    pub fn from_components(components: Vec<ScalarFn>) -> Self {
        let dim_in = components.first().map(|c| c.dim()).unwrap_or(0);
        let dim_out = components.len();
        let partials: Vec<Vec<ScalarFn>> = components
            .iter()
            .map(|c| (0..dim_in).map(|l| c.partial(l)).collect())
            .collect();
        Self::new(dim_in, dim_out, move |x| components.iter().map(|c| c.value(x)).collect())
            .with_jacobian(move |x| {
                DMatrix::from_fn(dim_out, dim_in, |i, j| partials[i][j].value(x))
            })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (self.forward)(x)
    }

    pub fn apply_inverse(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.inverse.as_ref().map(|g| g(y)).ok_or(Error::MissingInverse)
    }

    pub fn inverse(&self) -> Result<SmoothMap> {
        let inv = self.inverse.clone().ok_or(Error::MissingInverse)?;
        Ok(SmoothMap {
            dim_in: self.dim_out,
            dim_out: self.dim_in,
            forward: inv,
            inverse: Some(self.forward.clone()),
            jacobian: None,
        })
    }

    pub fn jacobian_at(&self, x: &[f64]) -> DMatrix<f64> {
        match &self.jacobian {
            Some(j) => j(x),
            None => fd_jacobian(&*self.forward, x, self.dim_out, JACOBIAN_STEP),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap> {
        if inner.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: inner.dim_out });
        }
        let (o, i) = (self.clone(), inner.clone());
        let mut map = SmoothMap::new(inner.dim_in, self.dim_out, move |x| o.apply(&i.apply(x)));
        let (o, i) = (self.clone(), inner.clone());
        map = map.with_jacobian(move |x| {
            let y = i.apply(x);
            o.jacobian_at(&y) * i.jacobian_at(x)
        });
        if let (Some(_), Some(_)) = (&self.inverse, &inner.inverse) {
            let (o, i) = (self.clone(), inner.clone());
            map = map.with_inverse(move |z| {
                let y = o.apply_inverse(z).expect("checked");
                i.apply_inverse(&y).expect("checked")
            });
        }
        Ok(map)
    }

    /// `1 × self` on `R^c × R^n`: identity on the first `c` coordinates.
    pub fn product_with_identity(&self, c: usize) -> SmoothMap {
        let inner = self.clone();
        let (n, m) = (self.dim_in, self.dim_out);
        let mut map = SmoothMap::new(c + n, c + m, move |x| {
            let mut out = x[..c].to_vec();
            out.extend(inner.apply(&x[c..]));
            out
        });
        let inner = self.clone();
        map = map.with_jacobian(move |x| {
            let mut j = DMatrix::zeros(c + m, c + n);
            for i in 0..c {
                j[(i, i)] = 1.0;
            }
            j.view_mut((c, c), (m, n)).copy_from(&inner.jacobian_at(&x[c..]));
            j
        });
        map
    }
}

pub(crate) fn fd_jacobian(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], dim_out: usize, h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut j = DMatrix::zeros(dim_out, n);
    let mut xp = x.to_vec();
    for c in 0..n {
        xp[c] = x[c] + h;
        let fp = f(&xp);
        xp[c] = x[c] - h;
        let fm = f(&xp);
        xp[c] = x[c];
        for r in 0..dim_out {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

/// A vector field on a flat chart `R^d`.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    value: Arc<PointFn>,
    jacobian: Option<Arc<JacobianFn>>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField").field("dim", &self.dim).finish()
    }
}

impl VectorField {
    pub fn new<F>(dim: usize, value: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self { dim, value: Arc::new(value), jacobian: None }
    }

    pub fn with_jacobian<F>(mut self, jacobian: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    pub fn constant(v: &[f64]) -> Self {
        let v = v.to_vec();
        let d = v.len();
        Self::new(d, move |_| v.clone()).with_jacobian(move |_| DMatrix::zeros(d, d))
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(&vec![0.0; dim])
    }

    /// `x ↦ A x + b`.
    pub fn linear(a: DMatrix<f64>, b: DVector<f64>) -> Self {
        let d = b.len();
        let (af, bf) = (a.clone(), b);
        Self::new(d, move |x| (&af * DVector::from_column_slice(x) + &bf).iter().copied().collect())
            .with_jacobian(move |_| a.clone())
    }

    pub fn from_components(components: Vec<ScalarFn>) -> Self {
        let d = components.len();
        let partials: Vec<Vec<ScalarFn>> = components
            .iter()
            .map(|c| (0..d).map(|l| c.partial(l)).collect())
            .collect();
        Self::new(d, move |x| components.iter().map(|c| c.value(x)).collect())
            .with_jacobian(move |x| DMatrix::from_fn(d, d, |i, j| partials[i][j].value(x)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }

    pub fn jacobian_at(&self, x: &[f64]) -> DMatrix<f64> {
        match &self.jacobian {
            Some(j) => j(x),
            None => fd_jacobian(&*self.value, x, self.dim, JACOBIAN_STEP),
        }
    }

    pub fn scale(&self, c: f64) -> VectorField {
        let s = self.clone();
        let t = self.clone();
        VectorField::new(self.dim, move |x| s.at(x).into_iter().map(|v| c * v).collect())
            .with_jacobian(move |x| t.jacobian_at(x) * c)
    }

    /// Vector-field bracket `[X, Y] = DY·X − DX·Y`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let (x, y) = (self.clone(), other.clone());
        VectorField::new(self.dim, move |p| {
            let xv = DVector::from_vec(x.at(p));
            let yv = DVector::from_vec(y.at(p));
            (y.jacobian_at(p) * &xv - x.jacobian_at(p) * &yv).iter().copied().collect()
        })
    }

    /// Time-`t` flow, integrated with classical RK4 together with its
    /// variational equation so the Jacobian comes out consistently.
    pub fn flow(&self, t: f64) -> SmoothMap {
        let steps = ((t.abs() / 0.01).ceil() as usize).max(1);
        let (fwd, bwd, jac) = (self.clone(), self.clone(), self.clone());
        SmoothMap::new(self.dim, self.dim, move |x| fwd.integrate(x, t, steps).0)
            .with_inverse(move |x| bwd.integrate(x, -t, steps).0)
            .with_jacobian(move |x| jac.integrate(x, t, steps).1)
    }

    fn integrate(&self, x0: &[f64], t: f64, steps: usize) -> (Vec<f64>, DMatrix<f64>) {
        let d = self.dim;
        let dt = t / steps as f64;
        let mut x = DVector::from_column_slice(x0);
        let mut j = DMatrix::<f64>::identity(d, d);
        let rhs = |x: &DVector<f64>, j: &DMatrix<f64>| {
            let xs = x.as_slice();
            (DVector::from_vec(self.at(xs)), self.jacobian_at(xs) * j)
        };
        for _ in 0..steps {
            let (k1, l1) = rhs(&x, &j);
            let (k2, l2) = rhs(&(&x + &k1 * (dt / 2.0)), &(&j + &l1 * (dt / 2.0)));
            let (k3, l3) = rhs(&(&x + &k2 * (dt / 2.0)), &(&j + &l2 * (dt / 2.0)));
            let (k4, l4) = rhs(&(&x + &k3 * dt), &(&j + &l3 * dt));
            x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            j += (l1 + l2 * 2.0 + l3 * 2.0 + l4) * (dt / 6.0);
        }
        (x.iter().copied().collect(), j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_flow_matches_matrix_exponential() {
        // rotation generator: exp(tA) is a rotation by t
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let phi = VectorField::linear(a, DVector::zeros(2)).flow(0.3);
        let y = phi.apply(&[1.0, 0.0]);
        assert!((y[0] - 0.3f64.cos()).abs() < 1e-10);
        assert!((y[1] - 0.3f64.sin()).abs() < 1e-10);
        let back = phi.apply_inverse(&y).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-10 && back[1].abs() < 1e-10);
        let j = phi.jacobian_at(&[0.2, 0.4]);
        assert!((j[(0, 0)] - 0.3f64.cos()).abs() < 1e-10);
        assert!((j[(1, 0)] - 0.3f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn composition_chain_rule() {
        let f = SmoothMap::from_components(vec![
            ScalarFn::wave(1.0, &[1.0, 0.0], 0.0),
            ScalarFn::monomial(2, 1.0, &[1, 1]),
        ]);
        let g = SmoothMap::new(2, 2, |x| vec![x[0] + x[1] * x[1], x[0].exp()]);
        let c = g.compose(&f).unwrap();
        let x = [0.4, -0.3];
        let fd = fd_jacobian(&|p: &[f64]| g.apply(&f.apply(p)), &x, 2, 1e-6);
        assert!((c.jacobian_at(&x) - fd).abs().max() < 1e-8);
    }

    #[test]
    fn affine_inverse_round_trip() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 3.0]);
        let m = SmoothMap::affine(a, DVector::from_vec(vec![1.0, -2.0])).unwrap();
        let x = [0.7, 0.1];
        let back = m.apply_inverse(&m.apply(&x)).unwrap();
        assert!((back[0] - x[0]).abs() < 1e-14 && (back[1] - x[1]).abs() < 1e-14);
        assert!(SmoothMap::new(1, 1, |x| x.to_vec()).apply_inverse(&[0.0]).is_err());
    }
}
