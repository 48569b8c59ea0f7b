use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spectral::{self, Plans, TrigInterpolant};
use crate::error::{Error, Result};
use crate::forms::Form;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Circle,
    Torus2,
    Interval,
    /// The oriented boundary points of an interval.
    Points,
}

/// A uniform discretization of a compact oriented source manifold `S`.
///
/// Periodic charts are `[0, 2π)^k`; the interval is `[0, 1]`. Node coordinates
/// are stored in chart coordinates, which for boundary points are those of
/// the interval they bound.
#[derive(Clone, Debug)]
pub struct SourceDomain {
    kind: DomainKind,
    shape: Vec<usize>,
    chart_dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    signs: Vec<f64>,
    orientation: f64,
    plans: Option<Arc<Plans>>,
}

/// Boundary of a domain together with the inclusion of its nodes.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub domain: Arc<SourceDomain>,
    pub node_map: Vec<usize>,
}

impl SourceDomain {
    pub fn circle(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Invalid(format!("circle needs at least 4 nodes, got {n}")));
        }
        let coords = (0..n).map(|i| TWO_PI * i as f64 / n as f64).collect();
        Ok(Self {
            kind: DomainKind::Circle,
            shape: vec![n],
            chart_dim: 1,
            coords,
            weights: vec![TWO_PI / n as f64; n],
            signs: vec![1.0; n],
            orientation: 1.0,
            plans: Some(Arc::new(Plans::new(&[n]))),
        })
    }

    pub fn torus2(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 4 || n2 < 4 {
            return Err(Error::Invalid(format!("torus needs at least 4x4 nodes, got {n1}x{n2}")));
        }
        let mut coords = Vec::with_capacity(2 * n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                coords.push(TWO_PI * i as f64 / n1 as f64);
                coords.push(TWO_PI * j as f64 / n2 as f64);
            }
        }
        let w = TWO_PI * TWO_PI / (n1 * n2) as f64;
        Ok(Self {
            kind: DomainKind::Torus2,
            shape: vec![n1, n2],
            chart_dim: 2,
            coords,
            weights: vec![w; n1 * n2],
            signs: vec![1.0; n1 * n2],
            orientation: 1.0,
            plans: Some(Arc::new(Plans::new(&[n1, n2]))),
        })
    }

    /// `[0, 1]` with `n` uniform nodes and fourth-order Gregory weights.
    pub fn interval(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::Invalid(format!("interval needs at least 8 nodes, got {n}")));
        }
        let h = 1.0 / (n - 1) as f64;
        let coords = (0..n).map(|i| i as f64 * h).collect();
        let mut weights = vec![h; n];
        for (i, w) in [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0].into_iter().enumerate() {
            weights[i] = w * h;
            weights[n - 1 - i] = w * h;
        }
        Ok(Self {
            kind: DomainKind::Interval,
            shape: vec![n],
            chart_dim: 1,
            coords,
            weights,
            signs: vec![1.0; n],
            orientation: 1.0,
            plans: None,
        })
    }

    /// Build from a kind and per-axis node counts (torus takes one or two counts).
    pub fn from_spec(kind: DomainKind, nodes: &[usize]) -> Result<Self> {
        let first = *nodes.first().ok_or_else(|| Error::Invalid("no node count given".into()))?;
        match kind {
            DomainKind::Circle => Self::circle(first),
            DomainKind::Interval => Self::interval(first),
            DomainKind::Torus2 => Self::torus2(first, *nodes.get(1).unwrap_or(&first)),
            DomainKind::Points => Err(Error::UnsupportedDomain("boundary points are derived, not built".into())),
        }
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Intrinsic dimension `k`.
    pub fn dim(&self) -> usize {
        match self.kind {
            DomainKind::Points => 0,
            _ => self.chart_dim,
        }
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, DomainKind::Circle | DomainKind::Torus2)
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.chart_dim..(i + 1) * self.chart_dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Per-node multiplier used by oriented integration.
    pub fn signed_weight(&self, i: usize) -> f64 {
        self.weights[i] * self.signs[i] * self.orientation
    }

    /// Total `k`-volume, `Σ weights`.
    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Same grid with the opposite orientation.
    pub fn reversed(&self) -> Self {
        Self { orientation: -self.orientation, ..self.clone() }
    }

    /// Oriented coordinate frame of `T_s S` in chart coordinates.
    pub fn frame(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|a| {
                let mut e = vec![0.0; self.chart_dim];
                e[a] = 1.0;
                e
            })
            .collect()
    }

    /// Coordinate volume form of the chart, scaled by `1 / vol(S)` when
    /// `normalized` so that it integrates to one.
    pub fn volume_form(&self, normalized: bool) -> Form {
        let scale = if normalized { 1.0 / self.volume() } else { 1.0 };
        Form::volume(self.chart_dim).scale(scale)
    }

    pub fn boundary(&self) -> Option<Boundary> {
        if self.kind != DomainKind::Interval {
            return None;
        }
        let n = self.len();
        let domain = SourceDomain {
            kind: DomainKind::Points,
            shape: vec![2],
            chart_dim: 1,
            coords: vec![0.0, 1.0],
            weights: vec![1.0, 1.0],
            signs: vec![-1.0, 1.0],
            orientation: self.orientation,
            plans: None,
        };
        Some(Boundary { domain: Arc::new(domain), node_map: vec![0, n - 1] })
    }

    /// Reduce a chart point to the fundamental domain of a periodic chart.
    pub fn wrap(&self, p: &[f64]) -> Vec<f64> {
        if self.is_periodic() {
            p.iter().map(|x| x.rem_euclid(TWO_PI)).collect()
        } else {
            p.to_vec()
        }
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dim() {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim() });
        }
        Ok(())
    }

    /// Partial derivative of a node-sampled scalar field along `axis`.
    pub fn differentiate(&self, field: &[f64], axis: usize) -> Result<Vec<f64>> {
        self.check_axis(axis)?;
        if field.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: field.len() });
        }
        match self.kind {
            DomainKind::Circle => Ok(spectral::derivative(self.plans(), field)),
            DomainKind::Torus2 => {
                let (n1, n2) = (self.shape[0], self.shape[1]);
                let mut out = vec![0.0; field.len()];
                if axis == 0 {
                    let mut line = vec![0.0; n1];
                    for j in 0..n2 {
                        for i in 0..n1 {
                            line[i] = field[i * n2 + j];
                        }
                        for (i, d) in spectral::derivative(self.plans(), &line).into_iter().enumerate() {
                            out[i * n2 + j] = d;
                        }
                    }
                } else {
                    for i in 0..n1 {
                        let d = spectral::derivative(self.plans(), &field[i * n2..(i + 1) * n2]);
                        out[i * n2..(i + 1) * n2].copy_from_slice(&d);
                    }
                }
                Ok(out)
            }
            DomainKind::Interval => Ok(fd4_derivative(field, 1.0 / (self.len() - 1) as f64)),
            DomainKind::Points => unreachable!("checked by axis test"),
        }
    }

    /// Componentwise derivative of an `m`-vector field stored node-major.
    pub fn differentiate_vector(&self, values: &[f64], m: usize, axis: usize) -> Result<Vec<f64>> {
        if values.len() != self.len() * m {
            return Err(Error::DimensionMismatch { expected: self.len() * m, found: values.len() });
        }
        let mut out = vec![0.0; values.len()];
        for c in 0..m {
            let comp: Vec<f64> = values.iter().skip(c).step_by(m).copied().collect();
            let d = self.differentiate(&comp, axis)?;
            for (i, v) in d.into_iter().enumerate() {
                out[i * m + c] = v;
            }
        }
        Ok(out)
    }

    /// Index of the node at chart point `p`, if `p` is a node up to `tol`.
    pub fn node_index_at(&self, p: &[f64], tol: f64) -> Option<usize> {
        match self.kind {
            DomainKind::Circle | DomainKind::Torus2 => {
                let mut idx = 0;
                for (a, &n) in self.shape.iter().enumerate() {
                    let t = p[a].rem_euclid(TWO_PI) / TWO_PI * n as f64;
                    let r = t.round();
                    if (t - r).abs() * TWO_PI / n as f64 > tol {
                        return None;
                    }
                    idx = idx * n + (r as usize % n);
                }
                Some(idx)
            }
            DomainKind::Interval => {
                let n = self.len();
                let t = p[0] * (n - 1) as f64;
                let r = t.round();
                if r < 0.0 || r > (n - 1) as f64 || (t - r).abs() / (n - 1) as f64 > tol {
                    return None;
                }
                Some(r as usize)
            }
            DomainKind::Points => (0..self.len()).find(|&i| (self.node(i)[0] - p[0]).abs() <= tol),
        }
    }

    /// Values of an `m`-vector field at arbitrary chart points: trigonometric
    /// interpolation on periodic grids, sixth-order local Lagrange on the
    /// interval. Points that coincide with nodes return the node value.
    pub fn resample(&self, values: &[f64], m: usize, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        if values.len() != self.len() * m {
            return Err(Error::DimensionMismatch { expected: self.len() * m, found: values.len() });
        }
        let mut out = vec![0.0; points.len() * m];
        match self.kind {
            DomainKind::Circle | DomainKind::Torus2 => {
                let mut interps: Vec<Option<TrigInterpolant>> = vec![None; m];
                for (pi, p) in points.iter().enumerate() {
                    if let Some(i) = self.node_index_at(p, 1e-12) {
                        out[pi * m..(pi + 1) * m].copy_from_slice(&values[i * m..(i + 1) * m]);
                        continue;
                    }
                    let wrapped = self.wrap(p);
                    for c in 0..m {
                        let it = interps[c].get_or_insert_with(|| {
                            let comp: Vec<f64> = values.iter().skip(c).step_by(m).copied().collect();
                            TrigInterpolant::new(self.plans(), &self.shape, &comp)
                        });
                        out[pi * m + c] = it.eval(&wrapped);
                    }
                }
            }
            DomainKind::Interval => {
                let n = self.len();
                for (pi, p) in points.iter().enumerate() {
                    let x = p[0];
                    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
                        return Err(Error::OutsideDomain(x));
                    }
                    if let Some(i) = self.node_index_at(p, 1e-13) {
                        out[pi * m..(pi + 1) * m].copy_from_slice(&values[i * m..(i + 1) * m]);
                        continue;
                    }
                    let stencil = lagrange_stencil(x, n);
                    for (node, w) in stencil {
                        for c in 0..m {
                            out[pi * m + c] += w * values[node * m + c];
                        }
                    }
                }
            }
            DomainKind::Points => {
                for (pi, p) in points.iter().enumerate() {
                    let i = self.node_index_at(p, 1e-12).ok_or(Error::OutsideDomain(p[0]))?;
                    out[pi * m..(pi + 1) * m].copy_from_slice(&values[i * m..(i + 1) * m]);
                }
            }
        }
        Ok(out)
    }

    fn plans(&self) -> &Plans {
        self.plans.as_deref().expect("periodic domains carry FFT plans")
    }

    pub(crate) fn spectral_plans(&self) -> Option<&Plans> {
        self.plans.as_deref()
    }
}

/// Fourth-order finite-difference derivative on a uniform grid, centered in
/// the interior with one-sided closures at both ends.
fn fd4_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5])
        / (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
    d
}

/// Six-point Lagrange weights for `x ∈ [0, 1]` on `n` uniform nodes.
fn lagrange_stencil(x: f64, n: usize) -> Vec<(usize, f64)> {
    let h = 1.0 / (n - 1) as f64;
    let centre = (x / h).floor() as i64;
    let start = (centre - 2).clamp(0, n as i64 - 6) as usize;
    let nodes: Vec<usize> = (start..start + 6).collect();
    nodes
        .iter()
        .map(|&j| {
            let xj = j as f64 * h;
            let w = nodes
                .iter()
                .filter(|&&l| l != j)
                .map(|&l| (x - l as f64 * h) / (xj - l as f64 * h))
                .product();
            (j, w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_volume() {
        assert!((SourceDomain::circle(64).unwrap().volume() - TWO_PI).abs() < 1e-13);
        assert!((SourceDomain::torus2(16, 8).unwrap().volume() - TWO_PI * TWO_PI).abs() < 1e-12);
        assert!((SourceDomain::interval(33).unwrap().volume() - 1.0).abs() < 1e-14);
        assert!(SourceDomain::interval(33).unwrap().weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn boundary_only_for_interval() {
        assert!(SourceDomain::circle(8).unwrap().boundary().is_none());
        assert!(SourceDomain::torus2(8, 8).unwrap().boundary().is_none());
        let b = SourceDomain::interval(16).unwrap().boundary().unwrap();
        assert_eq!(b.domain.len(), 2);
        assert_eq!(b.node_map, vec![0, 15]);
        assert_eq!(b.domain.signed_weight(0), -1.0);
        assert_eq!(b.domain.signed_weight(1), 1.0);
    }

    #[test]
    fn derivative_examples() {
        let c = SourceDomain::circle(64).unwrap();
        let s: Vec<f64> = (0..64).map(|i| c.node(i)[0].sin()).collect();
        let d = c.differentiate(&s, 0).unwrap();
        let err = (0..64).map(|i| (d[i] - c.node(i)[0].cos()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13);

        let const_field = vec![2.5; 64];
        assert!(c.differentiate(&const_field, 0).unwrap().iter().all(|v| v.abs() < 1e-13));
        assert_eq!(c.differentiate(&s, 1).unwrap_err(), Error::AxisOutOfRange { axis: 1, dim: 1 });

        let t = SourceDomain::torus2(32, 16).unwrap();
        let f: Vec<f64> = (0..t.len()).map(|i| (3.0 * t.node(i)[0]).sin() * t.node(i)[1].cos()).collect();
        let dx = t.differentiate(&f, 0).unwrap();
        let err = (0..t.len())
            .map(|i| (dx[i] - 3.0 * (3.0 * t.node(i)[0]).cos() * t.node(i)[1].cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn interval_derivative_is_fourth_order() {
        let err = |n: usize| {
            let d = SourceDomain::interval(n).unwrap();
            let f: Vec<f64> = (0..n).map(|i| (2.0 * d.node(i)[0]).exp()).collect();
            let df = d.differentiate(&f, 0).unwrap();
            (0..n).map(|i| (df[i] - 2.0 * (2.0 * d.node(i)[0]).exp()).abs()).fold(0.0, f64::max)
        };
        let order = (err(33) / err(65)).log2();
        assert!(order > 3.5, "order {order}");
        let d = SourceDomain::interval(20).unwrap();
        assert!(d.differentiate(&[1.0; 20], 0).unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn resample_rejects_points_outside_the_interval() {
        let d = SourceDomain::interval(16).unwrap();
        let v: Vec<f64> = (0..16).map(|i| d.node(i)[0]).collect();
        assert_eq!(d.resample(&v, 1, &[vec![1.5]]).unwrap_err(), Error::OutsideDomain(1.5));
        let x = d.resample(&v, 1, &[vec![0.3337]]).unwrap();
        assert!((x[0] - 0.3337).abs() < 1e-14);
    }
}
