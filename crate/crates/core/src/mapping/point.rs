//! Discretized maps `f: S → M` and vector fields along them.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::source::SourceDomain;

/// The target manifold of a map.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// `R^m`.
    Euclidean,
    /// `R^m / (periods · Z^m)`. Values are stored as a continuous lift.
    FlatTorus { periods: Vec<f64> },
}

/// A map `f ∈ F(S, M)` sampled at the nodes of `S`, node-major.
///
/// Maps into a flat torus are stored as lifts `f̃(s) = P(s) + D s` with `P`
/// periodic on periodic sources; `D` (`m × k`, row-major) is the drift.
#[derive(Clone, Debug)]
pub struct MapPoint {
    dom: Arc<SourceDomain>,
    m: usize,
    values: Arc<Vec<f64>>,
    drift: Arc<Vec<f64>>,
    target: Target,
    tangent_map: Arc<OnceLock<Vec<Vec<f64>>>>,
}

impl MapPoint {
    pub fn new(dom: Arc<SourceDomain>, m: usize, values: Vec<f64>) -> Result<Self> {
        let k = dom.dim();
        Self::build(dom, m, values, vec![0.0; m * k], Target::Euclidean)
    }

    pub fn from_fn(dom: Arc<SourceDomain>, m: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let values = sample(&dom, m, f)?;
        Self::new(dom, m, values)
    }

    /// A map into the flat torus with the given periods, from its lift and
    /// drift matrix.
    pub fn on_flat_torus(dom: Arc<SourceDomain>, periods: Vec<f64>, drift: Vec<f64>, lift: Vec<f64>) -> Result<Self> {
        let m = periods.len();
        if drift.len() != m * dom.dim() {
            return Err(Error::DimensionMismatch { expected: m * dom.dim(), found: drift.len() });
        }
        Self::build(dom, m, lift, drift, Target::FlatTorus { periods })
    }

    fn build(dom: Arc<SourceDomain>, m: usize, values: Vec<f64>, drift: Vec<f64>, target: Target) -> Result<Self> {
        if values.len() != dom.len() * m {
            return Err(Error::DimensionMismatch { expected: dom.len() * m, found: values.len() });
        }
        Ok(Self {
            dom,
            m,
            values: Arc::new(values),
            drift: Arc::new(drift),
            target,
            tangent_map: Arc::new(OnceLock::new()),
        })
    }

    fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::build(self.dom.clone(), self.m, values, self.drift.to_vec(), self.target.clone())
    }

    pub fn domain(&self) -> &Arc<SourceDomain> {
        &self.dom
    }

    /// Dimension of the target.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.dom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dom.is_empty()
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    /// `∂f/∂s_a` at every node, one node-major array per source axis.
    pub fn tangent_map(&self) -> &[Vec<f64>] {
        self.tangent_map.get_or_init(|| {
            let (m, k) = (self.m, self.dom.dim());
            (0..k)
                .map(|a| {
                    let periodic: Vec<f64> = if self.dom.is_periodic() {
                        (0..self.len())
                            .flat_map(|i| {
                                let s = self.dom.node(i)[a];
                                (0..m).map(move |c| (c, i, s))
                            })
                            .map(|(c, i, s)| self.values[i * m + c] - self.drift[c * k + a] * s)
                            .collect()
                    } else {
                        self.values.to_vec()
                    };
                    let mut d = self.dom.differentiate_vector(&periodic, m, a).expect("axis within the domain");
                    if self.dom.is_periodic() {
                        for (i, v) in d.iter_mut().enumerate() {
                            *v += self.drift[(i % m) * k + a];
                        }
                    }
                    d
                })
                .collect()
        })
    }

    /// `T_s f (e_a)` at node `i`.
    pub fn tangent(&self, i: usize, axis: usize) -> &[f64] {
        &self.tangent_map()[axis][i * self.m..(i + 1) * self.m]
    }

    /// `T_s f (a)` at node `i` for a chart vector `a`.
    pub fn push_tangent(&self, i: usize, a: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (axis, &c) in a.iter().enumerate().take(self.dom.dim()) {
            if c != 0.0 {
                for (o, t) in out.iter_mut().zip(self.tangent(i, axis)) {
                    *o += c * t;
                }
            }
        }
        out
    }

    /// `f + t Y`, defined for Euclidean targets.
    pub fn perturbed(&self, y: &MapTangent, t: f64) -> Result<Self> {
        if self.target != Target::Euclidean {
            return Err(Error::PeriodicTarget);
        }
        self.check_tangent(y)?;
        self.with_values(self.values.iter().zip(&y.values).map(|(f, y)| f + t * y).collect())
    }

    /// Replace node values, keeping domain, target and drift.
    pub fn map_values(&self, f: impl Fn(&[f64]) -> Vec<f64>, m_out: usize) -> Result<Self> {
        let values: Vec<f64> = (0..self.len()).flat_map(|i| f(self.value(i))).collect();
        if m_out == self.m {
            self.with_values(values)
        } else {
            Self::new(self.dom.clone(), m_out, values)
        }
    }

    /// Values at arbitrary chart points of `S`, respecting the drift.
    pub fn resample(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        let (m, k) = (self.m, self.dom.dim());
        if self.drift.iter().all(|&d| d == 0.0) {
            return self.dom.resample(&self.values, m, points);
        }
        let periodic: Vec<f64> = (0..self.len())
            .flat_map(|i| (0..m).map(move |c| (i, c)))
            .map(|(i, c)| {
                let s = self.dom.node(i);
                self.values[i * m + c] - (0..k).map(|a| self.drift[c * k + a] * s[a]).sum::<f64>()
            })
            .collect();
        let mut out = self.dom.resample(&periodic, m, points)?;
        for (pi, p) in points.iter().enumerate() {
            for c in 0..m {
                out[pi * m + c] += (0..k).map(|a| self.drift[c * k + a] * p[a]).sum::<f64>();
            }
        }
        Ok(out)
    }

    pub(crate) fn with_resampled(&self, values: Vec<f64>) -> Result<Self> {
        self.with_values(values)
    }

    pub fn check_tangent(&self, y: &MapTangent) -> Result<()> {
        if y.m != self.m || y.values.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: y.values.len() });
        }
        Ok(())
    }
}

fn sample(dom: &SourceDomain, m: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(dom.len() * m);
    for i in 0..dom.len() {
        let v = f(dom.node(i));
        if v.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: v.len() });
        }
        values.extend(v);
    }
    Ok(values)
}

/// A tangent vector `Y ∈ T_f F(S, M) = Γ(f* TM)`, sampled node-major.
/// Used with constant extension: the same node vectors at every base map.
#[derive(Clone, Debug, PartialEq)]
pub struct MapTangent {
    m: usize,
    values: Vec<f64>,
}

impl MapTangent {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || !values.len().is_multiple_of(m) {
            return Err(Error::DimensionMismatch { expected: m, found: values.len() });
        }
        Ok(Self { m, values })
    }

    pub fn from_fn(dom: &SourceDomain, m: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(m, sample(dom, m, f)?)
    }

    /// `Y(s) = X(f(s))` for a map `X` defined on the target.
    pub fn along(f: &MapPoint, x: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let values: Vec<f64> = (0..f.len()).flat_map(|i| x(f.value(i))).collect();
        Self::new(f.dim(), values)
    }

    pub fn zero(len: usize, m: usize) -> Self {
        Self { m, values: vec![0.0; len * m] }
    }

    /// The tangent supported at node `i` in component `c`.
    pub fn basis(len: usize, m: usize, i: usize, c: usize) -> Self {
        let mut t = Self::zero(len, m);
        t.values[i * m + c] = 1.0;
        t
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { m: self.m, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn add(&self, other: &MapTangent) -> Result<Self> {
        if self.m != other.m || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: other.values.len() });
        }
        Ok(Self { m: self.m, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    /// Node values mapped through `g(i, y_i)`.
    pub fn map_nodes(&self, m_out: usize, g: impl Fn(usize, &[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(m_out, (0..self.len()).flat_map(|i| g(i, self.at(i))).collect())
    }

    /// Selected nodes, in the given order.
    pub fn select(&self, nodes: &[usize]) -> Self {
        Self { m: self.m, values: nodes.iter().flat_map(|&i| self.at(i).to_vec()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tangent_map_of_the_unit_circle() {
        let dom = Arc::new(SourceDomain::circle(32).unwrap());
        let f = MapPoint::from_fn(dom, 2, |s| vec![s[0].cos(), s[0].sin()]).unwrap();
        for i in 0..f.len() {
            let t = f.tangent(i, 0);
            let s = f.domain().node(i)[0];
            assert!((t[0] + s.sin()).abs() < 1e-13 && (t[1] - s.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn drift_is_respected_for_torus_targets() {
        let dom = Arc::new(SourceDomain::circle(32).unwrap());
        let lift: Vec<f64> = (0..32).flat_map(|i| {
            let s = dom.node(i)[0];
            vec![s + 0.3 * s.sin(), (2.0 * s).cos()]
        }).collect();
        let f = MapPoint::on_flat_torus(dom.clone(), vec![2.0 * PI; 2], vec![1.0, 0.0], lift).unwrap();
        for i in 0..32 {
            let s = dom.node(i)[0];
            assert!((f.tangent(i, 0)[0] - (1.0 + 0.3 * s.cos())).abs() < 1e-12);
            assert!((f.tangent(i, 0)[1] + 2.0 * (2.0 * s).sin()).abs() < 1e-12);
        }
        let y = MapTangent::zero(32, 2);
        assert!(matches!(f.perturbed(&y, 0.1), Err(Error::PeriodicTarget)));
        let r = f.resample(&[vec![2.0 * PI + 0.5]]).unwrap();
        let s: f64 = 2.0 * PI + 0.5;
        assert!((r[0] - (s + 0.3 * s.sin())).abs() < 1e-12);
    }
}
