//! Forms and vector fields on the source manifold, either as chart
//! evaluators or as node-sampled components.

use super::domain::SourceDomain;
use crate::error::{Error, Result};
use crate::forms::algebra::{basis_eval, multi_indices};
use crate::forms::{Fd, Form, SmoothMap, VectorField};

/// Node-sampled `q`-form on a `k`-dimensional domain: one component per
/// increasing multi-index `I`, in the order of [`multi_indices`].
#[derive(Clone, Debug, PartialEq)]
pub struct NodalForm {
    degree: usize,
    k: usize,
    indices: Vec<Vec<usize>>,
    components: Vec<Vec<f64>>,
}

impl NodalForm {
    pub fn new(k: usize, degree: usize, components: Vec<Vec<f64>>) -> Result<Self> {
        let indices = multi_indices(k, degree);
        if components.len() != indices.len() {
            return Err(Error::DimensionMismatch { expected: indices.len(), found: components.len() });
        }
        Ok(Self { degree, k, indices, components })
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        Self { degree: 0, k: 0, indices: vec![vec![]], components: vec![values] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    fn eval(&self, i: usize, vs: &[&[f64]]) -> f64 {
        self.indices
            .iter()
            .zip(&self.components)
            .map(|(idx, c)| c[i] * basis_eval(idx, vs))
            .sum()
    }
}

/// A form on `S`: a chart evaluator, or node samples.
#[derive(Clone, Debug)]
pub enum SourceForm {
    Chart(Form),
    Nodal(NodalForm),
}

impl From<Form> for SourceForm {
    fn from(f: Form) -> Self {
        SourceForm::Chart(f)
    }
}

impl SourceForm {
    pub fn constant(chart_dim: usize, c: f64) -> Self {
        SourceForm::Chart(Form::constant(chart_dim, c))
    }

    /// A node-sampled function on `S`.
    pub fn scalar_field(values: Vec<f64>) -> Self {
        SourceForm::Nodal(NodalForm::scalar(values))
    }

    pub fn degree(&self) -> usize {
        match self {
            SourceForm::Chart(f) => f.degree(),
            SourceForm::Nodal(n) => n.degree,
        }
    }

    /// Value at node `i` on chart vectors `vs`.
    pub fn eval_at(&self, dom: &SourceDomain, i: usize, vs: &[&[f64]]) -> f64 {
        match self {
            SourceForm::Chart(f) => f.eval(dom.node(i), vs),
            SourceForm::Nodal(n) => n.eval(i, vs),
        }
    }

    /// Sample on the nodes of `dom`.
    pub fn to_nodal(&self, dom: &SourceDomain) -> NodalForm {
        match self {
            SourceForm::Nodal(n) => n.clone(),
            SourceForm::Chart(f) => {
                let k = dom.dim();
                let indices = multi_indices(k, f.degree());
                let frame = dom.frame();
                let components = indices
                    .iter()
                    .map(|idx| {
                        let vs: Vec<&[f64]> = idx.iter().map(|&a| frame[a].as_slice()).collect();
                        (0..dom.len()).map(|i| f.eval(dom.node(i), &vs)).collect()
                    })
                    .collect();
                NodalForm { degree: f.degree(), k, indices, components }
            }
        }
    }

    pub fn scale(&self, c: f64) -> SourceForm {
        match self {
            SourceForm::Chart(f) => SourceForm::Chart(f.scale(c)),
            SourceForm::Nodal(n) => SourceForm::Nodal(NodalForm {
                components: n.components.iter().map(|v| v.iter().map(|x| c * x).collect()).collect(),
                ..n.clone()
            }),
        }
    }

    pub fn add(&self, other: &SourceForm, dom: &SourceDomain) -> Result<SourceForm> {
        if let (SourceForm::Chart(a), SourceForm::Chart(b)) = (self, other) {
            return Ok(SourceForm::Chart(a.add(b)?));
        }
        if self.degree() != other.degree() {
            return Err(Error::Degree(format!("cannot add degrees {} and {}", self.degree(), other.degree())));
        }
        let (a, b) = (self.to_nodal(dom), other.to_nodal(dom));
        let components = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.iter().zip(y).map(|(x, y)| x + y).collect())
            .collect();
        Ok(SourceForm::Nodal(NodalForm { components, ..a }))
    }

    /// `dα`: exact or finite-difference on charts, spectral or fourth-order
    /// on node samples.
    pub fn exterior_derivative(&self, dom: &SourceDomain, fd: Fd) -> Result<SourceForm> {
        match self {
            SourceForm::Chart(f) => Ok(SourceForm::Chart(f.exterior_derivative(fd))),
            SourceForm::Nodal(n) => {
                let k = dom.dim();
                let q = n.degree;
                if q >= k {
                    return Ok(SourceForm::Nodal(NodalForm::new(k, q + 1, vec![])?));
                }
                let out_idx = multi_indices(k, q + 1);
                let mut components = vec![vec![0.0; dom.len()]; out_idx.len()];
                let comps = if q == 0 && n.k == 0 {
                    NodalForm { k, ..n.clone() }
                } else {
                    n.clone()
                };
                for (idx, c) in comps.indices.iter().zip(&comps.components) {
                    for l in 0..k {
                        if idx.contains(&l) {
                            continue;
                        }
                        let mut j = vec![l];
                        j.extend_from_slice(idx);
                        let sign = crate::forms::algebra::sort_sign(&j);
                        j.sort_unstable();
                        let slot = out_idx.iter().position(|o| *o == j).expect("multi-index");
                        let dc = dom.differentiate(c, l)?;
                        for (acc, v) in components[slot].iter_mut().zip(dc) {
                            *acc += sign * v;
                        }
                    }
                }
                Ok(SourceForm::Nodal(NodalForm::new(k, q + 1, components)?))
            }
        }
    }

    /// `i_Z α`, zero for functions.
    pub fn interior(&self, dom: &SourceDomain, z: &SourceVectorField) -> Result<SourceForm> {
        if self.degree() == 0 {
            return Ok(match self {
                SourceForm::Chart(f) => SourceForm::Chart(Form::zero(f.dim(), 0)),
                SourceForm::Nodal(_) => SourceForm::scalar_field(vec![0.0; dom.len()]),
            });
        }
        if let (SourceForm::Chart(f), SourceVectorField::Chart(x)) = (self, z) {
            return Ok(SourceForm::Chart(f.interior(x)?));
        }
        let k = dom.dim();
        let q = self.degree();
        let out_idx = multi_indices(k, q - 1);
        let frame = dom.frame();
        let components = out_idx
            .iter()
            .map(|idx| {
                (0..dom.len())
                    .map(|i| {
                        let zi = z.at_node(dom, i);
                        let mut vs: Vec<&[f64]> = vec![&zi];
                        vs.extend(idx.iter().map(|&a| frame[a].as_slice()));
                        self.eval_at(dom, i, &vs)
                    })
                    .collect()
            })
            .collect();
        Ok(SourceForm::Nodal(NodalForm::new(k, q - 1, components)?))
    }

    pub fn pullback(&self, psi: &SmoothMap) -> Result<SourceForm> {
        match self {
            SourceForm::Chart(f) => Ok(SourceForm::Chart(f.pullback(psi)?)),
            SourceForm::Nodal(_) => Err(Error::Invalid("pull back node-sampled forms by resampling instead".into())),
        }
    }

    pub fn lie_derivative(&self, z: &VectorField, fd: Fd) -> Result<SourceForm> {
        match self {
            SourceForm::Chart(f) => Ok(SourceForm::Chart(f.lie_derivative(z, fd)?)),
            SourceForm::Nodal(_) => Err(Error::Invalid("Lie derivative needs a chart form".into())),
        }
    }

    /// `i_∂* α` on the boundary points; `None` when the pull-back vanishes
    /// for degree reasons.
    pub fn restrict_to_boundary(&self, node_map: &[usize]) -> Option<SourceForm> {
        if self.degree() > 0 {
            return None;
        }
        Some(match self {
            SourceForm::Chart(f) => SourceForm::Chart(f.clone()),
            SourceForm::Nodal(n) => {
                SourceForm::scalar_field(node_map.iter().map(|&i| n.components[0][i]).collect())
            }
        })
    }
}

/// A vector field on `S`: chart closure or node samples (`k` per node).
#[derive(Clone, Debug)]
pub enum SourceVectorField {
    Chart(VectorField),
    Nodal { k: usize, values: Vec<f64> },
}

impl SourceVectorField {
    pub fn at_node(&self, dom: &SourceDomain, i: usize) -> Vec<f64> {
        match self {
            SourceVectorField::Chart(z) => z.at(dom.node(i)),
            SourceVectorField::Nodal { k, values } => values[i * k..(i + 1) * k].to_vec(),
        }
    }
}
