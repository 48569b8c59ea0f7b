//! The non-linear Grassmannian `Gr_k(M)` through embedding representatives:
//! tilda forms `ω̃` evaluated as `ω̂` at a representative, and the
//! Marsden–Weinstein form on loops in `R^3`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Form, SmoothMap};
use crate::mapping::{gram_matrix, hat_map, pushforward_action, MapPoint, MapSpaceForm, MapTangent, Target};
use crate::source::{DomainKind, SourceDomain};

/// Numerical gates for accepting a map as an embedding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingGates {
    pub min_distance: f64,
    pub min_singular_value: f64,
}

impl Default for EmbeddingGates {
    fn default() -> Self {
        Self { min_distance: 1e-6, min_singular_value: 1e-6 }
    }
}

/// A submanifold `N = f(S)` given by an embedding `f`, oriented so that
/// `f: S → N` preserves orientation.
#[derive(Clone, Debug)]
pub struct EmbeddedSubmanifold {
    rep: MapPoint,
    gates: EmbeddingGates,
    min_distance: f64,
    min_singular_value: f64,
}

impl EmbeddedSubmanifold {
    pub fn new(rep: MapPoint, gates: EmbeddingGates) -> Result<Self> {
        if rep.target() != &Target::Euclidean {
            return Err(Error::NotEmbedding("representatives must map into R^m".into()));
        }
        let k = rep.domain().dim();
        if k == 0 || k >= rep.dim() {
            return Err(Error::NotEmbedding(format!("a {k}-dimensional source in R^{}", rep.dim())));
        }
        let n = rep.len();
        let mut min_distance = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d2: f64 = rep.value(i).iter().zip(rep.value(j)).map(|(a, b)| (a - b).powi(2)).sum();
                min_distance = min_distance.min(d2.sqrt());
            }
        }
        let mut min_singular_value = f64::INFINITY;
        for i in 0..n {
            let t = DMatrix::from_fn(rep.dim(), k, |r, a| rep.tangent(i, a)[r]);
            let sv = t.singular_values();
            min_singular_value = min_singular_value.min(sv.iter().copied().fold(f64::INFINITY, f64::min));
        }
        if min_distance <= gates.min_distance {
            return Err(Error::NotEmbedding(format!("nodes {min_distance:e} apart, gate {:e}", gates.min_distance)));
        }
        if min_singular_value <= gates.min_singular_value {
            return Err(Error::NotEmbedding(format!(
                "tangent map singular value {min_singular_value:e}, gate {:e}",
                gates.min_singular_value
            )));
        }
        Ok(Self { rep, gates, min_distance, min_singular_value })
    }

    pub fn rep(&self) -> &MapPoint {
        &self.rep
    }

    pub fn gates(&self) -> EmbeddingGates {
        self.gates
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub fn min_singular_value(&self) -> f64 {
        self.min_singular_value
    }

    /// The same submanifold with the opposite orientation, represented by
    /// `f ∘ r` for the reflection `r(s) = −s` (periodic) or `r(s) = 1 − s`.
    pub fn reversed(&self) -> Result<(Self, impl Fn(&MapTangent) -> MapTangent)> {
        let perm = reflection(self.rep.domain())?;
        let values: Vec<f64> = perm.iter().flat_map(|&j| self.rep.value(j).to_vec()).collect();
        let rep = MapPoint::new(self.rep.domain().clone(), self.rep.dim(), values)?;
        let n = Self::new(rep, self.gates)?;
        Ok((n, move |y: &MapTangent| y.select(&perm)))
    }
}

fn reflection(dom: &Arc<SourceDomain>) -> Result<Vec<usize>> {
    let n = dom.len();
    match dom.kind() {
        DomainKind::Circle => Ok((0..n).map(|i| (n - i) % n).collect()),
        DomainKind::Interval => Ok((0..n).map(|i| n - 1 - i).collect()),
        other => Err(Error::UnsupportedDomain(format!("reflection of {other:?}"))),
    }
}

/// `ω̃_N(Ỹ¹, …, Ỹ^{p−k})`, evaluated as `ω̂` at the representative on
/// sections of `TM|_N`.
pub fn tilda_eval(omega: &Form, n: &EmbeddedSubmanifold, sections: &[MapTangent]) -> Result<f64> {
    let k = n.rep.domain().dim();
    if omega.degree() < k {
        return Err(Error::Degree(format!("tilda map of a {}-form on {k}-dimensional submanifolds", omega.degree())));
    }
    hat_map(omega, n.rep.domain())?.eval_owned(&n.rep, sections)
}

/// `φ·N = φ(N)`, through the representative `φ ∘ f`.
pub fn diffm_action_on_n(phi: &SmoothMap, n: &EmbeddedSubmanifold) -> Result<EmbeddedSubmanifold> {
    EmbeddedSubmanifold::new(pushforward_action(phi, &n.rep)?, n.gates)
}

/// `Tφ · Y` along `N`, the tangent of the `Diff(M)` action.
pub fn push_sections(phi: &SmoothMap, n: &EmbeddedSubmanifold, y: &MapTangent) -> Result<MapTangent> {
    y.map_nodes(phi.dim_out(), |i, v| {
        (phi.jacobian_at(n.rep.value(i)) * DVector::from_column_slice(v)).iter().copied().collect()
    })
}

/// The Marsden–Weinstein form `ν̃_N(X̃, Ỹ) = ∫_N i_Y i_X ν` on oriented loops
/// in `R^3`.
#[derive(Clone, Debug)]
pub struct MarsdenWeinstein {
    nu: Form,
}

impl MarsdenWeinstein {
    pub fn new(nu: &Form) -> Result<Self> {
        if nu.dim() != 3 || nu.degree() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: if nu.dim() != 3 { nu.dim() } else { nu.degree() } });
        }
        Ok(Self { nu: nu.clone() })
    }

    fn check(&self, n: &EmbeddedSubmanifold) -> Result<()> {
        if n.rep.domain().dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: n.rep.domain().dim() });
        }
        Ok(())
    }

    /// `ν̂` on `F(S¹, R^3)`, the hat representative of `ν̃`.
    pub fn hat(&self, dom: &SourceDomain) -> Result<MapSpaceForm> {
        hat_map(&self.nu, dom)
    }

    pub fn eval(&self, n: &EmbeddedSubmanifold, x: &MapTangent, y: &MapTangent) -> Result<f64> {
        self.check(n)?;
        tilda_eval(&self.nu, n, &[x.clone(), y.clone()])
    }

    /// Matrix of `ν̂_f` on the nodal basis of `T_f F(S¹, R^3)`.
    pub fn gram(&self, n: &EmbeddedSubmanifold) -> Result<DMatrix<f64>> {
        self.check(n)?;
        gram_matrix(&self.hat(n.rep.domain())?, &n.rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::numerical_rank;
    use std::f64::consts::PI;

    fn circle_in_r3(n: usize) -> EmbeddedSubmanifold {
        let dom = Arc::new(SourceDomain::circle(n).unwrap());
        let f = MapPoint::from_fn(dom, 3, |s| vec![s[0].cos(), s[0].sin(), 0.0]).unwrap();
        EmbeddedSubmanifold::new(f, EmbeddingGates::default()).unwrap()
    }

    #[test]
    fn marsden_weinstein_value_at_the_unit_circle() {
        let n = circle_in_r3(128);
        let mw = MarsdenWeinstein::new(&Form::volume(3)).unwrap();
        let dom = n.rep().domain().clone();
        let ez = MapTangent::from_fn(&dom, 3, |_| vec![0.0, 0.0, 1.0]).unwrap();
        let radial = MapTangent::from_fn(&dom, 3, |s| vec![s[0].cos(), s[0].sin(), 0.0]).unwrap();
        let ex = MapTangent::from_fn(&dom, 3, |_| vec![1.0, 0.0, 0.0]).unwrap();
        assert!((mw.eval(&n, &ez, &radial).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(mw.eval(&n, &ez, &ex).unwrap().abs() < 1e-13);
        assert_eq!(mw.eval(&n, &ez, &ez).unwrap(), 0.0);
    }

    #[test]
    fn gram_kernel_is_tangential() {
        let n = circle_in_r3(12);
        let mw = MarsdenWeinstein::new(&Form::volume(3)).unwrap();
        let g = mw.gram(&n).unwrap();
        assert_eq!(numerical_rank(&g, 1e-10), 24);
    }

    #[test]
    fn embedding_gates() {
        let dom = Arc::new(SourceDomain::circle(16).unwrap());
        let collapsed = MapPoint::from_fn(dom.clone(), 3, |_| vec![0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(EmbeddedSubmanifold::new(collapsed, EmbeddingGates::default()), Err(Error::NotEmbedding(_))));
        let double = MapPoint::from_fn(dom, 3, |s| vec![(2.0 * s[0]).cos(), (2.0 * s[0]).sin(), 0.0]).unwrap();
        assert!(EmbeddedSubmanifold::new(double, EmbeddingGates::default()).is_err());
    }

    #[test]
    fn reversing_orientation_flips_the_sign() {
        let n = circle_in_r3(64);
        let dom = n.rep().domain().clone();
        let mw = MarsdenWeinstein::new(&Form::volume(3)).unwrap();
        let ez = MapTangent::from_fn(&dom, 3, |_| vec![0.0, 0.0, 1.0]).unwrap();
        let radial = MapTangent::from_fn(&dom, 3, |s| vec![s[0].cos(), s[0].sin(), 0.0]).unwrap();
        let (rev, carry) = n.reversed().unwrap();
        let a = mw.eval(&n, &ez, &radial).unwrap();
        let b = mw.eval(&rev, &carry(&ez), &carry(&radial)).unwrap();
        assert!((a + b).abs() < 1e-12);
    }
}
