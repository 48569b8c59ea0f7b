//! Closedness of the twisted form `Ĥ − ∂*B̂^∂` on maps of the interval whose
//! endpoints lie on an affine brane `D ⊂ R^m`, where `i*H = dB` on `D`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::algebra::multi_indices;
use crate::forms::{Fd, Form, ScalarFn, SmoothMap};
use crate::mapping::{hat_map, map_space_d, MapPoint, MapSpaceForm, MapTangent};
use crate::random::TestRng;
use crate::source::{DomainKind, SourceDomain};

/// `D = {o + E u}` with orthonormal columns `E`.
#[derive(Clone, Debug)]
pub struct AffineSubspace {
    origin: DVector<f64>,
    basis: DMatrix<f64>,
}

impl AffineSubspace {
    /// The span of the columns of `spanning` through `origin`.
    pub fn new(origin: Vec<f64>, spanning: DMatrix<f64>) -> Result<Self> {
        if spanning.nrows() != origin.len() {
            return Err(Error::DimensionMismatch { expected: origin.len(), found: spanning.nrows() });
        }
        let d = spanning.ncols();
        let qr = spanning.qr();
        let r = qr.r();
        if (0..d).any(|i| r[(i, i)].abs() < 1e-12) {
            return Err(Error::Precondition("spanning vectors are dependent".into()));
        }
        Ok(Self { origin: DVector::from_vec(origin), basis: qr.q().columns(0, d).into_owned() })
    }

    /// `{x_axis = 0}`.
    pub fn coordinate_hyperplane(m: usize, axis: usize) -> Self {
        let cols: Vec<usize> = (0..m).filter(|&i| i != axis).collect();
        let e = DMatrix::from_fn(m, m - 1, |r, c| if r == cols[c] { 1.0 } else { 0.0 });
        Self::new(vec![0.0; m], e).expect("independent axes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// `ι(u) = o + E u`.
    pub fn chart(&self) -> SmoothMap {
        SmoothMap::affine(self.basis.clone(), self.origin.clone()).expect("consistent shapes")
    }

    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        (self.basis.transpose() * (DVector::from_column_slice(x) - &self.origin)).iter().copied().collect()
    }

    pub fn coords_of_vector(&self, v: &[f64]) -> Vec<f64> {
        (self.basis.transpose() * DVector::from_column_slice(v)).iter().copied().collect()
    }

    pub fn project_point(&self, x: &[f64]) -> Vec<f64> {
        let u = DVector::from_vec(self.coords(x));
        (&self.origin + &self.basis * u).iter().copied().collect()
    }

    pub fn project_vector(&self, v: &[f64]) -> Vec<f64> {
        (&self.basis * DVector::from_vec(self.coords_of_vector(v))).iter().copied().collect()
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        self.project_point(x).iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    pub fn normal_component(&self, v: &[f64]) -> f64 {
        self.project_vector(v).iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

/// A closed `(p+2)`-form `H` on `R^m`, a brane `D` and a `(p+1)`-form `B`
/// in the affine coordinates of `D`.
#[derive(Clone, Debug)]
pub struct BraneCase {
    pub name: String,
    pub h: Form,
    pub b: Form,
    pub brane: AffineSubspace,
}

/// The cataloged cases; the last one violates `i*H = dB`.
pub fn brane_catalog() -> Vec<BraneCase> {
    let plane = AffineSubspace::coordinate_hyperplane(3, 2);
    let z_area = Form::from_coefficients(3, 2, vec![(vec![0, 1], ScalarFn::coordinate(3, 2))]).expect("2-form");
    let k = Form::from_coefficients(
        4,
        2,
        vec![
            (vec![2, 3], ScalarFn::wave(1.0, &[1.0, 0.0, 0.0, 0.0], 0.0).times_monomial(1.0, &[0, 1, 0, 0])),
            (vec![0, 1], ScalarFn::monomial(4, 1.0, &[1, 0, 2, 0])),
            (vec![0, 3], ScalarFn::cos_wave(1.0, &[0.0, 1.0, 0.0, 1.0], 0.0)),
        ],
    )
    .expect("2-form");
    let tilted = AffineSubspace::new(
        vec![0.1, -0.2, 0.3, 0.05],
        DMatrix::from_column_slice(4, 3, &[1.0, 0.0, 0.0, 0.5, 0.0, 1.0, 0.0, -0.3, 0.0, 0.0, 1.0, 0.2]),
    )
    .expect("independent spanning set");
    let b_tilted = k.pullback(&tilted.chart()).expect("matching dimensions");
    vec![
        BraneCase { name: "flat-volume".into(), h: Form::volume(3), b: Form::zero(2, 2), brane: plane.clone() },
        BraneCase {
            name: "exact-plane".into(),
            h: z_area.analytic_derivative().expect("exact coefficients"),
            b: Form::zero(2, 2),
            brane: plane,
        },
        BraneCase {
            name: "tilted-hyperplane".into(),
            h: k.analytic_derivative().expect("exact coefficients"),
            b: b_tilted,
            brane: tilted,
        },
        BraneCase {
            name: "inconsistent".into(),
            h: Form::basis(4, &[0, 1, 2]),
            b: Form::zero(3, 2),
            brane: AffineSubspace::coordinate_hyperplane(4, 3),
        },
    ]
}

/// Thresholds of the brane check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraneGates {
    /// Largest accepted `|i*H − dB|`.
    pub consistency: f64,
    /// Largest accepted distance of an endpoint from `D`.
    pub boundary_distance: f64,
    /// Largest accepted normal component of an endpoint tangent.
    pub tangency: f64,
}

impl Default for BraneGates {
    fn default() -> Self {
        Self { consistency: 1e-6, boundary_distance: 1e-10, tangency: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BraneOutcome {
    /// The twisted form was differentiated on constrained data.
    Checked {
        consistency: f64,
        residual: f64,
        /// `dĤ` alone on the same data.
        untwisted: f64,
    },
    /// `i*H = dB` fails on `D`.
    Rejected { consistency: f64 },
    /// The map or its tangents leave `F_D(S, M)`.
    Inapplicable { reason: String },
}

/// Largest `|ι*H − dB|` over seeded points and frames of `D`.
pub fn consistency_residual(case: &BraneCase, seed: u64) -> Result<f64> {
    let d = case.brane.dim();
    if case.b.dim() != d || case.b.degree() + 1 != case.h.degree() {
        return Err(Error::Degree(format!("B must be a {}-form on R^{d}", case.h.degree() - 1)));
    }
    let pulled = case.h.pullback(&case.brane.chart())?;
    let db = case.b.exterior_derivative(Fd::default());
    let mut rng = TestRng::new(seed, &format!("brane-gate/{}", case.name));
    let mut worst = 0.0f64;
    for _ in 0..16 {
        let u = rng.vector(d, -1.0, 1.0);
        for idx in multi_indices(d, case.h.degree()) {
            let vs: Vec<Vec<f64>> = idx.iter().map(|&i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
            worst = worst.max((pulled.eval_vecs(&u, &vs) - db.eval_vecs(&u, &vs)).abs());
        }
    }
    Ok(worst)
}

/// `∂*B̂^∂`: `(f; Y…) ↦ Σ_b ±B(ι⁻¹f(b); EᵀY(b)…)` over the endpoints.
pub fn magnetic_term(case: &BraneCase) -> MapSpaceForm {
    let case = case.clone();
    MapSpaceForm::new(case.b.degree(), "magnetic", move |f, ys| {
        let boundary = f
            .domain()
            .boundary()
            .ok_or_else(|| Error::UnsupportedDomain(format!("{:?} has no boundary", f.domain().kind())))?;
        let values: Vec<f64> = boundary.node_map.iter().flat_map(|&i| case.brane.coords(f.value(i))).collect();
        let g = MapPoint::new(boundary.domain.clone(), case.brane.dim(), values)?;
        let moved: Vec<MapTangent> = ys
            .iter()
            .map(|y| {
                let v = boundary.node_map.iter().flat_map(|&i| case.brane.coords_of_vector(y.at(i))).collect();
                MapTangent::new(case.brane.dim(), v)
            })
            .collect::<Result<_>>()?;
        hat_map(&case.b, &boundary.domain)?.eval_owned(&g, &moved)
    })
}

/// `Ĥ − ∂*B̂^∂` on `F(S, M)`.
pub fn twisted_form(case: &BraneCase, dom: &SourceDomain) -> Result<MapSpaceForm> {
    hat_map(&case.h, dom)?.sub(&magnetic_term(case))
}

/// Moves the endpoints of `f` onto `D`, correcting linearly in the interval
/// coordinate.
pub fn constrain_map(case: &BraneCase, f: &MapPoint) -> Result<MapPoint> {
    let (a, b) = endpoint_corrections(f, |x| case.brane.project_point(x))?;
    let dom = f.domain().clone();
    let values = (0..f.len())
        .flat_map(|i| {
            let s = dom.node(i)[0];
            let (a, b) = (&a, &b);
            f.value(i).iter().enumerate().map(move |(c, v)| v + (1.0 - s) * a[c] + s * b[c]).collect::<Vec<_>>()
        })
        .collect();
    MapPoint::new(dom, f.dim(), values)
}

/// Makes the endpoint values of `y` tangent to `D`.
pub fn constrain_tangent(case: &BraneCase, f: &MapPoint, y: &MapTangent) -> Result<MapTangent> {
    let n = f.len();
    let a: Vec<f64> = case.brane.project_vector(y.at(0)).iter().zip(y.at(0)).map(|(p, v)| p - v).collect();
    let b: Vec<f64> = case.brane.project_vector(y.at(n - 1)).iter().zip(y.at(n - 1)).map(|(p, v)| p - v).collect();
    let dom = f.domain();
    y.map_nodes(y.dim(), |i, v| {
        let s = dom.node(i)[0];
        v.iter().enumerate().map(|(c, x)| x + (1.0 - s) * a[c] + s * b[c]).collect()
    })
}

fn endpoint_corrections(f: &MapPoint, project: impl Fn(&[f64]) -> Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    if f.domain().kind() != DomainKind::Interval {
        return Err(Error::UnsupportedDomain(format!("{:?}: branes need the interval", f.domain().kind())));
    }
    let n = f.len();
    let a = project(f.value(0)).iter().zip(f.value(0)).map(|(p, v)| p - v).collect();
    let b = project(f.value(n - 1)).iter().zip(f.value(n - 1)).map(|(p, v)| p - v).collect();
    Ok((a, b))
}

/// `d(Ĥ − ∂*B̂^∂)(f; Y₀, …)` after checking `i*H = dB` and the endpoint
/// constraints.
pub fn brane_twist_check(
    case: &BraneCase,
    f: &MapPoint,
    ys: &[MapTangent],
    fd: Fd,
    gates: BraneGates,
    seed: u64,
) -> Result<BraneOutcome> {
    if f.domain().kind() != DomainKind::Interval {
        return Err(Error::UnsupportedDomain(format!("{:?}: branes need the interval", f.domain().kind())));
    }
    if ys.len() != case.h.degree() {
        return Err(Error::DimensionMismatch { expected: case.h.degree(), found: ys.len() });
    }
    let consistency = consistency_residual(case, seed)?;
    if consistency > gates.consistency {
        return Ok(BraneOutcome::Rejected { consistency });
    }
    let ends = [0, f.len() - 1];
    for &i in &ends {
        let dist = case.brane.distance(f.value(i));
        if dist > gates.boundary_distance {
            return Ok(BraneOutcome::Inapplicable { reason: format!("endpoint {i} is {dist:e} away from D") });
        }
        for (j, y) in ys.iter().enumerate() {
            let normal = case.brane.normal_component(y.at(i));
            if normal > gates.tangency {
                return Ok(BraneOutcome::Inapplicable {
                    reason: format!("tangent {j} has normal component {normal:e} at endpoint {i}"),
                });
            }
        }
    }
    let dom = f.domain();
    let refs: Vec<&MapTangent> = ys.iter().collect();
    let residual = map_space_d(&twisted_form(case, dom)?, fd).eval(f, &refs)?.abs();
    let untwisted = map_space_d(&hat_map(&case.h, dom)?, fd).eval(f, &refs)?.abs();
    Ok(BraneOutcome::Checked { consistency, residual, untwisted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn data(case: &BraneCase, seed: u64) -> (MapPoint, Vec<MapTangent>) {
        let dom = Arc::new(SourceDomain::interval(257).unwrap());
        let mut rng = TestRng::new(seed, &case.name);
        let m = case.h.dim();
        let f = constrain_map(case, &rng.map_point(&dom, m).unwrap()).unwrap();
        let ys = (0..3)
            .map(|_| constrain_tangent(case, &f, &rng.map_tangent(&dom, m).unwrap()).unwrap())
            .collect();
        (f, ys)
    }

    #[test]
    fn catalog_cases_are_closed() {
        for case in brane_catalog().iter().take(3) {
            let (f, ys) = data(case, 11);
            match brane_twist_check(case, &f, &ys, Fd::default(), BraneGates::default(), 1).unwrap() {
                BraneOutcome::Checked { residual, consistency, .. } => {
                    assert!(consistency < 1e-6, "{}", case.name);
                    assert!(residual < 1e-5, "{}: {residual}", case.name);
                }
                other => panic!("{}: {other:?}", case.name),
            }
        }
    }

    #[test]
    fn magnetic_term_is_needed_on_the_tilted_brane() {
        let case = &brane_catalog()[2];
        let (f, ys) = data(case, 5);
        let BraneOutcome::Checked { untwisted, .. } =
            brane_twist_check(case, &f, &ys, Fd::default(), BraneGates::default(), 1).unwrap()
        else {
            panic!("expected a checked outcome");
        };
        assert!(untwisted > 1e-3, "{untwisted}");
    }

    #[test]
    fn gates() {
        let catalog = brane_catalog();
        let (f, ys) = data(&catalog[3], 2);
        assert!(matches!(
            brane_twist_check(&catalog[3], &f, &ys, Fd::default(), BraneGates::default(), 1).unwrap(),
            BraneOutcome::Rejected { .. }
        ));
        let case = &catalog[1];
        let (f, mut ys) = data(case, 3);
        ys[0] = MapTangent::from_fn(f.domain(), 3, |_| vec![0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            brane_twist_check(case, &f, &ys, Fd::default(), BraneGates::default(), 1).unwrap(),
            BraneOutcome::Inapplicable { .. }
        ));
    }

    #[test]
    fn affine_subspace_geometry() {
        let d = &brane_catalog()[2].brane;
        let e = d.basis();
        assert!((e.transpose() * e - DMatrix::identity(3, 3)).amax() < 1e-14);
        let x = d.chart().apply(&[0.3, -0.1, 0.7]);
        assert!(d.distance(&x) < 1e-15);
        assert!(d.coords(&x).iter().zip([0.3, -0.1, 0.7]).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}
