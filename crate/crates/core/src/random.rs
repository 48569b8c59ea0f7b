//! Seeded generators of smooth test data: trigonometric and polynomial
//! coefficient functions, forms, maps and tangents.
//!
//! Every generator draws from a ChaCha8 stream derived from `(seed, label)`,
//! so independent pieces of a test case do not shift when others change.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::forms::algebra::multi_indices;
use crate::forms::{Form, ScalarFn, VectorField};
use crate::mapping::{MapPoint, MapTangent};
use crate::source::{SourceDomain, SourceForm};

pub struct TestRng {
    inner: ChaCha8Rng,
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

impl TestRng {
    pub fn new(seed: u64, label: &str) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed ^ fnv1a(label)) }
    }

    /// Stream for trial `trial` of a labelled test.
    pub fn trial(seed: u64, label: &str, trial: usize) -> Self {
        Self::new(seed.wrapping_add((trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)), label)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn vector(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Sum of `terms` plane waves with real wavenumbers in `[−kmax, kmax]`,
    /// plus a random affine part.
    pub fn trig_fn(&mut self, dim: usize, terms: usize, kmax: f64) -> ScalarFn {
        let mut f = ScalarFn::constant(dim, self.uniform(-0.5, 0.5));
        for i in 0..dim {
            f = f.add(&ScalarFn::coordinate(dim, i).scale(self.uniform(-0.3, 0.3)));
        }
        for _ in 0..terms {
            let k = self.vector(dim, -kmax, kmax);
            let amp = self.uniform(-1.0, 1.0) / terms as f64;
            f = f.add(&ScalarFn::wave(amp, &k, self.uniform(0.0, 2.0 * PI)));
        }
        f
    }

    /// Trigonometric polynomial with integer wavenumbers `|k_i| ≤ modes`,
    /// periodic on `[0, 2π)^dim`.
    pub fn periodic_fn(&mut self, dim: usize, terms: usize, modes: i32) -> ScalarFn {
        let mut f = ScalarFn::constant(dim, self.uniform(-0.5, 0.5));
        for _ in 0..terms {
            let k: Vec<f64> = (0..dim).map(|_| self.inner.gen_range(-modes..=modes) as f64).collect();
            let amp = self.uniform(-1.0, 1.0) / terms as f64;
            f = f.add(&ScalarFn::wave(amp, &k, self.uniform(0.0, 2.0 * PI)));
        }
        f
    }

    /// Random polynomial of total degree at most `degree`.
    pub fn poly_fn(&mut self, dim: usize, degree: u32) -> ScalarFn {
        let mut f = ScalarFn::zero(dim);
        let mut powers = vec![0u32; dim];
        loop {
            if powers.iter().sum::<u32>() <= degree {
                f = f.add(&ScalarFn::monomial(dim, self.uniform(-0.5, 0.5), &powers));
            }
            let mut i = 0;
            loop {
                if i == dim {
                    return f;
                }
                powers[i] += 1;
                if powers[i] <= degree {
                    break;
                }
                powers[i] = 0;
                i += 1;
            }
        }
    }

    /// Coefficient `p`-form on `R^dim` with trigonometric coefficients.
    pub fn form(&mut self, dim: usize, degree: usize) -> Form {
        let terms = multi_indices(dim, degree).into_iter().map(|idx| (idx, self.trig_fn(dim, 2, 1.2))).collect();
        Form::from_coefficients(dim, degree, terms).expect("valid multi-indices")
    }

    /// Coefficient `q`-form on the chart of `dom`, periodic where `dom` is.
    pub fn source_form(&mut self, dom: &SourceDomain, degree: usize) -> SourceForm {
        let c = dom.chart_dim();
        let terms = multi_indices(c, degree)
            .into_iter()
            .map(|idx| (idx, self.source_fn(dom)))
            .collect();
        SourceForm::Chart(Form::from_coefficients(c, degree, terms).expect("valid multi-indices"))
    }

    /// Smooth function on the chart of `dom`, periodic where `dom` is.
    pub fn source_fn(&mut self, dom: &SourceDomain) -> ScalarFn {
        if dom.is_periodic() {
            self.periodic_fn(dom.chart_dim(), 3, 3)
        } else {
            self.trig_fn(dom.chart_dim(), 3, 3.0)
        }
    }

    /// Random smooth map `S → R^m` with values of order one.
    pub fn map_point(&mut self, dom: &Arc<SourceDomain>, m: usize) -> Result<MapPoint> {
        let comps: Vec<ScalarFn> = (0..m).map(|_| self.source_fn(dom)).collect();
        MapPoint::from_fn(dom.clone(), m, |s| comps.iter().map(|c| c.value(s)).collect())
    }

    pub fn map_tangent(&mut self, dom: &SourceDomain, m: usize) -> Result<MapTangent> {
        let comps: Vec<ScalarFn> = (0..m).map(|_| self.source_fn(dom)).collect();
        MapTangent::from_fn(dom, m, |s| comps.iter().map(|c| c.value(s)).collect())
    }

    /// Vector field on `R^dim` with trigonometric components.
    pub fn vector_field(&mut self, dim: usize) -> VectorField {
        VectorField::from_components((0..dim).map(|_| self.trig_fn(dim, 2, 1.0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_label_dependent() {
        let a = TestRng::new(7, "x").vector(4, 0.0, 1.0);
        let b = TestRng::new(7, "x").vector(4, 0.0, 1.0);
        let c = TestRng::new(7, "y").vector(4, 0.0, 1.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn periodic_functions_are_periodic() {
        let f = TestRng::new(3, "p").periodic_fn(2, 4, 3);
        let a = f.value(&[0.4, 1.3]);
        let b = f.value(&[0.4 + 2.0 * PI, 1.3 - 2.0 * PI]);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn poly_fn_has_bounded_degree() {
        let f = TestRng::new(1, "poly").poly_fn(2, 2);
        assert!(f.terms().iter().all(|t| t.powers.iter().sum::<u32>() <= 2));
    }
}
