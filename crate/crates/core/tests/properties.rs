//! Randomized structural properties of forms, map-space forms and the
//! spectral toolkit on source domains.

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use mapcalc_core::forms::{Fd, Form};
use mapcalc_core::mapping::{hat_pairing, MapTangent};
use mapcalc_core::random::TestRng;
use mapcalc_core::source::{gradient, projection_p, right_inverse_b, SourceDomain, EXACTNESS_THRESHOLD};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn args(rng: &mut TestRng, dim: usize, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    (rng.vector(dim, -1.0, 1.0), (0..n).map(|_| rng.vector(dim, -1.0, 1.0)).collect())
}

/// A random form together with forms derived from it by the algebraic
/// operations, so that every constructor's output is exercised.
fn derived_forms(rng: &mut TestRng, dim: usize) -> Vec<Form> {
    let a = rng.form(dim, 1);
    let b = rng.form(dim, 2);
    let x = rng.vector_field(dim);
    vec![
        a.clone(),
        b.clone(),
        a.wedge(&b).unwrap(),
        b.exterior_derivative(Fd::new(1e-4)),
        b.interior(&x).unwrap(),
        a.add(&rng.form(dim, 1)).unwrap().scale(-0.7),
        b.lie_derivative(&x, Fd::new(1e-4)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forms_are_antisymmetric(seed in any::<u64>(), swap in 0usize..8) {
        let mut rng = TestRng::new(seed, "antisymmetry");
        for w in derived_forms(&mut rng, 4) {
            let p = w.degree();
            if p < 2 {
                continue;
            }
            let (x, mut vs) = args(&mut rng, 4, p);
            let i = swap % p;
            let j = (i + 1 + swap / p % (p - 1)) % p;
            let before = w.eval_vecs(&x, &vs);
            vs.swap(i, j);
            prop_assert!(close(before, -w.eval_vecs(&x, &vs), 1e-9), "degree {p}");
        }
    }

    #[test]
    fn forms_are_multilinear(seed in any::<u64>(), c in -3.0f64..3.0, slot in 0usize..4) {
        let mut rng = TestRng::new(seed, "multilinearity");
        for w in derived_forms(&mut rng, 4) {
            let p = w.degree();
            if p == 0 {
                continue;
            }
            let i = slot % p;
            let (x, vs) = args(&mut rng, 4, p);
            let extra = rng.vector(4, -1.0, 1.0);
            let mut mixed = vs.clone();
            mixed[i] = vs[i].iter().zip(&extra).map(|(a, b)| a + c * b).collect();
            let mut only = vs.clone();
            only[i] = extra;
            let lhs = w.eval_vecs(&x, &mixed);
            let rhs = w.eval_vecs(&x, &vs) + c * w.eval_vecs(&x, &only);
            prop_assert!(close(lhs, rhs, 1e-9));
        }
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let mut rng = TestRng::new(seed, "graded-commutativity");
        let (a, b) = (rng.form(4, p), rng.form(4, q));
        let (x, vs) = args(&mut rng, 4, p + q);
        let sign = if p * q % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a.wedge(&b).unwrap().eval_vecs(&x, &vs);
        let ba = b.wedge(&a).unwrap().eval_vecs(&x, &vs);
        prop_assert!(close(ab, sign * ba, 1e-10));
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>(), p in 0usize..3, q in 0usize..2, r in 0usize..2) {
        let mut rng = TestRng::new(seed, "associativity");
        let (a, b, c) = (rng.form(5, p), rng.form(5, q), rng.form(5, r));
        let (x, vs) = args(&mut rng, 5, p + q + r);
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap().eval_vecs(&x, &vs);
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap().eval_vecs(&x, &vs);
        prop_assert!(close(left, right, 1e-10));
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), p in 0usize..2) {
        let mut rng = TestRng::new(seed, "dd");
        let w = rng.form(3, p);
        let fd = Fd::new(1e-3);
        let dd = w.fd_exterior_derivative(fd).fd_exterior_derivative(fd);
        let (x, vs) = args(&mut rng, 3, p + 2);
        prop_assert!(dd.eval_vecs(&x, &vs).abs() < 1e-5);
    }

    #[test]
    fn analytic_d_matches_finite_differences(seed in any::<u64>(), p in 0usize..3) {
        let mut rng = TestRng::new(seed, "analytic-d");
        let w = rng.form(3, p);
        let exact = w.analytic_derivative().expect("random forms carry coefficients");
        let approx = w.fd_exterior_derivative(Fd::new(1e-4));
        let (x, vs) = args(&mut rng, 3, p + 1);
        prop_assert!(close(exact.eval_vecs(&x, &vs), approx.eval_vecs(&x, &vs), 1e-6));
    }

    #[test]
    fn hat_pairing_is_antisymmetric_and_linear(seed in any::<u64>(), c in -2.0f64..2.0) {
        let mut rng = TestRng::new(seed, "hat-multilinear");
        let dom = Arc::new(SourceDomain::circle(32).unwrap());
        let omega = rng.form(3, 3);
        let alpha = rng.source_form(&dom, 0);
        let h = hat_pairing(&omega, &alpha, &dom).unwrap();
        let f = rng.map_point(&dom, 3).unwrap();
        let ys: Vec<MapTangent> = (0..3).map(|_| rng.map_tangent(&dom, 3).unwrap()).collect();
        let v = h.eval_owned(&f, &ys[..2]).unwrap();
        let swapped = h.eval_owned(&f, &[ys[1].clone(), ys[0].clone()]).unwrap();
        prop_assert!(close(v, -swapped, 1e-10));
        let mixed = ys[0].add(&ys[2].scale(c)).unwrap();
        let lhs = h.eval_owned(&f, &[mixed, ys[1].clone()]).unwrap();
        let rhs = v + c * h.eval_owned(&f, &[ys[2].clone(), ys[1].clone()]).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), shift in -2.0f64..2.0) {
        let mut rng = TestRng::new(seed, "projection");
        let dom = SourceDomain::torus2(32, 32).unwrap();
        let a = rng.periodic_fn(2, 3, 3);
        let alpha: Vec<f64> = (0..dom.len()).map(|i| a.value(dom.node(i)) + shift).collect();
        let once = projection_p(&dom, &alpha).unwrap();
        let twice = projection_p(&dom, &once).unwrap();
        prop_assert!(once.iter().zip(&twice).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn right_inverse_round_trips_exact_forms(seed in any::<u64>()) {
        let mut rng = TestRng::new(seed, "round-trip");
        let dom = SourceDomain::torus2(32, 32).unwrap();
        let a = rng.periodic_fn(2, 3, 3);
        let alpha: Vec<f64> = (0..dom.len()).map(|i| a.value(dom.node(i))).collect();
        let da = gradient(&dom, &alpha).unwrap();
        let again = gradient(&dom, &right_inverse_b(&dom, &da, EXACTNESS_THRESHOLD).unwrap()).unwrap();
        let gap = da.dx.iter().zip(&again.dx).chain(da.dy.iter().zip(&again.dy)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-10);
    }

    #[test]
    fn periodic_differentiation_annihilates_constants(c in -5.0f64..5.0, n in 8usize..64) {
        let dom = SourceDomain::circle(n).unwrap();
        let d = dom.differentiate(&vec![c; n], 0).unwrap();
        prop_assert!(d.iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn quadrature_weights_sum_to_the_volume() {
    let cases = [
        (SourceDomain::circle(48).unwrap(), 2.0 * PI),
        (SourceDomain::torus2(16, 24).unwrap(), 4.0 * PI * PI),
        (SourceDomain::interval(33).unwrap(), 1.0),
    ];
    for (dom, vol) in cases {
        let sum: f64 = dom.weights().iter().sum();
        assert!((sum - vol).abs() < 1e-12, "{sum} against {vol}");
    }
}

#[test]
fn only_the_interval_has_a_boundary() {
    assert!(SourceDomain::circle(16).unwrap().boundary().is_none());
    assert!(SourceDomain::torus2(16, 16).unwrap().boundary().is_none());
    let b = SourceDomain::interval(16).unwrap().boundary().unwrap();
    assert_eq!(b.domain.len(), 2);
}

#[test]
fn trapezoid_is_exact_below_nyquist() {
    let dom = SourceDomain::circle(32).unwrap();
    for k in 1..16 {
        let s: f64 = (0..dom.len()).map(|i| dom.weights()[i] * (k as f64 * dom.node(i)[0]).cos()).sum();
        assert!(s.abs() < 1e-13, "mode {k}: {s}");
    }
}
