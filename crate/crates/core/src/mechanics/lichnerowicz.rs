//! The Lichnerowicz cocycle `σ_η(X, Y) = ∫_M η(X, Y) ν` on divergence-free
//! fields of a flat 2-torus `M`, meshed by a torus source domain.

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::source::{DomainKind, SourceDomain};

/// Quadrature of `η(X, Y) ν` with `ν = nu_scale · dx∧dy`, for node-major
/// fields `X`, `Y`.
pub fn lichnerowicz(mesh: &SourceDomain, eta: &Form, x: &[f64], y: &[f64], nu_scale: f64) -> Result<f64> {
    if mesh.kind() != DomainKind::Torus2 {
        return Err(Error::UnsupportedDomain(format!("{:?}: needs the 2-torus", mesh.kind())));
    }
    if eta.dim() != 2 || eta.degree() != 2 {
        return Err(Error::Degree(format!("expected a 2-form on R^2, got degree {} on R^{}", eta.degree(), eta.dim())));
    }
    for v in [x, y] {
        if v.len() != 2 * mesh.len() {
            return Err(Error::DimensionMismatch { expected: 2 * mesh.len(), found: v.len() });
        }
    }
    Ok(nu_scale
        * (0..mesh.len())
            .map(|i| mesh.signed_weight(i) * eta.eval(mesh.node(i), &[&x[2 * i..2 * i + 2], &y[2 * i..2 * i + 2]]))
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::ScalarFn;
    use crate::mechanics::diffex::{field_bracket, stream_field};
    use std::f64::consts::PI;

    fn constant_field(n: usize, v: [f64; 2]) -> Vec<f64> {
        (0..n).flat_map(|_| v).collect()
    }

    #[test]
    fn constant_integrand() {
        let mesh = SourceDomain::torus2(8, 8).unwrap();
        let eta = Form::volume(2).scale(1.7);
        let (ex, ey) = (constant_field(64, [1.0, 0.0]), constant_field(64, [0.0, 1.0]));
        let v = lichnerowicz(&mesh, &eta, &ex, &ey, 1.0 / (4.0 * PI * PI)).unwrap();
        assert!((v - 1.7).abs() < 1e-14);
        assert_eq!(lichnerowicz(&mesh, &eta, &ex, &ex, 1.0).unwrap(), 0.0);
        let swapped = lichnerowicz(&mesh, &eta, &ey, &ex, 1.0 / (4.0 * PI * PI)).unwrap();
        assert!((v + swapped).abs() < 1e-14);
    }

    #[test]
    fn cyclic_identity_with_a_variable_form() {
        let mesh = SourceDomain::torus2(32, 32).unwrap();
        let coeff = ScalarFn::constant(2, 1.0).add(&ScalarFn::wave(0.5, &[1.0, 2.0], 0.3));
        let eta = Form::from_coefficients(2, 2, vec![(vec![0, 1], coeff)]).unwrap();
        let sample = |g: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
            (0..mesh.len()).map(|i| g(mesh.node(i)[0], mesh.node(i)[1])).collect()
        };
        let fields: Vec<Vec<f64>> = [
            sample(&|x, y| x.sin() + 0.3 * y.cos()),
            sample(&|x, y| y.cos() - 0.2 * (x + y).sin()),
            sample(&|x, y| y.sin() + (x + y).cos()),
        ]
        .iter()
        .map(|a| stream_field(&mesh, a).unwrap())
        .collect();
        let sigma = |a: &[f64], b: &[f64]| lichnerowicz(&mesh, &eta, a, b, 1.0).unwrap();
        let br = |a: &[f64], b: &[f64]| field_bracket(&mesh, a, b).unwrap();
        let (x, y, z) = (&fields[0], &fields[1], &fields[2]);
        let cyclic = sigma(&br(x, y), z) + sigma(&br(y, z), x) + sigma(&br(z, x), y);
        let scale = sigma(&br(x, y), z).abs();
        assert!(scale > 1.0, "{scale}");
        assert!(cyclic.abs() < 1e-8 * scale, "{cyclic}");
    }
}
