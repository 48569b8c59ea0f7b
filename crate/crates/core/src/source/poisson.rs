//! Spectral right inverse of `d` on the flat 2-torus, the projection
//! `P = 1 − b∘d`, and exact divergence-free fields from stream functions.
//!
//! The right inverse uses the zero-mean gauge: `b(β)` is the unique potential
//! with vanishing average. Momentum values computed with `b` depend on this
//! choice.

use num_complex::Complex64;

use super::domain::{DomainKind, SourceDomain};
use super::spectral::{fft2, is_nyquist_bin, wavenumber};
use crate::error::{Error, Result};

/// Default rejection threshold for the closedness test on 1-forms.
pub const EXACTNESS_THRESHOLD: f64 = 1e-8;

fn require_torus(dom: &SourceDomain) -> Result<(usize, usize)> {
    if dom.kind() != DomainKind::Torus2 {
        return Err(Error::UnsupportedDomain(format!("{:?}: needs the 2-torus", dom.kind())));
    }
    Ok((dom.shape()[0], dom.shape()[1]))
}

/// Node-sampled 1-form `β = βx dx + βy dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

/// `dα` for a node-sampled function on the torus.
pub fn gradient(dom: &SourceDomain, alpha: &[f64]) -> Result<OneForm> {
    require_torus(dom)?;
    Ok(OneForm { dx: dom.differentiate(alpha, 0)?, dy: dom.differentiate(alpha, 1)? })
}

/// Largest of `|∂x βy − ∂y βx|` over nodes and the means of both components;
/// zero for exact 1-forms on the torus.
pub fn exactness_residual(dom: &SourceDomain, beta: &OneForm) -> Result<f64> {
    require_torus(dom)?;
    let curl_a = dom.differentiate(&beta.dy, 0)?;
    let curl_b = dom.differentiate(&beta.dx, 1)?;
    let curl = curl_a.iter().zip(&curl_b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let n = dom.len() as f64;
    let mean_x = beta.dx.iter().sum::<f64>() / n;
    let mean_y = beta.dy.iter().sum::<f64>() / n;
    Ok(curl.max(mean_x.abs()).max(mean_y.abs()))
}

/// The zero-mean potential `α` with `dα = β`, found by solving
/// `Δα = div β` spectrally. Rejects `β` whose exactness residual exceeds
/// `threshold`.
pub fn right_inverse_b(dom: &SourceDomain, beta: &OneForm, threshold: f64) -> Result<Vec<f64>> {
    let (n1, n2) = require_torus(dom)?;
    if beta.dx.len() != dom.len() || beta.dy.len() != dom.len() {
        return Err(Error::DimensionMismatch { expected: dom.len(), found: beta.dx.len().min(beta.dy.len()) });
    }
    let residual = exactness_residual(dom, beta)?;
    if residual > threshold {
        return Err(Error::NotExact { residual, threshold });
    }
    let plans = dom.spectral_plans().expect("torus has plans");
    let to_c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let (mut bx, mut by) = (to_c(&beta.dx), to_c(&beta.dy));
    fft2(plans, n1, n2, &mut bx, false);
    fft2(plans, n1, n2, &mut by, false);
    let mut alpha = vec![Complex64::new(0.0, 0.0); dom.len()];
    for i in 0..n1 {
        for j in 0..n2 {
            if (i == 0 && j == 0) || is_nyquist_bin(i, n1) || is_nyquist_bin(j, n2) {
                continue;
            }
            let (kx, ky) = (wavenumber(i, n1) as f64, wavenumber(j, n2) as f64);
            let idx = i * n2 + j;
            let div = Complex64::new(0.0, kx) * bx[idx] + Complex64::new(0.0, ky) * by[idx];
            alpha[idx] = -div / (kx * kx + ky * ky);
        }
    }
    fft2(plans, n1, n2, &mut alpha, true);
    let scale = 1.0 / dom.len() as f64;
    Ok(alpha.iter().map(|c| c.re * scale).collect())
}

/// `P α = α − b(dα)`; on functions this is the constant mean value.
pub fn projection_p(dom: &SourceDomain, alpha: &[f64]) -> Result<Vec<f64>> {
    let beta = gradient(dom, alpha)?;
    let potential = right_inverse_b(dom, &beta, f64::INFINITY)?;
    Ok(alpha.iter().zip(potential).map(|(a, b)| a - b).collect())
}

/// The field `Z = (∂y α, −∂x α)`, characterized by `i_Z(dx∧dy) = dα`.
/// Returned node-major with two components per node.
pub fn exact_divfree_field(dom: &SourceDomain, alpha: &[f64]) -> Result<Vec<f64>> {
    let g = gradient(dom, alpha)?;
    Ok(g.dy.iter().zip(&g.dx).flat_map(|(&ay, &ax)| [ay, -ax]).collect())
}

/// Spectral divergence of a node-major 2-vector field on the torus.
pub fn divergence(dom: &SourceDomain, z: &[f64]) -> Result<Vec<f64>> {
    require_torus(dom)?;
    let zx: Vec<f64> = z.iter().step_by(2).copied().collect();
    let zy: Vec<f64> = z.iter().skip(1).step_by(2).copied().collect();
    let a = dom.differentiate(&zx, 0)?;
    let b = dom.differentiate(&zy, 1)?;
    Ok(a.iter().zip(b).map(|(a, b)| a + b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> SourceDomain {
        SourceDomain::torus2(32, 32).unwrap()
    }

    fn sample(dom: &SourceDomain, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..dom.len()).map(|i| f(dom.node(i)[0], dom.node(i)[1])).collect()
    }

    #[test]
    fn b_of_cos_dx_is_sin() {
        let dom = torus();
        let beta = OneForm { dx: sample(&dom, |x, _| x.cos()), dy: vec![0.0; dom.len()] };
        let a = right_inverse_b(&dom, &beta, EXACTNESS_THRESHOLD).unwrap();
        let expect = sample(&dom, |x, _| x.sin());
        assert!(a.iter().zip(expect).all(|(a, e)| (a - e).abs() < 1e-13));

        let zero = OneForm { dx: vec![0.0; dom.len()], dy: vec![0.0; dom.len()] };
        assert!(right_inverse_b(&dom, &zero, EXACTNESS_THRESHOLD).unwrap().iter().all(|a| a.abs() < 1e-15));
    }

    #[test]
    fn non_exact_forms_are_rejected() {
        let dom = torus();
        // dx is closed but not exact; y dx-type curl sources fail too
        let harmonic = OneForm { dx: vec![1.0; dom.len()], dy: vec![0.0; dom.len()] };
        assert!(matches!(right_inverse_b(&dom, &harmonic, EXACTNESS_THRESHOLD), Err(Error::NotExact { .. })));
        let curly = OneForm { dx: sample(&dom, |_, y| y.sin()), dy: vec![0.0; dom.len()] };
        assert!(matches!(right_inverse_b(&dom, &curly, EXACTNESS_THRESHOLD), Err(Error::NotExact { .. })));
    }

    #[test]
    fn projection_examples() {
        let dom = torus();
        let p = projection_p(&dom, &sample(&dom, |x, _| x.sin())).unwrap();
        assert!(p.iter().all(|v| v.abs() < 1e-13));
        let p = projection_p(&dom, &sample(&dom, |x, y| 3.0 + x.sin() * y.sin())).unwrap();
        assert!(p.iter().all(|v| (v - 3.0).abs() < 1e-13));
        let p = projection_p(&dom, &vec![-1.5; dom.len()]).unwrap();
        assert!(p.iter().all(|v| (v + 1.5).abs() < 1e-14));
    }

    #[test]
    fn divfree_field_of_sin_x() {
        let dom = torus();
        let z = exact_divfree_field(&dom, &sample(&dom, |x, _| x.sin())).unwrap();
        for i in 0..dom.len() {
            assert!(z[2 * i].abs() < 1e-13);
            assert!((z[2 * i + 1] + dom.node(i)[0].cos()).abs() < 1e-13);
        }
        let z = exact_divfree_field(&dom, &vec![2.0; dom.len()]).unwrap();
        assert!(z.iter().all(|v| v.abs() < 1e-14));
        let circle = SourceDomain::circle(16).unwrap();
        assert!(matches!(exact_divfree_field(&circle, &[0.0; 16]), Err(Error::UnsupportedDomain(_))));
    }
}
