//! Discrete-Fourier tools on uniform periodic grids over `[0, 2π)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

/// Forward/inverse FFT plans for each grid size used by a domain.
/// Plans are immutable and shareable across threads.
#[derive(Clone)]
pub struct Plans {
    plans: BTreeMap<usize, PlanPair>,
}

impl fmt::Debug for Plans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plans").field("sizes", &self.plans.keys().collect::<Vec<_>>()).finish()
    }
}

impl Plans {
    pub fn new(sizes: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let plans = sizes
            .iter()
            .map(|&n| (n, (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))))
            .collect();
        Self { plans }
    }

    fn get(&self, n: usize) -> &(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
        self.plans.get(&n).expect("plan for grid size")
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.get(data.len()).0.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.get(data.len()).1.process(data);
    }
}

/// Signed wavenumber of FFT bin `j` on an `n`-point grid. The Nyquist bin of
/// an even grid is reported as `n/2`.
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn is_nyquist(j: usize, n: usize) -> bool {
    n.is_multiple_of(2) && j == n / 2
}

/// Spectral first derivative of a real periodic sample on `[0, 2π)`.
/// The Nyquist mode is dropped.
pub fn derivative(plans: &Plans, line: &[f64]) -> Vec<f64> {
    let n = line.len();
    let mut buf: Vec<Complex64> = line.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plans.forward(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        if is_nyquist(j, n) {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, wavenumber(j, n) as f64);
        }
    }
    plans.inverse(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// In-place 2D transform of a row-major `n1 × n2` array (unnormalized).
pub fn fft2(plans: &Plans, n1: usize, n2: usize, data: &mut [Complex64], inverse: bool) {
    let run = |buf: &mut [Complex64]| {
        if inverse {
            plans.inverse(buf)
        } else {
            plans.forward(buf)
        }
    };
    for row in data.chunks_mut(n2) {
        run(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for j in 0..n2 {
        for i in 0..n1 {
            col[i] = data[i * n2 + j];
        }
        run(&mut col);
        for i in 0..n1 {
            data[i * n2 + j] = col[i];
        }
    }
}

pub fn is_nyquist_bin(j: usize, n: usize) -> bool {
    is_nyquist(j, n)
}

/// Basis function of bin `j` at angle `theta`; the Nyquist bin uses the real
/// cosine so the interpolant of real data stays real.
fn basis(j: usize, n: usize, theta: f64) -> Complex64 {
    if is_nyquist(j, n) {
        Complex64::new((n as f64 / 2.0 * theta).cos(), 0.0)
    } else {
        Complex64::from_polar(1.0, wavenumber(j, n) as f64 * theta)
    }
}

/// Trigonometric interpolant of samples on a tensor grid of up to two
/// periodic axes (row-major, last axis fastest).
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    shape: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(plans: &Plans, shape: &[usize], samples: &[f64]) -> Self {
        let total: usize = shape.iter().product();
        assert_eq!(samples.len(), total);
        let mut coeffs: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        match shape.len() {
            1 => plans.forward(&mut coeffs),
            2 => fft2(plans, shape[0], shape[1], &mut coeffs, false),
            d => panic!("trigonometric interpolation on {d} axes is not supported"),
        }
        let scale = 1.0 / total as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Self { shape: shape.to_vec(), coeffs }
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        match self.shape.len() {
            1 => {
                let n = self.shape[0];
                (0..n).map(|j| (self.coeffs[j] * basis(j, n, point[0])).re).sum()
            }
            _ => {
                let (n1, n2) = (self.shape[0], self.shape[1]);
                let e2: Vec<Complex64> = (0..n2).map(|j| basis(j, n2, point[1])).collect();
                let mut total = Complex64::new(0.0, 0.0);
                for i in 0..n1 {
                    let row = &self.coeffs[i * n2..(i + 1) * n2];
                    let inner: Complex64 = row.iter().zip(&e2).map(|(c, e)| c * e).sum();
                    total += inner * basis(i, n1, point[0]);
                }
                total.re
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_of_sine_is_cosine() {
        let n = 64;
        let plans = Plans::new(&[n]);
        let th: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let s: Vec<f64> = th.iter().map(|t| t.sin()).collect();
        let d = derivative(&plans, &s);
        let err = d.iter().zip(&th).map(|(d, t)| (d - t.cos()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13, "err = {err}");
    }

    #[test]
    fn interpolant_reproduces_band_limited_data() {
        let n = 16;
        let plans = Plans::new(&[n]);
        let f = |t: f64| 1.0 + (2.0 * t).sin() - 0.5 * (5.0 * t).cos();
        let s: Vec<f64> = (0..n).map(|i| f(2.0 * PI * i as f64 / n as f64)).collect();
        let it = TrigInterpolant::new(&plans, &[n], &s);
        for t in [0.1, 1.7, 4.4] {
            assert!((it.eval(&[t]) - f(t)).abs() < 1e-13);
        }
    }
}
