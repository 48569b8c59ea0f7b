//! Observed convergence orders of residuals under step refinement.

use serde::{Deserialize, Serialize};

/// Residuals whose coarsest level is below this are at machine precision
/// and carry no order information.
pub const MACHINE_FLOOR: f64 = 1e-11;

/// Minimum observed order accepted for second-order discretizations.
pub const MIN_ORDER: f64 = 1.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    /// Least-squares slope of `log r` against `log h`; absent at the floor
    /// or with fewer than two levels.
    pub order: Option<f64>,
    pub at_floor: bool,
}

impl OrderFit {
    pub fn acceptable(&self, min_order: f64) -> bool {
        self.at_floor || self.order.is_some_and(|p| p >= min_order)
    }
}

/// `h, h/2, h/4, …`.
pub fn step_ladder(coarsest: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|i| coarsest / f64::powi(2.0, i as i32)).collect()
}

/// Slope of the least-squares line through `(log h_i, log r_i)`.
pub fn fit_order(hs: &[f64], residuals: &[f64]) -> Option<f64> {
    if hs.len() < 2 || hs.len() != residuals.len() {
        return None;
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.abs().max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Fit, or report the floor when even the coarsest residual is negligible.
pub fn assess(hs: &[f64], residuals: &[f64]) -> OrderFit {
    let coarsest = hs
        .iter()
        .zip(residuals)
        .max_by(|a, b| a.0.total_cmp(b.0))
        .map(|(_, r)| r.abs())
        .unwrap_or(0.0);
    if coarsest < MACHINE_FLOOR {
        return OrderFit { order: None, at_floor: true };
    }
    OrderFit { order: fit_order(hs, residuals), at_floor: false }
}
