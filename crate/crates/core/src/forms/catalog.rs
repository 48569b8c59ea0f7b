//! Named test forms, addressable by string id.

use super::{Form, ScalarFn};
use crate::error::{Error, Result};

/// Ids accepted by [`form`], with a short description.
pub const ENTRIES: &[(&str, &str)] = &[
    ("r2.dx", "dx on R^2"),
    ("r2.dy", "dy on R^2"),
    ("r2.area", "dx∧dy on R^2"),
    ("r2.x_dy", "x dy on R^2"),
    ("r2.sin_x_dy", "sin(x) dy on R^2"),
    ("r2.x", "the function x on R^2"),
    ("r3.volume", "dx∧dy∧dz on R^3"),
    ("r3.z_dxdy", "z dx∧dy on R^3"),
    ("r3.trig2", "sin(y+z) dx∧dy + cos(x) dy∧dz on R^3"),
    ("r4.u1_du3", "u1 du3 on R^4"),
    ("r4.du1du3", "du1∧du3 on R^4"),
    ("r4.symplectic", "du1∧du2 + du3∧du4 on R^4"),
];

pub fn ids() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(id, _)| *id)
}

pub fn form(id: &str) -> Result<Form> {
    let c = |dim, v| ScalarFn::constant(dim, v);
    let f = match id {
        "r2.dx" => Form::coordinate(2, 0),
        "r2.dy" => Form::coordinate(2, 1),
        "r2.area" => Form::volume(2),
        "r2.x_dy" => Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::coordinate(2, 0))])?,
        "r2.sin_x_dy" => Form::from_coefficients(2, 1, vec![(vec![1], ScalarFn::wave(1.0, &[1.0, 0.0], 0.0))])?,
        "r2.x" => Form::function(ScalarFn::coordinate(2, 0)),
        "r3.volume" => Form::volume(3),
        "r3.z_dxdy" => Form::from_coefficients(3, 2, vec![(vec![0, 1], ScalarFn::coordinate(3, 2))])?,
        "r3.trig2" => Form::from_coefficients(
            3,
            2,
            vec![
                (vec![0, 1], ScalarFn::wave(1.0, &[0.0, 1.0, 1.0], 0.0)),
                (vec![1, 2], ScalarFn::cos_wave(1.0, &[1.0, 0.0, 0.0], 0.0)),
            ],
        )?,
        "r4.u1_du3" => Form::from_coefficients(4, 1, vec![(vec![2], ScalarFn::coordinate(4, 0))])?,
        "r4.du1du3" => Form::from_coefficients(4, 2, vec![(vec![0, 2], c(4, 1.0))])?,
        "r4.symplectic" => Form::from_coefficients(4, 2, vec![(vec![0, 1], c(4, 1.0)), (vec![2, 3], c(4, 1.0))])?,
        other => {
            let known: Vec<&str> = ids().collect();
            return Err(Error::Invalid(format!("unknown form id {other:?}; known ids: {}", known.join(", "))));
        }
    };
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Fd;

    #[test]
    fn every_entry_builds() {
        for id in ids() {
            let f = form(id).unwrap();
            assert!(f.has_analytic_d(), "{id}");
        }
        assert!(form("nope").is_err());
    }

    #[test]
    fn exact_entry_has_expected_derivative() {
        let d = form("r4.u1_du3").unwrap().exterior_derivative(Fd::default());
        let e = |i: usize| {
            let mut v = vec![0.0; 4];
            v[i] = 1.0;
            v
        };
        assert_eq!(d.eval_vecs(&[0.1, 0.2, 0.3, 0.4], &[e(0), e(2)]), 1.0);
    }
}
