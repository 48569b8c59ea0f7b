//! Permutation signs, shuffles and small dense determinants.

use itertools::Itertools;

/// A `(p, n-p)` shuffle: the positions taken by the first factor, the rest,
/// and the sign of the permutation that puts them side by side.
#[derive(Clone, Debug)]
pub struct Shuffle {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub sign: f64,
}

pub fn shuffles(n: usize, p: usize) -> Vec<Shuffle> {
    assert!(p <= n);
    (0..n)
        .combinations(p)
        .map(|first| {
            let second: Vec<usize> = (0..n).filter(|i| !first.contains(i)).collect();
            let inversions: usize = first.iter().enumerate().map(|(t, &i)| i - t).sum();
            let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
            Shuffle { first, second, sign }
        })
        .collect()
}

/// Sign of the permutation that sorts `idx`; zero if an index repeats.
pub fn sort_sign(idx: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Determinant of a square matrix given row-major, by partial pivoting.
pub fn det(mut a: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut d = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap_or(col);
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            d = -d;
        }
        let p = a[col * n + col];
        d *= p;
        for i in (col + 1)..n {
            let factor = a[i * n + col] / p;
            if factor != 0.0 {
                for j in col..n {
                    a[i * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    d
}

/// `det[v_j[idx_i]]`: the basic form `dx^{idx_0} ∧ … ∧ dx^{idx_{p-1}}` on `vs`.
pub fn basis_eval(idx: &[usize], vs: &[&[f64]]) -> f64 {
    let p = idx.len();
    match p {
        0 => 1.0,
        1 => vs[0][idx[0]],
        2 => vs[0][idx[0]] * vs[1][idx[1]] - vs[0][idx[1]] * vs[1][idx[0]],
        _ => {
            let mut m = Vec::with_capacity(p * p);
            for &i in idx {
                for v in vs {
                    m.push(v[i]);
                }
            }
            det(m, p)
        }
    }
}

/// Increasing multi-indices of length `p` in `0..n`.
pub fn multi_indices(n: usize, p: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_counts_and_signs() {
        let s = shuffles(3, 1);
        assert_eq!(s.len(), 3);
        let signs: Vec<f64> = s.iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![1.0, -1.0, 1.0]);
        assert_eq!(shuffles(4, 2).len(), 6);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = vec![2.0, -1.0, 0.5, 1.0, 3.0, -2.0, 0.0, 4.0, 1.0];
        let cof = 2.0 * (3.0 * 1.0 - (-2.0) * 4.0) - -(1.0 * 1.0 - (-2.0) * 0.0)
            + 0.5 * (1.0 * 4.0 - 3.0 * 0.0);
        assert!((det(a, 3) - cof).abs() < 1e-12);
    }

    #[test]
    fn sort_sign_detects_repeats() {
        assert_eq!(sort_sign(&[0, 1, 2]), 1.0);
        assert_eq!(sort_sign(&[1, 0, 2]), -1.0);
        assert_eq!(sort_sign(&[2, 0, 1]), 1.0);
        assert_eq!(sort_sign(&[1, 1]), 0.0);
    }
}
