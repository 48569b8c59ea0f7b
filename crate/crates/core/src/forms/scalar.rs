//! Coefficient functions closed under differentiation.
//!
//! A [`ScalarFn`] is a finite sum of terms `c · x^e · sin(k·x + φ)` (the sine
//! factor is optional). Partial derivatives stay in the same class, which lets
//! coefficient forms carry an exact exterior derivative of every order.

use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Debug, PartialEq)]
pub struct Wave {
    pub k: Vec<f64>,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub powers: Vec<u32>,
    pub wave: Option<Wave>,
}

impl Term {
    fn value(&self, x: &[f64]) -> f64 {
        let mut v = self.coeff;
        for (xi, &e) in x.iter().zip(&self.powers) {
            if e > 0 {
                v *= xi.powi(e as i32);
            }
        }
        if let Some(w) = &self.wave {
            let arg: f64 = w.k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>() + w.phase;
            v *= arg.sin();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFn {
    dim: usize,
    terms: Vec<Term>,
}

impl ScalarFn {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::monomial(dim, c, &vec![0; dim])
    }

    pub fn monomial(dim: usize, coeff: f64, powers: &[u32]) -> Self {
        assert_eq!(powers.len(), dim);
        let mut s = Self::zero(dim);
        s.push(Term { coeff, powers: powers.to_vec(), wave: None });
        s
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut p = vec![0; dim];
        p[i] = 1;
        Self::monomial(dim, 1.0, &p)
    }

    /// `amp · sin(k·x + phase)`.
    pub fn wave(amp: f64, k: &[f64], phase: f64) -> Self {
        let dim = k.len();
        let mut s = Self::zero(dim);
        s.push(Term {
            coeff: amp,
            powers: vec![0; dim],
            wave: Some(Wave { k: k.to_vec(), phase }),
        });
        s
    }

    /// `amp · cos(k·x + phase)`.
    pub fn cos_wave(amp: f64, k: &[f64], phase: f64) -> Self {
        Self::wave(amp, k, phase + FRAC_PI_2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn push(&mut self, t: Term) {
        if t.coeff != 0.0 {
            self.terms.push(t);
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert!(x.len() >= self.dim);
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    pub fn partial(&self, l: usize) -> ScalarFn {
        let mut out = ScalarFn::zero(self.dim);
        for t in &self.terms {
            let e = t.powers[l];
            if e > 0 {
                let mut powers = t.powers.clone();
                powers[l] -= 1;
                out.push(Term { coeff: t.coeff * e as f64, powers, wave: t.wave.clone() });
            }
            if let Some(w) = &t.wave {
                out.push(Term {
                    coeff: t.coeff * w.k[l],
                    powers: t.powers.clone(),
                    wave: Some(Wave { k: w.k.clone(), phase: w.phase + FRAC_PI_2 }),
                });
            }
        }
        out
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|l| self.partial(l).value(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ScalarFn) -> ScalarFn {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn scale(&self, c: f64) -> ScalarFn {
        let mut out = ScalarFn::zero(self.dim);
        for t in &self.terms {
            out.push(Term { coeff: t.coeff * c, ..t.clone() });
        }
        out
    }

    /// Product with a pure monomial, which keeps the term class closed.
    pub fn times_monomial(&self, coeff: f64, powers: &[u32]) -> ScalarFn {
        let mut out = ScalarFn::zero(self.dim);
        for t in &self.terms {
            let p = t.powers.iter().zip(powers).map(|(a, b)| a + b).collect();
            out.push(Term { coeff: t.coeff * coeff, powers: p, wave: t.wave.clone() });
        }
        out
    }

    /// Re-express in a larger chart whose coordinates `offset..offset+dim`
    /// are the current ones.
    pub fn embed(&self, new_dim: usize, offset: usize) -> ScalarFn {
        assert!(offset + self.dim <= new_dim);
        let mut out = ScalarFn::zero(new_dim);
        for t in &self.terms {
            let mut powers = vec![0; new_dim];
            powers[offset..offset + self.dim].copy_from_slice(&t.powers);
            let wave = t.wave.as_ref().map(|w| {
                let mut k = vec![0.0; new_dim];
                k[offset..offset + self.dim].copy_from_slice(&w.k);
                Wave { k, phase: w.phase }
            });
            out.push(Term { coeff: t.coeff, powers, wave });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partials_match_finite_differences() {
        let f = ScalarFn::wave(1.3, &[2.0, -1.0], 0.4)
            .add(&ScalarFn::monomial(2, 0.7, &[2, 1]))
            .add(&ScalarFn::wave(0.5, &[1.0, 3.0], -0.2).times_monomial(1.0, &[1, 0]));
        let x = [0.3, -0.8];
        let h = 1e-6;
        for l in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[l] += h;
            xm[l] -= h;
            let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
            assert!((f.partial(l).value(&x) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let f = ScalarFn::wave(1.0, &[1.5, 2.0], 0.1).times_monomial(2.0, &[1, 2]);
        let x = [0.2, 0.9];
        let a = f.partial(0).partial(1).value(&x);
        let b = f.partial(1).partial(0).value(&x);
        assert!((a - b).abs() < 1e-12);
    }
}
