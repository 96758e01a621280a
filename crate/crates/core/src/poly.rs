//! Sparse multivariate polynomials over a [`Scalar`] ring.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<K> {
    nvars: usize,
    terms: BTreeMap<Exponent, K>,
}

impl<K: Scalar> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, k: K) -> Self {
        let mut p = Self::zero(nvars);
        p.add_monomial(vec![0; nvars], k);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    /// The variable `x_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_monomial(e, K::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> K {
        self.terms.get(e).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_monomial(&mut self, e: Exponent, k: K) {
        debug_assert_eq!(e.len(), self.nvars);
        if k.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => old + k,
            None => k,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, k) in &o.terms {
            p.add_monomial(e.clone(), k.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, k)| (e.clone(), -k.clone())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_monomial(e.clone(), c.clone() * k.clone());
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_truncated(o, u32::MAX)
    }

    /// Product with every monomial of total degree above `cap` dropped.
    pub fn mul_truncated(&self, o: &Self, cap: u32) -> Self {
        let mut p = Self::zero(self.nvars);
        for (ea, ka) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, kb) in &o.terms {
                let db: u32 = eb.iter().sum();
                if da.saturating_add(db) > cap {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_monomial(e, ka.clone() * kb.clone());
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut p = Self::one(self.nvars);
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    /// Drop monomials of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= cap).map(|(e, k)| (e.clone(), k.clone())).collect(),
        }
    }

    /// Exchange the variables `x_i` and `x_j`.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, k) in &self.terms {
            let mut e2 = e.clone();
            e2.swap(i, j);
            p.add_monomial(e2, k.clone());
        }
        p
    }

    /// Exact quotient by `x_i - x_j`. A remainder with a coefficient of
    /// magnitude above `tol` times the largest input coefficient is reported
    /// as [`Error::NonDivisible`]; `tol = 0` demands an exact zero remainder.
    pub fn div_difference(&self, i: usize, j: usize, tol: f64) -> Result<Self> {
        let n = self.nvars;
        let top = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        // c[k] = coefficient of x_i^k, a polynomial in the other variables.
        let mut c: Vec<Self> = vec![Self::zero(n); top as usize + 1];
        for (e, k) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            c[e[i] as usize].add_monomial(rest, k.clone());
        }
        let xj = Self::var(n, j);
        let mut q: Vec<Self> = vec![Self::zero(n); top as usize];
        let mut carry = Self::zero(n);
        for k in (0..=top as usize).rev() {
            let cur = c[k].add(&carry);
            if k == 0 {
                let scale = self.terms.values().map(|k| k.magnitude()).fold(1.0, f64::max);
                if cur.terms.values().any(|r| r.magnitude() > tol * scale) {
                    return Err(Error::NonDivisible { numer: format!("{} terms", self.len()) });
                }
            } else {
                carry = cur.mul(&xj);
                q[k - 1] = cur;
            }
        }
        let mut out = Self::zero(n);
        for (k, qk) in q.into_iter().enumerate() {
            for (e, v) in qk.terms {
                let mut e2 = e;
                e2[i] += k as u32;
                out.add_monomial(e2, v);
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude of `self - o` over monomials of degree `<= cap`.
    pub fn max_diff(&self, o: &Self, cap: u32) -> f64 {
        self.sub(o).truncate(cap).terms.values().map(|k| k.magnitude()).fold(0.0, f64::max)
    }

    /// Random polynomial of total degree `<= deg` with coefficients from `coeff`.
    pub fn random<G: Rng>(nvars: usize, deg: u32, density: f64, rng: &mut G, coeff: &mut dyn FnMut(&mut G) -> K) -> Self {
        let mut p = Self::zero(nvars);
        for e in exponents_up_to(nvars, deg) {
            if rng.gen::<f64>() < density {
                let k = coeff(rng);
                p.add_monomial(e, k);
            }
        }
        p
    }
}

/// All exponent vectors in `n` variables of total degree `<= deg`, in graded lexicographic order.
pub fn exponents_up_to(n: usize, deg: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=deg {
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, d, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Exponent>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn rand_coeff(rng: &mut ChaCha8Rng) -> Q {
        Q::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into())
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_up_to(2, 2).len(), 6);
        assert_eq!(exponents_up_to(3, 4).len(), 35);
        assert_eq!(exponents_up_to(1, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn difference_division_is_exact_on_antisymmetric_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = Poly::random(3, 4, 0.5, &mut rng, &mut rand_coeff);
            let num = g.swap(0, 1).sub(&g);
            let quo = num.div_difference(0, 1, 0.0).unwrap();
            let back = quo.mul(&Poly::var(3, 0).sub(&Poly::var(3, 1)));
            assert_eq!(back, num);
        }
        let x0 = Poly::<Q>::var(2, 0);
        assert!(matches!(x0.div_difference(0, 1, 0.0), Err(Error::NonDivisible { .. })));
    }

    #[test]
    fn hand_quotient() {
        // (x1 - x0)/(x0 - x1) = -1
        let num = Poly::<Q>::var(2, 1).sub(&Poly::var(2, 0));
        assert_eq!(num.div_difference(0, 1, 0.0).unwrap(), Poly::constant(2, q(-1)));
    }

    #[test]
    fn ring_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let a = Poly::random(2, 3, 0.6, &mut rng, &mut rand_coeff);
            let b = Poly::random(2, 3, 0.6, &mut rng, &mut rand_coeff);
            let c = Poly::random(2, 3, 0.6, &mut rng, &mut rand_coeff);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
