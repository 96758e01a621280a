use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Real, Scalar};

/// Truncated power series in `nvars` variables, exact through total degree `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<K> {
    cap: u32,
    poly: Poly<K>,
}

impl<K: Scalar> Jet<K> {
    pub fn from_poly(poly: Poly<K>, cap: u32) -> Self {
        Self { poly: poly.truncate(cap), cap }
    }

    pub fn zero(nvars: usize, cap: u32) -> Self {
        Self { poly: Poly::zero(nvars), cap }
    }

    pub fn constant(nvars: usize, cap: u32, k: K) -> Self {
        Self { poly: Poly::constant(nvars, k), cap }
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(nvars, cap, K::one())
    }

    pub fn var(nvars: usize, cap: u32, k: usize) -> Self {
        Self::from_poly(Poly::var(nvars, k), cap)
    }

    /// `Σ_m coeffs[m] y_k^m`.
    pub fn univariate(coeffs: &[K], nvars: usize, k: usize, cap: u32) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in coeffs.iter().enumerate().take(cap as usize + 1) {
            let mut e = vec![0; nvars];
            e[k] = m as u32;
            p.add_monomial(e, c.clone());
        }
        Self { poly: p, cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly<K> {
        &self.poly
    }

    pub fn coeff(&self, e: &[u32]) -> K {
        self.poly.coeff(e)
    }

    pub fn constant_term(&self) -> K {
        self.poly.coeff(&vec![0; self.nvars()])
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Forget every coefficient above degree `cap`.
    pub fn with_cap(&self, cap: u32) -> Self {
        Self::from_poly(self.poly.clone(), cap.min(self.cap))
    }

    pub fn add(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        Self::from_poly(self.poly.add(&o.poly), cap)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        Self::from_poly(self.poly.sub(&o.poly), cap)
    }

    pub fn neg(&self) -> Self {
        Self { poly: self.poly.neg(), cap: self.cap }
    }

    pub fn scale(&self, k: &K) -> Self {
        Self { poly: self.poly.scale(k), cap: self.cap }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        Self { poly: self.poly.mul_truncated(&o.poly, cap), cap }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars(), self.cap);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn swap(&self, i: usize, j: usize) -> Self {
        Self { poly: self.poly.swap(i, j), cap: self.cap }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(Error::NotUnit)?;
        let n = self.nvars();
        // self = c0 (1 + w) with w of order >= 1, so the Neumann series stops at degree cap.
        let w = self.scale(&c0_inv).sub(&Self::one(n, self.cap));
        let mut term = Self::one(n, self.cap);
        let mut acc = Self::one(n, self.cap);
        for _ in 0..self.cap {
            term = term.mul(&w).neg();
            acc = acc.add(&term);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Quotient by `y_i - y_j`; the result is exact through degree `cap - 1`.
    pub fn div_difference(&self, i: usize, j: usize, tol: f64) -> Result<Self> {
        let q = self.poly.div_difference(i, j, tol)?;
        Ok(Self::from_poly(q, self.cap.saturating_sub(1)))
    }

    /// Substitute `x_k ↦ images[k]` into a polynomial.
    pub fn compose(p: &Poly<K>, images: &[Jet<K>]) -> Self {
        let n = images[0].nvars();
        let cap = images.iter().map(|j| j.cap).min().unwrap_or(0);
        let mut acc = Self::zero(n, cap);
        for (e, k) in p.terms() {
            let mut m = Self::constant(n, cap, k.clone());
            for (v, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    m = m.mul(&images[v].pow(ek));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Largest coefficient difference through the common cap.
    pub fn distance(&self, o: &Self) -> f64 {
        self.poly.max_diff(&o.poly, self.cap.min(o.cap))
    }

    /// Largest coefficient magnitude.
    pub fn size(&self) -> f64 {
        self.poly.terms().map(|(_, k)| k.magnitude()).fold(0.0, f64::max)
    }
}

impl<R: Real> Jet<Complex<R>> {
    /// Random jet with coefficients uniform in the unit square.
    pub fn random<G: Rng>(nvars: usize, cap: u32, rng: &mut G) -> Self {
        let mut coeff = |r: &mut G| Complex::new(R::lit(r.gen_range(-1.0..1.0)), R::lit(r.gen_range(-1.0..1.0)));
        Self::from_poly(Poly::random(nvars, cap, 0.8, rng, &mut coeff), cap)
    }
}
