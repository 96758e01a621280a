use std::collections::BTreeMap;

use num_complex::Complex;

use crate::elliptic::CurveParams;
use crate::error::Result;
use crate::rootweyl::{act_point, WeylGroup};
use crate::scalar::Real;
use crate::sections::{Evaluation, SectionExpr};

/// Finite sum `Σ f_w δ_w` in the twisted group algebra, keyed by the index
/// of `w` in its [`WeylGroup`].
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeElement<R> {
    terms: BTreeMap<usize, SectionExpr<R>>,
}

impl<R: Real> Default for HeckeElement<R> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<R: Real> HeckeElement<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `f δ_w`.
    pub fn term(w: usize, f: SectionExpr<R>) -> Self {
        let mut h = Self::zero();
        h.add_term(w, f);
        h
    }

    pub fn delta(w: usize) -> Self {
        Self::term(w, SectionExpr::one())
    }

    pub fn identity(g: &WeylGroup) -> Self {
        Self::delta(g.identity())
    }

    /// `f δ_e`.
    pub fn scalar(f: SectionExpr<R>, g: &WeylGroup) -> Self {
        Self::term(g.identity(), f)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, SectionExpr<R>)>) -> Self {
        let mut h = Self::zero();
        for (w, f) in terms {
            h.add_term(w, f);
        }
        h
    }

    /// Accumulate `f δ_w`; literal zero coefficients are never stored.
    pub fn add_term(&mut self, w: usize, f: SectionExpr<R>) {
        if f.is_zero_const() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                self.terms.insert(w, SectionExpr::sum(vec![old, f]));
            }
            None => {
                self.terms.insert(w, f);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &SectionExpr<R>)> {
        self.terms.iter().map(|(w, f)| (*w, f))
    }

    pub fn coeff(&self, w: usize) -> Option<&SectionExpr<R>> {
        self.terms.get(&w)
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut h = self.clone();
        for (w, f) in o.terms() {
            h.add_term(w, f.clone());
        }
        h
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms().map(|(w, f)| (w, f.clone().neg())))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `(f δ_w)(g δ_v) = f · w(g) · δ_{wv}`.
    pub fn mult(&self, o: &Self, g: &WeylGroup) -> Self {
        let mut out = Self::zero();
        for (w, f) in self.terms() {
            let winv = &g.element(g.inverse(w)).matrix;
            for (v, h) in o.terms() {
                let pulled = if w == g.identity() { h.clone() } else { h.compose(winv) };
                out.add_term(g.mul(w, v), SectionExpr::prod(vec![f.clone(), pulled]));
            }
        }
        out
    }

    /// Value of the coefficient of `δ_w` (zero when absent).
    pub fn eval_coeff(&self, w: usize, p: &[Complex<R>], c: &CurveParams<R>) -> Result<Evaluation<R>> {
        match self.terms.get(&w) {
            Some(f) => f.eval_scaled(p, c),
            None => Ok(Evaluation { value: Complex::new(R::zero(), R::zero()), scale: R::one() }),
        }
    }

    /// Module action on an evaluator: `p ↦ Σ_w f_w(p) σ(w⁻¹ p)`.
    pub fn act_at<S>(&self, sigma: &S, p: &[Complex<R>], g: &WeylGroup, c: &CurveParams<R>) -> Result<Evaluation<R>>
    where
        S: Fn(&[Complex<R>]) -> Result<Evaluation<R>>,
    {
        let mut value = Complex::new(R::zero(), R::zero());
        let mut scale = R::one();
        for (w, f) in self.terms() {
            let fv = f.eval_scaled(p, c)?;
            let sv = sigma(&act_point(g.element(g.inverse(w)), p))?;
            let term = fv.value * sv.value;
            scale = scale.max(fv.scale).max(sv.scale).max(term.norm());
            value = value + term;
        }
        scale = scale.max(value.norm());
        Ok(Evaluation { value, scale })
    }

    /// [`Self::act_at`] on a section expression.
    pub fn act(&self, sigma: &SectionExpr<R>, p: &[Complex<R>], g: &WeylGroup, c: &CurveParams<R>) -> Result<Evaluation<R>> {
        self.act_at(&|q: &[Complex<R>]| sigma.eval_scaled(q, c), p, g, c)
    }
}
