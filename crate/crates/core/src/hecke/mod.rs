//! The twisted group algebra of sections and Weyl group, the elliptic
//! Demazure-Lusztig operators, the analytic membership conditions, and the
//! Bruhat-filtration bases.

mod basis;
mod conditions;
mod element;
mod operators;

pub use basis::{reduced_words, t_basis, t_basis_uniform, t_word, triangularity_check, word_dependence, TriangularityReport};
pub use conditions::{check_conditions, ConditionReport, ConditionStat};
pub use element::HeckeElement;
pub use operators::{
    demazure_dem, demazure_lusztig, demazure_x, demazure_x_root, qwk_pushforward, qwk_term, rank1_pushpull, QwkVariant,
};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elliptic::{CurveParams, CurvePoint, FParams};
use crate::error::{Error, Result};
use crate::rootweyl::WeylGroup;
use crate::scalar::Real;
use crate::sections::{divisor_point, random_point, LinearForm};

/// Which of the two divisor families a sample lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorKind {
    /// `χ_α = 0`.
    Alpha,
    /// `χ_α - χ_γ = 0`.
    AlphaGamma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisorSpec<R> {
    pub kind: DivisorKind,
    pub root: Vec<i64>,
    pub form: LinearForm<R>,
}

impl<R: Real> DivisorSpec<R> {
    pub fn alpha(root: &[i64]) -> Self {
        Self { kind: DivisorKind::Alpha, root: root.to_vec(), form: LinearForm::character(root) }
    }

    pub fn alpha_gamma(root: &[i64]) -> Self {
        Self { kind: DivisorKind::AlphaGamma, root: root.to_vec(), form: LinearForm::minus_gamma(root) }
    }
}

fn parallel(a: &[i64], b: &[i64]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
}

/// Random sample points of `E^n × E` kept at lattice distance at least
/// `margin` from every watched divisor translate
/// `χ ∈ {0, ±a, ±b, ±(a+b)}` for `χ ∈ {χ_β, χ_γ, χ_β ± χ_γ}`.
pub struct Sampler<'a, R> {
    pub group: &'a WeylGroup,
    pub curve: &'a CurveParams<R>,
    pub rng: ChaCha8Rng,
    pub margin: R,
    translates: Vec<CurvePoint<R>>,
    watch: Vec<LinearForm<R>>,
}

impl<'a, R: Real> Sampler<'a, R> {
    pub fn new(group: &'a WeylGroup, curve: &'a CurveParams<R>, fps: &[FParams<R>], seed: u64) -> Self {
        let mut translates = vec![CurvePoint::zero()];
        for fp in fps {
            for s in fp.singular_set() {
                translates.push(s);
                translates.push(s.neg());
            }
        }
        let n = group.datum.rank;
        let mut watch = vec![LinearForm::gamma_form(n)];
        for r in group.datum.positive_roots() {
            watch.push(LinearForm::character(&r.vector));
            watch.push(LinearForm::new(r.vector.clone(), 1));
            watch.push(LinearForm::new(r.vector.clone(), -1));
        }
        Self { group, curve, rng: ChaCha8Rng::seed_from_u64(seed), margin: R::lit(1e-2), translates, watch }
    }

    pub fn rank(&self) -> usize {
        self.group.datum.rank
    }

    fn clear(&self, p: &[Complex<R>], on: Option<&LinearForm<R>>) -> bool {
        let c = self.curve;
        self.watch.iter().all(|l| {
            if let Some(d) = on {
                if parallel(&l.slope(), &d.slope()) {
                    return true;
                }
            }
            let v = l.eval(p, c);
            self.translates.iter().all(|s| (CurvePoint::from_complex(v, c).sub(s)).distance_to_lattice(c) >= self.margin)
        })
    }

    /// A random point off every watched divisor.
    pub fn generic_point(&mut self) -> Result<Vec<Complex<R>>> {
        for _ in 0..10_000 {
            let p = random_point(self.rank(), &mut self.rng, self.curve);
            if self.clear(&p, None) {
                return Ok(p);
            }
        }
        Err(Error::InvalidConfig("no generic sample point found".into()))
    }

    /// A random point of `form = 0` off every other watched divisor.
    pub fn divisor_point(&mut self, form: &LinearForm<R>) -> Result<Vec<Complex<R>>> {
        for _ in 0..10_000 {
            let p = divisor_point(form, &mut self.rng, self.curve);
            if self.clear(&p, Some(form)) {
                return Ok(p);
            }
        }
        Err(Error::InvalidConfig("no divisor sample point found".into()))
    }

    /// Unit direction along the solved coordinate of `form`, transverse to `form = 0`.
    pub fn transverse(&self, form: &LinearForm<R>) -> Vec<Complex<R>> {
        let slope = form.slope();
        let mut k = 0;
        for (i, s) in slope.iter().enumerate() {
            if s.abs() > slope[k].abs() {
                k = i;
            }
        }
        let mut dir = vec![Complex::new(R::zero(), R::zero()); slope.len()];
        dir[k] = Complex::new(R::one(), R::zero());
        dir
    }
}
