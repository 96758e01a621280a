use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::quiver::{ClosedForm, Quiver};
use super::{run_relations, Colour, KlrVector, RelationReport, Rep};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// A KLR generator, with zero-based strand indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KlrGen {
    Idem(Colour),
    X(usize),
    Tau(usize),
}

/// Closed-form integer polynomial read into the coefficient ring `K`.
pub fn closed_to<K: Scalar>(p: &ClosedForm) -> Poly<K> {
    let mut out = Poly::zero(p.nvars());
    for (e, c) in p.terms() {
        let k = K::from_i64(*c.numer()) * K::from_i64(*c.denom()).inv().expect("nonzero denominator");
        out.add_monomial(e.clone(), k);
    }
    out
}

/// The faithful polynomial representation on `⊕_ν K[x_1..x_n] 1_ν`.
#[derive(Debug, Clone)]
pub struct PolyRep<K> {
    pub quiver: Quiver,
    pub n: usize,
    pub degree: u32,
    _k: std::marker::PhantomData<K>,
}

impl<K: Scalar> PolyRep<K> {
    pub fn new(quiver: Quiver, n: usize) -> Self {
        Self { quiver, n, degree: 4, _k: std::marker::PhantomData }
    }

    fn tau_component(&self, i: usize, nu: &Colour, g: &Poly<K>) -> Result<(Colour, Poly<K>)> {
        let n = self.n;
        if nu[i] == nu[i + 1] {
            let num = g.swap(i, i + 1).sub(g);
            return Ok((nu.clone(), num.div_difference(i, i + 1, 0.0)?));
        }
        let p: Poly<K> = closed_to(&self.quiver.p_at(nu[i], nu[i + 1], i + 1, i, n));
        let mut mu = nu.clone();
        mu.swap(i, i + 1);
        Ok((mu, p.mul(g).swap(i, i + 1)))
    }
}

impl<K: Scalar> Rep for PolyRep<K>
where
    K: From<BigRational>,
{
    type C = Poly<K>;

    fn n(&self) -> usize {
        self.n
    }

    fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn x(&self, k: usize, v: &KlrVector<Poly<K>>) -> Result<KlrVector<Poly<K>>> {
        let xk = Poly::var(self.n, k);
        v.map_components(|nu, g| Ok((nu.clone(), g.mul(&xk))))
    }

    fn tau(&self, i: usize, v: &KlrVector<Poly<K>>) -> Result<KlrVector<Poly<K>>> {
        v.map_components(|nu, g| self.tau_component(i, nu, g))
    }

    fn closed(&self, p: &ClosedForm, v: &KlrVector<Poly<K>>) -> Result<KlrVector<Poly<K>>> {
        let pk: Poly<K> = closed_to(p);
        v.map_components(|nu, g| Ok((nu.clone(), g.mul(&pk))))
    }

    fn random_component(&self, rng: &mut ChaCha8Rng) -> Poly<K> {
        let mut coeff = |r: &mut ChaCha8Rng| {
            K::from(BigRational::new(r.gen_range(-6i64..=6).into(), r.gen_range(1i64..=4).into()))
        };
        Poly::random(self.n, self.degree, 0.5, rng, &mut coeff)
    }

    fn tolerance(&self) -> f64 {
        0.0
    }
}

/// Apply one generator in the polynomial representation.
pub fn klr_apply<K>(gen: &KlrGen, v: &KlrVector<Poly<K>>, rep: &PolyRep<K>) -> Result<KlrVector<Poly<K>>>
where
    K: Scalar + From<BigRational>,
{
    match gen {
        KlrGen::Idem(nu) => Ok(v.project(nu)),
        KlrGen::X(k) if *k < rep.n => rep.x(*k, v),
        KlrGen::Tau(i) if i + 1 < rep.n => rep.tau(*i, v),
        g => Err(Error::InvalidConfig(format!("generator {g:?} out of range for n = {}", rep.n))),
    }
}

/// Exact relation check of the polynomial representation on random rational input.
pub fn klr_relation_suite(q: &Quiver, n: usize, trials: usize, seed: u64) -> Result<RelationReport> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidConfig(format!("klr_relation_suite needs 1 <= n <= 4, got {n}")));
    }
    if q.len() > 8 {
        return Err(Error::TooLarge(format!("quiver with {} vertices (limit 8)", q.len())));
    }
    let rep = PolyRep::<BigRational>::new(q.clone(), n);
    let mut report = run_relations(&rep, trials, seed);
    let mut meta = BTreeMap::new();
    meta.insert("carrier".to_string(), "exact rationals".to_string());
    meta.insert("vertices".to_string(), q.len().to_string());
    report.metadata = meta;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klrjet::build_gamma;

    type Q = BigRational;

    fn rep(q: Quiver, n: usize) -> PolyRep<Q> {
        PolyRep::new(q, n)
    }

    #[test]
    fn tau_examples() {
        let r = rep(build_gamma(2, 3).unwrap(), 2);
        let x0 = Poly::<Q>::var(2, 0);
        // same vertex: symmetric input dies, x_i goes to -1
        let sym = x0.add(&Poly::var(2, 1));
        assert!(r.tau(0, &KlrVector::single(vec![1, 1], sym)).unwrap().is_zero());
        let out = r.tau(0, &KlrVector::single(vec![1, 1], x0)).unwrap();
        assert_eq!(out, KlrVector::single(vec![1, 1], Poly::constant(2, Q::from_i64(-1))));
        // one arrow 0 -> 4: 1_ν goes to (x_{i+1} - x_i) 1_{s ν}
        let out = r.tau(0, &KlrVector::single(vec![0, 4], Poly::one(2))).unwrap();
        let want = Poly::var(2, 1).sub(&Poly::var(2, 0));
        assert_eq!(out, KlrVector::single(vec![4, 0], want));
        // no arrow: plain swap
        let out = r.tau(0, &KlrVector::single(vec![0, 1], Poly::var(2, 0))).unwrap();
        assert_eq!(out, KlrVector::single(vec![1, 0], Poly::var(2, 1)));
        assert!(klr_apply(&KlrGen::Tau(1), &KlrVector::zero(), &r).is_err());
    }

    #[test]
    fn single_vertex_nilhecke() {
        let rep = rep(Quiver::single_vertex(), 2);
        let report = run_relations(&rep, 50, 1);
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.check("nilhecke_tau_squared").unwrap().samples, 50);
    }

    #[test]
    fn gamma_suites_pass() {
        for (n1, n2) in [(2, 2), (2, 3)] {
            for n in [2, 3] {
                let r = klr_relation_suite(&build_gamma(n1, n2).unwrap(), n, 40, 7).unwrap();
                assert!(r.all_pass(), "({n1},{n2}) n={n}: {r:#?}");
            }
        }
    }

    #[test]
    fn far_commutation_at_four_strands() {
        let r = klr_relation_suite(&build_gamma(2, 2).unwrap(), 4, 12, 3).unwrap();
        assert!(r.all_pass(), "{r:#?}");
        assert!(r.check("far_commutation").unwrap().samples > 0);
        assert!(klr_relation_suite(&Quiver::single_vertex(), 5, 1, 0).is_err());
    }
}
