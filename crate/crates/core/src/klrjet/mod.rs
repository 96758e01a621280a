//! Jets, quiver Hecke algebras through their polynomial representation, and
//! the transport of KLR generators to operators on completed local rings.

mod jet;
mod klr;
mod quiver;
mod transport;

pub use jet::Jet;
pub use klr::{klr_apply, klr_relation_suite, KlrGen, PolyRep};
pub use quiver::{build_gamma, ClosedForm, GammaMeta, Quiver};
pub use transport::{completed_t, phi_transport_check, LocalParameter, PhiVariant, TransportRep};

use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::hecke::ConditionStat;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Colour sequence `ν ∈ I^n` as vertex indices.
pub type Colour = Vec<usize>;

/// Coefficient carrier of one idempotent component.
pub trait Component: Clone + Debug + PartialEq {
    fn plus(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_null(&self) -> bool;
    fn distance(&self, o: &Self) -> f64;
    fn size(&self) -> f64;
}

impl<K: Scalar> Component for Poly<K> {
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn distance(&self, o: &Self) -> f64 {
        self.max_diff(o, u32::MAX)
    }
    fn size(&self) -> f64 {
        self.terms().map(|(_, k)| k.magnitude()).fold(0.0, f64::max)
    }
}

impl<K: Scalar> Component for Jet<K> {
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn distance(&self, o: &Self) -> f64 {
        Jet::distance(self, o)
    }
    fn size(&self) -> f64 {
        Jet::size(self)
    }
}

/// Element of `⊕_ν C[x_1..x_n] 1_ν` (or its completion).
#[derive(Debug, Clone, PartialEq)]
pub struct KlrVector<C> {
    comps: BTreeMap<Colour, C>,
}

impl<C: Component> Default for KlrVector<C> {
    fn default() -> Self {
        Self { comps: BTreeMap::new() }
    }
}

impl<C: Component> KlrVector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(nu: Colour, c: C) -> Self {
        let mut v = Self::zero();
        v.add_component(nu, c);
        v
    }

    pub fn components(&self) -> impl Iterator<Item = (&Colour, &C)> {
        self.comps.iter()
    }

    pub fn get(&self, nu: &[usize]) -> Option<&C> {
        self.comps.get(nu)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, nu: Colour, c: C) {
        let sum = match self.comps.remove(&nu) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !sum.is_null() {
            self.comps.insert(nu, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut v = self.clone();
        for (nu, c) in &o.comps {
            v.add_component(nu.clone(), c.clone());
        }
        v
    }

    pub fn neg(&self) -> Self {
        Self { comps: self.comps.iter().map(|(k, c)| (k.clone(), c.negated())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `1_μ v`.
    pub fn project(&self, mu: &[usize]) -> Self {
        match self.comps.get(mu) {
            Some(c) => Self::single(mu.to_vec(), c.clone()),
            None => Self::zero(),
        }
    }

    /// Apply `op` to every component; each output lands in the returned colour.
    pub fn map_components<F>(&self, mut op: F) -> Result<Self>
    where
        F: FnMut(&Colour, &C) -> Result<(Colour, C)>,
    {
        let mut out = Self::zero();
        for (nu, c) in &self.comps {
            let (mu, d) = op(nu, c)?;
            out.add_component(mu, d);
        }
        Ok(out)
    }

    /// Worst component distance, with a missing component read as zero.
    pub fn distance(&self, o: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (nu, c) in &self.comps {
            worst = worst.max(match o.comps.get(nu) {
                Some(d) => c.distance(d),
                None => c.size(),
            });
        }
        for (nu, d) in &o.comps {
            if !self.comps.contains_key(nu) {
                worst = worst.max(d.size());
            }
        }
        worst
    }

    pub fn size(&self) -> f64 {
        self.comps.values().map(|c| c.size()).fold(0.0, f64::max)
    }
}

/// A realization of the KLR generators on some carrier.
pub trait Rep {
    type C: Component;

    fn n(&self) -> usize;
    fn quiver(&self) -> &Quiver;

    /// Multiplication by `x_k` (zero-based).
    fn x(&self, k: usize, v: &KlrVector<Self::C>) -> Result<KlrVector<Self::C>>;

    /// The crossing `τ_i` of strands `i, i+1` (zero-based).
    fn tau(&self, i: usize, v: &KlrVector<Self::C>) -> Result<KlrVector<Self::C>>;

    /// Multiplication by a closed-form polynomial in the `x_k`.
    fn closed(&self, p: &ClosedForm, v: &KlrVector<Self::C>) -> Result<KlrVector<Self::C>>;

    fn random_component(&self, rng: &mut ChaCha8Rng) -> Self::C;

    /// Largest accepted `|lhs - rhs| / max(1, |rhs|)`; zero for exact carriers.
    fn tolerance(&self) -> f64;
}

/// Per-relation outcomes plus free-form notes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub checks: Vec<ConditionStat>,
    pub metadata: BTreeMap<String, String>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&ConditionStat> {
        self.checks.iter().find(|c| c.condition == name)
    }
}

struct Tally {
    stats: BTreeMap<&'static str, ConditionStat>,
    tol: f64,
}

impl Tally {
    fn record<C: Component>(&mut self, name: &'static str, lhs: &KlrVector<C>, rhs: &KlrVector<C>, input: &dyn Fn() -> String) {
        let err = lhs.distance(rhs);
        let scale = rhs.size().max(lhs.size()).max(1.0);
        let ok = err <= self.tol * scale;
        let s = self.stats.entry(name).or_insert_with(|| ConditionStat::new(name));
        s.record(err, scale, ok);
        if !ok && s.diagnostic.is_none() {
            s.diagnostic = Some(input());
        }
    }

    fn error(&mut self, name: &'static str, why: String) {
        self.stats.entry(name).or_insert_with(|| ConditionStat::new(name)).fail(why);
    }
}

pub(crate) fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial)
}

/// Colour sequences biased towards the interesting patterns.
fn random_colour(q: &Quiver, n: usize, mode: u64, rng: &mut ChaCha8Rng) -> Colour {
    let m = q.len();
    let mut nu: Colour = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let succ = |a: usize| (0..m).find(|&b| q.arrows(a, b) > 0);
    match mode % 4 {
        1 if n >= 2 => {
            let i = rng.gen_range(0..n - 1);
            nu[i + 1] = nu[i];
        }
        2 if n >= 2 => {
            let i = rng.gen_range(0..n - 1);
            if let Some(b) = succ(nu[i]) {
                nu[i + 1] = b;
            }
        }
        3 if n >= 3 => {
            let i = rng.gen_range(0..n - 2);
            if let Some(b) = succ(nu[i]) {
                nu[i + 1] = b;
            }
            nu[i + 2] = nu[i];
        }
        _ => {}
    }
    nu
}

/// Check every defining relation of the quiver Hecke algebra on random
/// vectors `g 1_ν`.
pub fn run_relations<P: Rep>(rep: &P, trials: usize, seed: u64) -> RelationReport {
    let n = rep.n();
    let q = rep.quiver();
    let mut t = Tally { stats: BTreeMap::new(), tol: rep.tolerance() };
    for trial in 0..trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
        let nu = random_colour(q, n, trial, &mut rng);
        let g = rep.random_component(&mut rng);
        let v = KlrVector::single(nu.clone(), g);
        let show = || format!("nu = {nu:?}, g = {:?}", v.get(&nu));
        if let Err(e) = check_one(rep, &nu, &v, &mut t, &show, &mut rng) {
            t.error("evaluation", format!("{e}; {}", show()));
        }
    }
    RelationReport { checks: t.stats.into_values().collect(), metadata: BTreeMap::new() }
}

fn check_one<P: Rep>(
    rep: &P,
    nu: &[usize],
    v: &KlrVector<P::C>,
    t: &mut Tally,
    show: &dyn Fn() -> String,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let n = rep.n();
    let q = rep.quiver();
    let x = |k: usize, w: &KlrVector<P::C>| rep.x(k, w);
    let tau = |i: usize, w: &KlrVector<P::C>| rep.tau(i, w);

    for i in 0..n {
        for j in i + 1..n {
            t.record("x_commute", &x(i, &x(j, v)?)?, &x(j, &x(i, v)?)?, show);
        }
    }

    let mu: Colour = (0..n).map(|_| rng.gen_range(0..q.len())).collect();
    for (a, b) in [(nu.to_vec(), nu.to_vec()), (nu.to_vec(), mu.clone()), (mu.clone(), nu.to_vec())] {
        let lhs = v.project(&b).project(&a);
        let rhs = if a == b { v.project(&a) } else { KlrVector::zero() };
        t.record("idempotent_orthogonality", &lhs, &rhs, show);
    }

    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n.saturating_sub(1) {
            t.record("far_commutation", &tau(i, &tau(j, v)?)?, &tau(j, &tau(i, v)?)?, show);
        }
        for j in (0..n).filter(|&j| j != i && j != i + 1) {
            t.record("tau_x_commute", &tau(i, &x(j, v)?)?, &x(j, &tau(i, v)?)?, show);
        }
        let tv = tau(i, v)?;
        if nu[i] == nu[i + 1] {
            t.record("nilhecke_tau_squared", &tau(i, &tv)?, &KlrVector::zero(), show);
            let lhs = tau(i, &x(i, v)?)?.sub(&x(i + 1, &tv)?);
            t.record("nilhecke_x_i", &lhs, &v.neg(), show);
            let lhs = tau(i, &x(i + 1, v)?)?.sub(&x(i, &tv)?);
            t.record("nilhecke_x_i1", &lhs, v, show);
        } else {
            t.record("distinct_tau_x", &tau(i, &x(i, v)?)?, &x(i + 1, &tv)?, show);
            t.record("distinct_tau_x", &tau(i, &x(i + 1, v)?)?, &x(i, &tv)?, show);
            let closed = q.tau_squared(nu[i], nu[i + 1], i, n);
            t.record("distinct_tau_squared", &tau(i, &tv)?, &rep.closed(&closed, v)?, show);
        }
    }

    for i in 0..n.saturating_sub(2) {
        let lhs = tau(i, &tau(i + 1, &tau(i, v)?)?)?;
        let mut rhs = tau(i + 1, &tau(i, &tau(i + 1, v)?)?)?;
        if nu[i] == nu[i + 2] && nu[i] != nu[i + 1] {
            rhs = rhs.add(&rep.closed(&q.braid_correction(nu[i], nu[i + 1], i, n), v)?);
            t.record("braid_corrected", &lhs, &rhs, show);
        } else {
            t.record("braid", &lhs, &rhs, show);
        }
    }
    Ok(())
}
