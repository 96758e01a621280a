use std::cell::Cell;

use num_complex::Complex;
use serde::Serialize;

use super::element::HeckeElement;
use super::Sampler;
use crate::elliptic::{numeric_residue_symmetric, offset, pole_order_estimate_scaled};
use crate::error::Result;
use crate::scalar::Real;
use crate::sections::{LinearForm, SectionExpr};

/// Worst-case outcome of one analytic condition over all of its samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionStat {
    pub condition: String,
    pub samples: usize,
    pub worst_abs: f64,
    pub worst_rel: f64,
    pub pass: bool,
    pub diagnostic: Option<String>,
}

impl ConditionStat {
    pub fn new(condition: &str) -> Self {
        Self { condition: condition.to_string(), samples: 0, worst_abs: 0.0, worst_rel: 0.0, pass: true, diagnostic: None }
    }

    /// Record one sample with error `abs` at evaluation scale `scale`.
    pub fn record(&mut self, abs: f64, scale: f64, ok: bool) {
        self.samples += 1;
        self.worst_abs = self.worst_abs.max(abs);
        self.worst_rel = self.worst_rel.max(abs / scale.max(1.0));
        if !ok {
            self.pass = false;
        }
    }

    pub fn fail(&mut self, why: String) {
        self.samples += 1;
        self.pass = false;
        self.diagnostic.get_or_insert(why);
    }

    pub fn merge(&mut self, o: &ConditionStat) {
        self.samples += o.samples;
        self.worst_abs = self.worst_abs.max(o.worst_abs);
        self.worst_rel = self.worst_rel.max(o.worst_rel);
        self.pass &= o.pass;
        if self.diagnostic.is_none() {
            self.diagnostic.clone_from(&o.diagnostic);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub r1: ConditionStat,
    pub r2: ConditionStat,
    pub r3: ConditionStat,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.r1.pass && self.r2.pass && self.r3.pass
    }
}

fn zero_expr<R: Real>() -> SectionExpr<R> {
    SectionExpr::zero()
}

/// Verify the three membership conditions on `samples` divisor points per
/// (root, support element): at most simple poles along `χ_α = 0`, opposite
/// residues of `f_w` and `f_{s_α w}` there, and vanishing of `f_w` along
/// `χ_α = χ_γ` for every `α ∈ Σ(w)`.
pub fn check_conditions<R: Real>(h: &HeckeElement<R>, samples: usize, sampler: &mut Sampler<'_, R>) -> Result<ConditionReport> {
    let g = sampler.group;
    let c = sampler.curve;
    let tol = c.tolerance();
    let mut r1 = ConditionStat::new("R1");
    let mut r2 = ConditionStat::new("R2");
    let mut r3 = ConditionStat::new("R3");
    let zero = zero_expr::<R>();
    for root in g.datum.positive_roots() {
        let form = LinearForm::character(&root.vector);
        let s = g.reflection_of(root);
        for w in h.support() {
            let fw = h.coeff(w).unwrap_or(&zero);
            let sw = g.mul(s, w);
            let fsw = h.coeff(sw).unwrap_or(&zero);
            for _ in 0..samples {
                let p = sampler.divisor_point(&form)?;
                let dir = sampler.transverse(&form);
                let single = |q: &[Complex<R>]| fw.eval_scaled(q, c).map(|e| (e.value, e.scale));
                match pole_order_estimate_scaled(single, &p, &dir, 2, c.tol()) {
                    Ok(k) => r1.record(k as f64, 1.0, k <= 1),
                    Err(e) => r1.fail(format!("w = {:?}: {e}", g.element(w).word)),
                }
                let scale = Cell::new(R::one());
                let pair = |q: &[Complex<R>]| {
                    let a = fw.eval_scaled(q, c)?;
                    let b = fsw.eval_scaled(q, c)?;
                    scale.set(scale.get().max(a.scale).max(b.scale));
                    Ok(a.value + b.value)
                };
                // noise floor: the residue size of the individual terms
                let eps = R::lit(1e-4);
                let q = offset(&p, &dir, eps);
                let term = |e: &SectionExpr<R>| e.eval(&q, c).map(|v| v.norm() * eps).unwrap_or(R::zero());
                let floor = c.tol() * R::one().max(term(fw)).max(term(fsw));
                match numeric_residue_symmetric(pair, &p, &dir, floor) {
                    Ok(r) => {
                        let err = r.norm();
                        r2.record(err.to_f64_lossy(), scale.get().to_f64_lossy(), tol.accepts(err, scale.get()));
                    }
                    Err(e) => r2.fail(format!("w = {:?}: {e}", g.element(w).word)),
                }
            }
        }
    }
    for w in h.support() {
        let fw = h.coeff(w).unwrap_or(&zero);
        for root in g.inversion_set(w) {
            let form = LinearForm::minus_gamma(&root.vector);
            for _ in 0..samples {
                let p = sampler.divisor_point(&form)?;
                match fw.eval_scaled(&p, c) {
                    Ok(v) => {
                        let err = v.value.norm();
                        r3.record(err.to_f64_lossy(), v.scale.to_f64_lossy(), tol.accepts(err, v.scale));
                    }
                    Err(e) => r3.fail(format!("w = {:?}: {e}", g.element(w).word)),
                }
            }
        }
    }
    Ok(ConditionReport { r1, r2, r3 })
}
