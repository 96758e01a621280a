//! The verification suites behind the command line, each producing a [`Report`].

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::elliptic::{f_eval_complex, numeric_residue_symmetric, theta_prime_zero, CurveParams, CurvePoint, FParams};
use crate::error::{Error, Result};
use crate::hecke::{
    check_conditions, demazure_dem, demazure_lusztig, demazure_x, demazure_x_root, qwk_pushforward, qwk_term,
    rank1_pushpull, triangularity_check, word_dependence, ConditionStat, HeckeElement, QwkVariant, Sampler,
};
use crate::klrjet::{build_gamma, klr_relation_suite, phi_transport_check, Quiver, RelationReport};
use crate::params::{classify, EigenData, ParamsReport};
use crate::report::Report;
use crate::rootweyl::{act_point, Preset, WeylGroup};
use crate::sections::{random_test_section, Evaluation, LinearForm, SectionExpr};

type C = Complex<f64>;

/// Data of the suite registry printed by `--list`.
pub const SUITES: &[(&str, &str)] = &[
    ("theta-check", "theta oddness, lattice zeros, quasi-periodicity, f normalization and sn divisor"),
    ("hecke-verify", "X relations, membership of Demazure-Lusztig products, Bruhat triangularity, rank-one and projective push-forwards"),
    ("klr-verify", "exact quiver Hecke relations and their transport to completed jets"),
    ("params", "multisegment enumeration against finite-field orbit counts"),
];

/// Number of random sections drawn for the operator identities.
pub const SECTIONS: usize = 10;
/// Divisor samples per membership condition.
pub const MEMBERSHIP_SAMPLES: usize = 20;
/// Trials of the exact KLR relation suite.
pub const KLR_TRIALS: usize = 100;
/// Trials of the jet transport check.
pub const PHI_TRIALS: usize = 50;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Break the oddness identity on purpose so the harness must report a failure.
    pub tamper: bool,
}

fn sub_seed(cfg: &Config, tag: u64) -> u64 {
    cfg.seed.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(tag)
}

fn random_z(rng: &mut ChaCha8Rng, c: &CurveParams<f64>) -> C {
    CurvePoint::new(rng.gen::<f64>(), rng.gen::<f64>()).to_complex(c)
}

fn derivative_at_zero(f: &dyn Fn(C) -> Result<C>) -> Result<C> {
    let central = |h: f64| -> Result<C> { Ok((f(C::new(h, 0.0))? - f(C::new(-h, 0.0))?) / (2.0 * h)) };
    let h = 1e-4;
    Ok((central(h / 2.0)? * 4.0 - central(h)?) / 3.0)
}

pub fn theta_suite(cfg: &Config, opts: SuiteOptions) -> Result<Report> {
    cfg.validate()?;
    let c = cfg.curve()?;
    let tol = c.tolerance();
    let n = cfg.samples;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg, 1));
    let mut rep = Report::new("theta-check", cfg);

    let mut nome = ConditionStat::new("|q| <= 0.5");
    let qn = c.q().norm();
    nome.record(qn, 1.0, qn <= 0.5);
    rep.push("nome_bound", &nome);

    let mut odd = ConditionStat::new("theta(-z) = -theta(z)");
    let mut shift1 = ConditionStat::new("theta(z+1) = -theta(z)");
    let mut ratio = ConditionStat::new("theta(z+tau) e^{2 pi i z} / theta(z) is constant");
    let mut base_ratio: Option<C> = None;
    for _ in 0..n {
        let z = random_z(&mut rng, &c);
        let t = c.theta(z);
        let tm = c.theta(-z);
        let err = if opts.tamper { (tm - t).norm() } else { (tm + t).norm() };
        let scale = t.norm().max(1.0);
        odd.record(err, scale, tol.accepts(err, scale));
        let e1 = (c.theta(z + 1.0) + t).norm();
        shift1.record(e1, scale, tol.accepts(e1, scale));
        let r = c.theta(z + c.tau()) * (C::new(0.0, 2.0 * std::f64::consts::PI) * z).exp() / t;
        let r0 = *base_ratio.get_or_insert(r);
        let e2 = (r - r0).norm();
        ratio.record(e2, r0.norm().max(1.0), tol.accepts(e2, r0.norm()));
    }
    rep.push("theta_odd", &odd);
    rep.push("theta_shift_one", &shift1);
    rep.push("theta_shift_tau", &ratio);

    let mut zeros = ConditionStat::new("theta(m + n tau) = 0 for |m|, |n| <= 2");
    for m in -2..=2 {
        for k in -2..=2 {
            let z = C::new(m as f64, 0.0) + c.tau() * k as f64;
            let scale = c.theta(z + 0.5).norm().max(1.0);
            let err = c.theta(z).norm();
            zeros.record(err, scale, tol.accepts(err, scale));
        }
    }
    rep.push("theta_lattice_zero", &zeros);

    let mut tp = ConditionStat::new("theta'(0) = 1");
    let err = (theta_prime_zero(&c) - 1.0).norm();
    tp.record(err, 1.0, err <= 1e-6);
    rep.push("theta_prime_zero", &tp);

    let fp = cfg.fparams_value(&c)?;
    let mut norm0 = ConditionStat::new("f(0) = 0 and f'(0) = 1");
    let mut period = ConditionStat::new("f(z+1) = f(z+tau) = f(z)");
    for p in [fp, FParams::sn()] {
        let f = |z: C| f_eval_complex(z, &p, &c);
        let v0 = f(C::new(0.0, 0.0))?.norm();
        norm0.record(v0, 1.0, v0 <= cfg.tol);
        let d = (derivative_at_zero(&f)? - 1.0).norm();
        norm0.record(d, 1.0, d <= 1e-6);
        let mut taken = 0;
        while taken < n {
            let z = random_z(&mut rng, &c);
            let (Ok(a), Ok(b), Ok(bt)) = (f(z), f(z + 1.0), f(z + c.tau())) else { continue };
            taken += 1;
            let scale = a.norm().max(1.0);
            let e = (b - a).norm().max((bt - a).norm());
            period.record(e, scale, tol.accepts(e, scale));
        }
    }
    rep.push("f_normalization", &norm0);
    rep.push("f_periodicity", &period);

    let sn = FParams::sn();
    let mut snz = ConditionStat::new("sn-type f vanishes at 0 and 1/2");
    for z in [C::new(0.0, 0.0), C::new(0.5, 0.0)] {
        let v = f_eval_complex(z, &sn, &c)?.norm();
        snz.record(v, 1.0, v <= cfg.tol);
    }
    rep.push("sn_zeros", &snz);
    let mut snp = ConditionStat::new("sn-type f has simple poles at tau/2 and (1+tau)/2");
    for pole in [sn.a, sn.b] {
        let z = pole.to_complex(&c);
        let is_pole = matches!(f_eval_complex(z, &sn, &c), Err(Error::PoleAt { .. }));
        let g = |q: &[C]| f_eval_complex(q[0], &sn, &c);
        match numeric_residue_symmetric(g, &[z], &[C::new(1.0, 0.0)], cfg.tol) {
            Ok(r) => snp.record(r.norm(), 1.0, is_pole && r.norm() > 1e-3),
            Err(e) => snp.fail(e.to_string()),
        }
    }
    rep.push("sn_poles", &snp);
    Ok(rep.finish())
}

/// Data names accepted by `hecke-verify`.
pub fn hecke_datum(name: &str) -> Result<Preset> {
    match Preset::parse(name)? {
        p @ (Preset::SL2 | Preset::A2 | Preset::B2 | Preset::GL(3)) => Ok(p),
        _ => Err(Error::UnknownDatum(name.to_string())),
    }
}

fn ev<'a>(e: &'a SectionExpr<f64>, c: &'a CurveParams<f64>) -> impl Fn(&[C]) -> Result<Evaluation<f64>> + 'a {
    move |q: &[C]| e.eval_scaled(q, c)
}

/// Record `|a - b|` against the composite tolerance at the larger scale.
fn compare(stat: &mut ConditionStat, a: &Evaluation<f64>, b: &Evaluation<f64>, c: &CurveParams<f64>) {
    let err = (a.value - b.value).norm();
    let scale = a.scale.max(b.scale);
    stat.record(err, scale, c.tolerance().accepts(err, scale));
}

/// Draw points until `body` has accepted `count` of them; points where an
/// evaluation hits a pole are redrawn.
fn over_points(
    sampler: &mut Sampler<'_, f64>,
    count: usize,
    stat_on_error: &mut ConditionStat,
    mut body: impl FnMut(&[C]) -> Result<()>,
) -> Result<()> {
    let mut taken = 0;
    let mut misses = 0;
    while taken < count {
        let p = sampler.generic_point()?;
        match body(&p) {
            Ok(()) => taken += 1,
            Err(Error::PoleAt { .. }) if misses < 10 * count => misses += 1,
            Err(e) => {
                stat_on_error.fail(e.to_string());
                taken += 1;
            }
        }
    }
    Ok(())
}

fn operator_checks(rep: &mut Report, cfg: &Config, g: &WeylGroup, c: &CurveParams<f64>) -> Result<()> {
    let d = &g.datum;
    let mut sampler = Sampler::new(g, c, &[], sub_seed(cfg, 10));
    let secs: Vec<SectionExpr<f64>> = (0..=SECTIONS as u64).map(|k| random_test_section(d, sub_seed(cfg, 100 + k), 3)).collect();
    let mut sq = ConditionStat::new("X_a^2 = 0");
    let mut dx = ConditionStat::new("delta_a X_a = X_a");
    let mut inv = ConditionStat::new("X_a sigma is s_a-invariant");
    let mut leib = ConditionStat::new("X_a(sigma tau) = X_a(sigma) tau + s_a(sigma) X_a(tau)");
    let mut conj = ConditionStat::new("delta_w X_a delta_{w^-1} = X_{w a}");
    let mut errors = ConditionStat::new("evaluations succeed");
    let xs: Vec<HeckeElement<f64>> = (0..d.num_simple()).map(|i| demazure_x(i, g)).collect();
    let xxs: Vec<HeckeElement<f64>> = xs.iter().map(|x| x.mult(x, g)).collect();
    let dxs: Vec<HeckeElement<f64>> = (0..d.num_simple()).map(|i| HeckeElement::delta(g.simple(i)).mult(&xs[i], g)).collect();
    let mut conjugates = Vec::new();
    for w in 0..g.len() {
        for (i, x) in xs.iter().enumerate() {
            let lhs = HeckeElement::delta(w).mult(x, g).mult(&HeckeElement::delta(g.inverse(w)), g);
            let wa = g.element(w).act_character(&d.simple_roots[i], d);
            let root = d.root(&wa).expect("Weyl images of roots are roots").clone();
            conjugates.push((lhs, demazure_x_root::<f64>(&root, g)));
        }
    }
    for k in 0..SECTIONS {
        let sigma = &secs[k];
        let tau = &secs[k + 1];
        let prod = SectionExpr::prod(vec![sigma.clone(), tau.clone()]);
        let (fs, ft, fst) = (ev(sigma, c), ev(tau, c), ev(&prod, c));
        over_points(&mut sampler, cfg.samples, &mut errors, |p| {
            for i in 0..d.num_simple() {
                let s = g.element(g.simple(i));
                let zero = Evaluation { value: C::new(0.0, 0.0), scale: 1.0 };
                let xv = xs[i].act_at(&fs, p, g, c)?;
                compare(&mut sq, &xxs[i].act_at(&fs, p, g, c)?, &zero, c);
                compare(&mut dx, &dxs[i].act_at(&fs, p, g, c)?, &xv, c);
                compare(&mut inv, &xs[i].act_at(&fs, &act_point(s, p), g, c)?, &xv, c);
                let lhs = xs[i].act_at(&fst, p, g, c)?;
                let t = ft(p)?;
                let ss = fs(&act_point(s, p))?;
                let xt = xs[i].act_at(&ft, p, g, c)?;
                let value = xv.value * t.value + ss.value * xt.value;
                let scale = (xv.value * t.value).norm().max((ss.value * xt.value).norm()).max(xv.scale).max(xt.scale);
                compare(&mut leib, &lhs, &Evaluation { value, scale }, c);
            }
            if k < 3 {
                for (lhs, rhs) in &conjugates {
                    compare(&mut conj, &lhs.act_at(&fs, p, g, c)?, &rhs.act_at(&fs, p, g, c)?, c);
                }
            }
            Ok(())
        })?;
    }
    rep.push("operators/x_squared", &sq);
    rep.push("operators/delta_x", &dx);
    rep.push("operators/image_invariance", &inv);
    rep.push("operators/twisted_leibniz", &leib);
    rep.push("operators/conjugation", &conj);
    if errors.samples > 0 {
        rep.push("operators/evaluation", &errors);
    }
    Ok(())
}

/// All words of length `1..=max_len` in the simple reflections.
fn words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..rank).map(move |i| [w.clone(), vec![i]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn membership_checks(rep: &mut Report, cfg: &Config, g: &WeylGroup, c: &CurveParams<f64>, fp: &FParams<f64>) -> Result<()> {
    let mut sampler = Sampler::new(g, c, &[*fp], sub_seed(cfg, 20));
    let mut r1 = ConditionStat::new("R1: at most simple poles on chi_a = 0");
    let mut r2 = ConditionStat::new("R2: residues of f_w and f_{s_a w} cancel");
    let mut r3 = ConditionStat::new("R3: f_w vanishes on chi_a = chi_gamma for a in Sigma(w)");
    for word in words(g.datum.num_simple(), 3) {
        let mut h = HeckeElement::identity(g);
        for &i in &word {
            h = h.mult(&demazure_lusztig(i, fp, g), g);
        }
        let r = check_conditions(&h, MEMBERSHIP_SAMPLES, &mut sampler)?;
        for (acc, s) in [(&mut r1, &r.r1), (&mut r2, &r.r2), (&mut r3, &r.r3)] {
            if !s.pass && acc.diagnostic.is_none() {
                acc.diagnostic = Some(format!("word {word:?}: {}", s.diagnostic.clone().unwrap_or_default()));
            }
            acc.merge(s);
        }
    }
    rep.push("membership/r1", &r1);
    rep.push("membership/r2", &r2);
    rep.push("membership/r3", &r3);
    Ok(())
}

fn triangularity_checks(rep: &mut Report, cfg: &Config, g: &WeylGroup, c: &CurveParams<f64>, fp: &FParams<f64>) -> Result<()> {
    let mut sampler = Sampler::new(g, c, &[*fp], sub_seed(cfg, 30));
    let mut inv = ConditionStat::new("evaluation matrix invertible at a generic point");
    match triangularity_check(fp, 3, &mut sampler) {
        Ok(t) => {
            rep.push("triangularity/lower", &t.lower);
            rep.push("triangularity/leading", &t.leading);
            let k = t.condition_numbers.last().copied().unwrap_or(f64::INFINITY);
            inv.record(k, 1.0, t.invertible);
            let ks: Vec<String> = t.condition_numbers.iter().map(|k| format!("{k:.3e}")).collect();
            rep.metadata.insert("condition_numbers".into(), ks.join(","));
        }
        Err(e @ Error::Singular { .. }) => inv.fail(e.to_string()),
        Err(e) => return Err(e),
    }
    rep.push("triangularity/invertible", &inv);
    // reported only; equality across reduced words is not asserted
    let mut sampler = Sampler::new(g, c, &[*fp], sub_seed(cfg, 31));
    let spread = word_dependence(fp, 2, &mut sampler)?;
    rep.metadata.insert("reduced_word_spread".into(), format!("{spread:.3e}"));
    Ok(())
}

fn pushforward_checks(rep: &mut Report, cfg: &Config, g: &WeylGroup, c: &CurveParams<f64>) -> Result<()> {
    let d = &g.datum;
    let mut sampler = Sampler::new(g, c, &[], sub_seed(cfg, 40));
    let mut errors = ConditionStat::new("evaluations succeed");
    let mut r1 = ConditionStat::new("rank-one push-pull equals Dem_a");
    for k in 0..SECTIONS as u64 {
        let sigma = random_test_section(d, sub_seed(cfg, 400 + k), 3);
        let fs = ev(&sigma, c);
        over_points(&mut sampler, cfg.samples, &mut errors, |p| {
            for root in d.positive_roots() {
                let a = rank1_pushpull(root, &fs, p, g, c)?;
                let b = demazure_dem(root, &fs, p, g, c)?;
                compare(&mut r1, &a, &b, c);
            }
            Ok(())
        })?;
    }
    rep.push("pushforward/rank_one", &r1);

    let sl2 = WeylGroup::from_preset(Preset::SL2)?;
    let root = sl2.datum.positive_roots()[0].clone();
    let mut s2 = Sampler::new(&sl2, c, &[], sub_seed(cfg, 41));
    let mut q2 = ConditionStat::new("projective push-forward for n = 2 equals the rank-one formula");
    for k in 0..SECTIONS as u64 {
        let sigma = random_test_section(&sl2.datum, sub_seed(cfg, 410 + k), 3);
        let lifted = sigma.map_forms(&|l| LinearForm { coeffs: vec![0, l.coeffs[0]], gamma: l.gamma, shift: l.shift });
        let (fs, fl) = (ev(&sigma, c), ev(&lifted, c));
        over_points(&mut s2, cfg.samples, &mut errors, |p| {
            let a = rank1_pushpull(&root, &fs, p, &sl2, c)?;
            let y = [-p[0], p[0], p[1]];
            let q = qwk_pushforward(&fl, 2, &y, QwkVariant::IdentityInclusive, c)?;
            compare(&mut q2, &q, &a, c);
            Ok(())
        })?;
    }
    rep.push("pushforward/qwk_n2", &q2);

    let gl3 = WeylGroup::from_preset(Preset::GL(3))?;
    let mut q3 = ConditionStat::new("projective push-forward for n = 3 has no residue along y_i = y_n");
    for (k, coeffs) in [vec![1, 0, -1], vec![0, 1, -1]].into_iter().enumerate() {
        let f = random_test_section(&gl3.datum, sub_seed(cfg, 420 + k as u64), 2);
        let fe = ev(&f, c);
        let mut s3 = Sampler::new(&gl3, c, &f.fparams(), sub_seed(cfg, 43 + k as u64));
        let form = LinearForm::character(&coeffs);
        let dir = s3.transverse(&form);
        let mut taken = 0;
        let mut misses = 0;
        while taken < SECTIONS {
            let p = s3.divisor_point(&form)?;
            let sum = |q: &[C]| qwk_pushforward(&fe, 3, q, QwkVariant::IdentityInclusive, c).map(|e| e.value);
            let single = |q: &[C]| qwk_term(&fe, 3, None, q, c).map(|e| e.value);
            match (numeric_residue_symmetric(sum, &p, &dir, c.tol()), numeric_residue_symmetric(single, &p, &dir, c.tol())) {
                (Ok(r), Ok(r0)) => {
                    taken += 1;
                    let scale = r0.norm().max(1.0);
                    q3.record(r.norm(), scale, c.tolerance().accepts(r.norm(), scale));
                }
                _ if misses < 100 => misses += 1,
                (Err(e), _) | (_, Err(e)) => {
                    taken += 1;
                    q3.fail(e.to_string());
                }
            }
        }
    }
    rep.push("pushforward/qwk_n3_residue", &q3);
    if errors.samples > 0 {
        rep.push("pushforward/evaluation", &errors);
    }
    Ok(())
}

pub fn hecke_suite(cfg: &Config, datum: &str) -> Result<Report> {
    cfg.validate()?;
    let preset = hecke_datum(datum)?;
    let c = cfg.curve()?;
    let fp = cfg.fparams_value(&c)?;
    let g = WeylGroup::from_preset(preset)?;
    let mut rep = Report::new(format!("hecke-verify/{}", preset.name()), cfg);
    operator_checks(&mut rep, cfg, &g, &c)?;
    membership_checks(&mut rep, cfg, &g, &c, &fp)?;
    triangularity_checks(&mut rep, cfg, &g, &c, &fp)?;
    pushforward_checks(&mut rep, cfg, &g, &c)?;
    Ok(rep.finish())
}

fn push_relations(rep: &mut Report, prefix: &str, r: &RelationReport) {
    for s in &r.checks {
        rep.push(format!("{prefix}/{}", s.condition), s);
    }
    for (k, v) in &r.metadata {
        rep.metadata.insert(format!("{prefix}.{k}"), v.clone());
    }
}

pub fn klr_suite(cfg: &Config, n1: i64, n2: i64, n: usize) -> Result<Report> {
    cfg.validate()?;
    if n == 0 || n > 4 {
        return Err(Error::InvalidConfig(format!("strand count must lie in 1..=4, got {n}")));
    }
    let q = build_gamma(n1, n2)?;
    if q.len() > 8 {
        return Err(Error::TooLarge(format!("quiver with {} vertices (limit 8)", q.len())));
    }
    let c = cfg.curve()?;
    let fp = cfg.fparams_value(&c)?;
    let mut rep = Report::new(format!("klr-verify/{n1}x{n2}/n{n}"), cfg);
    let single = klr_relation_suite(&Quiver::single_vertex(), n, KLR_TRIALS, sub_seed(cfg, 50))?;
    push_relations(&mut rep, "klr_single_vertex", &single);
    let gamma = klr_relation_suite(&q, n, KLR_TRIALS, sub_seed(cfg, 51))?;
    push_relations(&mut rep, "klr_gamma", &gamma);
    if n <= 3 {
        let phi = phi_transport_check(n, &q, &fp, &c, cfg.degree_cap, PHI_TRIALS, sub_seed(cfg, 52))?;
        push_relations(&mut rep, "phi", &phi);
    } else {
        rep.metadata.insert("phi".into(), "transport covers at most 3 strands; skipped".into());
    }
    Ok(rep.finish())
}

pub fn params_suite(cfg: &Config, input: &str) -> Result<ParamsReport> {
    cfg.validate()?;
    let e = EigenData::from_json(input, cfg.tol)?;
    classify(&e, cfg.tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_lists() {
        assert_eq!(words(2, 3).len(), 14);
        assert_eq!(words(1, 2), vec![vec![0], vec![0, 0]]);
    }

    #[test]
    fn theta_suite_and_tamper() {
        let cfg = Config { samples: 10, ..Config::default() };
        let r = theta_suite(&cfg, SuiteOptions::default()).unwrap();
        assert!(r.pass, "{}", r.to_json());
        let t = theta_suite(&cfg, SuiteOptions { tamper: true }).unwrap();
        assert!(!t.pass && !t.check("theta_odd").unwrap().pass);
    }

    #[test]
    fn unknown_datum() {
        assert!(matches!(hecke_datum("e8"), Err(Error::UnknownDatum(_))));
        assert!(matches!(hecke_datum("g2"), Err(Error::UnknownDatum(_))));
    }
}
