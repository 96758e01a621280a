use num_complex::Complex;

use super::element::HeckeElement;
use crate::elliptic::{CurvePoint, CurveParams, FParams};
use crate::error::{Error, Result};
use crate::rootweyl::{act_point, Root, WeylGroup};
use crate::scalar::Real;
use crate::sections::{Evaluation, LinearForm, SectionExpr};

/// `T_α^f = f(χ_γ)/f(χ_α) + (1 - f(χ_γ)/f(χ_α)) δ_α` for the simple root `α_i`.
pub fn demazure_lusztig<R: Real>(i: usize, fp: &FParams<R>, g: &WeylGroup) -> HeckeElement<R> {
    let d = &g.datum;
    let alpha = LinearForm::character(&d.simple_roots[i]);
    let ratio = SectionExpr::prod(vec![
        SectionExpr::f(LinearForm::gamma_form(d.rank), *fp),
        SectionExpr::f(alpha, *fp).inv(),
    ]);
    HeckeElement::from_terms([
        (g.identity(), ratio.clone()),
        (g.simple(i), SectionExpr::one().sub(ratio)),
    ])
}

/// `X_α = 1/θ(χ_α) - (1/θ(χ_α)) δ_α` for an arbitrary root.
pub fn demazure_x_root<R: Real>(root: &Root, g: &WeylGroup) -> HeckeElement<R> {
    let inv = SectionExpr::theta(LinearForm::character(&root.vector)).inv();
    HeckeElement::from_terms([(g.identity(), inv.clone()), (g.reflection_of(root), inv.neg())])
}

/// `X_{α_i}` for a simple root.
pub fn demazure_x<R: Real>(i: usize, g: &WeylGroup) -> HeckeElement<R> {
    let root = g.datum.root(&g.datum.simple_roots[i]).expect("simple roots are roots").clone();
    demazure_x_root(&root, g)
}

fn transverse_dir<R: Real>(form: &LinearForm<R>) -> Vec<Complex<R>> {
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

/// `Dem_α σ = (σ - s_α σ)/θ(χ_α)`. Within `1e-4` of `χ_α = 0` the removable
/// singularity is bridged by symmetric offsets `±h`, `±h/2` (`h = 1e-3`)
/// along a transverse coordinate, Richardson-combined.
pub fn demazure_dem<R, S>(root: &Root, sigma: &S, p: &[Complex<R>], g: &WeylGroup, c: &CurveParams<R>) -> Result<Evaluation<R>>
where
    R: Real,
    S: Fn(&[Complex<R>]) -> Result<Evaluation<R>>,
{
    let form = LinearForm::character(&root.vector);
    let s = g.element(g.reflection_of(root));
    let direct = |q: &[Complex<R>]| -> Result<Evaluation<R>> {
        let a = sigma(q)?;
        let b = sigma(&act_point(s, q))?;
        let th = c.theta(form.eval(q, c));
        let value = (a.value - b.value) / th;
        Ok(Evaluation { value, scale: a.scale.max(b.scale).max(value.norm()) })
    };
    let x = form.eval(p, c);
    if CurvePoint::from_complex(x, c).distance_to_lattice(c) >= R::lit(1e-4) {
        return direct(p);
    }
    let dir = transverse_dir(&form);
    let h = R::lit(1e-3);
    let sym = |h: R| -> Result<Evaluation<R>> {
        let plus: Vec<_> = p.iter().zip(&dir).map(|(z, d)| *z + *d * h).collect();
        let minus: Vec<_> = p.iter().zip(&dir).map(|(z, d)| *z - *d * h).collect();
        let a = direct(&plus)?;
        let b = direct(&minus)?;
        Ok(Evaluation { value: (a.value + b.value) / R::lit(2.0), scale: a.scale.max(b.scale) })
    };
    let e1 = sym(h)?;
    let e2 = sym(h / R::lit(2.0))?;
    let value = (e2.value * R::lit(4.0) - e1.value) / R::lit(3.0);
    Ok(Evaluation { value, scale: e1.scale.max(e2.scale) })
}

/// Rank-one push-pull `s_α σ/θ(-χ_α) + σ/θ(χ_α)`.
pub fn rank1_pushpull<R, S>(root: &Root, sigma: &S, p: &[Complex<R>], g: &WeylGroup, c: &CurveParams<R>) -> Result<Evaluation<R>>
where
    R: Real,
    S: Fn(&[Complex<R>]) -> Result<Evaluation<R>>,
{
    let s = g.element(g.reflection_of(root));
    let x = LinearForm::character(&root.vector).eval(p, c);
    let a = sigma(&act_point(s, p))?;
    let b = sigma(p)?;
    let (tm, tp) = (c.theta(-x), c.theta(x));
    if tp.norm() < c.tol() {
        return Err(Error::PoleAt { location: "rank-one push-pull on the root divisor".into() });
    }
    let value = a.value / tm + b.value / tp;
    Ok(Evaluation { value, scale: a.scale.max(b.scale).max((a.value / tm).norm()).max(value.norm()) })
}

/// Which permutations enter the projective-bundle push-forward sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwkVariant {
    /// Identity plus the transpositions `(i, n)`, `i < n`.
    IdentityInclusive,
    /// The transpositions `(i, n)` only.
    Exclusive,
}

/// One term `π·[f(y_1, …, y_{n-1}, -y_n, γ) / ∏_{j<n} θ(y_j - y_n)]` with `π`
/// the identity (`swap = None`) or the transposition `(i, n)` (`swap = Some(i)`,
/// zero-based).
pub fn qwk_term<R, F>(f: &F, n: usize, swap: Option<usize>, p: &[Complex<R>], c: &CurveParams<R>) -> Result<Evaluation<R>>
where
    R: Real,
    F: Fn(&[Complex<R>]) -> Result<Evaluation<R>>,
{
    assert!(p.len() == n + 1, "point needs n coordinates plus the gamma slot");
    let mut y = p.to_vec();
    if let Some(i) = swap {
        y.swap(i, n - 1);
    }
    let mut denom = Complex::new(R::one(), R::zero());
    for j in 0..n - 1 {
        let t = c.theta(y[j] - y[n - 1]);
        if t.norm() < c.tol() {
            return Err(Error::PoleAt { location: format!("y_{} = y_{}", j + 1, n) });
        }
        denom = denom * t;
    }
    let mut arg = y;
    arg[n - 1] = -arg[n - 1];
    let num = f(&arg)?;
    let value = num.value / denom;
    Ok(Evaluation { value, scale: num.scale.max(value.norm()) })
}

/// The projective-bundle push-forward of `f` on `E^n × E`.
pub fn qwk_pushforward<R, F>(f: &F, n: usize, p: &[Complex<R>], variant: QwkVariant, c: &CurveParams<R>) -> Result<Evaluation<R>>
where
    R: Real,
    F: Fn(&[Complex<R>]) -> Result<Evaluation<R>>,
{
    assert!((2..=4).contains(&n), "n must lie in 2..=4");
    let mut swaps: Vec<Option<usize>> = (0..n - 1).map(Some).collect();
    if variant == QwkVariant::IdentityInclusive {
        swaps.insert(0, None);
    }
    let mut value = Complex::new(R::zero(), R::zero());
    let mut scale = R::one();
    for s in swaps {
        let t = qwk_term(f, n, s, p, c)?;
        value = value + t.value;
        scale = scale.max(t.scale);
    }
    Ok(Evaluation { value, scale: scale.max(value.norm()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::numeric_residue;
    use crate::hecke::Sampler;
    use crate::rootweyl::Preset;
    use crate::sections::random_test_section;

    type C = Complex<f64>;

    fn ev<'a>(e: &SectionExpr<f64>, c: &'a CurveParams<f64>) -> impl Fn(&[C]) -> Result<Evaluation<f64>> + 'a {
        let e = e.clone();
        move |q: &[C]| e.eval_scaled(q, c)
    }

    #[test]
    fn demazure_lusztig_fixes_constants() {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::A2).unwrap();
        let fp = FParams::generic();
        let t = demazure_lusztig(0, &fp, &g);
        let mut s = Sampler::new(&g, &c, &[fp], 1);
        for _ in 0..20 {
            let p = s.generic_point().unwrap();
            let v = t.act(&SectionExpr::one(), &p, &g, &c).unwrap();
            assert!((v.value - C::new(1.0, 0.0)).norm() < c.tolerance().bound(v.scale));
        }
    }

    #[test]
    fn x_kills_constants_and_squares_to_zero() {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::B2).unwrap();
        let mut s = Sampler::new(&g, &c, &[], 2);
        for i in 0..2 {
            let x = demazure_x::<f64>(i, &g);
            let xx = x.mult(&x, &g);
            let sigma: SectionExpr<f64> = random_test_section(&g.datum, 3 + i as u64, 3);
            for _ in 0..10 {
                let p = s.generic_point().unwrap();
                assert!(x.act(&SectionExpr::one(), &p, &g, &c).unwrap().value.norm() < 1e-9);
                let Ok(v) = xx.act(&sigma, &p, &g, &c) else { continue };
                assert!(c.tolerance().accepts(v.value.norm(), v.scale), "{v:?}");
            }
        }
    }

    #[test]
    fn rank_one_identities() {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::SL2).unwrap();
        let root = g.datum.positive_roots()[0].clone();
        let mut s = Sampler::new(&g, &c, &[], 3);
        for k in 0..5 {
            let sigma: SectionExpr<f64> = random_test_section(&g.datum, k, 2);
            let f = ev(&sigma, &c);
            for _ in 0..10 {
                let p = s.generic_point().unwrap();
                let Ok(a) = rank1_pushpull(&root, &f, &p, &g, &c) else { continue };
                let b = demazure_dem(&root, &f, &p, &g, &c).unwrap();
                assert!(c.tolerance().accepts((a.value - b.value).norm(), a.scale));
                // n = 2: y = (-x, x), f(y_1, y_2, γ) = σ(y_2, γ).
                let lifted = sigma.map_forms(&|l| LinearForm { coeffs: vec![0, l.coeffs[0]], gamma: l.gamma, shift: l.shift });
                let y = vec![-p[0], p[0], p[1]];
                let q = qwk_pushforward(&ev(&lifted, &c), 2, &y, QwkVariant::IdentityInclusive, &c).unwrap();
                assert!(c.tolerance().accepts((q.value - a.value).norm(), a.scale));
            }
        }
    }

    #[test]
    fn dem_near_divisor_is_finite() {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::SL2).unwrap();
        let root = g.datum.positive_roots()[0].clone();
        let sigma: SectionExpr<f64> = random_test_section(&g.datum, 4, 2);
        let f = ev(&sigma, &c);
        let near = vec![C::new(1e-6, 0.0), C::new(0.31, 0.22)];
        let away = vec![C::new(2e-3, 0.0), C::new(0.31, 0.22)];
        let a = demazure_dem(&root, &f, &near, &g, &c).unwrap();
        let b = demazure_dem(&root, &f, &away, &g, &c).unwrap();
        assert!(a.value.norm().is_finite());
        assert!((a.value - b.value).norm() < 1e-2 * b.value.norm().max(1.0));
    }

    #[test]
    fn qwk_residues_cancel_for_n3() {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::GL(3)).unwrap();
        let f: SectionExpr<f64> = random_test_section(&g.datum, 8, 2);
        let fe = ev(&f, &c);
        let mut s = Sampler::new(&g, &c, &f.fparams(), 5);
        let form = LinearForm::character(&[1, 0, -1]);
        for _ in 0..10 {
            let p = s.divisor_point(&form).unwrap();
            let dir = s.transverse(&form);
            let g2 = |q: &[C]| qwk_pushforward(&fe, 3, q, QwkVariant::IdentityInclusive, &c).map(|e| e.value);
            let single = |q: &[C]| qwk_term(&fe, 3, None, q, &c).map(|e| e.value);
            let Ok(r) = numeric_residue(g2, &p, &dir, c.tol()) else { continue };
            let r0 = numeric_residue(single, &p, &dir, c.tol()).unwrap();
            assert!(r.norm() <= 1e-6 * r0.norm().max(1.0), "{r} vs {r0}");
        }
    }
}
