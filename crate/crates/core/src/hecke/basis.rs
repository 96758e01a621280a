use num_complex::Complex;
use serde::Serialize;

use super::conditions::ConditionStat;
use super::element::HeckeElement;
use super::operators::demazure_lusztig;
use super::Sampler;
use crate::elliptic::FParams;
use crate::error::{Error, Result};
use crate::rootweyl::WeylGroup;
use crate::scalar::Real;
use crate::sections::{LinearForm, SectionExpr};

/// Condition numbers above this count as numerically singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// `T_{I_w} = T_{α_{i_1}}^{f_1} ⋯ T_{α_{i_l}}^{f_l}` along the stored reduced word of `w`.
pub fn t_basis<R: Real>(w: usize, fps: &[FParams<R>], g: &WeylGroup) -> Result<HeckeElement<R>> {
    let word = &g.element(w).word;
    if fps.len() != word.len() {
        return Err(Error::InvalidConfig(format!(
            "t_basis needs {} pole pairs, got {}",
            word.len(),
            fps.len()
        )));
    }
    let mut acc = HeckeElement::identity(g);
    for (i, fp) in word.iter().zip(fps) {
        acc = acc.mult(&demazure_lusztig(*i, fp, g), g);
    }
    Ok(acc)
}

/// [`t_basis`] with the same pole pair on every letter.
pub fn t_basis_uniform<R: Real>(w: usize, fp: &FParams<R>, g: &WeylGroup) -> HeckeElement<R> {
    let l = g.element(w).length;
    t_basis(w, &vec![*fp; l], g).expect("length matches")
}

/// Every reduced word of `w`.
pub fn reduced_words(w: usize, g: &WeylGroup) -> Vec<Vec<usize>> {
    let len = g.element(w).length;
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..g.datum.num_simple() {
        let ws = g.mul(w, g.simple(i));
        if g.element(ws).length < len {
            for mut word in reduced_words(ws, g) {
                word.push(i);
                out.push(word);
            }
        }
    }
    out
}

/// Product of `T_{α_i}^f` along an arbitrary word.
pub fn t_word<R: Real>(word: &[usize], fp: &FParams<R>, g: &WeylGroup) -> HeckeElement<R> {
    word.iter().fold(HeckeElement::identity(g), |acc, &i| acc.mult(&demazure_lusztig(i, fp, g), g))
}

/// Largest relative coefficient difference between `T_I` over all reduced
/// words `I` of all elements, at `samples` generic points. Zero means no
/// dependence on the word was observed.
pub fn word_dependence<R: Real>(fp: &FParams<R>, samples: usize, sampler: &mut Sampler<'_, R>) -> Result<f64> {
    let g = sampler.group;
    let c = sampler.curve;
    let mut worst: f64 = 0.0;
    for w in 0..g.len() {
        let words = reduced_words(w, g);
        if words.len() < 2 {
            continue;
        }
        let elems: Vec<HeckeElement<R>> = words.iter().map(|word| t_word(word, fp, g)).collect();
        for _ in 0..samples {
            let p = sampler.generic_point()?;
            for v in 0..g.len() {
                let base = elems[0].eval_coeff(v, &p, c)?;
                for e in &elems[1..] {
                    let other = e.eval_coeff(v, &p, c)?;
                    let scale = base.scale.max(other.scale).max(R::one());
                    worst = worst.max(((base.value - other.value).norm() / scale).to_f64_lossy());
                }
            }
        }
    }
    Ok(worst)
}

/// `∏_j (1 - f(χ_γ)/f(χ_{β_j}))` with `β_j = s_{i_1} ⋯ s_{i_{j-1}} α_{i_j}`.
pub fn leading_coefficient<R: Real>(w: usize, fp: &FParams<R>, g: &WeylGroup) -> SectionExpr<R> {
    let d = &g.datum;
    let word = &g.element(w).word;
    let mut factors = Vec::with_capacity(word.len());
    for (j, &i) in word.iter().enumerate() {
        let prefix = crate::rootweyl::WeylElement::from_word(&word[..j], d);
        let beta = prefix.act_character(&d.simple_roots[i], d);
        let ratio = SectionExpr::prod(vec![
            SectionExpr::f(LinearForm::gamma_form(d.rank), *fp),
            SectionExpr::f(LinearForm::character(&beta), *fp).inv(),
        ]);
        factors.push(SectionExpr::one().sub(ratio));
    }
    SectionExpr::prod(factors)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangularityReport {
    /// Coefficients of `δ_v` with `v ≰ w` vanish.
    pub lower: ConditionStat,
    /// The `δ_w` coefficient matches the product formula.
    pub leading: ConditionStat,
    /// `‖M‖₁‖M⁻¹‖₁` at each generic point tried.
    pub condition_numbers: Vec<f64>,
    pub invertible: bool,
}

impl TriangularityReport {
    pub fn all_pass(&self) -> bool {
        self.lower.pass && self.leading.pass && self.invertible
    }
}

/// Inverse by Gaussian elimination with partial pivoting.
pub fn invert<R: Real>(m: &[Vec<Complex<R>>]) -> Option<Vec<Vec<Complex<R>>>> {
    let n = m.len();
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());
    let mut a: Vec<Vec<Complex<R>>> = m.to_vec();
    let mut inv: Vec<Vec<Complex<R>>> = (0..n).map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
        if a[piv][col].norm() == R::zero() || !a[piv][col].norm().is_finite() {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = one / a[col][col];
        for j in 0..n {
            a[col][j] = a[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != zero {
                    for j in 0..n {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[r][j] = a[r][j] - f * ac;
                        inv[r][j] = inv[r][j] - f * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

fn norm1<R: Real>(m: &[Vec<Complex<R>>]) -> R {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).fold(R::zero(), |acc, i| acc + m[i][j].norm()))
        .fold(R::zero(), |a, b| a.max(b))
}

/// One-norm condition number, infinite for singular matrices.
pub fn condition_number<R: Real>(m: &[Vec<Complex<R>>]) -> f64 {
    match invert(m) {
        Some(inv) => (norm1(m) * norm1(&inv)).to_f64_lossy(),
        None => f64::INFINITY,
    }
}

/// Bruhat triangularity, leading coefficients and rank of the evaluation
/// matrix `M[w][v] = (δ_v-coefficient of T_{I_w})(p)` over all of `W`.
pub fn triangularity_check<R: Real>(fp: &FParams<R>, samples: usize, sampler: &mut Sampler<'_, R>) -> Result<TriangularityReport> {
    let g = sampler.group;
    let c = sampler.curve;
    let tol = c.tolerance();
    let n = g.len();
    let basis: Vec<HeckeElement<R>> = (0..n).map(|w| t_basis_uniform(w, fp, g)).collect();
    let leads: Vec<SectionExpr<R>> = (0..n).map(|w| leading_coefficient(w, fp, g)).collect();
    let mut lower = ConditionStat::new("bruhat_lower");
    let mut leading = ConditionStat::new("leading_coefficient");
    for _ in 0..samples {
        let p = sampler.generic_point()?;
        for w in 0..n {
            for v in 0..n {
                let e = basis[w].eval_coeff(v, &p, c)?;
                if !g.bruhat_leq(v, w) {
                    let err = e.value.norm();
                    lower.record(err.to_f64_lossy(), e.scale.to_f64_lossy(), tol.accepts(err, e.scale));
                }
            }
            let got = basis[w].eval_coeff(w, &p, c)?;
            let want = leads[w].eval_scaled(&p, c)?;
            let err = (got.value - want.value).norm();
            let scale = got.scale.max(want.scale);
            leading.record(err.to_f64_lossy(), scale.to_f64_lossy(), tol.accepts(err, scale));
        }
    }
    let mut condition_numbers = Vec::new();
    let mut invertible = false;
    for _ in 0..3 {
        let p = sampler.generic_point()?;
        let mut m = Vec::with_capacity(n);
        for h in &basis {
            m.push((0..n).map(|v| h.eval_coeff(v, &p, c).map(|e| e.value)).collect::<Result<Vec<_>>>()?);
        }
        let k = condition_number(&m);
        condition_numbers.push(k);
        if k <= SINGULAR_CONDITION {
            invertible = true;
            break;
        }
    }
    if !invertible {
        return Err(Error::Singular { condition: condition_numbers.iter().cloned().fold(0.0, f64::max) });
    }
    Ok(TriangularityReport { lower, leading, condition_numbers, invertible })
}
