//! Expression trees for meromorphic sections on `E^n × E`.
//!
//! A point of `E^n × E` is a slice of `n + 1` universal-cover representatives,
//! the last one being the `γ` coordinate. Evaluation uses the representatives
//! as given.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::{f_eval_complex, CurveParams, CurvePoint, FParams};
use crate::error::{Error, Result};
use crate::rootweyl::{IMat, RootDatum, WeylElement};
use crate::scalar::Real;

/// `Σ coeffs_i z_i + gamma·z_γ + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<R> {
    pub coeffs: Vec<i64>,
    pub gamma: i64,
    pub shift: CurvePoint<R>,
}

impl<R: Real> LinearForm<R> {
    pub fn new(coeffs: Vec<i64>, gamma: i64) -> Self {
        Self { coeffs, gamma, shift: CurvePoint::zero() }
    }

    /// The character `χ_λ`.
    pub fn character(lambda: &[i64]) -> Self {
        Self::new(lambda.to_vec(), 0)
    }

    /// `χ_γ` on a rank-`n` datum.
    pub fn gamma_form(n: usize) -> Self {
        Self::new(vec![0; n], 1)
    }

    /// `χ_λ - χ_γ`.
    pub fn minus_gamma(lambda: &[i64]) -> Self {
        Self::new(lambda.to_vec(), -1)
    }

    pub fn with_shift(mut self, shift: CurvePoint<R>) -> Self {
        self.shift = shift;
        self
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.gamma == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            gamma: -self.gamma,
            shift: self.shift.neg(),
        }
    }

    /// Slope part as one vector `(coeffs…, gamma)`.
    pub fn slope(&self) -> Vec<i64> {
        let mut v = self.coeffs.clone();
        v.push(self.gamma);
        v
    }

    pub fn eval(&self, p: &[Complex<R>], c: &CurveParams<R>) -> Complex<R> {
        let mut acc = self.shift.to_complex(c);
        for (k, z) in self.coeffs.iter().zip(p) {
            if *k != 0 {
                acc = acc + *z * R::from_i64(*k).unwrap();
            }
        }
        if self.gamma != 0 {
            acc = acc + p[self.coeffs.len()] * R::from_i64(self.gamma).unwrap();
        }
        acc
    }

    /// `ℓ ∘ M` for the cocharacter matrix `M`: coefficients become `M^T coeffs`.
    pub fn compose(&self, m: &IMat) -> Self {
        Self {
            coeffs: m.transpose().apply(&self.coeffs),
            gamma: self.gamma,
            shift: self.shift,
        }
    }
}

/// Node of a section expression.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionExpr<R> {
    Const(Complex<R>),
    Theta(LinearForm<R>),
    F(LinearForm<R>, FParams<R>),
    Sum(Vec<SectionExpr<R>>),
    Prod(Vec<SectionExpr<R>>),
    Inv(Box<SectionExpr<R>>),
    Neg(Box<SectionExpr<R>>),
}

/// Value of an evaluation with the largest intermediate magnitude seen (at least 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<R> {
    pub value: Complex<R>,
    pub scale: R,
}

impl<R: Real> SectionExpr<R> {
    pub fn constant(v: Complex<R>) -> Self {
        SectionExpr::Const(v)
    }

    pub fn real(v: f64) -> Self {
        SectionExpr::Const(Complex::new(R::lit(v), R::zero()))
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn theta(form: LinearForm<R>) -> Self {
        SectionExpr::Theta(form)
    }

    pub fn f(form: LinearForm<R>, fp: FParams<R>) -> Self {
        SectionExpr::F(form, fp)
    }

    /// Sum with nested sums flattened.
    pub fn sum(children: Vec<Self>) -> Self {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                SectionExpr::Sum(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        SectionExpr::Sum(out)
    }

    /// Product with nested products flattened.
    pub fn prod(children: Vec<Self>) -> Self {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                SectionExpr::Prod(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        SectionExpr::Prod(out)
    }

    pub fn inv(self) -> Self {
        SectionExpr::Inv(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        SectionExpr::Neg(Box::new(self))
    }

    pub fn sub(self, o: Self) -> Self {
        Self::sum(vec![self, o.neg()])
    }

    pub fn div(self, o: Self) -> Self {
        Self::prod(vec![self, o.inv()])
    }

    /// Whether the node is a literal zero constant.
    pub fn is_zero_const(&self) -> bool {
        matches!(self, SectionExpr::Const(v) if v.re.is_zero() && v.im.is_zero())
    }

    pub fn eval(&self, p: &[Complex<R>], c: &CurveParams<R>) -> Result<Complex<R>> {
        Ok(self.eval_scaled(p, c)?.value)
    }

    pub fn eval_scaled(&self, p: &[Complex<R>], c: &CurveParams<R>) -> Result<Evaluation<R>> {
        let mut scale = R::one();
        let value = self.eval_inner(p, c, &mut scale)?;
        Ok(Evaluation { value, scale })
    }

    fn eval_inner(&self, p: &[Complex<R>], c: &CurveParams<R>, scale: &mut R) -> Result<Complex<R>> {
        let v = match self {
            SectionExpr::Const(v) => *v,
            SectionExpr::Theta(l) => c.theta(l.eval(p, c)),
            SectionExpr::F(l, fp) => f_eval_complex(l.eval(p, c), fp, c)?,
            SectionExpr::Sum(ch) => {
                let mut acc = Complex::new(R::zero(), R::zero());
                for e in ch {
                    acc = acc + e.eval_inner(p, c, scale)?;
                }
                acc
            }
            SectionExpr::Prod(ch) => {
                let mut acc = Complex::new(R::one(), R::zero());
                for e in ch {
                    acc = acc * e.eval_inner(p, c, scale)?;
                    *scale = scale.max(acc.norm());
                }
                acc
            }
            SectionExpr::Inv(e) => {
                let mut local = R::one();
                let d = e.eval_inner(p, c, &mut local)?;
                *scale = scale.max(local);
                if d.norm() < c.tol() * local {
                    return Err(Error::PoleAt {
                        location: format!("denominator |{}| below tolerance", d.norm()),
                    });
                }
                Complex::new(R::one(), R::zero()) / d
            }
            SectionExpr::Neg(e) => -e.eval_inner(p, c, scale)?,
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::PoleAt { location: "non-finite intermediate value".into() });
        }
        *scale = scale.max(v.norm());
        Ok(v)
    }

    /// Replace every linear form by its image under `map`.
    pub fn map_forms(&self, map: &dyn Fn(&LinearForm<R>) -> LinearForm<R>) -> Self {
        match self {
            SectionExpr::Const(v) => SectionExpr::Const(*v),
            SectionExpr::Theta(l) => SectionExpr::Theta(map(l)),
            SectionExpr::F(l, fp) => SectionExpr::F(map(l), *fp),
            SectionExpr::Sum(ch) => SectionExpr::Sum(ch.iter().map(|e| e.map_forms(map)).collect()),
            SectionExpr::Prod(ch) => SectionExpr::Prod(ch.iter().map(|e| e.map_forms(map)).collect()),
            SectionExpr::Inv(e) => SectionExpr::Inv(Box::new(e.map_forms(map))),
            SectionExpr::Neg(e) => SectionExpr::Neg(Box::new(e.map_forms(map))),
        }
    }

    /// Substitute every linear form `ℓ` by `ℓ ∘ m`.
    pub fn compose(&self, m: &IMat) -> Self {
        self.map_forms(&|l| l.compose(m))
    }

    /// Collect the pole data of every `F` node.
    pub fn fparams(&self) -> Vec<FParams<R>> {
        let mut out = Vec::new();
        self.collect_fparams(&mut out);
        out
    }

    fn collect_fparams(&self, out: &mut Vec<FParams<R>>) {
        match self {
            SectionExpr::Const(_) | SectionExpr::Theta(_) => {}
            SectionExpr::F(_, fp) => {
                if !out.contains(fp) {
                    out.push(*fp);
                }
            }
            SectionExpr::Sum(ch) | SectionExpr::Prod(ch) => ch.iter().for_each(|e| e.collect_fparams(out)),
            SectionExpr::Inv(e) | SectionExpr::Neg(e) => e.collect_fparams(out),
        }
    }

    /// `w·e`, i.e. `p ↦ e(w⁻¹ p)`.
    pub fn pullback(&self, w: &WeylElement, d: &RootDatum) -> Self {
        if w.is_identity() {
            return self.clone();
        }
        self.compose(&w.inverse(d).matrix)
    }

    /// Theta slopes of a product factor: `+1` for `Theta`, `-1` for `Inv(Theta)`.
    fn theta_factor(&self) -> Option<(Vec<i64>, i32)> {
        match self {
            SectionExpr::Theta(l) => Some((l.slope(), 1)),
            SectionExpr::Inv(e) => match e.as_ref() {
                SectionExpr::Theta(l) => Some((l.slope(), -1)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Whether every `Theta` node sits in a slope-balanced quotient.
    pub fn is_elliptic(&self) -> bool {
        match self {
            SectionExpr::Const(_) | SectionExpr::F(..) => true,
            SectionExpr::Theta(_) => false,
            SectionExpr::Sum(ch) => ch.iter().all(|e| e.is_elliptic()),
            SectionExpr::Inv(e) | SectionExpr::Neg(e) => e.is_elliptic(),
            SectionExpr::Prod(ch) => {
                let mut balance: Vec<(Vec<i64>, i32)> = Vec::new();
                for e in ch {
                    if let Some((slope, sign)) = e.theta_factor() {
                        match balance.iter_mut().find(|(s, _)| *s == slope) {
                            Some(entry) => entry.1 += sign,
                            None => balance.push((slope, sign)),
                        }
                    } else if !e.is_elliptic() {
                        return false;
                    }
                }
                balance.iter().all(|(_, k)| *k == 0)
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SectionExpr::Const(_) | SectionExpr::Theta(_) | SectionExpr::F(..) => 1,
            SectionExpr::Sum(ch) | SectionExpr::Prod(ch) => 1 + ch.iter().map(|e| e.size()).sum::<usize>(),
            SectionExpr::Inv(e) | SectionExpr::Neg(e) => 1 + e.size(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire::from_expr(self)).expect("section trees serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: Wire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        w.to_expr()
    }
}

/// Random point of `E^n × E` with lattice coordinates uniform in `[0,1)`.
pub fn random_point<R: Real>(n: usize, rng: &mut ChaCha8Rng, c: &CurveParams<R>) -> Vec<Complex<R>> {
    (0..=n)
        .map(|_| CurvePoint::new(R::lit(rng.gen::<f64>()), R::lit(rng.gen::<f64>())).to_complex(c))
        .collect()
}

/// Random point on `form = 0`: every coordinate random except the one with the
/// largest `|coefficient|` (lowest index on ties), which is solved for.
pub fn divisor_point<R: Real>(form: &LinearForm<R>, rng: &mut ChaCha8Rng, c: &CurveParams<R>) -> Vec<Complex<R>> {
    let slope = form.slope();
    let mut k = 0;
    for (i, s) in slope.iter().enumerate() {
        if s.abs() > slope[k].abs() {
            k = i;
        }
    }
    assert!(slope[k] != 0, "divisor of a constant form");
    let mut p = random_point(form.rank(), rng, c);
    p[k] = Complex::new(R::zero(), R::zero());
    let rest = form.eval(&p, c);
    p[k] = -rest / R::from_i64(slope[k]).unwrap();
    p
}

/// Whether `e` vanishes (to the composite tolerance) at `samples` random points of `form = 0`.
pub fn vanishes_on_divisor<R: Real>(
    e: &SectionExpr<R>,
    form: &LinearForm<R>,
    samples: usize,
    rng: &mut ChaCha8Rng,
    c: &CurveParams<R>,
) -> Result<bool> {
    let tol = c.tolerance();
    for _ in 0..samples {
        let p = divisor_point(form, rng, c);
        let ev = e.eval_scaled(&p, c)?;
        if !tol.accepts(ev.value.norm(), ev.scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_lambda(rank: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Random generic pole pair: coordinates in `[0.05, 0.95)`, `a + b` kept away from the lattice.
pub fn random_fparams<R: Real>(rng: &mut ChaCha8Rng) -> FParams<R> {
    loop {
        let mut coord = || R::lit(rng.gen_range(0.05..0.95));
        let a = CurvePoint::new(coord(), coord());
        let b = CurvePoint::new(coord(), coord());
        let s = a.add(&b).reduce();
        let away = |x: R| x.min(R::one() - x) > R::lit(0.05);
        if away(s.a) || away(s.b) {
            return FParams { a, b };
        }
    }
}

/// Seed-reproducible elliptic test section: a sum of `complexity` terms, each
/// a constant times one or two `F(χ_λ + shift)` blocks.
pub fn random_test_section<R: Real>(d: &RootDatum, seed: u64, complexity: usize) -> SectionExpr<R> {
    assert!(complexity <= 6, "complexity above 6");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rc = |rng: &mut ChaCha8Rng| Complex::new(R::lit(rng.gen_range(-1.0..1.0)), R::lit(rng.gen_range(-1.0..1.0)));
    if complexity == 0 {
        return SectionExpr::Const(rc(&mut rng));
    }
    let mut terms = Vec::with_capacity(complexity);
    for _ in 0..complexity {
        let mut factors = vec![SectionExpr::Const(rc(&mut rng))];
        let blocks = rng.gen_range(1..=2);
        for _ in 0..blocks {
            let lambda = random_lambda(d.rank, &mut rng);
            let gamma = rng.gen_range(-1..=1);
            let shift = CurvePoint::new(R::lit(rng.gen::<f64>()), R::lit(rng.gen::<f64>()));
            let fp = random_fparams(&mut rng);
            factors.push(SectionExpr::F(LinearForm::new(lambda, gamma).with_shift(shift), fp));
        }
        terms.push(SectionExpr::prod(factors));
    }
    SectionExpr::sum(terms)
}

#[derive(Serialize, Deserialize)]
struct WireForm {
    coeffs: Vec<i64>,
    gamma: i64,
    shift: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct WireF {
    a: [f64; 2],
    b: [f64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
enum Wire {
    Const { value: [f64; 2] },
    Theta { form: WireForm },
    F { form: WireForm, fparams: WireF },
    Sum { children: Vec<Wire> },
    Prod { children: Vec<Wire> },
    Inv { child: Box<Wire> },
    Neg { child: Box<Wire> },
}

fn point_wire<R: Real>(p: &CurvePoint<R>) -> [f64; 2] {
    [p.a.to_f64_lossy(), p.b.to_f64_lossy()]
}

fn wire_point<R: Real>(v: [f64; 2]) -> CurvePoint<R> {
    CurvePoint::new(R::lit(v[0]), R::lit(v[1]))
}

impl WireForm {
    fn from_form<R: Real>(l: &LinearForm<R>) -> Self {
        Self { coeffs: l.coeffs.clone(), gamma: l.gamma, shift: point_wire(&l.shift) }
    }

    fn to_form<R: Real>(&self) -> LinearForm<R> {
        LinearForm { coeffs: self.coeffs.clone(), gamma: self.gamma, shift: wire_point(self.shift) }
    }
}

impl Wire {
    fn from_expr<R: Real>(e: &SectionExpr<R>) -> Self {
        match e {
            SectionExpr::Const(v) => Wire::Const { value: [v.re.to_f64_lossy(), v.im.to_f64_lossy()] },
            SectionExpr::Theta(l) => Wire::Theta { form: WireForm::from_form(l) },
            SectionExpr::F(l, fp) => Wire::F {
                form: WireForm::from_form(l),
                fparams: WireF { a: point_wire(&fp.a), b: point_wire(&fp.b) },
            },
            SectionExpr::Sum(ch) => Wire::Sum { children: ch.iter().map(Wire::from_expr).collect() },
            SectionExpr::Prod(ch) => Wire::Prod { children: ch.iter().map(Wire::from_expr).collect() },
            SectionExpr::Inv(c) => Wire::Inv { child: Box::new(Wire::from_expr(c)) },
            SectionExpr::Neg(c) => Wire::Neg { child: Box::new(Wire::from_expr(c)) },
        }
    }

    fn to_expr<R: Real>(&self) -> Result<SectionExpr<R>> {
        Ok(match self {
            Wire::Const { value } => SectionExpr::Const(Complex::new(R::lit(value[0]), R::lit(value[1]))),
            Wire::Theta { form } => SectionExpr::Theta(form.to_form()),
            Wire::F { form, fparams } => {
                SectionExpr::F(form.to_form(), FParams { a: wire_point(fparams.a), b: wire_point(fparams.b) })
            }
            Wire::Sum { children } => SectionExpr::Sum(children.iter().map(|w| w.to_expr()).collect::<Result<_>>()?),
            Wire::Prod { children } => SectionExpr::Prod(children.iter().map(|w| w.to_expr()).collect::<Result<_>>()?),
            Wire::Inv { child } => SectionExpr::Inv(Box::new(child.to_expr()?)),
            Wire::Neg { child } => SectionExpr::Neg(Box::new(child.to_expr()?)),
        })
    }
}
