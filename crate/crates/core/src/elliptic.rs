//! Numeric engine for the complex elliptic curve `E = C / (Z + τZ)`.
//!
//! Points are carried in lattice coordinates `z = a + bτ` with real `a, b`,
//! so reduction modulo the lattice is exact and independent of `τ`. The odd
//! theta function is evaluated from its truncated product on the given
//! representative; only balanced quotients (such as the rational section
//! [`f_eval`]) are representative-independent.

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerance};

/// Complex elliptic curve together with the truncation and tolerance policy.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveParams<R> {
    tau: Complex<R>,
    q: Complex<R>,
    trunc: usize,
    tol: R,
    scale_tol: R,
    /// `q^0 ..= q^trunc`.
    qpow: Vec<Complex<R>>,
    /// `(1/2πi) ∏_{s=1..N} (1 - q^s)^{-2}`.
    norm: Complex<R>,
    theta_prime0: Complex<R>,
}

impl<R: Real> CurveParams<R> {
    pub fn new(tau: Complex<R>, trunc: usize, tol: R, scale_tol: R) -> Result<Self> {
        if !(tau.im > R::zero()) {
            return Err(Error::InvalidCurve(format!("Im(tau) = {} must be positive", tau.im)));
        }
        if !(tol > R::zero()) || !(scale_tol > R::zero()) {
            return Err(Error::InvalidCurve("tolerances must be positive".into()));
        }
        let two_pi_i = Complex::new(R::zero(), R::TAU());
        let q = (two_pi_i * tau).exp();
        let qabs = q.norm();
        if qabs >= R::one() {
            return Err(Error::InvalidCurve(format!("|q| = {qabs} must be below 1")));
        }
        if trunc < 20 {
            return Err(Error::InvalidCurve(format!("trunc = {trunc} is below the minimum of 20")));
        }
        let tail = qabs.powi(trunc as i32);
        if tail > tol {
            return Err(Error::InvalidCurve(format!(
                "series tail |q|^trunc = {tail:e} exceeds tol = {tol:e}"
            )));
        }
        let mut qpow = Vec::with_capacity(trunc + 1);
        let mut acc = Complex::<R>::one();
        for _ in 0..=trunc {
            qpow.push(acc);
            acc = acc * q;
        }
        let mut prod = Complex::<R>::one();
        for qs in &qpow[1..] {
            let f = Complex::<R>::one() - qs;
            prod = prod * f * f;
        }
        let norm = Complex::<R>::one() / (two_pi_i * prod);
        let mut c = Self { tau, q, trunc, tol, scale_tol, qpow, norm, theta_prime0: Complex::<R>::one() };
        c.theta_prime0 = theta_prime_zero(&c);
        Ok(c)
    }

    /// Default test curve `τ = 0.3 + 1.1i`, `trunc = 40`, tolerances `1e-9`/`1e-7`.
    pub fn default_curve() -> Self {
        Self::new(Complex::new(R::lit(0.3), R::lit(1.1)), 40, R::lit(1e-9), R::lit(1e-7))
            .expect("default curve is valid")
    }

    pub fn tau(&self) -> Complex<R> {
        self.tau
    }

    pub fn q(&self) -> Complex<R> {
        self.q
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn tol(&self) -> R {
        self.tol
    }

    pub fn scale_tol(&self) -> R {
        self.scale_tol
    }

    pub fn tolerance(&self) -> Tolerance<R> {
        Tolerance::new(self.tol, self.scale_tol)
    }

    /// Normalizing constant `(1/2πi) ∏_{s=1..N} (1 - q^s)^{-2}`.
    pub fn theta_norm(&self) -> Complex<R> {
        self.norm
    }

    /// [`theta_prime_zero`] as computed once at construction.
    pub fn theta_prime0(&self) -> Complex<R> {
        self.theta_prime0
    }

    /// `q^s` for `0 <= s <= trunc`.
    pub fn q_power(&self, s: usize) -> Complex<R> {
        self.qpow[s]
    }

    /// Odd theta function on the universal-cover representative `z`:
    /// `e^{πiz} ∏_{s≥1}(1-q^s u) ∏_{s≥0}(1-q^s/u) · (1/2πi) ∏_{s≥1}(1-q^s)^{-2}`, `u = e^{2πiz}`.
    pub fn theta(&self, z: Complex<R>) -> Complex<R> {
        let pi_i = Complex::new(R::zero(), R::PI());
        let half = (pi_i * z).exp();
        let u = half * half;
        let uinv = Complex::<R>::one() / u;
        let mut prod = Complex::<R>::one() - uinv;
        for qs in &self.qpow[1..] {
            prod = prod * (Complex::<R>::one() - qs * u) * (Complex::<R>::one() - qs * uinv);
        }
        half * prod * self.norm
    }

    pub fn theta_at(&self, p: CurvePoint<R>) -> Complex<R> {
        self.theta(p.to_complex(self))
    }

    /// Lattice coordinates `(a, b)` of `z = a + bτ`.
    pub fn lattice_coords(&self, z: Complex<R>) -> (R, R) {
        let b = z.im / self.tau.im;
        let a = z.re - b * self.tau.re;
        (a, b)
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn lattice_distance(&self, z: Complex<R>) -> R {
        let (a, b) = self.lattice_coords(z);
        CurvePoint::new(a, b).distance_to_lattice(self)
    }
}

/// A point of `E` carried by real lattice coordinates of a universal-cover
/// representative `z = a + bτ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvePoint<R> {
    pub a: R,
    pub b: R,
}

fn unit_fract<R: Real>(x: R) -> R {
    let r = x - x.floor();
    if r >= R::one() {
        R::zero()
    } else {
        r
    }
}

impl<R: Real> CurvePoint<R> {
    pub fn new(a: R, b: R) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }

    pub fn from_complex(z: Complex<R>, c: &CurveParams<R>) -> Self {
        let (a, b) = c.lattice_coords(z);
        Self::new(a, b)
    }

    pub fn to_complex(&self, c: &CurveParams<R>) -> Complex<R> {
        Complex::new(self.a, R::zero()) + c.tau * self.b
    }

    /// Representative with both lattice coordinates in `[0, 1)`.
    pub fn reduce(&self) -> Self {
        Self::new(unit_fract(self.a), unit_fract(self.b))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b)
    }

    pub fn scale(&self, m: i64) -> Self {
        let m = R::from_i64(m).expect("small integer");
        Self::new(self.a * m, self.b * m)
    }

    /// Euclidean distance in `C` from the point to the nearest lattice point.
    pub fn distance_to_lattice(&self, c: &CurveParams<R>) -> R {
        let r = self.reduce();
        let mut best = R::infinity();
        for da in [0i32, -1] {
            for db in [0i32, -1] {
                let p = CurvePoint::new(r.a + R::from_i32(da).unwrap(), r.b + R::from_i32(db).unwrap());
                best = best.min(p.to_complex(c).norm());
            }
        }
        best
    }

    /// Whether the point lies within `tol` of the lattice.
    pub fn is_lattice_point(&self, c: &CurveParams<R>, tol: R) -> bool {
        self.distance_to_lattice(c) <= tol
    }
}

/// Poles `a`, `b` of the degree-two rational section `f`; its zeros are `0` and `a + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FParams<R> {
    pub a: CurvePoint<R>,
    pub b: CurvePoint<R>,
}

impl<R: Real> FParams<R> {
    pub fn new(a: CurvePoint<R>, b: CurvePoint<R>, c: &CurveParams<R>) -> Result<Self> {
        let fp = Self { a, b };
        fp.validate(c)?;
        Ok(fp)
    }

    /// Default generic parameters `a = 0.23 + 0.31τ`, `b = 0.57 + 0.11τ`.
    pub fn generic() -> Self {
        Self {
            a: CurvePoint::new(R::lit(0.23), R::lit(0.31)),
            b: CurvePoint::new(R::lit(0.57), R::lit(0.11)),
        }
    }

    /// The Jacobi `sn` configuration: poles at `τ/2` and `(1+τ)/2`, zeros at `0`, `1/2`.
    pub fn sn() -> Self {
        Self {
            a: CurvePoint::new(R::zero(), R::lit(0.5)),
            b: CurvePoint::new(R::lit(0.5), R::lit(0.5)),
        }
    }

    pub fn validate(&self, c: &CurveParams<R>) -> Result<()> {
        let tol = c.tol();
        for (name, p) in [("a", self.a), ("b", self.b), ("a+b", self.a.add(&self.b))] {
            if p.is_lattice_point(c, tol) {
                return Err(Error::InvalidCurve(format!("FParams: {name} is a lattice point")));
            }
        }
        Ok(())
    }

    /// `Sing(f)`: the non-origin zero `a + b` together with the poles `a`, `b`.
    pub fn singular_set(&self) -> [CurvePoint<R>; 3] {
        [self.a, self.b, self.a.add(&self.b)]
    }
}

/// `θ'(0)` by central differences at `h = 1e-5`, Richardson-extrapolated over `(h, h/2)`.
pub fn theta_prime_zero<R: Real>(c: &CurveParams<R>) -> Complex<R> {
    let central = |h: R| {
        let hz = Complex::new(h, R::zero());
        (c.theta(hz) - c.theta(-hz)) / (hz + hz)
    };
    let h = R::lit(1e-5);
    let d1 = central(h);
    let d2 = central(h / R::lit(2.0));
    (d2 * R::lit(4.0) - d1) / R::lit(3.0)
}

/// Rational section `f` with divisor `(0) + (a+b) - (a) - (b)`, normalized so `f'(0) = 1`.
pub fn f_eval_complex<R: Real>(z: Complex<R>, fp: &FParams<R>, c: &CurveParams<R>) -> Result<Complex<R>> {
    let tol = c.tol();
    let pz = CurvePoint::from_complex(z, c);
    for (name, pole) in [("a", fp.a), ("b", fp.b)] {
        if pz.sub(&pole).is_lattice_point(c, tol) {
            return Err(Error::PoleAt {
                location: format!("f pole {name} at z = {} + {}i", z.re, z.im),
            });
        }
    }
    let za = fp.a.to_complex(c);
    let zb = fp.b.to_complex(c);
    let th = |w: Complex<R>| c.theta(w);
    let numer = th(z) * th(z - za - zb) * th(za) * th(zb);
    let denom = c.theta_prime0() * th(z - za) * th(z - zb) * (-th(za + zb));
    Ok(numer / denom)
}

pub fn f_eval<R: Real>(p: CurvePoint<R>, fp: &FParams<R>, c: &CurveParams<R>) -> Result<Complex<R>> {
    f_eval_complex(p.to_complex(c), fp, c)
}

/// Shift `p + eps·dir` of a point of a product of curves.
pub fn offset<R: Real>(p: &[Complex<R>], dir: &[Complex<R>], eps: R) -> Vec<Complex<R>> {
    p.iter().zip(dir).map(|(z, d)| *z + *d * eps).collect()
}

/// Directional residue coefficient of a simple pole by two-step Richardson
/// extrapolation of `ε·g(p + ε·dir)` at `ε ∈ {1e-4, 5e-5}`.
///
/// Regular evaluators (`ε·g` decaying under halving) give a value of order
/// `ε²`; growth without stabilization is reported as [`Error::Unstable`].
pub fn numeric_residue<R, G>(g: G, p: &[Complex<R>], dir: &[Complex<R>], tol: R) -> Result<Complex<R>>
where
    R: Real,
    G: Fn(&[Complex<R>]) -> Result<Complex<R>>,
{
    let eps = R::lit(1e-4);
    let half = eps / R::lit(2.0);
    let r1 = g(&offset(p, dir, eps))? * eps;
    let r2 = g(&offset(p, dir, half))? * half;
    let jump = (r2 - r1).norm();
    let stable = jump <= R::lit(0.1) * r1.norm().max(tol);
    let decaying = r2.norm() <= R::lit(0.75) * r1.norm() || r1.norm().max(r2.norm()) <= tol;
    if !stable && !decaying {
        return Err(Error::Unstable {
            location: format!("{:?}", p.iter().map(|z| (z.re.to_f64_lossy(), z.im.to_f64_lossy())).collect::<Vec<_>>()),
            jump: jump.to_f64_lossy(),
        });
    }
    Ok(r2 * R::lit(2.0) - r1)
}

/// Residue coefficient from the odd part `ε(g(p+εd) - g(p-εd))/2`,
/// Richardson-combined over `ε ∈ {1e-4, 5e-5}`; exact through order `ε³`
/// for simple poles and regular functions alike. The stability test treats
/// jumps below `tol·max(1, ε|g|)` as rounding noise.
pub fn numeric_residue_symmetric<R, G>(g: G, p: &[Complex<R>], dir: &[Complex<R>], tol: R) -> Result<Complex<R>>
where
    R: Real,
    G: Fn(&[Complex<R>]) -> Result<Complex<R>>,
{
    let mut floor = tol;
    let mut odd = |eps: R| -> Result<Complex<R>> {
        let (a, b) = (g(&offset(p, dir, eps))?, g(&offset(p, dir, -eps))?);
        floor = floor.max(tol * a.norm().max(b.norm()) * eps);
        Ok((a - b) * (eps / R::lit(2.0)))
    };
    let eps = R::lit(1e-4);
    let r1 = odd(eps)?;
    let r2 = odd(eps / R::lit(2.0))?;
    let jump = (r2 - r1).norm();
    let decaying = r2.norm() <= R::lit(0.75) * r1.norm() || r1.norm().max(r2.norm()) <= floor;
    if jump > R::lit(0.1) * r1.norm().max(floor) && !decaying {
        return Err(Error::Unstable {
            location: format!("{:?}", p.iter().map(|z| (z.re.to_f64_lossy(), z.im.to_f64_lossy())).collect::<Vec<_>>()),
            jump: jump.to_f64_lossy(),
        });
    }
    Ok((r2 * R::lit(4.0) - r1) / R::lit(3.0))
}

/// Smallest `k <= maxord` such that `h(ε) = ε^k·g(p + ε·dir)` stays bounded as
/// `ε` runs through `1e-4, 5e-5, 2.5e-5`: successive differences of `h` must
/// not grow (they halve for bounded `h` and double past the pole order).
/// Returns `maxord + 1` when no order fits.
pub fn pole_order_estimate<R, G>(g: G, p: &[Complex<R>], dir: &[Complex<R>], maxord: u32, tol: R) -> Result<u32>
where
    R: Real,
    G: Fn(&[Complex<R>]) -> Result<Complex<R>>,
{
    pole_order_estimate_scaled(|q: &[Complex<R>]| g(q).map(|v| (v, v.norm())), p, dir, maxord, tol)
}

/// [`pole_order_estimate`] for evaluators that also report the magnitude of
/// their intermediate terms; the noise floor is `tol` times that magnitude.
pub fn pole_order_estimate_scaled<R, G>(g: G, p: &[Complex<R>], dir: &[Complex<R>], maxord: u32, tol: R) -> Result<u32>
where
    R: Real,
    G: Fn(&[Complex<R>]) -> Result<(Complex<R>, R)>,
{
    let eps = [R::lit(1e-4), R::lit(5e-5), R::lit(2.5e-5)];
    let gs = [g(&offset(p, dir, eps[0]))?, g(&offset(p, dir, eps[1]))?, g(&offset(p, dir, eps[2]))?];
    for k in 0..=maxord {
        let h: Vec<(Complex<R>, R)> = gs.iter().zip(eps).map(|((v, s), e)| (*v * e.powi(k as i32), *s * e.powi(k as i32))).collect();
        let d1 = (h[0].0 - h[1].0).norm();
        let d2 = (h[1].0 - h[2].0).norm();
        let noise = tol * h.iter().map(|v| v.0.norm().max(v.1)).fold(R::one(), R::max);
        if d2 <= d1 || d2 <= noise {
            return Ok(k);
        }
    }
    Ok(maxord + 1)
}

/// Least `m <= maxorder` with `m·p` on the lattice (both coordinates within `tol` of integers).
pub fn is_torsion<R: Real>(p: CurvePoint<R>, maxorder: u32, tol: R) -> Option<u32> {
    let r = p.reduce();
    let near_int = |x: R| (x - x.round()).abs() <= tol;
    (1..=maxorder).find(|&m| {
        let m = R::from_u32(m).unwrap();
        near_int(r.a * m) && near_int(r.b * m)
    })
}

/// DD map: the circle-angle pair `(a, b) ∈ [0,1)²` of the reduced point.
pub fn dd<R: Real>(p: CurvePoint<R>) -> (R, R) {
    let r = p.reduce();
    (r.a, r.b)
}
