use ellhecke::elliptic::{CurveParams, CurvePoint, FParams};
use ellhecke::hecke::{demazure_lusztig, HeckeElement, Sampler};
use ellhecke::klrjet::{build_gamma, completed_t, PhiVariant, TransportRep};
use ellhecke::params::{classify, EigenData};
use ellhecke::poly::Poly;
use ellhecke::rootweyl::{Preset, WeylGroup};
use ellhecke::sections::random_test_section;
use ellhecke::ComplexJet;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn curve(re: f64, im: f64) -> CurveParams<f64> {
    CurveParams::new(C::new(re, im), 40, 1e-9, 1e-7).unwrap()
}

/// Odd theta from its sine series, normalized by the derivative at zero.
fn theta_series(z: C, tau: C) -> C {
    let qj = (C::new(0.0, std::f64::consts::PI) * tau).exp();
    let mut s = C::new(0.0, 0.0);
    let mut ds = C::new(0.0, 0.0);
    for n in 0..30i32 {
        let k = (2 * n + 1) as f64;
        let w = qj.powi(n * (n + 1)) * if n % 2 == 0 { 1.0 } else { -1.0 };
        s += w * (z * std::f64::consts::PI * k).sin();
        ds += w * std::f64::consts::PI * k;
    }
    s / ds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn theta_is_odd(re in -0.5f64..0.5, im in 0.25f64..1.5, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let c = curve(re, im);
        let z = C::new(x, y * im);
        let (a, b) = (c.theta(z), c.theta(-z));
        prop_assert!((a + b).norm() <= 1e-9 + 1e-7 * a.norm());
    }

    #[test]
    fn theta_product_matches_series(re in -0.5f64..0.5, im in 0.25f64..1.5, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let c = curve(re, im);
        let z = C::new(x, y * im);
        let want = theta_series(z, C::new(re, im));
        prop_assert!((c.theta(z) - want).norm() <= 1e-9 * want.norm().max(1.0));
    }

    #[test]
    fn theta_shift_by_one_negates(re in -0.5f64..0.5, im in 0.25f64..1.5, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let c = curve(re, im);
        let z = C::new(x, y * im);
        let ratio = c.theta(z + 1.0) / c.theta(z);
        prop_assert!((ratio + 1.0).norm() <= 1e-8);
    }

    #[test]
    fn jet_ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexJet::random(2, 5, &mut rng);
        let b = ComplexJet::random(2, 5, &mut rng);
        let c = ComplexJet::random(2, 5, &mut rng);
        prop_assert!(a.mul(&b).distance(&b.mul(&a)) < 1e-12);
        prop_assert!(a.mul(&b.add(&c)).distance(&a.mul(&b).add(&a.mul(&c))) < 1e-12);
        prop_assert!(a.mul(&b).mul(&c).distance(&a.mul(&b.mul(&c))) < 1e-11);
        let unit = a.add(&ComplexJet::one(2, 5).scale(&C::new(3.0, 0.0)));
        let inv = unit.invert().unwrap();
        prop_assert!(unit.mul(&inv).distance(&ComplexJet::one(2, 5)) < 1e-10);
    }

    #[test]
    fn antisymmetric_parts_divide_exactly(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeff = |r: &mut ChaCha8Rng| {
            use rand::Rng;
            BigRational::new(r.gen_range(-7i64..=7).into(), r.gen_range(1i64..=5).into())
        };
        let g = Poly::random(3, 4, 0.4, &mut rng, &mut coeff);
        let num = g.swap(i, j).sub(&g);
        let q = num.div_difference(i, j, 0.0).unwrap();
        prop_assert_eq!(q.mul(&Poly::var(3, i).sub(&Poly::var(3, j))), num);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn module_action_is_associative(seed in 0u64..10_000, i in 0usize..2, j in 0usize..2) {
        let c = CurveParams::<f64>::default_curve();
        let g = WeylGroup::from_preset(Preset::A2).unwrap();
        let fp = FParams::generic();
        let h1 = demazure_lusztig(i, &fp, &g);
        let h2 = demazure_lusztig(j, &fp, &g).mult(&HeckeElement::delta(g.simple(1 - j)), &g);
        let sigma = random_test_section::<f64>(&g.datum, seed, 2);
        let prod = h1.mult(&h2, &g);
        let mut s = Sampler::new(&g, &c, &[fp], seed);
        for _ in 0..5 {
            let p = s.generic_point().unwrap();
            let lhs = prod.act(&sigma, &p, &g, &c).unwrap();
            let rhs = h1.act_at(&|q: &[C]| h2.act(&sigma, q, &g, &c), &p, &g, &c).unwrap();
            prop_assert!(c.tolerance().accepts((lhs.value - rhs.value).norm(), lhs.scale.max(rhs.scale)));
        }
    }

    #[test]
    fn off_divisor_completed_t_is_an_involution(seed in any::<u64>()) {
        let q = build_gamma(2, 3).unwrap();
        let c = CurveParams::<f64>::default_curve();
        let rep = TransportRep::new(&q, 2, &FParams::generic(), &c, 6, PhiVariant::Consistent).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexJet::random(2, 6, &mut rng);
        for a in 0..q.len() {
            for b in 0..q.len() {
                if a == b || q.arrows(a, b) > 0 || q.arrows(b, a) > 0 {
                    continue;
                }
                let (nu, once) = completed_t(0, &[a, b], &g, &rep).unwrap();
                let (back, twice) = completed_t(0, &nu, &once, &rep).unwrap();
                prop_assert_eq!(back, vec![a, b]);
                prop_assert!(twice.distance(&g) < 1e-12);
            }
        }
    }

    #[test]
    fn parameter_count_ignores_order_and_base(
        offsets in proptest::collection::vec((0usize..2, -2i64..3), 1..5),
        perm_seed in any::<u64>(),
        shift in -3i64..4,
    ) {
        let t = CurvePoint::new(0.1234567, 0.7654321);
        let bases = [CurvePoint::new(0.31, 0.17), CurvePoint::new(0.62, 0.44)];
        let place = |k: usize, m: i64| CurvePoint::new(bases[k].a + m as f64 * t.a, bases[k].b + m as f64 * t.b);
        let pts: Vec<_> = offsets.iter().map(|&(k, m)| place(k, m)).collect();
        let base = classify(&EigenData::new(pts.clone(), t, 1e-9).unwrap(), 1e-9).unwrap();
        let mut moved: Vec<_> = offsets.iter().map(|&(k, m)| place(k, m + shift)).collect();
        use rand::seq::SliceRandom;
        moved.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let other = classify(&EigenData::new(moved, t, 1e-9).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(base.count, other.count);
        if let Some([f2, f3]) = base.oracle_counts {
            prop_assert_eq!(f2, base.count);
            prop_assert_eq!(f3, base.count);
        }
    }
}
