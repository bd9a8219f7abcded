mod common;

use flatcover::automorph::{restrict, AffineAuto};
use flatcover::cylinders::{core_span, decompose, multi_twist, Direction, TwistSign, DEFAULT_CAP};
use flatcover::exactnum::{QuadNumber, Vec2K};
use flatcover::lattice::{kernel, rank, IntMatrix};
use flatcover::zcover::{canonicalize, check_twist_lift, Lift};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn direction() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, 1i64..=3)
        .prop_filter("primitive", |(a, b)| a.gcd(b).is_one())
        .prop_flat_map(|(a, b)| prop::sample::select(vec![(a, b), (b, a), (1, 0)]))
}

fn twist(seed: u64, dir: (i64, i64), sign: TwistSign) -> (flatcover::surface::TranslationSurface, flatcover::homology::HomologyModel, flatcover::cylinders::MultiTwist) {
    let (s, h) = common::generated(seed);
    let d = Direction::new(Vec2K::ints(dir.0, dir.1)).unwrap();
    let dec = decompose(&s, &h, &d, DEFAULT_CAP).unwrap();
    let t = multi_twist(&h, &dec, sign).unwrap();
    (s, h, t)
}

fn sign() -> impl Strategy<Value = TwistSign> {
    prop::sample::select(vec![TwistSign::Left, TwistSign::Right])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cylinders_fill_the_surface(seed in any::<u64>(), dir in direction()) {
        let (s, h) = common::generated(seed);
        let d = Direction::new(Vec2K::ints(dir.0, dir.1)).unwrap();
        let dec = decompose(&s, &h, &d, DEFAULT_CAP).unwrap();
        let v = d.vector().in_field(s.field_d()).unwrap();
        let area = dec.cylinders.iter().fold(QuadNumber::zero(), |a, c| a + &c.circumference * &c.height);
        prop_assert_eq!(&area * &v.dot(&v), s.area().clone());
        for a in &dec.cylinders {
            for b in &dec.cylinders {
                prop_assert!(h.pairing(&a.core_rel, &b.core_abs).is_zero());
            }
        }
    }

    #[test]
    fn phi_is_nilpotent_with_core_rank(seed in any::<u64>(), dir in direction(), sg in sign()) {
        let (s, h, t) = twist(seed, dir, sg);
        let phi = t.phi();
        prop_assert!(phi.mul(&phi).is_zero());
        let r = rank(&phi);
        prop_assert_eq!(r, core_span(&h, &t.decomposition.cylinders).rank());
        prop_assert!(r <= s.genus());
    }

    #[test]
    fn self_pairing_has_one_sign(seed in any::<u64>(), dir in direction(), sg in sign(), xs in prop::collection::vec(prop::collection::vec(-5i64..=5, 24), 12)) {
        let (_, h, t) = twist(seed, dir, sg);
        let mut seen = (false, false);
        for x in xs {
            let x: Vec<BigInt> = x.into_iter().take(h.rank).map(BigInt::from).collect();
            let mut y = vec![BigInt::zero(); h.rank];
            for (c, tj) in t.decomposition.cylinders.iter().zip(&t.twist_numbers) {
                let k = tj * h.pairing(&x, &c.core_abs);
                for (o, g) in y.iter_mut().zip(&c.core_abs) {
                    *o += &k * g;
                }
            }
            let v = h.pairing(&x, &y);
            seen.0 |= v.is_positive();
            seen.1 |= v.is_negative();
        }
        prop_assert!(!(seen.0 && seen.1));
    }

    #[test]
    fn holonomy_intertwines_derivative(seed in any::<u64>(), dir in direction(), sg in sign()) {
        let (_, h, t) = twist(seed, dir, sg);
        let phi = t.phi();
        let d = &t.derivative;
        for k in 0..h.rank {
            let mut e = vec![BigInt::zero(); h.rank];
            e[k] = BigInt::one();
            let hol = h.holonomy(&e).unwrap();
            let want = d.apply(&hol) - hol;
            prop_assert_eq!(h.holonomy(&phi.mul_vec(&e)).unwrap(), want);
        }
    }

    #[test]
    fn fixed_lattice_is_power_stable(seed in any::<u64>(), dir in direction(), sg in sign()) {
        let (_, h, t) = twist(seed, dir, sg);
        let id = IntMatrix::identity(h.rank);
        let k1 = kernel(&t.action_matrix.sub(&id));
        for k in [2u32, 3] {
            let kk = kernel(&t.action_matrix.pow(k).sub(&id));
            prop_assert!(kk.contains_module(&k1) && k1.contains_module(&kk));
        }
    }

    #[test]
    fn twists_respect_structure(seed in any::<u64>(), d1 in direction(), d2 in direction()) {
        let (s, h, t1) = twist(seed, d1, TwistSign::Right);
        let (_, _, t2) = twist(seed, d2, TwistSign::Left);
        let f = AffineAuto::from_multi_twist(&t1, s.num_marked());
        let g = AffineAuto::from_multi_twist(&t2, s.num_marked());
        prop_assert!(f.check_j(&h) && f.check_pairing(&h) && f.check_holonomy(&h));
        let fg = f.then(&g).unwrap();
        prop_assert!(fg.check_j(&h) && fg.check_pairing(&h));
        let (rf, rg, rfg) = (restrict(&h, &f).unwrap(), restrict(&h, &g).unwrap(), restrict(&h, &fg).unwrap());
        prop_assert_eq!(rfg.psi, rg.psi.mul(&rf.psi));
        prop_assert_eq!(rfg.psi0, rg.psi0.mul(&rf.psi0));
    }

    #[test]
    fn twist_lifts_exactly_when_phi_kills(seed in any::<u64>(), dir in direction(), coeffs in prop::collection::vec(-3i64..=3, 12)) {
        let (_, h, t) = twist(seed, dir, TwistSign::Right);
        let basis = h.w.basis_vectors();
        let k: Vec<BigInt> = (0..basis.len()).map(|i| BigInt::from(coeffs[i % coeffs.len()])).collect();
        let w = h.w.combination(&k);
        prop_assume!(w.iter().any(|x| !x.is_zero()));
        let c = canonicalize(&h, &w).unwrap();
        prop_assert!(c.in_w);
        let v = check_twist_lift(&t, "T", &c);
        prop_assert_eq!(v.verdict == Lift::LiftsPlus, v.phi_w_zero == Some(true));
    }
}
