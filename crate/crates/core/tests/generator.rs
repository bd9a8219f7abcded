mod common;

use flatcover::catalog::{build_cylinder_iet, eierlegende_wollmilchsau_cylinders, CylinderIetSpec, Iet};
use flatcover::cylinders::{decompose, Direction, DEFAULT_CAP};
use flatcover::exactnum::{Rational, Vec2K};
use flatcover::homology::HomologyModel;
use num_bigint::BigInt;
use proptest::prelude::*;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[test]
fn wollmilchsau_from_cylinders() {
    let s = build_cylinder_iet(&eierlegende_wollmilchsau_cylinders()).unwrap();
    assert_eq!(s.genus(), 3);
    assert_eq!(s.num_marked(), 4);
    assert!(s.classes().iter().all(|c| c.cone_multiple == 2));
    let r = HomologyModel::build(&s).unwrap().ranks();
    assert_eq!((r.rk_rel, r.rk_w, r.rk_w0, r.k_degree), (9, 7, 4, 1));
}

#[test]
fn single_identity_cylinder_is_the_square_torus() {
    let spec = CylinderIetSpec { circumference: int(1), widths: vec![int(1)], iets: vec![Iet::identity(int(1))], marked: vec![] };
    let s = build_cylinder_iet(&spec).unwrap();
    assert_eq!(s.genus(), 1);
    assert_eq!(s.num_marked(), 1);
    assert_eq!(s.area(), &flatcover::exactnum::QuadNumber::one());
    let r = HomologyModel::build(&s).unwrap().ranks();
    assert_eq!((r.rk_rel, r.rk_w, r.rk_w0), (2, 0, 0));
}

#[test]
fn three_square_genus_two() {
    let spec = CylinderIetSpec { circumference: int(3), widths: vec![int(1)], iets: vec![Iet::unit_intervals(vec![2, 1, 0])], marked: vec![] };
    let s = build_cylinder_iet(&spec).unwrap();
    assert_eq!(s.genus(), 2);
    let r = HomologyModel::build(&s).unwrap().ranks();
    assert_eq!(r.rk_w0, 2);
    assert_eq!(r.k_degree, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn horizontal_cores_coincide(seed in any::<u64>()) {
        let (s, h) = common::generated(seed);
        let dec = decompose(&s, &h, &Direction::new(Vec2K::ints(1, 0)).unwrap(), DEFAULT_CAP).unwrap();
        let first = &dec.cylinders[0].core_rel;
        for c in &dec.cylinders {
            prop_assert_eq!(&c.core_rel, first);
        }
    }

    #[test]
    fn rank_formulas(seed in any::<u64>()) {
        let (s, h) = common::generated(seed);
        let r = h.ranks();
        prop_assert_eq!(r.k_degree, 1);
        prop_assert_eq!(r.rk_w0, 2 * (s.genus() - 1));
        prop_assert_eq!(r.rk_w, 2 * (s.genus() - 1) + s.num_marked() - 1);
        if s.genus() == 2 {
            prop_assert_eq!(r.rk_w0, 2);
        }
    }
}
