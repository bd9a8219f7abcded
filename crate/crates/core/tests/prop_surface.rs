mod common;

use flatcover::exactnum::{Mat2K, QuadNumber, Vec2K};
use flatcover::homology::HomologyModel;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn unimodular() -> impl Strategy<Value = Mat2K> {
    prop::sample::select(vec![(1, 1, 0, 1), (1, 0, 1, 1), (0, -1, 1, 0), (2, 1, 1, 1), (1, -2, 0, 1), (-1, 0, 0, 1), (3, 2, 1, 1)])
        .prop_map(|(a, b, c, d)| Mat2K::ints(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_bonnet(seed in any::<u64>()) {
        let (s, _) = common::generated(seed);
        let excess: usize = s.classes().iter().map(|c| c.cone_multiple - 1).sum();
        prop_assert_eq!(excess, 2 * s.genus() - 2);
    }

    #[test]
    fn area_is_sum_of_polygons(seed in any::<u64>()) {
        let (s, _) = common::generated(seed);
        let total = s.polygons().iter().fold(QuadNumber::zero(), |a, p| a + p.area());
        prop_assert_eq!(&total, s.area());
        prop_assert!(total.is_positive());
    }

    #[test]
    fn linear_images_keep_topology(seed in any::<u64>(), a in unimodular()) {
        let (s, _) = common::generated(seed);
        let t = s.apply_matrix(&a).unwrap();
        prop_assert_eq!(t.genus(), s.genus());
        prop_assert_eq!(t.num_marked(), s.num_marked());
        let mut c1: Vec<usize> = s.classes().iter().map(|c| c.cone_multiple).collect();
        let mut c2: Vec<usize> = t.classes().iter().map(|c| c.cone_multiple).collect();
        c1.sort_unstable();
        c2.sort_unstable();
        prop_assert_eq!(c1, c2);
        prop_assert_eq!(t.area().abs(), s.area().abs());
    }

    #[test]
    fn homology_rank_and_pairing(seed in any::<u64>()) {
        let (s, h) = common::generated(seed);
        prop_assert_eq!(h.rank, 2 * s.genus() + s.num_marked() - 1);
        prop_assert_eq!(h.pairing_det_abs(), BigInt::from(1));
        let alt = h.w0_alternative();
        prop_assert!(alt.contains_module(&h.w0) && h.w0.contains_module(&alt));
    }

    #[test]
    fn polygon_boundaries_are_null(seed in any::<u64>()) {
        let (s, h) = common::generated(seed);
        for p in 0..s.num_polygons() {
            let mut chain = vec![BigInt::zero(); s.num_edges()];
            for e in 0..s.polygon(p).len() {
                let (k, is_rep) = s.pair_of(flatcover::surface::EdgeRef::new(p, e));
                chain[k] += if is_rep { 1 } else { -1 };
            }
            let x = h.rel_coords_of_chain(&chain);
            prop_assert!(x.iter().all(|v| v.is_zero()), "polygon {}", p);
            prop_assert_eq!(h.holonomy(&x).unwrap(), Vec2K::zero());
        }
    }

    #[test]
    fn puncture_pairing_sums_to_zero(seed in any::<u64>(), coeffs in prop::collection::vec(-5i64..=5, 16)) {
        let (_, h) = common::generated(seed);
        let x: Vec<BigInt> = (0..h.rank).map(|i| BigInt::from(coeffs[i % coeffs.len()])).collect();
        let j = h.puncture_pairing_j(&x).unwrap();
        prop_assert!(j.iter().sum::<BigInt>().is_zero());
    }
}

#[test]
fn w0_basis_is_stable_under_rebuild() {
    let (s, h) = common::generated(7);
    let again = HomologyModel::build(&s).unwrap();
    assert_eq!(h.w0.basis_vectors(), again.w0.basis_vectors());
}
