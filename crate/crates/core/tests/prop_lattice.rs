use flatcover::lattice::{intersect, kernel, rank, smith, IntMatrix, Membership, Submodule};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |rows| {
            IntMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect(), c)
        })
    })
}

fn submodule(ambient: usize) -> impl Strategy<Value = Submodule> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, ambient), 1..=ambient).prop_map(move |rows| {
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        Submodule::from_vectors(ambient, &rows)
    })
}

fn pair() -> impl Strategy<Value = (Submodule, Submodule)> {
    (2usize..=5).prop_flat_map(|n| (submodule(n), submodule(n)))
}

proptest! {
    #[test]
    fn smith_transforms_are_unimodular(a in matrix()) {
        let s = smith(&a);
        prop_assert_eq!(s.u.det().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.det().abs(), BigInt::from(1));
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.s.clone());
        prop_assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn rank_of_transpose(a in matrix()) {
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
    }

    #[test]
    fn kernels_are_saturated(a in matrix()) {
        let k = kernel(&a);
        prop_assert_eq!(k.rank() + rank(&a), a.cols());
        for v in k.basis_vectors() {
            prop_assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
            for p in [2, 3, 5, 7, 11, 13] {
                prop_assert!(v.iter().any(|x| !x.is_multiple_of(&BigInt::from(p))));
            }
        }
    }

    #[test]
    fn intersections_lie_in_both((a, b) in pair(), coeffs in prop::collection::vec(-4i64..=4, 5)) {
        let c = intersect(&a, &b).unwrap();
        prop_assert!(a.contains_module(&c));
        prop_assert!(b.contains_module(&c));
        let k: Vec<BigInt> = coeffs.into_iter().take(a.rank()).map(BigInt::from).collect();
        let mut k = k;
        k.resize(a.rank(), BigInt::zero());
        let x = a.combination(&k);
        if matches!(b.membership(&x), Membership::Yes(_)) {
            prop_assert!(!matches!(c.membership(&x), Membership::No));
        }
    }
}
