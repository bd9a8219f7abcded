use flatcover::automorph::build_auto;
use flatcover::catalog;
use flatcover::cylinders::{decompose, multi_twist, sweep_candidates, Direction, TwistSign, DEFAULT_CAP};
use flatcover::exactnum::matrix_mod::is_identity_mod;
use flatcover::homology::HomologyModel;
use flatcover::lattice::{bigvec, vec_add, vec_sub};
use flatcover::zcover::{
    canonical_vector, canonicalize, certify, check_twist_lift, multitwist_rank_identity, twists_in, CertificateKind,
    Lift, ZCoverError,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};

#[test]
fn canonical_forms() {
    assert_eq!(canonical_vector(&bigvec(&[2, 4, -6])).unwrap(), bigvec(&[1, 2, -3]));
    assert_eq!(canonical_vector(&bigvec(&[0, -3, 6])).unwrap(), bigvec(&[0, 1, -2]));
    assert_eq!(canonical_vector(&bigvec(&[0, 0])), Err(ZCoverError::ZeroClass));
}

#[test]
fn domino_lifts_by_hand() {
    let s = catalog::domino_torus();
    let h = HomologyModel::build(&s).unwrap();
    let dec = decompose(&s, &h, &Direction::new(flatcover::exactnum::Vec2K::ints(1, 0)).unwrap(), DEFAULT_CAP).unwrap();
    let t = multi_twist(&h, &dec, TwistSign::Right).unwrap();
    let (e1, e2) = (h.edge_class(0), h.edge_class(1));
    // φ(e1) and φ(e2) are the two horizontal boundary curves, which are
    // homologous: the lower square bounds their difference
    let diff = canonicalize(&h, &vec_sub(&e1, &e2)).unwrap();
    assert!(diff.recurrent);
    let v = check_twist_lift(&t, "h", &diff);
    assert_eq!(v.verdict, Lift::LiftsPlus);
    assert_eq!(v.phi_w_zero, Some(true));
    let sum = canonicalize(&h, &vec_add(&e1, &e2)).unwrap();
    assert!(!sum.recurrent);
    let v = check_twist_lift(&t, "h", &sum);
    assert_eq!(v.verdict, Lift::NoLift);
    assert_eq!(v.phi_w_zero, Some(false));
}

fn random_in_w(h: &HomologyModel, rng: &mut impl Rng) -> Vec<BigInt> {
    loop {
        let coeffs: Vec<BigInt> = (0..h.w.rank()).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        let w = h.w.combination(&coeffs);
        if let Ok(v) = canonical_vector(&w) {
            return v;
        }
    }
}

#[test]
fn wollmilchsau_certificates() {
    let s = catalog::eierlegende_wollmilchsau();
    let h = HomologyModel::build(&s).unwrap();
    let twists = twists_in(&s, &h, &sweep_candidates(&s, 12), DEFAULT_CAP);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let c = canonicalize(&h, &random_in_w(&h, &mut rng)).unwrap();
        let cert = certify(&s, &h, &c, &[], &twists);
        assert_eq!(cert.kind, CertificateKind::FirstKind_via_kernel);
        for t in &twists {
            if check_twist_lift(t, "", &c).verdict == Lift::LiftsPlus {
                assert!(is_identity_mod(&t.derivative, 4), "{}", t.derivative);
            }
        }
    }
}

#[test]
fn octagon_certificates() {
    let s = catalog::octagon_double_cover();
    let h = HomologyModel::build(&s).unwrap();
    let dirs: Vec<Direction> = catalog::octagon_directions().into_iter().map(|v| Direction::new(v).unwrap()).collect();
    let twists = twists_in(&s, &h, &dirs, DEFAULT_CAP);
    let autos: Vec<_> = catalog::automorphisms("octagon_double_cover")
        .unwrap()
        .into_iter()
        .map(|a| (a.label.clone(), build_auto(&s, &h, &a.derivative, &a.polygon_map).unwrap()))
        .collect();
    let mut infinite = false;
    for w in h.w.basis_vectors() {
        let c = canonicalize(&h, &w).unwrap();
        let cert = certify(&s, &h, &c, &autos, &twists);
        assert!(cert.has(CertificateKind::FirstKind_via_kernel));
        assert!(cert.has(CertificateKind::FirstKind_dimension2));
        infinite |= cert.has(CertificateKind::InfiniteIndex);
    }
    assert!(infinite);
}

#[test]
fn rank_identity_on_sweeps() {
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap();
        let h = HomologyModel::build(&s).unwrap();
        for t in twists_in(&s, &h, &sweep_candidates(&s, 12), DEFAULT_CAP) {
            let r = multitwist_rank_identity(&h, &t).unwrap();
            assert_eq!(r.acts_trivially, r.triviality_criterion, "{name}");
        }
    }
}

#[test]
fn non_recurrent_cover_is_elementary() {
    let s = catalog::domino_torus();
    let h = HomologyModel::build(&s).unwrap();
    let twists = twists_in(&s, &h, &sweep_candidates(&s, 12), DEFAULT_CAP);
    let c = canonicalize(&h, &vec_add(&h.edge_class(0), &h.edge_class(1))).unwrap();
    let cert = certify(&s, &h, &c, &[], &twists);
    assert_eq!(cert.kind, CertificateKind::NonRecurrentElementary);
    assert!(cert.eigen_checks.iter().all(|e| e.holds));
}
