use flatcover::automorph::{
    build_auto, fixed_subspace, h_f_map, multi_twist_geometric_action, restrict, AffineAuto, AutoError,
    PolygonImage,
};
use flatcover::catalog;
use flatcover::cylinders::{decompose, multi_twist, sweep_candidates, MultiTwist, TwistSign, DEFAULT_CAP};
use flatcover::exactnum::{Mat2K, Vec2K};
use flatcover::homology::HomologyModel;
use flatcover::lattice::IntMatrix;
use num_bigint::BigInt;
use num_traits::Signed;

fn twists(name: &str, max_dirs: usize) -> (flatcover::surface::TranslationSurface, HomologyModel, Vec<MultiTwist>) {
    let s = catalog::get(name).unwrap();
    let h = HomologyModel::build(&s).unwrap();
    let mut out = Vec::new();
    for d in sweep_candidates(&s, max_dirs) {
        let dec = decompose(&s, &h, &d, DEFAULT_CAP).unwrap();
        out.push(multi_twist(&h, &dec, TwistSign::Right).unwrap());
    }
    (s, h, out)
}

#[test]
fn catalog_symmetries_validate() {
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap();
        let h = HomologyModel::build(&s).unwrap();
        for a in catalog::automorphisms(name).unwrap() {
            let f = build_auto(&s, &h, &a.derivative, &a.polygon_map).unwrap_or_else(|e| panic!("{name} {}: {e}", a.label));
            assert!(f.check_holonomy(&h), "{name} {}", a.label);
            assert!(f.check_pairing(&h), "{name} {}", a.label);
            assert!(f.check_j(&h), "{name} {}", a.label);
            let r = restrict(&h, &f).unwrap();
            if f.det_sign() > 0 {
                assert_eq!(r.psi0.det().abs(), BigInt::from(1));
            }
            assert_eq!(r.psi.det().abs(), BigInt::from(1));
        }
    }
}

#[test]
fn rotation_of_square_torus_is_minus_identity() {
    let s = catalog::square_torus();
    let h = HomologyModel::build(&s).unwrap();
    let a = &catalog::automorphisms("square_torus").unwrap()[0];
    let f = build_auto(&s, &h, &a.derivative, &a.polygon_map).unwrap();
    assert_eq!(f.action_rel, IntMatrix::identity(2).scale(&BigInt::from(-1)));
    let id = build_auto(&s, &h, &Mat2K::identity(), &[PolygonImage {
        source_polygon: 0,
        target_polygon: 0,
        offset: Vec2K::zero(),
        vertex_shift: 0,
    }])
    .unwrap();
    assert!(id.action_rel.is_identity());
    assert_eq!(id.puncture_perm, vec![0]);
}

#[test]
fn bad_maps_are_rejected() {
    let s = catalog::eierlegende_wollmilchsau();
    let h = HomologyModel::build(&s).unwrap();
    let each_to_self: Vec<PolygonImage> = (0..8)
        .map(|g| PolygonImage { source_polygon: g, target_polygon: g, offset: Vec2K::ints(1, 1), vertex_shift: 2 })
        .collect();
    assert!(matches!(
        build_auto(&s, &h, &Mat2K::ints(-1, 0, 0, -1), &each_to_self),
        Err(AutoError::GluingNotPreserved(..))
    ));
    assert!(matches!(
        build_auto(&s, &h, &Mat2K::ints(1, 1, 0, 1), &each_to_self),
        Err(AutoError::GeometryMismatch(_))
    ));
}

#[test]
fn multi_twist_action_matches_traced_edge_images() {
    for name in catalog::NAMES {
        let (s, h, ts) = twists(name, 16);
        for t in &ts {
            let geo = multi_twist_geometric_action(&s, &h, t, DEFAULT_CAP).unwrap();
            assert_eq!(geo, t.action_matrix, "{name} {}", t.decomposition.direction.vector());
            let f = AffineAuto::from_multi_twist(t, s.num_marked());
            assert!(f.check_holonomy(&h) && f.check_pairing(&h) && f.check_j(&h));
        }
    }
}

#[test]
fn restriction_is_functorial_and_h_f_additive() {
    for name in catalog::NAMES {
        let (s, h, ts) = twists(name, 10);
        let mut autos: Vec<AffineAuto> = ts.iter().map(|t| AffineAuto::from_multi_twist(t, s.num_marked())).collect();
        for a in catalog::automorphisms(name).unwrap() {
            autos.push(build_auto(&s, &h, &a.derivative, &a.polygon_map).unwrap());
        }
        for f in &autos {
            for g in &autos {
                let gf = f.then(g).unwrap();
                let (rf, rg, rgf) = (restrict(&h, f).unwrap(), restrict(&h, g).unwrap(), restrict(&h, &gf).unwrap());
                assert_eq!(rgf.psi, rg.psi.mul(&rf.psi));
                assert_eq!(rgf.psi0, rg.psi0.mul(&rf.psi0));
                if let (Ok(hf), Ok(hg)) = (h_f_map(&h, f), h_f_map(&h, g)) {
                    let hgf = h_f_map(&h, &gf).unwrap();
                    assert_eq!(hgf, hf.add(&hg), "{name}");
                }
            }
        }
    }
}

/// Transvections x ↦ x + λ(x)·a with a ∈ W0 and λ a boundary coordinate lie
/// in ker ψ0 ∩ ker ρ and have nonzero h_f.
#[test]
fn h_f_additive_on_transvections() {
    let s = catalog::eierlegende_wollmilchsau();
    let h = HomologyModel::build(&s).unwrap();
    let w0 = h.w0.basis_vectors();
    let mut autos = Vec::new();
    for (i, a) in w0.iter().enumerate() {
        let lambda = h.boundary_matrix.row(i % s.num_marked());
        let mut m = IntMatrix::identity(h.rank);
        for r in 0..h.rank {
            for c in 0..h.rank {
                let v = m.get(r, c) + &a[r] * &lambda[c];
                m.set(r, c, v);
            }
        }
        let mut f = AffineAuto::identity(&s, &h);
        f.action_rel = m;
        f.edge_map = None;
        autos.push(f);
    }
    let mut nonzero = 0;
    for f in &autos {
        let hf = h_f_map(&h, f).unwrap();
        if !hf.is_zero() {
            nonzero += 1;
        }
        for g in &autos {
            let gf = f.then(g).unwrap();
            assert_eq!(h_f_map(&h, &gf).unwrap(), hf.add(&h_f_map(&h, g).unwrap()));
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn octagon_fixed_subspaces() {
    let s = catalog::octagon_double_cover();
    let h = HomologyModel::build(&s).unwrap();
    let fs: Vec<AffineAuto> = catalog::octagon_directions()
        .iter()
        .map(|v| {
            let dec = decompose(&s, &h, &flatcover::cylinders::Direction::new(v.clone()).unwrap(), DEFAULT_CAP).unwrap();
            AffineAuto::from_multi_twist(&multi_twist(&h, &dec, TwistSign::Right).unwrap(), s.num_marked())
        })
        .collect();
    let fix: Vec<_> = fs.iter().map(|f| fixed_subspace(&h, f, 1)).collect();
    assert_eq!(fix[2], h.w);
    let gh = flatcover::lattice::intersect(&fix[0], &fix[1]).unwrap();
    assert!(gh.rank() >= 1);
    assert_eq!(flatcover::lattice::intersect(&gh, &fix[2]).unwrap().rank(), 1);
}
