use flatcover::catalog;
use flatcover::homology::HomologyModel;

#[test]
fn catalog_ranks() {
    for name in catalog::NAMES {
        let e = catalog::entry(name).unwrap();
        let inv = e.surface.invariants();
        let h = HomologyModel::build(&e.surface).unwrap();
        println!("{name}: {:?} {:?}", inv, h.ranks());
        assert_eq!(inv.genus, e.expected.genus, "{name}");
        assert_eq!(inv.cone_angle_list, e.expected.cone_angle_list, "{name}");
        let r = h.ranks();
        assert_eq!(r.rk_rel, e.expected.rk_rel, "{name}");
        assert_eq!(r.rk_w, e.expected.rk_w, "{name}");
        assert_eq!(r.rk_w0, e.expected.rk_w0, "{name}");
        assert_eq!(r.k_degree, e.expected.k_degree, "{name}");
        assert_eq!(h.pairing_det_abs(), 1.into(), "{name}");
        assert_eq!(h.w0_alternative(), h.w0, "{name}");
        assert_eq!(h.j_matrix, h.boundary_matrix, "{name}");
    }
}
