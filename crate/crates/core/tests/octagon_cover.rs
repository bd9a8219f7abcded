//! Brute-force selection of the octagon double cover among all 15
//! nontrivial homomorphisms H1 → Z/2.

use flatcover::catalog;
use flatcover::cylinders::{core_span, decompose, multi_twist, Direction, TwistSign, DEFAULT_CAP};
use flatcover::homology::HomologyModel;
use flatcover::lattice::intersect;

fn matches(chi: [u8; 4]) -> bool {
    let s = catalog::octagon_double_cover_with(chi).unwrap();
    let inv = s.invariants();
    if inv.genus != 3 || inv.cone_angle_list != vec![3, 3] {
        return false;
    }
    let h = HomologyModel::build(&s).unwrap();
    if h.ranks().rk_w != 3 {
        return false;
    }
    let published = catalog::octagon_published_derivatives();
    let mut fixes = Vec::new();
    let mut spans = Vec::new();
    for (i, v) in catalog::octagon_directions().iter().enumerate() {
        let dec = decompose(&s, &h, &Direction::new(v.clone()).unwrap(), DEFAULT_CAP).unwrap();
        let t = multi_twist(&h, &dec, TwistSign::Right).unwrap();
        // the horizontal matrix is checked separately: its published entry is off
        if i > 0 && t.derivative != published[i] {
            return false;
        }
        spans.push(core_span(&h, &dec.cylinders).rank());
        fixes.push(h.w.kernel_of_map(&t.phi()));
    }
    let gh = intersect(&fixes[0], &fixes[1]).unwrap();
    let all = intersect(&gh, &fixes[2]).unwrap();
    fixes[2].rank() == 3 && gh.rank() >= 1 && all.rank() == 1 && spans[0] == 3 && spans[1] == 3
}

#[test]
fn octagon_cover_is_lexicographically_least_match() {
    let candidates = catalog::octagon_cover_candidates();
    assert_eq!(candidates.len(), 15);
    let survivors: Vec<[u8; 4]> = candidates.into_iter().filter(|c| matches(*c)).collect();
    // two survivors, exchanged by rotating the octagon by π/4
    assert_eq!(survivors, vec![[0, 1, 0, 1], [1, 0, 1, 0]]);
    assert_eq!(catalog::OCTAGON_CHI, survivors[0]);
}

#[test]
fn horizontal_twist_of_octagon_cover() {
    let s = catalog::octagon_double_cover();
    let h = HomologyModel::build(&s).unwrap();
    let dec = decompose(&s, &h, &Direction::new(catalog::octagon_directions()[0].clone()).unwrap(), DEFAULT_CAP).unwrap();
    let t = multi_twist(&h, &dec, TwistSign::Right).unwrap();
    let want = flatcover::exactnum::Mat2K::new(1.into(), "2+2*sqrt(2)".parse().unwrap(), 0.into(), 1.into());
    assert_eq!(t.derivative, want);
}
