use flatcover::catalog;
use flatcover::cylinders::{decompose, multi_twist, Direction, TwistSign, DEFAULT_CAP};
use flatcover::exactnum::{Mat2K, QuadNumber, Vec2K};
use flatcover::homology::HomologyModel;
use num_traits::Zero;

#[test]
fn decompositions_are_consistent() {
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap();
        let h = HomologyModel::build(&s).unwrap();
        let dirs = flatcover::cylinders::sweep_candidates(&s, 20);
        for d in dirs {
            let dec = match decompose(&s, &h, &d, DEFAULT_CAP) {
                Ok(x) => x,
                Err(e) => panic!("{name} {}: {e}", d.vector()),
            };
            let v = d.vector().in_field(s.field_d()).unwrap();
            let norm2 = v.dot(&v);
            let area = dec
                .cylinders
                .iter()
                .fold(QuadNumber::zero(), |a, c| a + &c.circumference * &c.height);
            assert_eq!(&area * &norm2, *s.area(), "{name} {}", v);
            for c in &dec.cylinders {
                assert_eq!(h.holonomy(&c.core_rel).unwrap(), v.scale(&c.circumference));
                for c2 in &dec.cylinders {
                    assert!(h.pairing(&c.core_rel, &c2.core_abs).is_zero());
                }
            }
            println!("{name} {}: {} cylinders", v, dec.cylinders.len());
        }
    }
}

#[test]
fn wollmilchsau_horizontal_twist() {
    let s = catalog::get("eierlegende_wollmilchsau").unwrap();
    let h = HomologyModel::build(&s).unwrap();
    let dec = decompose(&s, &h, &Direction::new(Vec2K::ints(1, 0)).unwrap(), DEFAULT_CAP).unwrap();
    assert_eq!(dec.cylinders.len(), 2);
    let t = multi_twist(&h, &dec, TwistSign::Right).unwrap();
    assert_eq!(t.derivative, Mat2K::ints(1, 4, 0, 1));
    println!("t = {:?}", t.twist_numbers);
}

#[test]
fn octagon_twists() {
    let s = catalog::octagon_double_cover();
    let h = HomologyModel::build(&s).unwrap();
    for (v, want) in catalog::octagon_directions().iter().zip(catalog::octagon_published_derivatives()) {
        let dec = decompose(&s, &h, &Direction::new(v.clone()).unwrap(), DEFAULT_CAP).unwrap();
        let t = multi_twist(&h, &dec, TwistSign::Right).unwrap();
        println!("{v}: {} cyl, D = {}, published {}", dec.cylinders.len(), t.derivative, want);
    }
}

/// Q-rank of the holonomies of a set of relative classes.
fn hol_rank(h: &HomologyModel, xs: &[Vec<num_bigint::BigInt>]) -> usize {
    use flatcover::exactnum::rational_embed;
    let rows: Vec<Vec<flatcover::exactnum::Rational>> = xs
        .iter()
        .map(|x| {
            let v = h.holonomy(x).unwrap();
            let [a, b] = rational_embed(&v.x);
            let [c, d] = rational_embed(&v.y);
            vec![a, b, c, d]
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    flatcover::lattice::rank(&flatcover::lattice::clear_denominators(&rows, 4))
}

#[test]
fn twist_holonomy_ranks_match_field_degree() {
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap();
        let h = HomologyModel::build(&s).unwrap();
        for d in flatcover::cylinders::sweep_candidates(&s, 8) {
            let Ok(dec) = decompose(&s, &h, &d, DEFAULT_CAP) else { continue };
            let phi = multi_twist(&h, &dec, TwistSign::Right).unwrap().phi();
            let image: Vec<_> = phi.transpose().to_rows();
            let ker = flatcover::lattice::kernel(&phi).basis_vectors();
            let k = h.holonomy_degree;
            assert_eq!(hol_rank(&h, &image), k, "{name} {}: hol∘φ", d.vector());
            assert_eq!(hol_rank(&h, &ker), k, "{name} {}: hol(ker φ)", d.vector());
        }
    }
}
