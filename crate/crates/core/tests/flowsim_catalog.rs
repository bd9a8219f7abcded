use flatcover::catalog;
use flatcover::exactnum::{QuadNumber, Vec2K};
use flatcover::flowsim::{
    crossing_counts, first_return_iet, random_dual_loop, recurrence_verdict, simulate_exact, simulate_float,
    CocycleSpec, FlowError, SimOptions, Verdict,
};
use flatcover::homology::HomologyModel;
use flatcover::lattice::{vec_add, vec_sub};
use flatcover::zcover::canonicalize;
use num_bigint::BigInt;
use rand::SeedableRng;

fn opts(time: f64) -> SimOptions {
    SimOptions { time, record_trace: false, start: None }
}

fn sqrt2_dir() -> Vec2K {
    Vec2K::new(QuadNumber::from_int(1), QuadNumber::sqrt(2).unwrap())
}

#[test]
fn cocycle_on_closed_loops_is_the_pairing() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for s in [catalog::domino_torus(), catalog::eierlegende_wollmilchsau(), catalog::octagon_double_cover()] {
        let h = HomologyModel::build(&s).unwrap();
        for k in 0..h.w.rank() {
            let c = canonicalize(&h, &h.w.basis().row(k)).unwrap();
            let cocycle = CocycleSpec::new(&h, &c);
            for _ in 0..20 {
                let walk = random_dual_loop(&s, 0, 12, &mut rng);
                let y = h.abs_coords_of_crossings(&crossing_counts(&s, &walk)).unwrap();
                assert_eq!(cocycle.sum(&s, &walk), h.pairing(&c.w, &y));
            }
            let j = h.puncture_pairing_j(&c.w).unwrap();
            assert_eq!(cocycle.puncture_increments(&s), j);
        }
    }
}

#[test]
fn domino_drifts() {
    let s = catalog::domino_torus();
    let h = HomologyModel::build(&s).unwrap();
    let (e1, e2) = (h.edge_class(0), h.edge_class(1));
    let rec = canonicalize(&h, &vec_sub(&e1, &e2)).unwrap();
    let tr = canonicalize(&h, &vec_add(&e1, &e2)).unwrap();
    let d = (1.0, 2f64.sqrt());
    let r = simulate_float(&s, &h, &tr, d, &opts(1e5)).unwrap();
    let expect = -1.0 / 3f64.sqrt() * if tr.w[0] == BigInt::from(1) { 1.0 } else { -1.0 };
    assert!((r.predicted_drift - expect).abs() < 1e-12, "{}", r.predicted_drift);
    assert!(((r.drift_slope - r.predicted_drift) / r.predicted_drift).abs() < 0.02, "{r:?}");
    let r = simulate_float(&s, &h, &rec, d, &opts(1e5)).unwrap();
    assert_eq!(r.predicted_drift, 0.0);
    assert!(r.drift_slope.abs() < 0.01 && r.returns_to_zero >= 100, "{r:?}");
}

#[test]
fn exact_and_float_agree() {
    let s = catalog::domino_torus();
    let h = HomologyModel::build(&s).unwrap();
    let c = canonicalize(&h, &vec_add(&h.edge_class(0), &h.edge_class(1))).unwrap();
    let mut o = opts(200.0);
    o.record_trace = true;
    let ex = simulate_exact(&s, &h, &c, &sqrt2_dir(), &o).unwrap();
    let fl = simulate_float(&s, &h, &c, (1.0, 2f64.sqrt()), &o).unwrap();
    assert_eq!(ex.crossings, fl.crossings);
    assert_eq!(ex.final_sheet, fl.final_sheet);
    for (a, b) in ex.trace.iter().zip(&fl.trace) {
        assert_eq!((a.polygon, a.n), (b.polygon, b.n));
        assert!((a.t - b.t).abs() < 1e-9);
    }
    assert!(ex.predicted_drift_exact.is_some());
}

#[test]
fn vertex_hits_are_reported() {
    let s = catalog::square_torus();
    let h = HomologyModel::build(&s).unwrap();
    let c = canonicalize(&h, &h.edge_class(0)).unwrap();
    // from the centre along the diagonal
    let err = simulate_exact(&s, &h, &c, &Vec2K::ints(1, 1), &opts(10.0)).unwrap_err();
    assert!(matches!(err, FlowError::HitSingularity { .. }));
    let err = simulate_float(&s, &h, &c, (1.0, 1.0), &opts(10.0)).unwrap_err();
    assert!(matches!(err, FlowError::HitSingularity { .. }));
}

#[test]
fn return_map_cocycle_integral() {
    for s in [catalog::square_torus(), catalog::domino_torus(), catalog::eierlegende_wollmilchsau(), catalog::octagon_double_cover()] {
        let h = HomologyModel::build(&s).unwrap();
        let dirs = [sqrt2_dir(), Vec2K::new(QuadNumber::from_int(-3), QuadNumber::sqrt(2).unwrap() + QuadNumber::from_int(1))];
        for dir in &dirs {
            for k in 0..h.w.rank().min(3) {
                let c = canonicalize(&h, &h.w.basis().row(k)).unwrap();
                let iet = first_return_iet(&s, &h, &c, dir).unwrap();
                assert_eq!(iet.cocycle_integral(), iet.hol_theta_prime);
                let m = iet.merged();
                assert_eq!(m.cocycle_integral(), iet.hol_theta_prime);
                assert_eq!(m.total_length(), iet.total_length());
                assert!(m.intervals.len() <= iet.intervals.len());
                let mut p = m.perm.clone();
                p.sort();
                assert_eq!(p, (0..m.intervals.len()).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn square_torus_rotation() {
    let s = catalog::square_torus();
    let h = HomologyModel::build(&s).unwrap();
    let c = canonicalize(&h, &h.edge_class(0)).unwrap();
    let iet = first_return_iet(&s, &h, &c, &sqrt2_dir()).unwrap();
    let m = iet.merged();
    assert_eq!(iet.intervals.len(), 3);
    assert_eq!(m.intervals.len(), 2);
    assert_eq!(m.perm, vec![1, 0]);
}

#[test]
fn verdicts() {
    let s = catalog::domino_torus();
    let h = HomologyModel::build(&s).unwrap();
    let rec = canonicalize(&h, &vec_sub(&h.edge_class(0), &h.edge_class(1))).unwrap();
    let tr = canonicalize(&h, &vec_add(&h.edge_class(0), &h.edge_class(1))).unwrap();
    let dirs = [(1.0, 3f64.sqrt()), (1.0, 5f64.sqrt()), (2.0, 7f64.sqrt())];
    let run = |c| -> Vec<_> {
        dirs.iter().map(|&d| (simulate_float(&s, &h, c, d, &opts(2e4)).unwrap(), false)).collect()
    };
    assert_eq!(recurrence_verdict(&run(&rec)).verdict, Verdict::ConsistentWithRecurrent);
    assert_eq!(recurrence_verdict(&run(&tr)).verdict, Verdict::Transient);
    let mut few = run(&rec);
    few.truncate(2);
    assert_eq!(recurrence_verdict(&few).verdict, Verdict::Inconclusive);
}
