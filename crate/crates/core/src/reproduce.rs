//! The acceptance suite: each criterion runs a set of exact checks and
//! reports pass/fail per check. Shared by the test target and the CLI.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorph::{build_auto, fixed_subspace, h_f_map, restrict, AffineAuto};
use crate::catalog::{self, CylinderIetSpec, Iet};
use crate::cylinders::{core_span, decompose, multi_twist, sweep_candidates, Direction, MultiTwist, TwistSign, DEFAULT_CAP};
use crate::exactnum::matrix_mod::is_identity_mod;
use crate::exactnum::{Mat2K, QuadNumber, Rational, Vec2K};
use crate::flowsim::{
    crossing_counts, first_return_iet, random_dual_loop, simulate_float, CocycleSpec, SimOptions,
};
use crate::homology::HomologyModel;
use crate::lattice::{intersect, rank, vec_add, vec_sub, IntMatrix};
use crate::surface::TranslationSurface;
use crate::zcover::{canonical_vector, canonicalize, certify, check_twist_lift, multitwist_rank_identity, twists_in};
use crate::zcover::{CertificateKind, Lift, Provenance};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        format!(
            "criterion {} [{}] {} ({} checks, {} ms){}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.checks.len(),
            self.elapsed_ms,
            if failed.is_empty() { String::new() } else { format!(" failed: {}", failed.join("; ")) }
        )
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.0.push(Check { name: name.into(), passed, detail: detail.into() });
        passed
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) -> bool {
        let passed = got == want;
        self.check(name, passed, format!("got {got:?}, want {want:?}"))
    }
}

fn run(id: u8, title: &'static str, limit_s: Option<u64>, body: impl FnOnce(&mut Checks)) -> CriterionResult {
    let start = Instant::now();
    let mut ck = Checks::default();
    body(&mut ck);
    let elapsed = start.elapsed();
    if let Some(l) = limit_s {
        ck.check(format!("runtime < {l} s"), elapsed.as_secs_f64() < l as f64, format!("{:.2} s", elapsed.as_secs_f64()));
    }
    let passed = ck.0.iter().all(|c| c.passed);
    CriterionResult { id, title, passed, elapsed_ms: elapsed.as_millis(), checks: ck.0 }
}

fn right_twist(s: &TranslationSurface, h: &HomologyModel, v: Vec2K) -> Option<MultiTwist> {
    let dec = decompose(s, h, &Direction::new(v).ok()?, DEFAULT_CAP).ok()?;
    multi_twist(h, &dec, TwistSign::Right).ok()
}

fn random_primitive_in_w(h: &HomologyModel, rng: &mut impl Rng) -> Vec<BigInt> {
    loop {
        let coeffs: Vec<BigInt> = (0..h.w.rank()).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        if let Ok(v) = canonical_vector(&h.w.combination(&coeffs)) {
            return v;
        }
    }
}

fn catalog_surfaces() -> Vec<(&'static str, TranslationSurface, HomologyModel)> {
    catalog::NAMES
        .iter()
        .map(|&n| {
            let s = catalog::get(n).expect("catalog surface");
            let h = HomologyModel::build(&s).expect("catalog homology");
            (n, s, h)
        })
        .collect()
}

fn swept_twists(s: &TranslationSurface, h: &HomologyModel, n: usize) -> (usize, Vec<MultiTwist>) {
    let dirs = sweep_candidates(s, n);
    let count = dirs.len();
    (count, twists_in(s, h, &dirs, DEFAULT_CAP))
}

pub fn criterion_1() -> CriterionResult {
    run(1, "eierlegende Wollmilchsau reproduction", Some(10), |ck| {
        let s = catalog::eierlegende_wollmilchsau();
        let inv = s.invariants();
        ck.eq("genus", inv.genus, 3);
        ck.eq("#P", inv.num_marked, 4);
        ck.eq("cone angles (units of 2π)", inv.cone_angle_list.clone(), vec![2, 2, 2, 2]);
        let h = HomologyModel::build(&s).expect("homology");
        let r = h.ranks();
        ck.eq("ranks (rel, W, W0, [k:Q])", (r.rk_rel, r.rk_w, r.rk_w0, r.k_degree), (9, 7, 4, 1));
        let Some(t) = right_twist(&s, &h, Vec2K::ints(1, 0)) else {
            ck.check("horizontal decomposition", false, "not periodic");
            return;
        };
        ck.eq("horizontal cylinders", t.decomposition.cylinders.len(), 2);
        ck.eq("core span rank", core_span(&h, &t.decomposition.cylinders).rank(), 1);
        ck.eq("twist derivative", t.derivative.to_string(), Mat2K::ints(1, 4, 0, 1).to_string());
        let psi = restrict(&h, &AffineAuto::from_multi_twist(&t, s.num_marked())).map(|r| r.psi.is_identity());
        ck.eq("ψ(twist) = I", psi, Ok(true));
        let (_, twists) = swept_twists(&s, &h, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut kinds_ok = 0;
        let mut lifted = 0;
        let mut congruent = 0;
        for _ in 0..20 {
            let c = canonicalize(&h, &random_primitive_in_w(&h, &mut rng)).expect("nonzero class");
            if certify(&s, &h, &c, &[], &twists).kind == CertificateKind::FirstKind_via_kernel {
                kinds_ok += 1;
            }
            for t in &twists {
                if check_twist_lift(t, "", &c).verdict == Lift::LiftsPlus {
                    lifted += 1;
                    congruent += is_identity_mod(&t.derivative, 4) as usize;
                }
            }
        }
        ck.eq("FirstKind_via_kernel for 20 random w", kinds_ok, 20);
        ck.check("lifted twists ≡ I mod 4", lifted > 0 && congruent == lifted, format!("{congruent}/{lifted}"));
    })
}

pub fn criterion_2() -> CriterionResult {
    run(2, "octagon double cover reproduction", Some(60), |ck| {
        let s = catalog::octagon_double_cover();
        let inv = s.invariants();
        ck.eq("genus", inv.genus, 3);
        ck.eq("cone angles (units of 2π)", inv.cone_angle_list.clone(), vec![3, 3]);
        ck.eq("field", s.field_d(), 2);
        let h = HomologyModel::build(&s).expect("homology");
        let r = h.ranks();
        ck.eq("ranks (W, W0, [k:Q])", (r.rk_w, r.rk_w0, r.k_degree), (3, 2, 2));
        let published = catalog::octagon_published_derivatives();
        let mut fixes = Vec::new();
        let mut spans = Vec::new();
        let mut twists = Vec::new();
        for (i, (v, want)) in catalog::octagon_directions().into_iter().zip(published).enumerate() {
            let label = ["D(h)", "D(g)", "D(f)"][i];
            let Some(t) = right_twist(&s, &h, v.clone()) else {
                ck.check(format!("{label} direction periodic"), false, v.to_string());
                return;
            };
            ck.eq(format!("{label} in direction {v}"), t.derivative.to_string(), want.to_string());
            let f = AffineAuto::from_multi_twist(&t, s.num_marked());
            fixes.push(fixed_subspace(&h, &f, 1));
            spans.push(core_span(&h, &t.decomposition.cylinders).rank());
            twists.push(t);
        }
        ck.check("Fix_W(f) = W", fixes[2] == h.w, format!("rank {}", fixes[2].rank()));
        let gh = intersect(&fixes[0], &fixes[1]).expect("same ambient");
        ck.check("rk(Fix g ∩ Fix h) ≥ 1", gh.rank() >= 1, format!("rank {}", gh.rank()));
        let all = intersect(&gh, &fixes[2]).expect("same ambient");
        ck.eq("rk(Fix f ∩ Fix g ∩ Fix h)", all.rank(), 1);
        ck.eq("core span ranks in (1,0), (1,1)", (spans[0], spans[1]), (3, 3));
        let autos: Vec<(String, AffineAuto)> = catalog::automorphisms("octagon_double_cover")
            .expect("catalog autos")
            .into_iter()
            .filter_map(|a| build_auto(&s, &h, &a.derivative, &a.polygon_map).ok().map(|f| (a.label, f)))
            .collect();
        let infinite = h.w.basis_vectors().iter().any(|w| {
            canonicalize(&h, w).map(|c| certify(&s, &h, &c, &autos, &twists).has(CertificateKind::InfiniteIndex)).unwrap_or(false)
        });
        ck.check("InfiniteIndex for some w ∈ W", infinite, "");
    })
}

pub fn criterion_3() -> CriterionResult {
    run(3, "multi-twist rank identity on sweeps", None, |ck| {
        for (name, s, h) in catalog_surfaces() {
            let (tried, twists) = swept_twists(&s, &h, 16);
            ck.check(format!("{name}: ≥ 12 sweep directions"), tried >= 12, format!("{tried} tried, {} periodic", twists.len()));
            let mut bad = Vec::new();
            for t in &twists {
                match multitwist_rank_identity(&h, t) {
                    Ok(r) if r.holds => {}
                    Ok(r) => bad.push(format!("{}: {} ≠ {}", t.decomposition.direction.vector(), r.lhs, r.rhs)),
                    Err(e) => bad.push(e.to_string()),
                }
            }
            ck.check(format!("{name}: identity holds"), bad.is_empty() && !twists.is_empty(), bad.join(", "));
        }
    })
}

/// Σ t_j i(x, γ°_j) γ_j and the same sum over the absolute γ°_j.
fn phi_by_cores(h: &HomologyModel, t: &MultiTwist, x: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut rel = vec![BigInt::zero(); h.rank];
    let mut abs = vec![BigInt::zero(); h.rank];
    for (c, tj) in t.decomposition.cylinders.iter().zip(&t.twist_numbers) {
        let k = tj * h.pairing(x, &c.core_abs);
        for (o, g) in rel.iter_mut().zip(&c.core_rel) {
            *o += &k * g;
        }
        for (o, g) in abs.iter_mut().zip(&c.core_abs) {
            *o += &k * g;
        }
    }
    (rel, abs)
}

pub fn criterion_4() -> CriterionResult {
    run(4, "properties of φ = f_* − I", None, |ck| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (name, s, h) in catalog_surfaces() {
            let genus = s.genus();
            let (_, twists) = swept_twists(&s, &h, 16);
            let mut failures: Vec<String> = Vec::new();
            for t in &twists {
                let dir = t.decomposition.direction.vector().to_string();
                let phi = t.phi();
                if !phi.mul(&phi).is_zero() {
                    failures.push(format!("{dir}: φ² ≠ 0"));
                }
                let span = core_span(&h, &t.decomposition.cylinders).rank();
                let r = rank(&phi);
                if r != span || r > genus {
                    failures.push(format!("{dir}: rank φ = {r}, rank⟨γ⟩ = {span}, genus {genus}"));
                }
                let mut signs = (false, false);
                for _ in 0..100 {
                    let x: Vec<BigInt> = (0..h.rank).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect();
                    let (rel, y) = phi_by_cores(&h, t, &x);
                    if rel != phi.mul_vec(&x) {
                        failures.push(format!("{dir}: φ(x) disagrees with its absolute form"));
                        break;
                    }
                    let v = h.pairing(&x, &y);
                    signs.0 |= v.is_positive();
                    signs.1 |= v.is_negative();
                }
                if signs.0 && signs.1 {
                    failures.push(format!("{dir}: i(x, φx) changes sign"));
                }
                let d_minus_i = Mat2K::new(
                    &t.derivative.a11 - &QuadNumber::one(),
                    t.derivative.a12.clone(),
                    t.derivative.a21.clone(),
                    &t.derivative.a22 - &QuadNumber::one(),
                );
                for k in 0..h.rank {
                    let e: Vec<BigInt> = (0..h.rank).map(|i| BigInt::from((i == k) as i64)).collect();
                    let lhs = h.holonomy(&phi.mul_vec(&e)).expect("length");
                    let rhs = d_minus_i.apply(&h.holonomy(&e).expect("length"));
                    if lhs != rhs {
                        failures.push(format!("{dir}: hol∘φ ≠ (D − I)∘hol on basis vector {k}"));
                        break;
                    }
                }
            }
            ck.check(
                format!("{name}: {} periodic directions", twists.len()),
                failures.is_empty() && !twists.is_empty(),
                failures.join("; "),
            );
        }
    })
}

/// Transvections x ↦ x + λ(x)·a, a ∈ W0, λ a row of ∂: they lie in
/// ker ψ0 ∩ ker ρ and usually have nonzero h_f.
fn transvections(s: &TranslationSurface, h: &HomologyModel) -> Vec<AffineAuto> {
    h.w0.basis_vectors()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let lambda = h.boundary_matrix.row(i % s.num_marked());
            let mut m = IntMatrix::identity(h.rank);
            for r in 0..h.rank {
                for c in 0..h.rank {
                    let v = m.get(r, c) + &a[r] * &lambda[c];
                    m.set(r, c, v);
                }
            }
            let mut f = AffineAuto::identity(s, h);
            f.action_rel = m;
            f.edge_map = None;
            f
        })
        .collect()
}

pub fn criterion_5() -> CriterionResult {
    run(5, "pairing, equivariance and h_f additivity", None, |ck| {
        for (name, s, h) in catalog_surfaces() {
            ck.eq(format!("{name}: |det pairing|"), h.pairing_det_abs(), BigInt::from(1));
            let (_, twists) = swept_twists(&s, &h, 10);
            let mut autos: Vec<AffineAuto> = twists.iter().map(|t| AffineAuto::from_multi_twist(t, s.num_marked())).collect();
            let mut built = 0;
            for a in catalog::automorphisms(name).expect("catalog autos") {
                match build_auto(&s, &h, &a.derivative, &a.polygon_map) {
                    Ok(f) => {
                        built += 1;
                        autos.push(f);
                    }
                    Err(e) => {
                        ck.check(format!("{name}: {} validates", a.label), false, e.to_string());
                    }
                }
            }
            let equivariant = autos.iter().all(|f| f.check_j(&h) && f.check_pairing(&h) && f.check_holonomy(&h));
            ck.check(format!("{name}: J and pairing equivariance"), equivariant, format!("{} automorphisms ({built} symmetries)", autos.len()));
            autos.extend(transvections(&s, &h));
            let mut pairs = 0;
            let mut nonzero = 0;
            let mut bad = 0;
            for f in &autos {
                let Ok(hf) = h_f_map(&h, f) else { continue };
                nonzero += !hf.is_zero() as usize;
                for g in &autos {
                    let Ok(hg) = h_f_map(&h, g) else { continue };
                    let Ok(gf) = f.then(g) else { continue };
                    pairs += 1;
                    if h_f_map(&h, &gf).map(|x| x != hf.add(&hg)).unwrap_or(true) {
                        bad += 1;
                    }
                }
            }
            ck.check(format!("{name}: h_f additive"), bad == 0, format!("{pairs} pairs, {nonzero} with h_f ≠ 0, {bad} failures"));
        }
    })
}

/// A random square-tiled surface from the cylinder/IET generator.
pub fn random_generator_spec(rng: &mut impl Rng) -> CylinderIetSpec {
    let k = rng.gen_range(1..=3);
    let c = rng.gen_range(2..=5usize);
    let iets = (0..k)
        .map(|_| {
            let mut perm: Vec<usize> = (0..c).collect();
            for i in (1..c).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            Iet::unit_intervals(perm)
        })
        .collect();
    let widths = (0..k).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(1..=2)))).collect();
    let marked = (0..rng.gen_range(0..=2))
        .map(|_| (rng.gen_range(0..k), Rational::new(BigInt::from(rng.gen_range(0..2 * c as i64)), BigInt::from(2))))
        .collect();
    CylinderIetSpec { circumference: Rational::from_integer(BigInt::from(c)), widths, iets, marked }
}

pub fn criterion_6() -> CriterionResult {
    run(6, "rank formulas", None, |ck| {
        let mut surfaces: Vec<(String, TranslationSurface)> =
            catalog_surfaces().into_iter().map(|(n, s, _)| (n.to_string(), s)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut made = 0;
        while made < 10 {
            if let Ok(s) = catalog::build_cylinder_iet(&random_generator_spec(&mut rng)) {
                made += 1;
                surfaces.push((format!("generated #{made}"), s));
            }
        }
        for (name, s) in surfaces {
            let h = HomologyModel::build(&s).expect("homology");
            let r = h.ranks();
            let g = s.genus() as i64;
            let k = r.k_degree as i64;
            let p = s.num_marked() as i64;
            ck.eq(format!("{name}: rk W"), r.rk_w as i64, 2 * (g - k) + p - 1);
            ck.eq(format!("{name}: rk W0"), r.rk_w0 as i64, 2 * (g - k));
        }
    })
}

fn sqrt2_direction() -> Vec2K {
    Vec2K::new(QuadNumber::from_int(1), QuadNumber::sqrt(2).expect("square-free"))
}

pub fn criterion_7() -> CriterionResult {
    run(7, "recurrence dynamics on the domino torus", Some(30), |ck| {
        let s = catalog::domino_torus();
        let h = HomologyModel::build(&s).expect("homology");
        let (e1, e2) = (h.edge_class(0), h.edge_class(1));
        let rec = canonicalize(&h, &vec_sub(&e1, &e2)).expect("class");
        let tr = canonicalize(&h, &vec_add(&e1, &e2)).expect("class");
        let v = sqrt2_direction();
        for (label, c, zero) in [("e1−e2", &rec, true), ("e1+e2", &tr, false)] {
            match first_return_iet(&s, &h, c, &v) {
                Ok(iet) => {
                    let integral = iet.cocycle_integral();
                    ck.check(
                        format!("return map Σμf = hol_θ'(w) for {label}"),
                        integral == iet.hol_theta_prime && integral.is_zero() == zero,
                        format!("Σμf = {integral}, hol_θ' = {}", iet.hol_theta_prime),
                    );
                }
                Err(e) => {
                    ck.check(format!("return map for {label}"), false, e.to_string());
                }
            }
        }
        let opts = SimOptions { time: 1e5, record_trace: false, start: None };
        let d = (1.0, 2f64.sqrt());
        match simulate_float(&s, &h, &tr, d, &opts) {
            Ok(r) => {
                let rel = ((r.drift_slope - r.predicted_drift) / r.predicted_drift).abs();
                ck.check("transient drift within 2%", rel < 0.02, format!("slope {:.6}, predicted {:.6}", r.drift_slope, r.predicted_drift));
            }
            Err(e) => {
                ck.check("transient simulation", false, e.to_string());
            }
        }
        match simulate_float(&s, &h, &rec, d, &opts) {
            Ok(r) => {
                ck.check(
                    "recurrent |slope| < 0.01 with ≥ 100 returns",
                    r.drift_slope.abs() < 0.01 && r.returns_to_zero >= 100,
                    format!("slope {:.2e}, {} returns", r.drift_slope, r.returns_to_zero),
                );
            }
            Err(e) => {
                ck.check("recurrent simulation", false, e.to_string());
            }
        }
    })
}

pub fn criterion_8() -> CriterionResult {
    run(8, "cocycle agrees with the homology pairing", None, |ck| {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (name, s, h) in catalog_surfaces() {
            if h.w.rank() == 0 {
                continue;
            }
            let mut bad = 0;
            for _ in 0..20 {
                let c = canonicalize(&h, &random_primitive_in_w(&h, &mut rng)).expect("class");
                let cocycle = CocycleSpec::new(&h, &c);
                let len = rng.gen_range(1..=20);
                let start = rng.gen_range(0..s.num_polygons());
                let walk = random_dual_loop(&s, start, len, &mut rng);
                let y = h.abs_coords_of_crossings(&crossing_counts(&s, &walk)).expect("closed loop");
                bad += (cocycle.sum(&s, &walk) != h.pairing(&c.w, &y)) as usize;
            }
            ck.eq(format!("{name}: 20 loops disagreeing"), bad, 0);
        }
    })
}

pub fn criterion_9() -> CriterionResult {
    run(9, "unverifiable claims stay labelled", None, |ck| {
        for name in ["eierlegende_wollmilchsau", "octagon_double_cover"] {
            let s = catalog::get(name).expect("catalog");
            let h = HomologyModel::build(&s).expect("homology");
            let (_, twists) = swept_twists(&s, &h, 12);
            let c = canonicalize(&h, &h.w.basis().row(0)).expect("class");
            let cert = certify(&s, &h, &c, &[], &twists);
            let lattice: Vec<_> = cert.hypotheses.iter().filter(|x| x.statement.contains("lattice")).collect();
            ck.check(
                format!("{name}: lattice hypothesis is asserted_metadata"),
                !lattice.is_empty() && lattice.iter().all(|x| x.provenance == Provenance::AssertedMetadata),
                format!("{} lattice hypotheses", lattice.len()),
            );
            let claims_limit_set = cert
                .hypotheses
                .iter()
                .any(|x| x.statement.contains("limit set") && x.provenance == Provenance::Verified);
            ck.check(format!("{name}: no limit-set claim marked verified"), !claims_limit_set, "");
        }
    })
}

pub fn all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}
