//! Payload builders for each subcommand.

use anyhow::Result;
use flatcover::automorph::{build_auto, h_f_map, restrict, AffineAuto, PolygonImage};
use flatcover::catalog;
use flatcover::cylinders::{core_span, decompose, multi_twist, sweep_candidates, Direction, TwistSign};
use flatcover::exactnum::{Mat2K, QuadNumber, Vec2K};
use flatcover::flowsim::{
    first_return_iet, recurrence_verdict, sample_directions, simulate_exact, simulate_float, SimOptions, TraceRow,
};
use flatcover::homology::HomologyModel;
use flatcover::lattice::IntMatrix;
use flatcover::surface::{EdgeRef, TranslationSurface};
use flatcover::zcover::{canonicalize, certify, multitwist_rank_identity, twists_in, ZCoverClass};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::{domain, parse_error};

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

fn vec2(v: &Vec2K) -> Value {
    json!([v.x.to_string(), v.y.to_string()])
}

fn mat2(m: &Mat2K) -> Value {
    json!([[m.a11.to_string(), m.a12.to_string()], [m.a21.to_string(), m.a22.to_string()]])
}

fn edge(e: EdgeRef) -> Value {
    json!([e.polygon, e.edge])
}

fn homology(s: &TranslationSurface) -> Result<HomologyModel> {
    HomologyModel::build(s).map_err(domain)
}

pub fn parse_direction(text: &str) -> Result<Vec2K> {
    text.parse::<Vec2K>().map_err(|e| parse_error("Direction", format!("'{text}': {e}")))
}

fn parse_matrix(text: &str) -> Result<Mat2K> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(parse_error("Matrix", format!("expected four entries a,b,c,d, got '{text}'")));
    }
    let mut e = Vec::with_capacity(4);
    for p in parts {
        e.push(p.parse::<QuadNumber>().map_err(|err| parse_error("Matrix", format!("'{p}': {err}")))?);
    }
    let d = e.pop().expect("four entries");
    let c = e.pop().expect("four entries");
    let b = e.pop().expect("four entries");
    let a = e.pop().expect("four entries");
    Ok(Mat2K::new(a, b, c, d))
}

fn parse_class(h: &HomologyModel, text: &str) -> Result<ZCoverClass> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']');
    let mut w = Vec::new();
    for p in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        w.push(p.parse::<BigInt>().map_err(|e| parse_error("ClassVector", format!("'{p}': {e}")))?);
    }
    canonicalize(h, &w).map_err(domain)
}

pub fn surface_info(s: &TranslationSurface) -> Result<Value> {
    let classes: Vec<Value> = s
        .classes()
        .iter()
        .map(|c| {
            json!({
                "cone_angle_over_2pi": c.cone_multiple,
                "corners": c.corners.iter().map(|k| json!([k.polygon, k.vertex])).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "name": s.name(),
        "invariants": s.invariants(),
        "veech_group_is_lattice": s.metadata().veech_group_is_lattice,
        "marked_points": classes,
    }))
}

pub fn homology_ranks(s: &TranslationSurface) -> Result<Value> {
    Ok(serde_json::to_value(homology(s)?.ranks())?)
}

pub fn homology_basis(s: &TranslationSurface) -> Result<Value> {
    let h = homology(s)?;
    let n = h.rank;
    let unit = |k: usize| -> Vec<BigInt> { (0..n).map(|i| BigInt::from((i == k) as i64)).collect() };
    Ok(json!({
        "rank": n,
        "relative_basis_chains": matrix(&h.rel_basis_chains),
        "relative_basis_holonomy": h.hol.iter().map(vec2).collect::<Vec<_>>(),
        "absolute_basis_crossings": (0..n).map(|k| ints(&h.crossings_of(&unit(k)))).collect::<Vec<_>>(),
        "edge_classes": (0..s.num_edges()).map(|k| ints(&h.edge_class(k))).collect::<Vec<_>>(),
        "pairing_matrix": matrix(&h.pairing_matrix),
        "boundary_matrix": matrix(&h.boundary_matrix),
        "W": matrix(h.w.basis()),
        "W0": matrix(h.w0.basis()),
        "ranks": h.ranks(),
    }))
}

pub fn cylinders(s: &TranslationSurface, direction: &str, cap: usize) -> Result<Value> {
    let h = homology(s)?;
    let dir = Direction::new(parse_direction(direction)?).map_err(domain)?;
    let dec = decompose(s, &h, &dir, cap).map_err(domain)?;
    let cyls: Vec<Value> = dec
        .cylinders
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "circumference": c.circumference.to_string(),
                "height": c.height.to_string(),
                "modulus": c.modulus.to_string(),
                "core_rel": ints(&c.core_rel),
                "core_abs": ints(&c.core_abs),
                "bottom": c.bottom,
                "top": c.top,
            })
        })
        .collect();
    let scs: Vec<Value> = dec
        .saddle_connections
        .iter()
        .map(|sc| {
            json!({
                "start": [sc.start.class, sc.start.index],
                "end": [sc.end.class, sc.end.index],
                "holonomy": vec2(&sc.holonomy),
                "length": sc.length.to_string(),
            })
        })
        .collect();
    let twist = match multi_twist(&h, &dec, TwistSign::Right) {
        Ok(t) => json!({
            "sign": t.sign,
            "shear": t.shear.to_string(),
            "twist_numbers": ints(&t.twist_numbers),
            "derivative": mat2(&t.derivative),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "direction": vec2(dec.direction.vector()),
        "lengths_in_units_of_direction": true,
        "core_span_rank": core_span(&h, &dec.cylinders).rank(),
        "cylinders": cyls,
        "saddle_connections": scs,
        "multi_twist": twist,
    }))
}

pub fn twist(s: &TranslationSurface, direction: &str, cap: usize, sign: TwistSign) -> Result<Value> {
    let h = homology(s)?;
    let dir = Direction::new(parse_direction(direction)?).map_err(domain)?;
    let dec = decompose(s, &h, &dir, cap).map_err(domain)?;
    let t = multi_twist(&h, &dec, sign).map_err(domain)?;
    let f = AffineAuto::from_multi_twist(&t, s.num_marked());
    let restricted = restrict(&h, &f).map_err(domain)?;
    let identity = multitwist_rank_identity(&h, &t).map_err(domain)?;
    Ok(json!({
        "direction": vec2(dec.direction.vector()),
        "sign": t.sign,
        "cylinders": dec.cylinders.len(),
        "shear": t.shear.to_string(),
        "twist_numbers": ints(&t.twist_numbers),
        "derivative": mat2(&t.derivative),
        "action_rel": matrix(&t.action_matrix),
        "action_abs": matrix(&t.abs_action),
        "phi": matrix(&t.phi()),
        "psi0": matrix(&restricted.psi0),
        "psi": matrix(&restricted.psi),
        "rank_identity": identity,
    }))
}

pub fn auto_check(s: &TranslationSurface, derivative: &str, map_text: &str) -> Result<Value> {
    let h = homology(s)?;
    let d = parse_matrix(derivative)?;
    let map: Vec<PolygonImage> =
        serde_json::from_str(map_text).map_err(|e| parse_error("PolygonMap", e.to_string()))?;
    let f = build_auto(s, &h, &d, &map).map_err(domain)?;
    let restricted = restrict(&h, &f).map_err(domain)?;
    let h_f = h_f_map(&h, &f).ok().map(|m| matrix(&m));
    Ok(json!({
        "derivative": mat2(&f.derivative),
        "det_sign": f.det_sign(),
        "action_rel": matrix(&f.action_rel),
        "action_abs": matrix(&f.action_abs),
        "psi0": matrix(&restricted.psi0),
        "psi": matrix(&restricted.psi),
        "rho": matrix(&f.rho_matrix()),
        "puncture_perm": f.puncture_perm,
        "h_f": h_f,
        "checks": {
            "holonomy": f.check_holonomy(&h),
            "pairing": f.check_pairing(&h),
            "puncture_pairing": f.check_j(&h),
        },
    }))
}

pub fn cover_analyze(s: &TranslationSurface, w: &str, sweep: usize, cap: usize) -> Result<Value> {
    let h = homology(s)?;
    let c = parse_class(&h, w)?;
    let twists = twists_in(s, &h, &sweep_candidates(s, sweep), cap);
    let autos: Vec<(String, AffineAuto)> = if catalog::NAMES.contains(&s.name()) {
        catalog::automorphisms(s.name())
            .map_err(domain)?
            .into_iter()
            .filter_map(|a| build_auto(s, &h, &a.derivative, &a.polygon_map).ok().map(|f| (a.label, f)))
            .collect()
    } else {
        Vec::new()
    };
    Ok(serde_json::to_value(certify(s, &h, &c, &autos, &twists))?)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    s: &TranslationSurface,
    w: &str,
    direction: Option<&str>,
    time: f64,
    float: bool,
    samples: usize,
    seed: u64,
    record_trace: bool,
) -> Result<(Value, Vec<TraceRow>)> {
    let h = homology(s)?;
    let c = parse_class(&h, w)?;
    let opts = SimOptions { time, record_trace, start: None };
    match direction {
        Some(text) => {
            let v = parse_direction(text)?;
            let r = if float {
                simulate_float(s, &h, &c, v.to_f64(), &opts)
            } else {
                simulate_exact(s, &h, &c, &v, &opts)
            }
            .map_err(domain)?;
            let rows = r.trace.clone();
            Ok((json!({ "class": c, "flow": r }), rows))
        }
        None => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dirs = sample_directions(s, samples, &mut rng);
            let mut reports = Vec::new();
            let mut rows = Vec::new();
            for d in dirs {
                let r = simulate_float(s, &h, &c, d, &opts).map_err(domain)?;
                rows.extend(r.trace.iter().cloned());
                // sampled slopes lie outside the surface field, so they are not periodic
                reports.push((r, false));
            }
            let verdict = recurrence_verdict(&reports);
            let flows: Vec<_> = reports.into_iter().map(|(r, _)| r).collect();
            Ok((json!({ "class": c, "mode": "float", "flows": flows, "recurrence": verdict }), rows))
        }
    }
}

pub fn iet(s: &TranslationSurface, w: &str, direction: &str, refined: bool) -> Result<Value> {
    let h = homology(s)?;
    let c = parse_class(&h, w)?;
    let v = parse_direction(direction)?;
    let full = first_return_iet(s, &h, &c, &v).map_err(domain)?;
    let map = if refined { full } else { full.merged() };
    let intervals: Vec<Value> = map
        .intervals
        .iter()
        .map(|i| {
            json!({
                "entry": edge(i.entry),
                "exit": edge(i.exit),
                "length": i.length.to_string(),
                "cocycle": int(&i.cocycle),
                "domain_start": i.domain_start.to_string(),
                "image_start": i.image_start.to_string(),
            })
        })
        .collect();
    let integral = map.cocycle_integral();
    Ok(json!({
        "direction": vec2(&map.direction),
        "refined": refined,
        "transversal": map.transversal.iter().map(|(e, l)| json!({"edge": edge(*e), "length": l.to_string()})).collect::<Vec<_>>(),
        "intervals": intervals,
        "perm": map.perm,
        "cocycle_integral": integral.to_string(),
        "hol_theta_prime": map.hol_theta_prime.to_string(),
        "identity_holds": integral == map.hol_theta_prime,
    }))
}

pub fn catalog_list() -> Result<Value> {
    let mut out = Vec::new();
    for name in catalog::NAMES {
        let s = catalog::get(name).map_err(domain)?;
        let h = homology(&s)?;
        out.push(json!({ "name": name, "invariants": s.invariants(), "ranks": h.ranks() }));
    }
    Ok(Value::Array(out))
}
