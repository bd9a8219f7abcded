//! Cylinder decompositions of periodic directions and the multi-twists
//! they support.
//!
//! Directions are rotated to horizontal by the conformal map
//! R = [[x, y], [−y, x]] / |v|², which keeps coordinates in the surface
//! field. Lengths (circumference, height) are therefore reported in units
//! of |v|: a cylinder with circumference c has core holonomy c·v.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{Mat2K, NumError, QuadNumber, Rational, Vec2K};
use crate::homology::{HomologyError, HomologyModel};
use crate::lattice::{vec_add, IntMatrix, Submodule};
use crate::surface::{Corner, SurfaceError, TranslationSurface};
use crate::trace::{
    crossing_vector, path_chain, ray_exit, trace, trace_from_corner, End, Hit, Piece, Start, TraceError,
};

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CylinderError {
    #[error("direction not certified periodic: {0}")]
    NotPeriodic(String),
    #[error("moduli are incommensurable; no multi-twist in this direction")]
    Incommensurable,
    #[error("zero direction")]
    ZeroDirection,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
}

impl From<TraceError> for CylinderError {
    fn from(e: TraceError) -> Self {
        CylinderError::NotPeriodic(e.to_string())
    }
}

/// Nonzero direction with first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction(Vec2K);

impl Direction {
    pub fn new(v: Vec2K) -> Result<Self, CylinderError> {
        if v.is_zero() {
            return Err(CylinderError::ZeroDirection);
        }
        let first = if v.x.is_zero() { &v.y } else { &v.x };
        Ok(Direction(if first.is_negative() { -v } else { v }))
    }

    pub fn vector(&self) -> &Vec2K {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prong {
    pub class: usize,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct SaddleConnection {
    pub start: Prong,
    pub end: Prong,
    /// Edges crossed, as seen from the polygon being left.
    pub crossings: Vec<crate::surface::EdgeRef>,
    /// Holonomy in the original frame; equals length·direction.
    pub holonomy: Vec2K,
    pub length: QuadNumber,
    /// Relative chain in pair coordinates.
    pub chain: Vec<BigInt>,
    pieces: Vec<Piece>,
    pub along_edge: bool,
}

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub id: usize,
    pub circumference: QuadNumber,
    pub height: QuadNumber,
    pub modulus: QuadNumber,
    /// Saddle connections on the bottom boundary, left to right.
    pub bottom: Vec<usize>,
    /// Saddle connections on the top boundary, right to left.
    pub top: Vec<usize>,
    /// γ_j: the top boundary as a relative class.
    pub core_rel: Vec<BigInt>,
    /// γ°_j: the core curve as an absolute class.
    pub core_abs: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub direction: Direction,
    /// The map taking the direction to (1, 0).
    pub rotation: Mat2K,
    pub saddle_connections: Vec<SaddleConnection>,
    pub cylinders: Vec<Cylinder>,
}

struct ProngTable {
    /// per class: corner holding R_i
    right: Vec<Vec<Corner>>,
    /// corner holding some L prong → (class, index)
    left_of_corner: HashMap<Corner, Prong>,
}

fn prong_table(s: &TranslationSurface) -> Result<ProngTable, CylinderError> {
    let east = Vec2K::ints(1, 0);
    let west = Vec2K::ints(-1, 0);
    let mut right = Vec::new();
    let mut left_of_corner = HashMap::new();
    for (ci, class) in s.classes().iter().enumerate() {
        // (is_right, corner) in ccw order
        let mut seq: Vec<(bool, Corner)> = Vec::new();
        for &c in &class.corners {
            let u = s.corner_u(c);
            let w = s.corner_w(c);
            let mut here: Vec<(bool, Vec2K)> = Vec::new();
            if east.in_sector(&u, &w) {
                here.push((true, east.clone()));
            }
            if west.in_sector(&u, &w) {
                here.push((false, west.clone()));
            }
            here.sort_by(|a, b| Vec2K::angle_cmp_from(&u, &a.1, &b.1));
            seq.extend(here.into_iter().map(|(r, _)| (r, c)));
        }
        let start = seq
            .iter()
            .position(|(r, _)| *r)
            .ok_or_else(|| CylinderError::Inconsistent("vertex without horizontal prongs".into()))?;
        seq.rotate_left(start);
        let k = class.cone_multiple;
        if seq.len() != 2 * k {
            return Err(CylinderError::Inconsistent(format!(
                "class {ci} has {} horizontal prongs, expected {}",
                seq.len(),
                2 * k
            )));
        }
        let mut rs = Vec::with_capacity(k);
        for i in 0..k {
            let (r, c) = seq[2 * i];
            let (l, d) = seq[2 * i + 1];
            if !r || l {
                return Err(CylinderError::Inconsistent("prongs do not alternate".into()));
            }
            rs.push(c);
            left_of_corner.insert(d, Prong { class: ci, index: i });
        }
        right.push(rs);
    }
    Ok(ProngTable { right, left_of_corner })
}

fn cycles(next: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; next.len()];
    let mut out = Vec::new();
    for s in 0..next.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            cyc.push(c);
            c = next[c];
        }
        out.push(cyc);
    }
    out
}

fn on_boundary(poly: &crate::surface::Polygon, p: &Vec2K) -> bool {
    (0..poly.len()).any(|i| {
        let a = poly.vertex(i);
        let e = poly.edge_vector(i);
        let ap = p - a;
        e.cross(&ap).is_zero() && !ap.dot(&e).is_negative() && ap.dot(&e) <= e.dot(&e)
    })
}

/// Sample points on a saddle connection, strictly inside its pieces.
fn sample_points(sc: &SaddleConnection) -> Vec<(usize, Vec2K)> {
    let mut out = Vec::new();
    let fracs = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5), (3, 5), (4, 5)];
    for (n, d) in fracs {
        for piece in &sc.pieces {
            let t = QuadNumber::from_frac(n, d);
            let p = &piece.from + &(&piece.to - &piece.from).scale(&t);
            out.push((piece.polygon, p));
        }
    }
    out
}

/// Move straight up from a point until the first horizontal saddle
/// connection; returns (sc index, distance) or None on hitting a vertex.
fn rise_to_boundary(
    s: &TranslationSurface,
    by_poly: &[Vec<(usize, Vec2K, Vec2K)>],
    polygon: usize,
    point: &Vec2K,
    cap: usize,
) -> Result<Option<(usize, QuadNumber)>, CylinderError> {
    let up = Vec2K::ints(0, 1);
    let mut poly = polygon;
    let mut p = point.clone();
    let mut total = QuadNumber::zero();
    let mut crossed = false;
    for _ in 0..=cap {
        let hit = ray_exit(s.polygon(poly), &p, &up)
            .ok_or_else(|| CylinderError::Inconsistent("vertical ray lost".into()))?;
        let mut best: Option<(usize, QuadNumber, Vec2K)> = None;
        for (sc, a, b) in &by_poly[poly] {
            let dy = &a.y - &p.y;
            // after a crossing the boundary point itself may lie on a connection
            if dy.is_negative() || (dy.is_zero() && !crossed) || dy > *hit.t() {
                continue;
            }
            let (lo, hi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
            if p.x < *lo || p.x > *hi {
                continue;
            }
            if best.as_ref().is_none_or(|(_, d, _)| dy < *d) {
                best = Some((*sc, dy, a.clone()));
            }
        }
        if let Some((sc, dy, _)) = best {
            let q = &p + &up.scale(&dy);
            let poly_ref = s.polygon(poly);
            if (0..poly_ref.len()).any(|i| *poly_ref.vertex(i) == q) {
                return Ok(None);
            }
            return Ok(Some((sc, total + dy)));
        }
        match hit {
            Hit::Vertex { .. } => return Ok(None),
            Hit::Edge { edge, t, point } => {
                let e = crate::surface::EdgeRef::new(poly, edge);
                total = total + t;
                p = &point + &s.crossing_translation(e);
                poly = s.partner(e).polygon;
                crossed = true;
            }
        }
    }
    Err(CylinderError::NotPeriodic("vertical budget exceeded".into()))
}

pub fn decompose(
    s: &TranslationSurface,
    h: &HomologyModel,
    dir: &Direction,
    cap: usize,
) -> Result<Decomposition, CylinderError> {
    let v = dir.vector().in_field(s.field_d())?;
    let rot = Mat2K::to_horizontal(&v)?;
    let rs = s.apply_matrix(&rot)?;
    let east = Vec2K::ints(1, 0);
    let table = prong_table(&rs)?;

    // separatrices
    let mut scs: Vec<SaddleConnection> = Vec::new();
    let mut start_index: HashMap<Prong, usize> = HashMap::new();
    let mut end_index: HashMap<Prong, usize> = HashMap::new();
    for (ci, rights) in table.right.iter().enumerate() {
        for (i, &corner) in rights.iter().enumerate() {
            let tr = trace_from_corner(&rs, corner, &east, None, cap)?;
            let End::Vertex(arrival) = tr.end else {
                return Err(CylinderError::Inconsistent("separatrix did not end at a vertex".into()));
            };
            let lc = rs.corner_containing(arrival, &Vec2K::ints(-1, 0));
            let end = *table
                .left_of_corner
                .get(&lc)
                .ok_or_else(|| CylinderError::Inconsistent("arrival prong not found".into()))?;
            let chain = path_chain(&rs, &tr);
            let holonomy = v.scale(&tr.length);
            let start = Prong { class: ci, index: i };
            start_index.insert(start, scs.len());
            end_index.insert(end, scs.len());
            scs.push(SaddleConnection {
                start,
                end,
                crossings: tr.crossings.iter().map(|c| c.edge).collect(),
                holonomy,
                length: tr.length.clone(),
                chain,
                pieces: tr.pieces,
                along_edge: tr.along_edge.is_some(),
            });
        }
    }
    let k_of = |class: usize| table.right[class].len();
    let next_bottom: Vec<usize> = scs
        .iter()
        .map(|sc| start_index[&Prong { class: sc.end.class, index: sc.end.index }])
        .collect();
    let next_top: Vec<usize> = scs
        .iter()
        .map(|sc| {
            let k = k_of(sc.start.class);
            end_index[&Prong { class: sc.start.class, index: (sc.start.index + k - 1) % k }]
        })
        .collect();
    let bottoms = cycles(&next_bottom);
    let tops = cycles(&next_top);
    if bottoms.len() != tops.len() {
        return Err(CylinderError::Inconsistent("boundary cycle counts differ".into()));
    }
    let mut top_of_sc = vec![0; scs.len()];
    for (ti, t) in tops.iter().enumerate() {
        for &x in t {
            top_of_sc[x] = ti;
        }
    }
    let mut by_poly: Vec<Vec<(usize, Vec2K, Vec2K)>> = vec![Vec::new(); rs.num_polygons()];
    for (i, sc) in scs.iter().enumerate() {
        for p in &sc.pieces {
            by_poly[p.polygon].push((i, p.from.clone(), p.to.clone()));
        }
    }

    let mut used_top = vec![false; tops.len()];
    let mut cylinders = Vec::with_capacity(bottoms.len());
    for (j, bottom) in bottoms.iter().enumerate() {
        let circ = bottom.iter().fold(QuadNumber::zero(), |acc, &i| acc + &scs[i].length);
        let mut found = None;
        'search: for &b in bottom {
            for (poly, pt) in sample_points(&scs[b]) {
                if let Some((sc, height)) = rise_to_boundary(&rs, &by_poly, poly, &pt, cap)? {
                    found = Some((poly, pt, sc, height));
                    break 'search;
                }
            }
        }
        let (poly, pt, top_sc, height) =
            found.ok_or_else(|| CylinderError::Inconsistent("could not measure a cylinder height".into()))?;
        let ti = top_of_sc[top_sc];
        if used_top[ti] {
            return Err(CylinderError::Inconsistent("top boundary shared by two cylinders".into()));
        }
        used_top[ti] = true;
        let top_len = tops[ti].iter().fold(QuadNumber::zero(), |acc, &i| acc + &scs[i].length);
        if top_len != circ {
            return Err(CylinderError::Inconsistent("top and bottom lengths differ".into()));
        }

        // core curve at an interior height
        let up = Vec2K::ints(0, 1);
        let mut core = None;
        for (n, d) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)] {
            let lift = height.scale(&Rational::new(BigInt::from(n), BigInt::from(d)));
            let tr = trace(&rs, poly, &pt, Start::Interior, &up, Some(&lift), cap)?;
            let End::Length { polygon: p0, point: q0 } = tr.end else { continue };
            if on_boundary(rs.polygon(p0), &q0) {
                continue;
            }
            let loop_tr = trace(&rs, p0, &q0, Start::Interior, &east, Some(&circ), cap)?;
            match &loop_tr.end {
                End::Length { polygon, point } if *polygon == p0 && *point == q0 => {}
                _ => return Err(CylinderError::Inconsistent("core curve does not close".into())),
            }
            core = Some(crossing_vector(&rs, &loop_tr.crossings));
            break;
        }
        let core_cross = core.ok_or_else(|| CylinderError::Inconsistent("no interior core height".into()))?;
        let core_abs = h.abs_coords_of_crossings(&core_cross)?;
        let mut chain = vec![BigInt::zero(); rs.num_edges()];
        for &i in &tops[ti] {
            chain = vec_add(&chain, &scs[i].chain);
        }
        let core_rel = h.rel_coords_of_chain(&chain);
        let modulus = &height / &circ;
        cylinders.push(Cylinder {
            id: j,
            circumference: circ,
            height,
            modulus,
            bottom: bottom.clone(),
            top: tops[ti].clone(),
            core_rel,
            core_abs,
        });
    }
    log::debug!("direction {}: {} cylinders", v, cylinders.len());
    Ok(Decomposition { direction: dir.clone(), rotation: rot, saddle_connections: scs, cylinders })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistSign {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct MultiTwist {
    pub decomposition: Decomposition,
    pub sign: TwistSign,
    /// Shear of the horizontalized surface, [[1, μ], [0, 1]].
    pub shear: QuadNumber,
    pub twist_numbers: Vec<BigInt>,
    pub derivative: Mat2K,
    /// f_* on H1(M, P; Z).
    pub action_matrix: IntMatrix,
    /// f_* on H1(M°; Z).
    pub abs_action: IntMatrix,
}

/// φ = Σ_j t_j γ_j ⊗ i(·, γ°_j).
fn phi_from(h: &HomologyModel, cyls: &[Cylinder], t: &[BigInt]) -> IntMatrix {
    let n = h.rank;
    let mut phi = IntMatrix::zeros(n, n);
    for (c, tj) in cyls.iter().zip(t) {
        let py = h.pairing_matrix.mul_vec(&c.core_abs); // x ↦ x·py = i(x, γ°)
        for r in 0..n {
            for col in 0..n {
                let add = tj * &c.core_rel[r] * &py[col];
                if !add.is_zero() {
                    let cur = phi.get(r, col).clone();
                    phi.set(r, col, cur + add);
                }
            }
        }
    }
    phi
}

/// y ↦ y − Σ_j t_j i(γ_j, y) γ°_j on absolute classes.
fn abs_action_from(h: &HomologyModel, cyls: &[Cylinder], t: &[BigInt]) -> IntMatrix {
    let n = h.rank;
    let mut m = IntMatrix::identity(n);
    for (c, tj) in cyls.iter().zip(t) {
        let gx = h.pairing_matrix.transpose().mul_vec(&c.core_rel); // y ↦ gx·y = i(γ, y)
        for r in 0..n {
            for col in 0..n {
                let sub = tj * &c.core_abs[r] * &gx[col];
                if !sub.is_zero() {
                    let cur = m.get(r, col).clone();
                    m.set(r, col, cur - sub);
                }
            }
        }
    }
    m
}

pub fn multi_twist(
    h: &HomologyModel,
    dec: &Decomposition,
    sign: TwistSign,
) -> Result<MultiTwist, CylinderError> {
    let cyls = &dec.cylinders;
    if cyls.is_empty() {
        return Err(CylinderError::Inconsistent("empty decomposition".into()));
    }
    let m1 = &cyls[0].modulus;
    let mut ratios = Vec::with_capacity(cyls.len());
    for c in cyls {
        let r = (&c.modulus / m1).to_rational().ok_or(CylinderError::Incommensurable)?;
        ratios.push(r);
    }
    let l = ratios.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let g = ratios.iter().fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()));
    let qmul = Rational::new(l, g);
    let mags: Vec<BigInt> = ratios.iter().map(|r| (r * &qmul).to_integer()).collect();
    let mu = &QuadNumber::rational(qmul) / m1;
    let (shear, t): (QuadNumber, Vec<BigInt>) = match sign {
        TwistSign::Right => (mu, mags.iter().map(|x| -x).collect()),
        TwistSign::Left => (-mu, mags),
    };
    let rot = &dec.rotation;
    let derivative = rot.inverse()?.mul(&Mat2K::shear(shear.clone())).mul(rot);
    let phi = phi_from(h, cyls, &t);
    let action_matrix = IntMatrix::identity(h.rank).add(&phi);
    let abs_action = abs_action_from(h, cyls, &t);
    Ok(MultiTwist {
        decomposition: dec.clone(),
        sign,
        shear,
        twist_numbers: t,
        derivative,
        action_matrix,
        abs_action,
    })
}

impl MultiTwist {
    pub fn phi(&self) -> IntMatrix {
        self.action_matrix.sub(&IntMatrix::identity(self.action_matrix.rows()))
    }
}

pub fn phi_map(t: &MultiTwist) -> IntMatrix {
    t.phi()
}

pub fn core_span(h: &HomologyModel, cyls: &[Cylinder]) -> Submodule {
    Submodule::from_vectors(h.rank, &cyls.iter().map(|c| c.core_rel.clone()).collect::<Vec<_>>())
}

/// Candidate directions for sweeps: primitive integer vectors of small
/// height, plus directions between polygon vertices.
pub fn sweep_candidates(s: &TranslationSurface, max: usize) -> Vec<Direction> {
    let mut out: Vec<Direction> = Vec::new();
    let push = |v: Vec2K, out: &mut Vec<Direction>| {
        if let Ok(d) = Direction::new(v) {
            if !out.iter().any(|o| o.vector().cross(d.vector()).is_zero()) {
                out.push(d);
            }
        }
    };
    for (a, b) in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2), (3, 1), (1, 3), (3, -1), (1, -3), (3, 2), (2, 3)] {
        push(Vec2K::ints(a, b), &mut out);
    }
    if s.field_d() != 0 {
        let mut extra = Vec::new();
        for poly in s.polygons() {
            for i in 0..poly.len() {
                for j in 0..poly.len() {
                    if i != j {
                        extra.push(poly.vertex(j) - poly.vertex(i));
                    }
                }
            }
        }
        for v in extra {
            push(v, &mut out);
        }
    }
    out.truncate(max);
    out
}

/// Decompose every candidate direction in parallel, keeping the periodic ones.
pub fn sweep(
    s: &TranslationSurface,
    h: &HomologyModel,
    dirs: &[Direction],
    cap: usize,
) -> Vec<(Direction, Result<Decomposition, CylinderError>)> {
    use rayon::prelude::*;
    dirs.par_iter().map(|d| (d.clone(), decompose(s, h, d, cap))).collect()
}
