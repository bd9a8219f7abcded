//! Exact straight-line tracing across polygon gluings.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{QuadNumber, Vec2K};
use crate::surface::{Corner, EdgeRef, Polygon, TranslationSurface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("crossing budget of {0} exceeded")]
    CapExceeded(usize),
    #[error("ray left polygon {0} without hitting its boundary")]
    Lost(usize),
}

/// Where a ray starts inside its polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Interior,
    OnEdge(usize),
    AtVertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hit {
    Edge { edge: usize, t: QuadNumber, point: Vec2K },
    Vertex { vertex: usize, t: QuadNumber },
}

impl Hit {
    pub fn t(&self) -> &QuadNumber {
        match self {
            Hit::Edge { t, .. } | Hit::Vertex { t, .. } => t,
        }
    }
}

/// First boundary point hit by p + t·dir for t > 0.
pub fn ray_exit(poly: &Polygon, p: &Vec2K, dir: &Vec2K) -> Option<Hit> {
    let n = poly.len();
    let one = QuadNumber::one();
    let mut best_t: Option<QuadNumber> = None;
    let mut best: Option<Hit> = None;
    for j in 0..n {
        let a = poly.vertex(j);
        let e = poly.edge_vector(j);
        let denom = dir.cross(&e);
        if denom.is_zero() {
            continue;
        }
        let ap = a - p;
        let t = ap.cross(&e) / &denom;
        if !t.is_positive() {
            continue;
        }
        if let Some(bt) = &best_t {
            if t > *bt {
                continue;
            }
        }
        let s = ap.cross(dir) / &denom;
        if s.is_negative() || s > one {
            continue;
        }
        let hit = if s.is_zero() {
            Hit::Vertex { vertex: j, t: t.clone() }
        } else if s == one {
            Hit::Vertex { vertex: (j + 1) % n, t: t.clone() }
        } else {
            Hit::Edge { edge: j, t: t.clone(), point: p + &dir.scale(&t) }
        };
        let replace = match (&best_t, &best) {
            (Some(bt), Some(prev)) if *bt == t => matches!(prev, Hit::Edge { .. }) && matches!(hit, Hit::Vertex { .. }),
            _ => true,
        };
        if replace {
            best_t = Some(t);
            best = Some(hit);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Edge being crossed, as seen from the polygon being left.
    pub edge: EdgeRef,
    pub point: Vec2K,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub polygon: usize,
    pub from: Vec2K,
    pub to: Vec2K,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum End {
    /// Stopped at a vertex; `corner` is the polygon corner where it arrived.
    Vertex(Corner),
    /// Reached the requested length at this point of `polygon`.
    Length { polygon: usize, point: Vec2K },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceResult {
    pub start_polygon: usize,
    pub start: Start,
    pub crossings: Vec<Crossing>,
    pub pieces: Vec<Piece>,
    pub end: End,
    pub length: QuadNumber,
    /// Set when the path runs along a polygon edge from a corner.
    pub along_edge: Option<EdgeRef>,
}

/// Follow p + t·dir from a point of `polygon`, up to total parameter
/// `max_t` if given, crossing at most `cap` edges.
pub fn trace(
    s: &TranslationSurface,
    polygon: usize,
    point: &Vec2K,
    start: Start,
    dir: &Vec2K,
    max_t: Option<&QuadNumber>,
    cap: usize,
) -> Result<TraceResult, TraceError> {
    let mut poly = polygon;
    let mut p = point.clone();
    let mut elapsed = QuadNumber::zero();
    let mut crossings = Vec::new();
    let mut pieces = Vec::new();
    loop {
        let hit = ray_exit(s.polygon(poly), &p, dir).ok_or(TraceError::Lost(poly))?;
        if let Some(mt) = max_t {
            let left = mt - &elapsed;
            if left <= *hit.t() {
                let end_pt = &p + &dir.scale(&left);
                pieces.push(Piece { polygon: poly, from: p, to: end_pt.clone() });
                let end = match (&hit, left == *hit.t()) {
                    (Hit::Vertex { vertex, .. }, true) => End::Vertex(Corner::new(poly, *vertex)),
                    _ => End::Length { polygon: poly, point: end_pt },
                };
                return Ok(TraceResult {
                    start_polygon: polygon,
                    start,
                    crossings,
                    pieces,
                    end,
                    length: mt.clone(),
                    along_edge: None,
                });
            }
        }
        match hit {
            Hit::Vertex { vertex, t } => {
                let to = s.polygon(poly).vertex(vertex).clone();
                pieces.push(Piece { polygon: poly, from: p, to });
                elapsed = elapsed + t;
                return Ok(TraceResult {
                    start_polygon: polygon,
                    start,
                    crossings,
                    pieces,
                    end: End::Vertex(Corner::new(poly, vertex)),
                    length: elapsed,
                    along_edge: None,
                });
            }
            Hit::Edge { edge, t, point } => {
                if crossings.len() >= cap {
                    return Err(TraceError::CapExceeded(cap));
                }
                let e = EdgeRef::new(poly, edge);
                pieces.push(Piece { polygon: poly, from: p, to: point.clone() });
                crossings.push(Crossing { edge: e, point: point.clone() });
                elapsed = elapsed + t;
                let f = s.partner(e);
                p = &point + &s.crossing_translation(e);
                poly = f.polygon;
            }
        }
    }
}

/// Trace from a marked point leaving in direction `dir`. The corner used is
/// the one whose sector contains `dir`; if `dir` runs along that corner's
/// outgoing edge the edge itself is the path.
pub fn trace_from_corner(
    s: &TranslationSurface,
    corner: Corner,
    dir: &Vec2K,
    max_t: Option<&QuadNumber>,
    cap: usize,
) -> Result<TraceResult, TraceError> {
    let c = s.corner_containing(corner, dir);
    let u = s.corner_u(c);
    if u.same_ray(dir) {
        let lambda = if !dir.x.is_zero() { &u.x / &dir.x } else { &u.y / &dir.y };
        let n = s.polygon(c.polygon).len();
        if let Some(mt) = max_t {
            if *mt < lambda {
                let from = s.corner_point(c).clone();
                let to = &from + &dir.scale(mt);
                return Ok(TraceResult {
                    start_polygon: c.polygon,
                    start: Start::AtVertex(c.vertex),
                    crossings: vec![],
                    pieces: vec![Piece { polygon: c.polygon, from, to: to.clone() }],
                    end: End::Length { polygon: c.polygon, point: to },
                    length: mt.clone(),
                    along_edge: Some(EdgeRef::new(c.polygon, c.vertex)),
                });
            }
        }
        let from = s.corner_point(c).clone();
        let to = s.polygon(c.polygon).vertex(c.vertex + 1).clone();
        return Ok(TraceResult {
            start_polygon: c.polygon,
            start: Start::AtVertex(c.vertex),
            crossings: vec![],
            pieces: vec![Piece { polygon: c.polygon, from, to }],
            end: End::Vertex(Corner::new(c.polygon, (c.vertex + 1) % n)),
            length: lambda,
            along_edge: Some(EdgeRef::new(c.polygon, c.vertex)),
        });
    }
    let p = s.corner_point(c).clone();
    trace(s, c.polygon, &p, Start::AtVertex(c.vertex), dir, max_t, cap)
}

/// Add ±1 for polygon edge e to a chain in pair coordinates.
pub fn add_edge(s: &TranslationSurface, chain: &mut [BigInt], e: EdgeRef, k: i64) {
    let (idx, is_rep) = s.pair_of(e);
    chain[idx] += if is_rep { k } else { -k };
}

fn ccw_edges(s: &TranslationSurface, chain: &mut [BigInt], polygon: usize, from: usize, to: usize) {
    // full edges from, from+1, ..., to-1 (cyclically)
    let n = s.polygon(polygon).len();
    let mut i = from % n;
    let to = to % n;
    while i != to {
        add_edge(s, chain, EdgeRef::new(polygon, i), 1);
        i = (i + 1) % n;
    }
}

/// Relative chain (pair coordinates) of a vertex-to-vertex traced path,
/// pushed to the polygon boundaries.
pub fn path_chain(s: &TranslationSurface, tr: &TraceResult) -> Vec<BigInt> {
    let mut chain = vec![BigInt::zero(); s.num_edges()];
    if let Some(e) = tr.along_edge {
        add_edge(s, &mut chain, e, 1);
        return chain;
    }
    let Start::AtVertex(v0) = tr.start else {
        panic!("path_chain needs a path starting at a vertex");
    };
    let End::Vertex(endc) = tr.end else {
        panic!("path_chain needs a path ending at a vertex");
    };
    let mut poly = tr.start_polygon;
    let mut entry = v0; // first full edge index
    for c in &tr.crossings {
        ccw_edges(s, &mut chain, poly, entry, c.edge.edge);
        let f = s.partner(c.edge);
        poly = f.polygon;
        entry = f.edge + 1;
    }
    ccw_edges(s, &mut chain, poly, entry, endc.vertex);
    chain
}

/// Signed crossing counts (right-to-left across the representative = +1)
/// of a traced path, in pair coordinates.
pub fn crossing_vector(s: &TranslationSurface, crossings: &[Crossing]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); s.num_edges()];
    for c in crossings {
        let (idx, is_rep) = s.pair_of(c.edge);
        v[idx] += if is_rep { -1 } else { 1 };
    }
    v
}
