//! Polygonal presentations of translation surfaces with marked points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{is_square_free, Mat2K, NumError, QuadNumber, Vec2K};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("field error: {0}")]
    Num(#[from] NumError),
    #[error("edge not glued correctly: {0}")]
    NotGlued(String),
    #[error("polygon {0} is not a simple counterclockwise polygon")]
    OrientationError(usize),
    #[error("glued edges {0:?} and {1:?} are not opposite translates")]
    EdgeLengthMismatch(EdgeRef, EdgeRef),
    #[error("surface is disconnected")]
    Disconnected,
    #[error("vertex class at corner {0:?} has cone angle {1}·2π but is not marked")]
    UnpuncturedSingularity(Corner, usize),
    #[error("vertex class at corner {0:?} is regular but missing from the marked list; every vertex must be marked")]
    UnmarkedVertex(Corner),
    #[error("invalid marked list: {0}")]
    InvalidMarked(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("field Q(sqrt({0})) does not embed in Q(sqrt({1}))")]
    NoEmbedding(u32, u32),
    #[error("invalid field parameter {0}")]
    BadField(u32),
    #[error("surface has no polygons")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

/// Corner of a polygon at vertex `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub polygon: usize,
    pub vertex: usize,
}

impl Corner {
    pub fn new(polygon: usize, vertex: usize) -> Self {
        Corner { polygon, vertex }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<Vec2K>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2K>) -> Self {
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2K {
        &self.vertices[i % self.len()]
    }

    /// Vector of edge i, from vertex i to vertex i+1.
    pub fn edge_vector(&self, i: usize) -> Vec2K {
        let n = self.len();
        &self.vertices[(i + 1) % n] - &self.vertices[i % n]
    }

    pub fn area(&self) -> QuadNumber {
        let n = self.len();
        let mut twice = QuadNumber::zero();
        for i in 0..n {
            twice = twice + self.vertices[i].cross(&self.vertices[(i + 1) % n]);
        }
        twice * QuadNumber::from_frac(1, 2)
    }

    pub fn centroid_f64(&self) -> (f64, f64) {
        // area-weighted centroid
        let n = self.len();
        let pts: Vec<(f64, f64)> = self.vertices.iter().map(|v| v.to_f64()).collect();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            let c = x0 * y1 - x1 * y0;
            a += c;
            cx += (x0 + x1) * c;
            cy += (y0 + y1) * c;
        }
        (cx / (3.0 * a), cy / (3.0 * a))
    }

    fn is_simple_ccw(&self) -> bool {
        let n = self.len();
        if n < 3 || !self.area().is_positive() {
            return false;
        }
        for i in 0..n {
            let e = self.edge_vector(i);
            if e.is_zero() {
                return false;
            }
            let f = self.edge_vector(i + 1);
            if e.cross(&f).is_zero() && e.dot(&f).is_negative() {
                return false;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_meet(
                    self.vertex(i),
                    self.vertex(i + 1),
                    self.vertex(j),
                    self.vertex(j + 1),
                ) {
                    return false;
                }
            }
        }
        true
    }
}

fn orient(a: &Vec2K, b: &Vec2K, c: &Vec2K) -> i32 {
    (b - a).cross(&(c - a)).sign()
}

fn on_segment(a: &Vec2K, b: &Vec2K, p: &Vec2K) -> bool {
    let lo_x = a.x.clone().min(b.x.clone());
    let hi_x = a.x.clone().max(b.x.clone());
    let lo_y = a.y.clone().min(b.y.clone());
    let hi_y = a.y.clone().max(b.y.clone());
    p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y
}

/// Do the closed segments [a,b] and [c,d] share a point?
pub fn segments_meet(a: &Vec2K, b: &Vec2K, c: &Vec2K, d: &Vec2K) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeFlag {
    True,
    False,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub name: String,
    pub veech_group_is_lattice: LatticeFlag,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata { name: String::new(), veech_group_is_lattice: LatticeFlag::Unknown }
    }
}

/// Which vertex classes are marked, and in what order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkedSpec {
    AllVertices,
    /// One corner per vertex class; fixes the order of P.
    Explicit(Vec<Corner>),
}

/// Unvalidated surface data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub field_d: u32,
    pub polygons: Vec<Polygon>,
    pub gluings: Vec<(EdgeRef, EdgeRef)>,
    pub marked: MarkedSpec,
    pub metadata: Metadata,
}

impl SurfaceSpec {
    pub fn validate(&self) -> Result<TranslationSurface, SurfaceError> {
        TranslationSurface::new(self.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgePair {
    pub rep: EdgeRef,
    pub partner: EdgeRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// Corners in counterclockwise order around the point.
    pub corners: Vec<Corner>,
    /// Cone angle divided by 2π.
    pub cone_multiple: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub genus: usize,
    pub num_marked: usize,
    pub area: String,
    pub cone_angle_list: Vec<usize>,
    pub num_polygons: usize,
    pub num_edges: usize,
    pub field_d: u32,
}

/// A validated translation surface; P is the set of all vertex classes,
/// indexed in `classes()` order.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    spec: SurfaceSpec,
    pairs: Vec<EdgePair>,
    partner: Vec<Vec<EdgeRef>>,
    pair_index: Vec<Vec<(usize, bool)>>,
    corner_class: Vec<Vec<usize>>,
    classes: Vec<VertexClass>,
    area: QuadNumber,
}

impl TranslationSurface {
    pub fn new(mut spec: SurfaceSpec) -> Result<Self, SurfaceError> {
        let d = spec.field_d;
        if d != 0 && !is_square_free(d as u64) {
            return Err(SurfaceError::BadField(d));
        }
        if spec.polygons.is_empty() {
            return Err(SurfaceError::Empty);
        }
        for poly in spec.polygons.iter_mut() {
            for v in poly.vertices.iter_mut() {
                *v = v.in_field(d)?;
            }
        }
        for (i, poly) in spec.polygons.iter().enumerate() {
            if !poly.is_simple_ccw() {
                return Err(SurfaceError::OrientationError(i));
            }
        }

        let np = spec.polygons.len();
        let mut partner: Vec<Vec<Option<EdgeRef>>> =
            spec.polygons.iter().map(|p| vec![None; p.len()]).collect();
        let mut pair_index: Vec<Vec<(usize, bool)>> =
            spec.polygons.iter().map(|p| vec![(usize::MAX, false); p.len()]).collect();
        let mut pairs = Vec::with_capacity(spec.gluings.len());
        for (k, &(a, b)) in spec.gluings.iter().enumerate() {
            for e in [a, b] {
                if e.polygon >= np || e.edge >= spec.polygons[e.polygon].len() {
                    return Err(SurfaceError::NotGlued(format!("edge {e:?} does not exist")));
                }
            }
            if a == b {
                return Err(SurfaceError::NotGlued(format!("edge {a:?} glued to itself")));
            }
            for e in [a, b] {
                if partner[e.polygon][e.edge].is_some() {
                    return Err(SurfaceError::NotGlued(format!("edge {e:?} glued twice")));
                }
            }
            let va = spec.polygons[a.polygon].edge_vector(a.edge);
            let vb = spec.polygons[b.polygon].edge_vector(b.edge);
            if !(&va + &vb).is_zero() {
                return Err(SurfaceError::EdgeLengthMismatch(a, b));
            }
            partner[a.polygon][a.edge] = Some(b);
            partner[b.polygon][b.edge] = Some(a);
            pair_index[a.polygon][a.edge] = (k, true);
            pair_index[b.polygon][b.edge] = (k, false);
            pairs.push(EdgePair { rep: a, partner: b });
        }
        let mut full_partner = Vec::with_capacity(np);
        for (p, row) in partner.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, e) in row.into_iter().enumerate() {
                match e {
                    Some(e) => r.push(e),
                    None => {
                        return Err(SurfaceError::NotGlued(format!(
                            "edge {:?} has no partner",
                            EdgeRef::new(p, i)
                        )))
                    }
                }
            }
            full_partner.push(r);
        }

        // connectivity
        let mut seen = vec![false; np];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in &full_partner[p] {
                if !seen[e.polygon] {
                    seen[e.polygon] = true;
                    stack.push(e.polygon);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(SurfaceError::Disconnected);
        }

        let mut surf = TranslationSurface {
            spec,
            pairs,
            partner: full_partner,
            pair_index,
            corner_class: Vec::new(),
            classes: Vec::new(),
            area: QuadNumber::zero(),
        };
        surf.area = surf
            .spec
            .polygons
            .iter()
            .fold(QuadNumber::zero(), |acc, p| acc + p.area());

        // vertex classes in scan order
        let mut corner_class: Vec<Vec<usize>> =
            surf.spec.polygons.iter().map(|p| vec![usize::MAX; p.len()]).collect();
        let mut classes = Vec::new();
        for p in 0..np {
            for i in 0..surf.spec.polygons[p].len() {
                if corner_class[p][i] != usize::MAX {
                    continue;
                }
                let start = Corner::new(p, i);
                let mut corners = vec![start];
                corner_class[p][i] = classes.len();
                let mut c = surf.next_ccw(start);
                while c != start {
                    corner_class[c.polygon][c.vertex] = classes.len();
                    corners.push(c);
                    c = surf.next_ccw(c);
                }
                let r = surf.corner_u(start);
                let cone_multiple = corners
                    .iter()
                    .filter(|&&c| r.in_sector(&surf.corner_u(c), &surf.corner_w(c)))
                    .count();
                classes.push(VertexClass { corners, cone_multiple });
            }
        }

        // order P
        let order: Vec<usize> = match &surf.spec.marked {
            MarkedSpec::AllVertices => (0..classes.len()).collect(),
            MarkedSpec::Explicit(list) => {
                let mut order = Vec::with_capacity(list.len());
                for c in list {
                    if c.polygon >= np || c.vertex >= surf.spec.polygons[c.polygon].len() {
                        return Err(SurfaceError::InvalidMarked(format!("corner {c:?} does not exist")));
                    }
                    let k = corner_class[c.polygon][c.vertex];
                    if order.contains(&k) {
                        return Err(SurfaceError::InvalidMarked(format!(
                            "corner {c:?} repeats an already marked vertex class"
                        )));
                    }
                    order.push(k);
                }
                for (k, cl) in classes.iter().enumerate() {
                    if !order.contains(&k) {
                        if cl.cone_multiple != 1 {
                            return Err(SurfaceError::UnpuncturedSingularity(
                                cl.corners[0],
                                cl.cone_multiple,
                            ));
                        }
                        return Err(SurfaceError::UnmarkedVertex(cl.corners[0]));
                    }
                }
                order
            }
        };
        let mut remap = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut sorted: Vec<Option<VertexClass>> = vec![None; classes.len()];
        for (old, cl) in classes.into_iter().enumerate() {
            sorted[remap[old]] = Some(cl);
        }
        surf.classes = sorted.into_iter().map(|c| c.expect("class permutation")).collect();
        for row in corner_class.iter_mut() {
            for k in row.iter_mut() {
                *k = remap[*k];
            }
        }
        surf.corner_class = corner_class;

        let inv = surf.invariants();
        let excess: i64 = surf.classes.iter().map(|c| c.cone_multiple as i64 - 1).sum();
        assert_eq!(excess, 2 * inv.genus as i64 - 2, "Gauss-Bonnet violated");
        log::debug!(
            "validated surface '{}': genus {}, {} marked points",
            surf.spec.metadata.name,
            inv.genus,
            inv.num_marked
        );
        Ok(surf)
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn field_d(&self) -> u32 {
        self.spec.field_d
    }

    pub fn metadata(&self) -> &Metadata {
        &self.spec.metadata
    }

    pub fn name(&self) -> &str {
        &self.spec.metadata.name
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.spec.polygons
    }

    pub fn polygon(&self, p: usize) -> &Polygon {
        &self.spec.polygons[p]
    }

    pub fn num_polygons(&self) -> usize {
        self.spec.polygons.len()
    }

    pub fn pairs(&self) -> &[EdgePair] {
        &self.pairs
    }

    pub fn num_edges(&self) -> usize {
        self.pairs.len()
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.polygon][e.edge]
    }

    /// (pair index, whether `e` is the representative of its pair).
    pub fn pair_of(&self, e: EdgeRef) -> (usize, bool) {
        self.pair_index[e.polygon][e.edge]
    }

    pub fn edge_vector(&self, e: EdgeRef) -> Vec2K {
        self.spec.polygons[e.polygon].edge_vector(e.edge)
    }

    /// Holonomy of the representative edge of pair k.
    pub fn pair_vector(&self, k: usize) -> Vec2K {
        self.edge_vector(self.pairs[k].rep)
    }

    /// Translation carrying polygon `e.polygon`'s coordinates to those of the
    /// partner polygon across edge e.
    pub fn crossing_translation(&self, e: EdgeRef) -> Vec2K {
        let f = self.partner(e);
        let pe = self.polygon(e.polygon);
        let pf = self.polygon(f.polygon);
        // start of e is glued to the end of f
        pf.vertex(f.edge + 1) - pe.vertex(e.edge)
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn num_marked(&self) -> usize {
        self.classes.len()
    }

    pub fn corner_class(&self, c: Corner) -> usize {
        self.corner_class[c.polygon][c.vertex]
    }

    pub fn corner_point(&self, c: Corner) -> &Vec2K {
        self.polygon(c.polygon).vertex(c.vertex)
    }

    /// Outgoing edge direction at a corner.
    pub fn corner_u(&self, c: Corner) -> Vec2K {
        self.polygon(c.polygon).edge_vector(c.vertex)
    }

    /// Reverse of the incoming edge direction at a corner.
    pub fn corner_w(&self, c: Corner) -> Vec2K {
        let n = self.polygon(c.polygon).len();
        -self.polygon(c.polygon).edge_vector((c.vertex + n - 1) % n)
    }

    /// Next corner counterclockwise around the same point.
    pub fn next_ccw(&self, c: Corner) -> Corner {
        let n = self.polygon(c.polygon).len();
        let e = self.partner(EdgeRef::new(c.polygon, (c.vertex + n - 1) % n));
        Corner::new(e.polygon, e.edge)
    }

    pub fn prev_cw(&self, c: Corner) -> Corner {
        let e = self.partner(EdgeRef::new(c.polygon, c.vertex));
        let n = self.polygon(e.polygon).len();
        Corner::new(e.polygon, (e.edge + 1) % n)
    }

    /// The corner at the same point whose half-open sector [u, w) contains `dir`.
    pub fn corner_containing(&self, c: Corner, dir: &Vec2K) -> Corner {
        let class = &self.classes[self.corner_class(c)];
        let mut cur = c;
        for _ in 0..class.corners.len() {
            if dir.in_sector(&self.corner_u(cur), &self.corner_w(cur)) {
                return cur;
            }
            cur = self.next_ccw(cur);
        }
        panic!("direction not found around vertex class");
    }

    pub fn area(&self) -> &QuadNumber {
        &self.area
    }

    pub fn genus(&self) -> usize {
        let chi = self.classes.len() as i64 - self.pairs.len() as i64 + self.num_polygons() as i64;
        ((2 - chi) / 2) as usize
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        SurfaceInvariants {
            genus: self.genus(),
            num_marked: self.classes.len(),
            area: self.area.to_string(),
            cone_angle_list: self.classes.iter().map(|c| c.cone_multiple).collect(),
            num_polygons: self.num_polygons(),
            num_edges: self.num_edges(),
            field_d: self.field_d(),
        }
    }

    fn marked_as_corners(&self) -> Vec<Corner> {
        self.classes.iter().map(|c| c.corners[0]).collect()
    }

    pub fn apply_matrix(&self, a: &Mat2K) -> Result<TranslationSurface, SurfaceError> {
        let det = a.det();
        if det.is_zero() {
            return Err(SurfaceError::SingularMatrix);
        }
        for x in a.entries() {
            x.in_field(self.field_d())?;
        }
        let flip = det.is_negative();
        let mut spec = self.spec.clone();
        for poly in spec.polygons.iter_mut() {
            let mapped: Vec<Vec2K> = poly.vertices.iter().map(|v| a.apply(v)).collect();
            poly.vertices = if flip {
                let n = mapped.len();
                (0..n).map(|k| mapped[(n - k) % n].clone()).collect()
            } else {
                mapped
            };
        }
        if flip {
            let edge_map = |e: EdgeRef| {
                let n = self.polygon(e.polygon).len();
                EdgeRef::new(e.polygon, n - 1 - e.edge)
            };
            let corner_map = |c: Corner| {
                let n = self.polygon(c.polygon).len();
                Corner::new(c.polygon, (n - c.vertex) % n)
            };
            spec.gluings = spec.gluings.iter().map(|&(x, y)| (edge_map(x), edge_map(y))).collect();
            spec.marked = MarkedSpec::Explicit(self.marked_as_corners().into_iter().map(corner_map).collect());
        }
        TranslationSurface::new(spec)
    }

    pub fn rebase_field(&self, d_new: u32) -> Result<TranslationSurface, SurfaceError> {
        let d = self.field_d();
        if d == d_new {
            return Ok(self.clone());
        }
        if d != 0 {
            return Err(SurfaceError::NoEmbedding(d, d_new));
        }
        let mut spec = self.spec.clone();
        spec.field_d = d_new;
        TranslationSurface::new(spec)
    }
}

// ---------------------------------------------------------------------------
// JSON surface format

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarkedJson {
    Keyword(String),
    List(Vec<[usize; 2]>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub field_d: u32,
    pub polygons: Vec<Vec<[String; 2]>>,
    pub gluings: Vec<[[usize; 2]; 2]>,
    pub marked: MarkedJson,
    #[serde(default)]
    pub metadata: MetadataJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetadataJson {
    #[serde(default)]
    pub name: String,
    #[serde(default = "unknown_flag")]
    pub veech_group_is_lattice: LatticeFlag,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

fn unknown_flag() -> LatticeFlag {
    LatticeFlag::Unknown
}

impl Default for MetadataJson {
    fn default() -> Self {
        MetadataJson { name: String::new(), veech_group_is_lattice: LatticeFlag::Unknown, extra: BTreeMap::new() }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("number error: {0}")]
    Num(#[from] NumError),
    #[error("bad marked specification: {0}")]
    Marked(String),
}

impl SurfaceFile {
    pub fn from_spec(spec: &SurfaceSpec) -> Self {
        SurfaceFile {
            field_d: spec.field_d,
            polygons: spec
                .polygons
                .iter()
                .map(|p| p.vertices.iter().map(|v| [v.x.to_string(), v.y.to_string()]).collect())
                .collect(),
            gluings: spec
                .gluings
                .iter()
                .map(|(a, b)| [[a.polygon, a.edge], [b.polygon, b.edge]])
                .collect(),
            marked: match &spec.marked {
                MarkedSpec::AllVertices => MarkedJson::Keyword("all_vertices".into()),
                MarkedSpec::Explicit(l) => MarkedJson::List(l.iter().map(|c| [c.polygon, c.vertex]).collect()),
            },
            metadata: MetadataJson {
                name: spec.metadata.name.clone(),
                veech_group_is_lattice: spec.metadata.veech_group_is_lattice,
                extra: BTreeMap::new(),
            },
        }
    }

    pub fn to_spec(&self) -> Result<SurfaceSpec, FormatError> {
        let mut polygons = Vec::with_capacity(self.polygons.len());
        for p in &self.polygons {
            let mut vs = Vec::with_capacity(p.len());
            for [x, y] in p {
                let x: QuadNumber = x.parse()?;
                let y: QuadNumber = y.parse()?;
                vs.push(Vec2K::new(x, y));
            }
            polygons.push(Polygon::new(vs));
        }
        let marked = match &self.marked {
            MarkedJson::Keyword(k) if k == "all_vertices" => MarkedSpec::AllVertices,
            MarkedJson::Keyword(k) => return Err(FormatError::Marked(k.clone())),
            MarkedJson::List(l) => MarkedSpec::Explicit(l.iter().map(|&[p, v]| Corner::new(p, v)).collect()),
        };
        Ok(SurfaceSpec {
            field_d: self.field_d,
            polygons,
            gluings: self
                .gluings
                .iter()
                .map(|&[[p, e], [q, f]]| (EdgeRef::new(p, e), EdgeRef::new(q, f)))
                .collect(),
            marked,
            metadata: Metadata {
                name: self.metadata.name.clone(),
                veech_group_is_lattice: self.metadata.veech_group_is_lattice,
            },
        })
    }

    pub fn parse(text: &str) -> Result<SurfaceSpec, FormatError> {
        let f: SurfaceFile = serde_json::from_str(text)?;
        f.to_spec()
    }

    /// Canonical pretty-printed JSON.
    pub fn render(spec: &SurfaceSpec) -> String {
        serde_json::to_string_pretty(&SurfaceFile::from_spec(spec)).expect("surface serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unit_square_torus() -> SurfaceSpec {
        SurfaceSpec {
            field_d: 0,
            polygons: vec![Polygon::new(vec![
                Vec2K::ints(0, 0),
                Vec2K::ints(1, 0),
                Vec2K::ints(1, 1),
                Vec2K::ints(0, 1),
            ])],
            gluings: vec![
                (EdgeRef::new(0, 0), EdgeRef::new(0, 2)),
                (EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
            ],
            marked: MarkedSpec::AllVertices,
            metadata: Metadata::default(),
        }
    }

    #[test]
    fn torus_invariants() {
        let s = unit_square_torus().validate().unwrap();
        let inv = s.invariants();
        assert_eq!(inv.genus, 1);
        assert_eq!(inv.num_marked, 1);
        assert_eq!(inv.area, "1");
        assert_eq!(inv.cone_angle_list, vec![1]);
    }

    #[test]
    fn bad_gluing_lengths() {
        let mut spec = unit_square_torus();
        spec.polygons[0].vertices[2] = Vec2K::ints(2, 1);
        spec.polygons[0].vertices[1] = Vec2K::ints(2, 0);
        spec.polygons[0].vertices[3] = Vec2K::ints(0, 2);
        assert!(matches!(spec.validate(), Err(SurfaceError::EdgeLengthMismatch(_, _))));
    }

    #[test]
    fn unglued_and_clockwise() {
        let mut spec = unit_square_torus();
        spec.gluings.pop();
        assert!(matches!(spec.validate(), Err(SurfaceError::NotGlued(_))));
        let mut spec = unit_square_torus();
        spec.polygons[0].vertices.reverse();
        assert!(matches!(spec.validate(), Err(SurfaceError::OrientationError(0))));
    }

    #[test]
    fn matrix_application() {
        let s = unit_square_torus().validate().unwrap();
        let same = s.apply_matrix(&Mat2K::identity()).unwrap();
        assert_eq!(same.spec(), s.spec());
        let wide = s.apply_matrix(&Mat2K::ints(2, 0, 0, 1)).unwrap();
        assert_eq!(wide.area(), &QuadNumber::from_int(2));
        let flipped = s.apply_matrix(&Mat2K::ints(1, 0, 0, -1)).unwrap();
        assert_eq!(flipped.invariants().genus, 1);
        assert_eq!(flipped.area(), &QuadNumber::from_int(1));
    }

    #[test]
    fn rebase() {
        let s = unit_square_torus().validate().unwrap();
        let r = s.rebase_field(2).unwrap();
        assert_eq!(r.field_d(), 2);
        assert_eq!(r.invariants().genus, 1);
        assert!(matches!(r.rebase_field(3), Err(SurfaceError::NoEmbedding(2, 3))));
    }

    #[test]
    fn json_round_trip() {
        let spec = unit_square_torus();
        let text = SurfaceFile::render(&spec);
        let back = SurfaceFile::parse(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(SurfaceFile::render(&back), text);
    }
}
