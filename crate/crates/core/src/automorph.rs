//! Affine automorphisms given combinatorially and their action on homology.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cylinders::MultiTwist;
use crate::exactnum::{Mat2K, QuadNumber, Vec2K};
use crate::homology::{HomologyError, HomologyModel};
use crate::lattice::{smith, IntMatrix, LatticeError, Submodule};
use crate::surface::{Corner, EdgeRef, TranslationSurface};
use crate::trace::{path_chain, trace_from_corner, End};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutoError {
    #[error("polygon map does not match the geometry: {0}")]
    GeometryMismatch(String),
    #[error("gluing not preserved at edge ({0}, {1})")]
    GluingNotPreserved(usize, usize),
    #[error("W or W0 is not preserved")]
    SubspaceNotPreserved,
    #[error("h_f needs ψ0(f) = I and ρ(f) = id")]
    NotInKernels,
    #[error("automorphisms act on different surfaces")]
    Incompatible,
    #[error("edge image could not be traced: {0}")]
    Trace(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Image of one polygon: D·v_i + offset is vertex (shift + i) of the target
/// when det D > 0, and vertex (shift − i) when det D < 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonImage {
    pub source_polygon: usize,
    pub target_polygon: usize,
    #[serde(with = "vec_text")]
    pub offset: Vec2K,
    pub vertex_shift: usize,
}

mod vec_text {
    use crate::exactnum::Vec2K;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec2K, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([v.x.to_string(), v.y.to_string()])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec2K, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(Vec2K::new(
            x.parse().map_err(serde::de::Error::custom)?,
            y.parse().map_err(serde::de::Error::custom)?,
        ))
    }
}

#[derive(Clone, Debug)]
pub struct AffineAuto {
    pub derivative: Mat2K,
    pub polygon_map: Option<Vec<PolygonImage>>,
    /// Signed edge correspondence in pair coordinates (E × E), when known.
    pub edge_map: Option<IntMatrix>,
    /// f_* on H1(M, P; Z).
    pub action_rel: IntMatrix,
    /// f_* on H1(M°; Z).
    pub action_abs: IntMatrix,
    /// ρ(f): puncture v goes to puncture_perm[v].
    pub puncture_perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedActions {
    pub psi0: IntMatrix,
    pub psi: IntMatrix,
}

fn det_sign(d: &Mat2K) -> i64 {
    if d.det().is_negative() {
        -1
    } else {
        1
    }
}

fn image_edge(n: usize, img: &PolygonImage, edge: usize, sign: i64) -> (EdgeRef, i64) {
    if sign > 0 {
        (EdgeRef::new(img.target_polygon, (img.vertex_shift + edge) % n), 1)
    } else {
        // v_i → t_{s−i}, v_{i+1} → t_{s−i−1}: reversed edge s−i−1
        let j = (img.vertex_shift + 2 * n - edge - 1) % n;
        (EdgeRef::new(img.target_polygon, j), -1)
    }
}

fn image_vertex(n: usize, img: &PolygonImage, v: usize, sign: i64) -> usize {
    if sign > 0 {
        (img.vertex_shift + v) % n
    } else {
        (img.vertex_shift + n - v % n) % n
    }
}

/// f_* on relative coordinates from a signed edge map on pair coordinates.
fn rel_action_from_edges(h: &HomologyModel, edge_map: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (0..h.rank)
        .map(|i| h.rel_coords_of_chain(&edge_map.mul_vec(&h.rel_basis_chains.row(i))))
        .collect();
    IntMatrix::from_cols(cols, h.rank)
}

fn abs_action_from_edges(h: &HomologyModel, edge_map: &IntMatrix, sign: i64) -> Result<IntMatrix, AutoError> {
    let mut cols = Vec::with_capacity(h.rank);
    for i in 0..h.rank {
        let mut e = vec![BigInt::zero(); h.rank];
        e[i] = BigInt::one();
        let c = edge_map.mul_vec(&h.crossings_of(&e));
        let c: Vec<BigInt> = c.into_iter().map(|x| x * sign).collect();
        cols.push(h.abs_coords_of_crossings(&c)?);
    }
    Ok(IntMatrix::from_cols(cols, h.rank))
}

pub fn build_auto(
    s: &TranslationSurface,
    h: &HomologyModel,
    derivative: &Mat2K,
    polygon_map: &[PolygonImage],
) -> Result<AffineAuto, AutoError> {
    let np = s.num_polygons();
    if derivative.det().is_zero() {
        return Err(AutoError::GeometryMismatch("singular derivative".into()));
    }
    let sign = det_sign(derivative);
    let mut by_source: Vec<Option<&PolygonImage>> = vec![None; np];
    let mut hit = vec![false; np];
    for img in polygon_map {
        if img.source_polygon >= np || img.target_polygon >= np {
            return Err(AutoError::GeometryMismatch("polygon index out of range".into()));
        }
        if by_source[img.source_polygon].replace(img).is_some() || hit[img.target_polygon] {
            return Err(AutoError::GeometryMismatch("polygon map is not a bijection".into()));
        }
        hit[img.target_polygon] = true;
    }
    let imgs: Vec<&PolygonImage> = by_source
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| AutoError::GeometryMismatch("polygon map is not total".into()))?;
    for img in &imgs {
        let src = s.polygon(img.source_polygon);
        let tgt = s.polygon(img.target_polygon);
        if src.len() != tgt.len() {
            return Err(AutoError::GeometryMismatch(format!("polygon {} changes size", img.source_polygon)));
        }
        let n = src.len();
        for i in 0..n {
            let moved = &derivative.apply(src.vertex(i)) + &img.offset;
            if moved != *tgt.vertex(image_vertex(n, img, i, sign)) {
                return Err(AutoError::GeometryMismatch(format!(
                    "vertex {i} of polygon {} does not land on its image",
                    img.source_polygon
                )));
            }
        }
    }
    let edge_img = |e: EdgeRef| image_edge(s.polygon(e.polygon).len(), imgs[e.polygon], e.edge, sign);
    let ne = s.num_edges();
    let mut edge_map = IntMatrix::zeros(ne, ne);
    for (k, pair) in s.pairs().iter().enumerate() {
        let (a, _) = edge_img(pair.rep);
        let (b, _) = edge_img(pair.partner);
        if s.partner(a) != b {
            return Err(AutoError::GluingNotPreserved(pair.rep.polygon, pair.rep.edge));
        }
        let (a, eps) = edge_img(pair.rep);
        let (k2, is_rep) = s.pair_of(a);
        edge_map.set(k2, k, BigInt::from(if is_rep { eps } else { -eps }));
    }
    let puncture_perm: Vec<usize> = s
        .classes()
        .iter()
        .map(|cl| {
            let c = cl.corners[0];
            let img = imgs[c.polygon];
            let n = s.polygon(c.polygon).len();
            s.corner_class(Corner::new(img.target_polygon, image_vertex(n, img, c.vertex, sign)))
        })
        .collect();
    let action_rel = rel_action_from_edges(h, &edge_map);
    let action_abs = abs_action_from_edges(h, &edge_map, sign)?;
    let auto = AffineAuto {
        derivative: derivative.clone(),
        polygon_map: Some(polygon_map.to_vec()),
        edge_map: Some(edge_map),
        action_rel,
        action_abs,
        puncture_perm,
    };
    debug_assert!(auto.check_holonomy(h));
    Ok(auto)
}

impl AffineAuto {
    pub fn identity(s: &TranslationSurface, h: &HomologyModel) -> Self {
        AffineAuto {
            derivative: Mat2K::identity(),
            polygon_map: None,
            edge_map: Some(IntMatrix::identity(s.num_edges())),
            action_rel: IntMatrix::identity(h.rank),
            action_abs: IntMatrix::identity(h.rank),
            puncture_perm: (0..s.num_marked()).collect(),
        }
    }

    /// A multi-twist fixes every cylinder boundary, hence every puncture.
    pub fn from_multi_twist(t: &MultiTwist, num_marked: usize) -> Self {
        AffineAuto {
            derivative: t.derivative.clone(),
            polygon_map: None,
            edge_map: None,
            action_rel: t.action_matrix.clone(),
            action_abs: t.abs_action.clone(),
            puncture_perm: (0..num_marked).collect(),
        }
    }

    pub fn det_sign(&self) -> i64 {
        det_sign(&self.derivative)
    }

    /// g∘f (apply self first).
    pub fn then(&self, g: &AffineAuto) -> Result<AffineAuto, AutoError> {
        if self.action_rel.rows() != g.action_rel.rows() || self.puncture_perm.len() != g.puncture_perm.len() {
            return Err(AutoError::Incompatible);
        }
        let edge_map = match (&self.edge_map, &g.edge_map) {
            (Some(a), Some(b)) => Some(b.mul(a)),
            _ => None,
        };
        Ok(AffineAuto {
            derivative: g.derivative.mul(&self.derivative),
            polygon_map: None,
            edge_map,
            action_rel: g.action_rel.mul(&self.action_rel),
            action_abs: g.action_abs.mul(&self.action_abs),
            puncture_perm: self.puncture_perm.iter().map(|&v| g.puncture_perm[v]).collect(),
        })
    }

    /// ρ(f) as a permutation matrix on Z^P.
    pub fn rho_matrix(&self) -> IntMatrix {
        let n = self.puncture_perm.len();
        let mut m = IntMatrix::zeros(n, n);
        for (v, &w) in self.puncture_perm.iter().enumerate() {
            m.set(w, v, BigInt::one());
        }
        m
    }

    /// hol(f_* x) = D(f)·hol(x) on every basis vector.
    pub fn check_holonomy(&self, h: &HomologyModel) -> bool {
        (0..h.rank).all(|i| {
            let img = h.holonomy(&self.action_rel.col(i)).expect("dimension");
            img == self.derivative.apply(&h.hol[i])
        })
    }

    /// i(f_* x, f_* y) = sign(det)·i(x, y) as a matrix identity.
    pub fn check_pairing(&self, h: &HomologyModel) -> bool {
        let lhs = self.action_rel.transpose().mul(&h.pairing_matrix).mul(&self.action_abs);
        lhs == h.pairing_matrix.scale(&BigInt::from(self.det_sign()))
    }

    /// J∘f_* = ρ(f)∘J.
    pub fn check_j(&self, h: &HomologyModel) -> bool {
        h.j_matrix.mul(&self.action_rel) == self.rho_matrix().mul(&h.j_matrix)
    }

    pub fn fixes_punctures(&self) -> bool {
        self.puncture_perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

pub fn restrict(h: &HomologyModel, f: &AffineAuto) -> Result<RestrictedActions, AutoError> {
    let map = |e: LatticeError| match e {
        LatticeError::NotPreserved => AutoError::SubspaceNotPreserved,
        _ => AutoError::Incompatible,
    };
    let psi = h.w.restrict_map(&f.action_rel).map_err(map)?;
    let psi0 = h.w0.restrict_map(&f.action_rel).map_err(map)?;
    Ok(RestrictedActions { psi0, psi })
}

/// Rows (ambient vectors) of a complement of W0 inside W.
pub fn w_complement(h: &HomologyModel) -> Vec<Vec<BigInt>> {
    let solver = h.w.solver();
    let coords: Vec<Vec<BigInt>> = h
        .w0
        .basis_vectors()
        .iter()
        .map(|b| solver.coordinates(b).expect("W0 ⊂ W"))
        .collect();
    let r = h.w.rank();
    let r0 = coords.len();
    if r0 == 0 {
        return h.w.basis_vectors();
    }
    // W0 is saturated in W, so the Smith diagonal is all ones and the
    // trailing rows of V⁻¹ complete its basis.
    let sm = smith(&IntMatrix::from_rows(coords, r));
    (r0..r).map(|i| h.w.combination(&sm.v_inv.row(i))).collect()
}

/// h_f: W/W0 → W0, w + W0 ↦ f_*(w) − w, in the basis of w_complement and W0.
pub fn h_f_map(h: &HomologyModel, f: &AffineAuto) -> Result<IntMatrix, AutoError> {
    let ra = restrict(h, f)?;
    if !ra.psi0.is_identity() || !f.fixes_punctures() {
        return Err(AutoError::NotInKernels);
    }
    let w0s = h.w0.solver();
    let comp = w_complement(h);
    let mut cols = Vec::with_capacity(comp.len());
    for w in &comp {
        let d = crate::lattice::vec_sub(&f.action_rel.mul_vec(w), w);
        cols.push(w0s.coordinates(&d).ok_or(AutoError::SubspaceNotPreserved)?);
    }
    Ok(IntMatrix::from_cols(cols, h.w0.rank()))
}

/// Kernel of ψ(f) − sign·I inside W, saturated.
pub fn fixed_subspace(h: &HomologyModel, f: &AffineAuto, sign: i64) -> Submodule {
    let m = f.action_rel.sub(&IntMatrix::identity(h.rank).scale(&BigInt::from(sign)));
    h.w.kernel_of_map(&m).saturate()
}

/// The relative action of a multi-twist computed geometrically: each edge is
/// replaced by the saddle connection with the sheared holonomy, traced from
/// the same corner sector.
pub fn multi_twist_geometric_action(
    s: &TranslationSurface,
    h: &HomologyModel,
    t: &MultiTwist,
    cap: usize,
) -> Result<IntMatrix, AutoError> {
    let rot = &t.decomposition.rotation;
    let rs = s.apply_matrix(rot).map_err(|e| AutoError::Trace(e.to_string()))?;
    let shear = Mat2K::shear(t.shear.clone());
    let ne = s.num_edges();
    let mut edge_map = IntMatrix::zeros(ne, ne);
    for (k, pair) in rs.pairs().iter().enumerate() {
        let c0 = Corner::new(pair.rep.polygon, pair.rep.edge);
        let u = rs.edge_vector(pair.rep);
        let v = shear.apply(&u);
        let turn = u.cross(&v);
        let mut c = c0;
        let budget = rs.classes()[rs.corner_class(c0)].corners.len();
        for _ in 0..=budget {
            if v.in_sector(&rs.corner_u(c), &rs.corner_w(c)) {
                break;
            }
            c = if turn.is_positive() { rs.next_ccw(c) } else { rs.prev_cw(c) };
        }
        if !v.in_sector(&rs.corner_u(c), &rs.corner_w(c)) {
            return Err(AutoError::Trace("no sector for the sheared edge".into()));
        }
        let one = QuadNumber::one();
        let tr = trace_from_corner(&rs, c, &v, Some(&one), cap).map_err(|e| AutoError::Trace(e.to_string()))?;
        if !matches!(tr.end, End::Vertex(_)) || tr.length != one {
            return Err(AutoError::Trace(format!("image of edge pair {k} is not a saddle connection")));
        }
        let chain = path_chain(&rs, &tr);
        for (i, x) in chain.into_iter().enumerate() {
            edge_map.set(i, k, x);
        }
    }
    Ok(rel_action_from_edges(h, &edge_map))
}
