//! Cellular models of H1(M, P; Z) and H1(M°; Z), the intersection pairing,
//! holonomy and the holonomy-free submodules W and W0.
//!
//! Relative classes are coordinate vectors in the basis `rel_basis_chains`;
//! absolute classes are coordinate vectors in the dual-cycle basis
//! `abs_basis`. Chains and dual chains live in pair coordinates Z^E, one
//! coordinate per glued edge pair (oriented as its representative edge).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{rational_embed, Rational, Vec2K};
use crate::lattice::{
    clear_denominators, intersect, kernel, rank, smith, vec_dot, IntMatrix, SpanSolver, Submodule,
};
use crate::surface::{EdgeRef, TranslationSurface};
use crate::trace::{crossing_vector, Crossing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("holonomy image has odd rank {0}")]
    OddHolonomyRank(usize),
    #[error("relative homology has torsion")]
    Torsion,
    #[error("rank check failed: {0}")]
    RankCheck(String),
    #[error("vector is not a dual cycle")]
    NotACycle,
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_faces: usize,
    /// (start class, end class) of each representative edge.
    pub edge_ends: Vec<(usize, usize)>,
    /// Row f: boundary word of face f in pair coordinates.
    pub face_boundary: IntMatrix,
    /// Dual edge of pair e runs from face .0 to face .1.
    pub dual_edges: Vec<(usize, usize)>,
    /// +1 when the dual edge crosses the representative from right to left.
    pub sigma: Vec<i64>,
}

impl CellComplex {
    pub fn build(s: &TranslationSurface) -> Self {
        let e_count = s.num_edges();
        let f_count = s.num_polygons();
        let mut edge_ends = Vec::with_capacity(e_count);
        let mut dual_edges = Vec::with_capacity(e_count);
        let mut sigma = Vec::with_capacity(e_count);
        for pair in s.pairs() {
            let rep = pair.rep;
            let n = s.polygon(rep.polygon).len();
            let a = s.corner_class(crate::surface::Corner::new(rep.polygon, rep.edge));
            let b = s.corner_class(crate::surface::Corner::new(rep.polygon, (rep.edge + 1) % n));
            edge_ends.push((a, b));
            // left of the representative is its own polygon
            let left = rep.polygon;
            let right = pair.partner.polygon;
            if right <= left {
                dual_edges.push((right, left));
                sigma.push(1);
            } else {
                dual_edges.push((left, right));
                sigma.push(-1);
            }
        }
        let mut fb = IntMatrix::zeros(f_count, e_count);
        for p in 0..f_count {
            for i in 0..s.polygon(p).len() {
                let (k, is_rep) = s.pair_of(EdgeRef::new(p, i));
                let cur = fb.get(p, k).clone();
                fb.set(p, k, cur + if is_rep { 1 } else { -1 });
            }
        }
        CellComplex {
            num_vertices: s.num_marked(),
            num_edges: e_count,
            num_faces: f_count,
            edge_ends,
            face_boundary: fb,
            dual_edges,
            sigma,
        }
    }

    /// ∂1 as a V × E matrix.
    pub fn edge_boundary(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.num_vertices, self.num_edges);
        for (e, &(a, b)) in self.edge_ends.iter().enumerate() {
            let va = m.get(a, e).clone();
            m.set(a, e, va - 1);
            let vb = m.get(b, e).clone();
            m.set(b, e, vb + 1);
        }
        m
    }

    /// Boundary of the dual 1-chains (dual-edge orientation), F × E.
    pub fn dual_boundary(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.num_faces, self.num_edges);
        for (e, &(a, b)) in self.dual_edges.iter().enumerate() {
            let va = m.get(a, e).clone();
            m.set(a, e, va - 1);
            let vb = m.get(b, e).clone();
            m.set(b, e, vb + 1);
        }
        m
    }

    pub fn dual_connected(&self) -> bool {
        let mut seen = vec![false; self.num_faces];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(f) = stack.pop() {
            for &(a, b) in &self.dual_edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == f && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

#[derive(Clone, Debug)]
pub struct HomologyModel {
    pub complex: CellComplex,
    pub genus: usize,
    pub num_marked: usize,
    pub rank: usize,
    /// E × n: relative coordinates of a chain c are c·rel_proj.
    pub rel_proj: IntMatrix,
    /// n × E: chain representatives of the relative basis.
    pub rel_basis_chains: IntMatrix,
    /// n × E: dual-edge vectors of the absolute basis.
    pub abs_basis: IntMatrix,
    abs_solver: SpanSolver,
    /// n × n: pairing_matrix[i][j] = i(rel_i, abs_j).
    pub pairing_matrix: IntMatrix,
    /// Holonomy of each relative basis vector.
    pub hol: Vec<Vec2K>,
    /// 4 × n integer matrix with the same kernel as hol (coordinates over Q).
    pub hol_q: IntMatrix,
    /// #P × n: boundary to 0-chains on P.
    pub boundary_matrix: IntMatrix,
    /// #P × n: J, pairing with clockwise loops around the punctures.
    pub j_matrix: IntMatrix,
    /// Clockwise puncture loops as absolute coordinate vectors.
    pub puncture_loops: Vec<Vec<BigInt>>,
    pub w: Submodule,
    pub w0: Submodule,
    pub ker_boundary: Submodule,
    pub holonomy_degree: usize,
    pub hol_rank_rel: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Ranks {
    pub rk_rel: usize,
    #[serde(rename = "rk_W")]
    pub rk_w: usize,
    #[serde(rename = "rk_W0")]
    pub rk_w0: usize,
    pub k_degree: usize,
}

impl HomologyModel {
    pub fn build(s: &TranslationSurface) -> Result<Self, HomologyError> {
        let complex = CellComplex::build(s);
        let e = complex.num_edges;
        debug_assert!(complex.edge_boundary().mul(&complex.face_boundary.transpose()).is_zero());
        if !complex.dual_connected() {
            return Err(HomologyError::RankCheck("dual graph disconnected".into()));
        }

        // relative homology: Z^E / rowspace(face_boundary)
        let sm = smith(&complex.face_boundary);
        if sm.diagonal().iter().any(|d| !d.is_one()) {
            return Err(HomologyError::Torsion);
        }
        let r = sm.rank;
        let n = e - r;
        let rel_proj = sm.v.select_cols(r..e);
        let rel_basis_chains = sm.v_inv.select_rows(r..e);
        let genus = s.genus();
        let num_marked = s.num_marked();
        if n != 2 * genus + num_marked - 1 {
            return Err(HomologyError::RankCheck(format!(
                "rk H1(M,P) = {n}, expected {}",
                2 * genus + num_marked - 1
            )));
        }

        // absolute homology of the punctured surface: dual cycle space
        let abs = kernel(&complex.dual_boundary());
        if abs.rank() != n {
            return Err(HomologyError::RankCheck(format!("rk H1(M°) = {}, expected {n}", abs.rank())));
        }
        let abs_basis = abs.basis().clone();
        let abs_solver = abs.solver();

        let mut pairing = IntMatrix::zeros(n, n);
        for i in 0..n {
            let a = rel_basis_chains.row(i);
            for j in 0..n {
                let b = abs_basis.row(j);
                let v: BigInt = (0..e).map(|k| &a[k] * &b[k] * complex.sigma[k]).sum();
                pairing.set(i, j, v);
            }
        }

        let hol: Vec<Vec2K> = (0..n)
            .map(|i| {
                let c = rel_basis_chains.row(i);
                let mut v = Vec2K::zero();
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        v = v + s.pair_vector(k).scale(&crate::exactnum::QuadNumber::rational(
                            Rational::from_integer(ck.clone()),
                        ));
                    }
                }
                v
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = (0..4).map(|_| Vec::with_capacity(n)).collect();
        for v in &hol {
            let [xa, xb] = rational_embed(&v.x);
            let [ya, yb] = rational_embed(&v.y);
            rows[0].push(xa);
            rows[1].push(xb);
            rows[2].push(ya);
            rows[3].push(yb);
        }
        let hol_q = clear_denominators(&rows, n);

        let eb = complex.edge_boundary();
        let boundary_matrix = eb.mul(&rel_basis_chains.transpose());

        let mut model = HomologyModel {
            complex,
            genus,
            num_marked,
            rank: n,
            rel_proj,
            rel_basis_chains,
            abs_basis,
            abs_solver,
            pairing_matrix: pairing,
            hol,
            hol_q,
            boundary_matrix,
            j_matrix: IntMatrix::zeros(0, 0),
            puncture_loops: Vec::new(),
            w: Submodule::zero(n),
            w0: Submodule::zero(n),
            ker_boundary: Submodule::zero(n),
            holonomy_degree: 0,
            hol_rank_rel: 0,
        };

        // clockwise loops around each puncture
        let mut loops = Vec::with_capacity(num_marked);
        for class in s.classes() {
            let mut crossings = Vec::new();
            for &c in &class.corners {
                let np = s.polygon(c.polygon).len();
                let edge = EdgeRef::new(c.polygon, (c.vertex + np - 1) % np);
                crossings.push(Crossing { edge, point: Vec2K::zero() });
            }
            let ccw = crossing_vector(s, &crossings);
            let cw: Vec<BigInt> = ccw.iter().map(|x| -x).collect();
            let y = model.abs_coords_of_crossings(&cw)?;
            loops.push(y);
        }
        let mut j = IntMatrix::zeros(num_marked, n);
        for (p, y) in loops.iter().enumerate() {
            for i in 0..n {
                let mut x = vec![BigInt::zero(); n];
                x[i] = BigInt::one();
                j.set(p, i, model.pairing(&x, y));
            }
        }
        model.j_matrix = j;
        model.puncture_loops = loops;

        model.w = kernel(&model.hol_q);
        model.ker_boundary = kernel(&model.boundary_matrix);
        model.w0 = intersect(&model.w, &model.ker_boundary).expect("same ambient");
        let hk = model.hol_q.mul(&model.ker_boundary.basis().transpose());
        let rk_abs = rank(&hk);
        if rk_abs % 2 == 1 {
            return Err(HomologyError::OddHolonomyRank(rk_abs));
        }
        model.holonomy_degree = rk_abs / 2;
        model.hol_rank_rel = rank(&model.hol_q);
        if model.hol_rank_rel != rk_abs {
            log::warn!(
                "holonomy rank on H1(M,P) is {} but on H1(M) is {}; the two holonomy fields may differ",
                model.hol_rank_rel,
                rk_abs
            );
        }
        Ok(model)
    }

    pub fn ranks(&self) -> Ranks {
        Ranks { rk_rel: self.rank, rk_w: self.w.rank(), rk_w0: self.w0.rank(), k_degree: self.holonomy_degree }
    }

    fn check_len(&self, x: &[BigInt]) -> Result<(), HomologyError> {
        if x.len() != self.rank {
            return Err(HomologyError::DimensionMismatch { expected: self.rank, got: x.len() });
        }
        Ok(())
    }

    pub fn rel_coords_of_chain(&self, chain: &[BigInt]) -> Vec<BigInt> {
        self.rel_proj.vec_mul(chain)
    }

    pub fn chain_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rel_basis_chains.vec_mul(x)
    }

    /// Class of a single representative edge (pair k).
    pub fn edge_class(&self, k: usize) -> Vec<BigInt> {
        self.rel_proj.row(k)
    }

    /// Absolute coordinates of a dual 1-cycle given in dual-edge orientation.
    pub fn abs_coords(&self, b: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        self.abs_solver.coordinates(b).ok_or(HomologyError::NotACycle)
    }

    /// Absolute coordinates from signed crossing counts (right-to-left = +1).
    pub fn abs_coords_of_crossings(&self, c: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        let b: Vec<BigInt> = c.iter().zip(&self.complex.sigma).map(|(x, s)| x * s).collect();
        self.abs_coords(&b)
    }

    /// Crossing counts (right-to-left = +1) of an absolute class.
    pub fn crossings_of(&self, y: &[BigInt]) -> Vec<BigInt> {
        let b = self.abs_basis.vec_mul(y);
        b.iter().zip(&self.complex.sigma).map(|(x, s)| x * s).collect()
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        vec_dot(x, &self.pairing_matrix.mul_vec(y))
    }

    pub fn holonomy(&self, x: &[BigInt]) -> Result<Vec2K, HomologyError> {
        self.check_len(x)?;
        let mut v = Vec2K::zero();
        for (xi, h) in x.iter().zip(&self.hol) {
            if !xi.is_zero() {
                v = v + h.scale(&crate::exactnum::QuadNumber::rational(Rational::from_integer(xi.clone())));
            }
        }
        Ok(v)
    }

    pub fn boundary(&self, x: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        self.check_len(x)?;
        Ok(self.boundary_matrix.mul_vec(x))
    }

    pub fn puncture_pairing_j(&self, x: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        self.check_len(x)?;
        Ok(self.j_matrix.mul_vec(x))
    }

    /// W0 recomputed as the kernel of hol restricted to ker ∂.
    pub fn w0_alternative(&self) -> Submodule {
        self.ker_boundary.kernel_of_map(&self.hol_q)
    }

    pub fn in_w(&self, x: &[BigInt]) -> bool {
        self.hol_q.mul_vec(x).iter().all(|v| v.is_zero())
    }

    pub fn pairing_det_abs(&self) -> BigInt {
        self.pairing_matrix.det().abs()
    }
}

pub fn build_homology(s: &TranslationSurface) -> Result<HomologyModel, HomologyError> {
    HomologyModel::build(s)
}

pub fn holonomy_free(h: &HomologyModel) -> (Submodule, Submodule, Ranks) {
    (h.w.clone(), h.w0.clone(), h.ranks())
}
