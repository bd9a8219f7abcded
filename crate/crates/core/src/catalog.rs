//! Built-in surfaces and the cylinder/IET generator.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::automorph::PolygonImage;
use crate::exactnum::{Mat2K, QuadNumber, Rational, Vec2K};
use crate::surface::{
    EdgeRef, LatticeFlag, MarkedSpec, Metadata, Polygon, SurfaceError, SurfaceSpec, TranslationSurface,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog surface '{0}'")]
    UnknownName(String),
    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

pub const NAMES: [&str; 4] = [
    "square_torus",
    "domino_torus",
    "eierlegende_wollmilchsau",
    "octagon_double_cover",
];

/// Invariants a catalog entry must reproduce.
#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub genus: usize,
    pub num_marked: usize,
    pub cone_angle_list: Vec<usize>,
    pub area: String,
    pub rk_rel: usize,
    #[serde(rename = "rk_W")]
    pub rk_w: usize,
    #[serde(rename = "rk_W0")]
    pub rk_w0: usize,
    pub k_degree: usize,
    /// (direction, derivative of the right multi-twist)
    #[serde(skip)]
    pub twist_derivatives: Vec<(Vec2K, Mat2K)>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub surface: TranslationSurface,
    pub expected: Expected,
}

fn unit_square() -> Polygon {
    Polygon::new(vec![Vec2K::ints(0, 0), Vec2K::ints(1, 0), Vec2K::ints(1, 1), Vec2K::ints(0, 1)])
}

fn q(s: &str) -> QuadNumber {
    s.parse().expect("catalog constant")
}

fn e(p: usize, i: usize) -> EdgeRef {
    EdgeRef::new(p, i)
}

pub fn square_torus() -> TranslationSurface {
    SurfaceSpec {
        field_d: 0,
        polygons: vec![unit_square()],
        gluings: vec![(e(0, 0), e(0, 2)), (e(0, 1), e(0, 3))],
        marked: MarkedSpec::AllVertices,
        metadata: Metadata { name: "square_torus".into(), veech_group_is_lattice: LatticeFlag::True },
    }
    .validate()
    .expect("square torus")
}

/// Two unit squares stacked vertically (a 1×2 torus), two vertex classes.
/// Pair 0 and 1 are the vertical edges of the lower and upper square,
/// oriented upward.
pub fn domino_torus() -> TranslationSurface {
    let upper = Polygon::new(vec![Vec2K::ints(0, 1), Vec2K::ints(1, 1), Vec2K::ints(1, 2), Vec2K::ints(0, 2)]);
    SurfaceSpec {
        field_d: 0,
        polygons: vec![unit_square(), upper],
        gluings: vec![
            (e(0, 1), e(0, 3)),
            (e(1, 1), e(1, 3)),
            (e(0, 2), e(1, 0)),
            (e(1, 2), e(0, 0)),
        ],
        marked: MarkedSpec::AllVertices,
        metadata: Metadata { name: "domino_torus".into(), veech_group_is_lattice: LatticeFlag::True },
    }
    .validate()
    .expect("domino torus")
}

/// Quaternion group element: sign bit and unit in {1, i, j, k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q8 {
    pub neg: bool,
    pub unit: u8,
}

impl Q8 {
    pub fn all() -> Vec<Q8> {
        (0..8).map(Q8::from_index).collect()
    }

    pub fn from_index(i: usize) -> Q8 {
        Q8 { neg: i >= 4, unit: (i % 4) as u8 }
    }

    pub fn index(self) -> usize {
        self.unit as usize + if self.neg { 4 } else { 0 }
    }

    pub fn mul(self, o: Q8) -> Q8 {
        // unit products: (sign flip, unit)
        const T: [[(bool, u8); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let (flip, unit) = T[self.unit as usize][o.unit as usize];
        Q8 { neg: self.neg ^ o.neg ^ flip, unit }
    }

    pub const ONE: Q8 = Q8 { neg: false, unit: 0 };
    pub const I: Q8 = Q8 { neg: false, unit: 1 };
    pub const J: Q8 = Q8 { neg: false, unit: 2 };
    pub const K: Q8 = Q8 { neg: false, unit: 3 };

    pub fn inverse(self) -> Q8 {
        if self.unit == 0 {
            self
        } else {
            Q8 { neg: !self.neg, unit: self.unit }
        }
    }
}

/// The quaternion origami: square g has g·i to its right and g·j above.
pub fn eierlegende_wollmilchsau() -> TranslationSurface {
    let mut gluings = Vec::new();
    for g in Q8::all() {
        gluings.push((e(g.index(), 1), e(g.mul(Q8::I).index(), 3)));
    }
    for g in Q8::all() {
        gluings.push((e(g.index(), 2), e(g.mul(Q8::J).index(), 0)));
    }
    SurfaceSpec {
        field_d: 0,
        polygons: vec![unit_square(); 8],
        gluings,
        marked: MarkedSpec::AllVertices,
        metadata: Metadata { name: "eierlegende_wollmilchsau".into(), veech_group_is_lattice: LatticeFlag::True },
    }
    .validate()
    .expect("eierlegende wollmilchsau")
}

/// Regular octagon with side √2, edges e_k at angle kπ/4.
pub fn octagon() -> Polygon {
    let pts = [
        ("0", "0"),
        ("sqrt(2)", "0"),
        ("1+sqrt(2)", "1"),
        ("1+sqrt(2)", "1+sqrt(2)"),
        ("sqrt(2)", "2+sqrt(2)"),
        ("0", "2+sqrt(2)"),
        ("-1", "1+sqrt(2)"),
        ("-1", "1"),
    ];
    Polygon::new(pts.iter().map(|(x, y)| Vec2K::new(q(x), q(y))).collect())
}

/// Double cover of the regular octagon surface: crossing the opposite-side
/// pair {k, k+4} changes sheet iff chi[k] = 1.
pub fn octagon_double_cover_with(chi: [u8; 4]) -> Result<TranslationSurface, SurfaceError> {
    let mut gluings = Vec::new();
    for s in 0..2 {
        for k in 0..4 {
            gluings.push((e(s, k), e((s + chi[k] as usize) % 2, k + 4)));
        }
    }
    SurfaceSpec {
        field_d: 2,
        polygons: vec![octagon(), octagon()],
        gluings,
        marked: MarkedSpec::AllVertices,
        metadata: Metadata { name: "octagon_double_cover".into(), veech_group_is_lattice: LatticeFlag::True },
    }
    .validate()
}

/// The sheet-change pattern selected by the brute-force search over all
/// fifteen double covers (see the catalog tests).
pub const OCTAGON_CHI: [u8; 4] = [0, 1, 0, 1];

pub fn octagon_double_cover() -> TranslationSurface {
    octagon_double_cover_with(OCTAGON_CHI).expect("octagon double cover")
}

/// All fifteen nonzero sheet-change patterns, in lexicographic order.
pub fn octagon_cover_candidates() -> Vec<[u8; 4]> {
    (1u8..16).map(|m| [(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1]).collect()
}

pub fn octagon_directions() -> [Vec2K; 3] {
    [Vec2K::ints(1, 0), Vec2K::ints(1, 1), Vec2K::new(q("1+sqrt(2)"), q("1"))]
}

/// The three parabolic derivatives printed for the octagon cover, in the
/// order horizontal, π/4, π/8.
pub fn octagon_published_derivatives() -> [Mat2K; 3] {
    [
        Mat2K::new(q("1"), q("2+sqrt(2)"), q("0"), q("1")),
        Mat2K::new(q("-sqrt(2)"), q("1+sqrt(2)"), q("-1-sqrt(2)"), q("2+sqrt(2)")),
        Mat2K::new(q("-1-sqrt(2)"), q("4+3*sqrt(2)"), q("-sqrt(2)"), q("3+sqrt(2)")),
    ]
}

/// A user-level symmetry of a catalog surface, given as a polygon map.
#[derive(Clone, Debug)]
pub struct CatalogAuto {
    pub label: String,
    pub derivative: Mat2K,
    pub polygon_map: Vec<PolygonImage>,
}

fn image(source: usize, target: usize, offset: Vec2K, shift: usize) -> PolygonImage {
    PolygonImage { source_polygon: source, target_polygon: target, offset, vertex_shift: shift }
}

fn minus_i() -> Mat2K {
    Mat2K::ints(-1, 0, 0, -1)
}

/// Known symmetries of each catalog surface.
pub fn automorphisms(name: &str) -> Result<Vec<CatalogAuto>, CatalogError> {
    let reflect = Mat2K::ints(-1, 0, 0, 1);
    let out = match name {
        "square_torus" => vec![
            CatalogAuto {
                label: "rotation by pi".into(),
                derivative: minus_i(),
                polygon_map: vec![image(0, 0, Vec2K::ints(1, 1), 2)],
            },
            CatalogAuto {
                label: "reflection x -> -x".into(),
                derivative: reflect,
                polygon_map: vec![image(0, 0, Vec2K::ints(1, 0), 1)],
            },
        ],
        "domino_torus" => vec![
            CatalogAuto {
                label: "rotation by pi".into(),
                derivative: minus_i(),
                polygon_map: vec![image(0, 1, Vec2K::ints(1, 2), 2), image(1, 0, Vec2K::ints(1, 2), 2)],
            },
            CatalogAuto {
                label: "reflection x -> -x".into(),
                derivative: reflect,
                polygon_map: vec![image(0, 0, Vec2K::ints(1, 0), 1), image(1, 1, Vec2K::ints(1, 0), 1)],
            },
        ],
        "eierlegende_wollmilchsau" => {
            // rotation by π sends g to k·g·k⁻¹: right and upper neighbours flip
            let rot_pi = Q8::all()
                .into_iter()
                .map(|g| image(g.index(), Q8::K.mul(g).mul(Q8::K.inverse()).index(), Vec2K::ints(1, 1), 2))
                .collect();
            // rotation by π/2 is induced by the automorphism i ↦ j, j ↦ −i, k ↦ k
            let alpha = |g: Q8| -> Q8 {
                let u = match g.unit {
                    0 => Q8::ONE,
                    1 => Q8::J,
                    2 => Q8::I.inverse(),
                    _ => Q8::K,
                };
                if g.neg {
                    u.mul(Q8 { neg: true, unit: 0 })
                } else {
                    u
                }
            };
            let rot_half_pi = Q8::all()
                .into_iter()
                .map(|g| image(g.index(), alpha(g).index(), Vec2K::ints(1, 0), 1))
                .collect();
            vec![
                CatalogAuto { label: "rotation by pi".into(), derivative: minus_i(), polygon_map: rot_pi },
                CatalogAuto {
                    label: "rotation by pi/2".into(),
                    derivative: Mat2K::ints(0, -1, 1, 0),
                    polygon_map: rot_half_pi,
                },
            ]
        }
        "octagon_double_cover" => {
            let oct = octagon();
            let offset = oct.vertex(0) + oct.vertex(4);
            vec![
                CatalogAuto {
                    label: "rotation by pi, sheets fixed".into(),
                    derivative: minus_i(),
                    polygon_map: vec![image(0, 0, offset.clone(), 4), image(1, 1, offset.clone(), 4)],
                },
                CatalogAuto {
                    label: "rotation by pi, sheets swapped".into(),
                    derivative: minus_i(),
                    polygon_map: vec![image(0, 1, offset.clone(), 4), image(1, 0, offset, 4)],
                },
            ]
        }
        _ => return Err(CatalogError::UnknownName(name.to_string())),
    };
    Ok(out)
}

pub fn get(name: &str) -> Result<TranslationSurface, CatalogError> {
    match name {
        "square_torus" => Ok(square_torus()),
        "domino_torus" => Ok(domino_torus()),
        "eierlegende_wollmilchsau" => Ok(eierlegende_wollmilchsau()),
        "octagon_double_cover" => Ok(octagon_double_cover()),
        _ => Err(CatalogError::UnknownName(name.to_string())),
    }
}

pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let surface = get(name)?;
    let expected = match name {
        "square_torus" => Expected {
            genus: 1,
            num_marked: 1,
            cone_angle_list: vec![1],
            area: "1".into(),
            rk_rel: 2,
            rk_w: 0,
            rk_w0: 0,
            k_degree: 1,
            twist_derivatives: vec![(Vec2K::ints(1, 0), Mat2K::ints(1, 1, 0, 1))],
        },
        "domino_torus" => Expected {
            genus: 1,
            num_marked: 2,
            cone_angle_list: vec![1, 1],
            area: "2".into(),
            rk_rel: 3,
            rk_w: 1,
            rk_w0: 0,
            k_degree: 1,
            twist_derivatives: vec![(Vec2K::ints(1, 0), Mat2K::ints(1, 1, 0, 1))],
        },
        "eierlegende_wollmilchsau" => Expected {
            genus: 3,
            num_marked: 4,
            cone_angle_list: vec![2, 2, 2, 2],
            area: "8".into(),
            rk_rel: 9,
            rk_w: 7,
            rk_w0: 4,
            k_degree: 1,
            twist_derivatives: vec![(Vec2K::ints(1, 0), Mat2K::ints(1, 4, 0, 1))],
        },
        _ => {
            let dirs = octagon_directions();
            let mats = octagon_published_derivatives();
            Expected {
                genus: 3,
                num_marked: 2,
                cone_angle_list: vec![3, 3],
                area: (surface.area()).to_string(),
                rk_rel: 7,
                rk_w: 3,
                rk_w0: 2,
                k_degree: 2,
                twist_derivatives: dirs.into_iter().zip(mats).collect(),
            }
        }
    };
    let name = NAMES.iter().find(|n| **n == name).copied().expect("known name");
    Ok(CatalogEntry { name, surface, expected })
}

// ---------------------------------------------------------------------------
// Cylinder/IET generator

/// Interval exchange on [0, c): interval k (in domain order, with the given
/// length) is translated to position `perm[k]` in the image order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iet {
    pub lengths: Vec<Rational>,
    pub perm: Vec<usize>,
}

impl Iet {
    pub fn identity(c: Rational) -> Self {
        Iet { lengths: vec![c], perm: vec![0] }
    }

    pub fn unit_intervals(perm: Vec<usize>) -> Self {
        Iet { lengths: vec![Rational::from_integer(BigInt::from(1)); perm.len()], perm }
    }

    fn domain_starts(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.lengths.len());
        let mut acc = Rational::zero();
        for l in &self.lengths {
            out.push(acc.clone());
            acc += l;
        }
        out
    }

    fn image_starts(&self) -> Vec<Rational> {
        let n = self.lengths.len();
        let mut inv = vec![0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        let mut starts = vec![Rational::zero(); n];
        let mut acc = Rational::zero();
        for &k in inv.iter() {
            starts[k] = acc.clone();
            acc += &self.lengths[k];
        }
        starts
    }

    /// T(x) for x in [0, c).
    pub fn apply(&self, x: &Rational) -> Rational {
        let ds = self.domain_starts();
        let is = self.image_starts();
        let k = (0..ds.len()).rev().find(|&k| ds[k] <= *x).expect("point in domain");
        x - &ds[k] + &is[k]
    }

    fn validate(&self, c: &Rational) -> Result<(), CatalogError> {
        let n = self.lengths.len();
        if n == 0 || self.perm.len() != n {
            return Err(CatalogError::InvalidIet("lengths and permutation differ in size".into()));
        }
        if self.lengths.iter().any(|l| !l.is_positive()) {
            return Err(CatalogError::InvalidIet("interval lengths must be positive".into()));
        }
        let total: Rational = self.lengths.iter().sum();
        if total != *c {
            return Err(CatalogError::InvalidIet(format!("lengths sum to {total}, expected {c}")));
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || seen[p] {
                return Err(CatalogError::InvalidIet("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(())
    }
}

/// Cylinders C_0..C_{k−1} of circumference c; the bottom of C_i is glued to
/// the top of C_{i+1} by T_i. Marked points (i, x) sit on the bottom of C_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderIetSpec {
    pub circumference: Rational,
    pub widths: Vec<Rational>,
    pub iets: Vec<Iet>,
    pub marked: Vec<(usize, Rational)>,
}

pub fn build_cylinder_iet(spec: &CylinderIetSpec) -> Result<TranslationSurface, CatalogError> {
    let k = spec.widths.len();
    let c = &spec.circumference;
    if k == 0 || spec.iets.len() != k {
        return Err(CatalogError::InvalidIet("need one IET per cylinder".into()));
    }
    if !c.is_positive() || spec.widths.iter().any(|w| !w.is_positive()) {
        return Err(CatalogError::InvalidIet("circumference and widths must be positive".into()));
    }
    for t in &spec.iets {
        t.validate(c)?;
    }
    // subdivision of each bottom
    let mut bottoms: Vec<Vec<Rational>> = Vec::with_capacity(k);
    for (i, t) in spec.iets.iter().enumerate() {
        let mut pts = t.domain_starts();
        for (lvl, x) in &spec.marked {
            if *lvl >= k || x.is_negative() || x >= c {
                return Err(CatalogError::InvalidIet(format!("marked point ({lvl}, {x}) out of range")));
            }
            if *lvl == i {
                pts.push(x.clone());
            }
        }
        pts.sort();
        pts.dedup();
        bottoms.push(pts);
    }
    // top of C_{i+1} = T_i(bottom of C_i)
    let mut tops: Vec<Vec<Rational>> = vec![Vec::new(); k];
    for i in 0..k {
        let mut pts: Vec<Rational> = bottoms[i].iter().map(|x| spec.iets[i].apply(x)).collect();
        pts.sort();
        tops[(i + 1) % k] = pts;
    }
    let qn = |r: &Rational| QuadNumber::rational(r.clone());
    let mut polygons = Vec::with_capacity(k);
    for i in 0..k {
        let h = &spec.widths[i];
        let mut vs: Vec<Vec2K> = bottoms[i].iter().map(|x| Vec2K::new(qn(x), QuadNumber::zero())).collect();
        vs.push(Vec2K::new(qn(c), QuadNumber::zero()));
        vs.push(Vec2K::new(qn(c), qn(h)));
        for x in tops[i].iter().rev() {
            vs.push(Vec2K::new(qn(x), qn(h)));
        }
        polygons.push(Polygon::new(vs));
    }
    let mut gluings = Vec::new();
    for i in 0..k {
        let nb = bottoms[i].len();
        let j = (i + 1) % k;
        let nbj = bottoms[j].len();
        let ntj = tops[j].len();
        for (m, x) in bottoms[i].iter().enumerate() {
            let tx = spec.iets[i].apply(x);
            let qpos = tops[j].iter().position(|t| *t == tx).expect("image point present");
            let top_edge = nbj + 1 + (ntj - 1 - qpos);
            gluings.push((e(i, m), e(j, top_edge)));
        }
        let nt = tops[i].len();
        gluings.push((e(i, nb), e(i, nb + nt + 1)));
    }
    let surf = SurfaceSpec {
        field_d: 0,
        polygons,
        gluings,
        marked: MarkedSpec::AllVertices,
        metadata: Metadata { name: "cylinder_iet".into(), veech_group_is_lattice: LatticeFlag::Unknown },
    }
    .validate()?;
    Ok(surf)
}

/// The quaternion origami written as two horizontal cylinders of length 4.
pub fn eierlegende_wollmilchsau_cylinders() -> CylinderIetSpec {
    let one = Rational::from_integer(BigInt::from(1));
    CylinderIetSpec {
        circumference: Rational::from_integer(BigInt::from(4)),
        widths: vec![one.clone(), one],
        iets: vec![Iet::unit_intervals(vec![2, 1, 0, 3]), Iet::unit_intervals(vec![0, 3, 2, 1])],
        marked: vec![],
    }
}
