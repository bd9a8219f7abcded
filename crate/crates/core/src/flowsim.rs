//! Straight-line flow on M° with the deck cocycle of the Z-cover, and the
//! first-return interval exchange on the union of transverse edges.
//!
//! Sign conventions: crossing an edge pair k from its representative side
//! adds −a_k to the sheet index, where a is the chain of w; the opposite
//! crossing adds +a_k. With θ' the unit normal to the right of θ, the
//! mean sheet drift per unit length is ⟨hol(w), θ'⟩ / Area.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{Mat2K, NumError, QuadNumber, Rational, Vec2K};
use crate::homology::HomologyModel;
use crate::surface::{EdgeRef, SurfaceError, TranslationSurface};
use crate::trace::{ray_exit, Hit};
use crate::zcover::ZCoverClass;

pub const FLOAT_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("trajectory hit a marked point at time {time} in polygon {polygon}")]
    HitSingularity { time: f64, polygon: usize },
    #[error("start point is not inside polygon {0}")]
    BadStart(usize),
    #[error("return map could not be extracted: {0}")]
    NotExtractable(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Sheet increments per edge pair, for crossings from the representative side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSpec {
    pub rep_increment: Vec<BigInt>,
}

impl CocycleSpec {
    pub fn new(h: &HomologyModel, c: &ZCoverClass) -> Self {
        let a = h.chain_of(&c.w);
        CocycleSpec { rep_increment: a.into_iter().map(|x| -x).collect() }
    }

    /// Increment for leaving a polygon through edge e.
    pub fn increment(&self, s: &TranslationSurface, e: EdgeRef) -> BigInt {
        let (k, is_rep) = s.pair_of(e);
        if is_rep {
            self.rep_increment[k].clone()
        } else {
            -self.rep_increment[k].clone()
        }
    }

    pub fn sum(&self, s: &TranslationSurface, crossings: &[EdgeRef]) -> BigInt {
        crossings.iter().map(|&e| self.increment(s, e)).sum()
    }

    /// Total increment along the clockwise loop around each marked point.
    pub fn puncture_increments(&self, s: &TranslationSurface) -> Vec<BigInt> {
        s.classes()
            .iter()
            .map(|cl| {
                let ccw: BigInt = cl
                    .corners
                    .iter()
                    .map(|c| {
                        let n = s.polygon(c.polygon).len();
                        self.increment(s, EdgeRef::new(c.polygon, (c.vertex + n - 1) % n))
                    })
                    .sum();
                -ccw
            })
            .collect()
    }
}

/// Signed crossing counts of an edge sequence (same convention as traced paths).
pub fn crossing_counts(s: &TranslationSurface, crossings: &[EdgeRef]) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); s.num_edges()];
    for &e in crossings {
        let (k, is_rep) = s.pair_of(e);
        v[k] += if is_rep { -1 } else { 1 };
    }
    v
}

/// A closed walk in the dual graph: a random walk of `len` crossings from
/// polygon `start`, closed up by a shortest path back.
pub fn random_dual_loop(s: &TranslationSurface, start: usize, len: usize, rng: &mut impl Rng) -> Vec<EdgeRef> {
    let mut walk = Vec::new();
    let mut p = start;
    for _ in 0..len {
        let e = EdgeRef::new(p, rng.gen_range(0..s.polygon(p).len()));
        walk.push(e);
        p = s.partner(e).polygon;
    }
    // breadth-first path back to start
    let np = s.num_polygons();
    let mut prev: Vec<Option<EdgeRef>> = vec![None; np];
    let mut seen = vec![false; np];
    let mut queue = std::collections::VecDeque::from([p]);
    seen[p] = true;
    while let Some(q) = queue.pop_front() {
        if q == start {
            break;
        }
        for i in 0..s.polygon(q).len() {
            let e = EdgeRef::new(q, i);
            let r = s.partner(e).polygon;
            if !seen[r] {
                seen[r] = true;
                prev[r] = Some(e);
                queue.push_back(r);
            }
        }
    }
    let mut back = Vec::new();
    let mut q = start;
    while q != p {
        let e = prev[q].expect("dual graph is connected");
        back.push(e);
        q = e.polygon;
    }
    back.reverse();
    walk.extend(back);
    walk
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub polygon: usize,
    pub n: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowReport {
    pub mode: Mode,
    pub direction: [f64; 2],
    /// Unit-speed time actually simulated.
    pub total_time: f64,
    pub crossings: usize,
    pub final_sheet: i64,
    pub max_abs_sheet: i64,
    pub returns_to_zero: usize,
    /// Least-squares slope of sheet index against time.
    pub drift_slope: f64,
    /// ⟨hol(w), θ'⟩ / Area per unit length.
    pub predicted_drift: f64,
    /// cross(hol(w), v) / Area per unit of the direction parameter, exact.
    pub predicted_drift_exact: Option<String>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

#[derive(Default)]
struct SheetStats {
    n: i64,
    max_abs: i64,
    returns: usize,
    crossings: usize,
    st: f64,
    sn: f64,
    stt: f64,
    stn: f64,
    count: f64,
}

impl SheetStats {
    fn record(&mut self, t: f64, inc: i64) {
        let before = self.n;
        self.n += inc;
        self.crossings += 1;
        self.max_abs = self.max_abs.max(self.n.abs());
        if self.n == 0 && before != 0 {
            self.returns += 1;
        }
        let n = self.n as f64;
        self.st += t;
        self.sn += n;
        self.stt += t * t;
        self.stn += t * n;
        self.count += 1.0;
    }

    fn slope(&self) -> f64 {
        let d = self.count * self.stt - self.st * self.st;
        if self.count < 2.0 || d.abs() < f64::MIN_POSITIVE {
            return 0.0;
        }
        (self.count * self.stn - self.st * self.sn) / d
    }
}

fn predicted(s: &TranslationSurface, c: &ZCoverClass, v: &Vec2K) -> (f64, Option<String>) {
    let cross = c.hol_w.cross(v);
    let exact = c.hol_w.d() == v.d() || c.hol_w.d() == 0 || v.d() == 0;
    let per_param = if exact { Some(&cross / s.area()) } else { None };
    let (vx, vy) = v.to_f64();
    let norm = (vx * vx + vy * vy).sqrt();
    let (hx, hy) = c.hol_w.to_f64();
    let f = (hx * vy - hy * vx) / norm / s.area().to_f64();
    (f, per_param.map(|q| q.to_string()))
}

/// The surface and direction over a common field (rational surfaces are lifted).
fn over_common_field(s: &TranslationSurface, dir: &Vec2K) -> Result<(TranslationSurface, Vec2K), FlowError> {
    if s.field_d() == 0 && dir.d() != 0 {
        Ok((s.rebase_field(dir.d())?, dir.clone()))
    } else {
        Ok((s.clone(), dir.in_field(s.field_d())?))
    }
}

/// Exact area centroid of a polygon.
pub fn centroid(s: &TranslationSurface, p: usize) -> Vec2K {
    let poly = s.polygon(p);
    let mut cx = QuadNumber::zero();
    let mut cy = QuadNumber::zero();
    for i in 0..poly.len() {
        let a = poly.vertex(i);
        let b = poly.vertex(i + 1);
        let cr = a.cross(b);
        cx = cx + &(&a.x + &b.x) * &cr;
        cy = cy + &(&a.y + &b.y) * &cr;
    }
    let six_a = poly.area().scale(&Rational::from_integer(6.into()));
    Vec2K::new(&cx / &six_a, &cy / &six_a)
}

fn strictly_inside(s: &TranslationSurface, p: usize, pt: &Vec2K) -> bool {
    let poly = s.polygon(p);
    if (0..poly.len()).any(|i| {
        let a = poly.vertex(i);
        let e = poly.edge_vector(i);
        let ap = pt - a;
        e.cross(&ap).is_zero() && !ap.dot(&e).is_negative() && ap.dot(&e) <= e.dot(&e)
    }) {
        return false;
    }
    let mut inside = false;
    for i in 0..poly.len() {
        let a = poly.vertex(i);
        let b = poly.vertex(i + 1);
        if (a.y > pt.y) != (b.y > pt.y) {
            let t = &(&pt.y - &a.y) / &(&b.y - &a.y);
            let x = &a.x + &(&b.x - &a.x) * &t;
            if x > pt.x {
                inside = !inside;
            }
        }
    }
    inside
}

pub struct SimOptions {
    pub time: f64,
    pub record_trace: bool,
    pub start: Option<(usize, Vec2K)>,
}

/// Exact simulation: direction over the surface field, time budget in
/// unit-speed time (the last partial segment is dropped).
pub fn simulate_exact(
    s: &TranslationSurface,
    h: &HomologyModel,
    c: &ZCoverClass,
    dir: &Vec2K,
    opts: &SimOptions,
) -> Result<FlowReport, FlowError> {
    let (lifted, v) = over_common_field(s, dir)?;
    let s = &lifted;
    let cocycle = CocycleSpec::new(h, c);
    let (mut poly, mut p) = match &opts.start {
        Some((q, pt)) => (*q, pt.in_field(s.field_d())?),
        None => (0, centroid(s, 0)),
    };
    if !strictly_inside(s, poly, &p) {
        return Err(FlowError::BadStart(poly));
    }
    let (vx, vy) = v.to_f64();
    let speed = (vx * vx + vy * vy).sqrt();
    let mut stats = SheetStats::default();
    let mut trace = Vec::new();
    let mut elapsed = QuadNumber::zero();
    let mut moved = Vec2K::zero();
    let mut time = 0.0;
    loop {
        let hit = ray_exit(s.polygon(poly), &p, &v).ok_or(FlowError::BadStart(poly))?;
        let next_time = (&elapsed + hit.t()).to_f64() * speed;
        if next_time > opts.time {
            break;
        }
        match hit {
            Hit::Vertex { .. } => return Err(FlowError::HitSingularity { time: next_time, polygon: poly }),
            Hit::Edge { edge, t, point } => {
                let e = EdgeRef::new(poly, edge);
                moved = &moved + &(&point - &p);
                elapsed = elapsed + t;
                time = next_time;
                let inc = cocycle.increment(s, e).to_i64().expect("small increment");
                stats.record(time, inc);
                p = &point + &s.crossing_translation(e);
                poly = s.partner(e).polygon;
                if opts.record_trace {
                    trace.push(TraceRow { t: time, polygon: poly, n: stats.n });
                }
            }
        }
    }
    // energy check: the developed path is elapsed·v
    assert_eq!(moved, v.scale(&elapsed), "developed displacement must equal elapsed·v");
    let (pred, pred_exact) = predicted(s, c, &v);
    Ok(FlowReport {
        mode: Mode::Exact,
        direction: [vx, vy],
        total_time: time,
        crossings: stats.crossings,
        final_sheet: stats.n,
        max_abs_sheet: stats.max_abs,
        returns_to_zero: stats.returns,
        drift_slope: stats.slope(),
        predicted_drift: pred,
        predicted_drift_exact: pred_exact,
        trace,
    })
}

/// Floating-point simulation with unit speed and an ε guard around vertices.
pub fn simulate_float(
    s: &TranslationSurface,
    h: &HomologyModel,
    c: &ZCoverClass,
    dir: (f64, f64),
    opts: &SimOptions,
) -> Result<FlowReport, FlowError> {
    let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
    let d = (dir.0 / norm, dir.1 / norm);
    let cocycle = CocycleSpec::new(h, c);
    let polys: Vec<Vec<(f64, f64)>> =
        s.polygons().iter().map(|p| (0..p.len()).map(|i| p.vertex(i).to_f64()).collect()).collect();
    let incs: Vec<Vec<i64>> = (0..s.num_polygons())
        .map(|p| {
            (0..s.polygon(p).len())
                .map(|i| cocycle.increment(s, EdgeRef::new(p, i)).to_i64().expect("small increment"))
                .collect()
        })
        .collect();
    let shifts: Vec<Vec<(f64, f64)>> = (0..s.num_polygons())
        .map(|p| (0..s.polygon(p).len()).map(|i| s.crossing_translation(EdgeRef::new(p, i)).to_f64()).collect())
        .collect();
    let (mut poly, mut p) = match &opts.start {
        Some((q, pt)) => (*q, pt.to_f64()),
        None => (0, centroid(s, 0).to_f64()),
    };
    let mut skip: Option<usize> = None;
    let mut stats = SheetStats::default();
    let mut trace = Vec::new();
    let mut time = 0.0;
    loop {
        let vs = &polys[poly];
        let n = vs.len();
        let mut best: Option<(f64, usize, f64)> = None;
        for j in 0..n {
            if Some(j) == skip {
                continue;
            }
            let a = vs[j];
            let b = vs[(j + 1) % n];
            let e = (b.0 - a.0, b.1 - a.1);
            let denom = d.0 * e.1 - d.1 * e.0;
            if denom.abs() < 1e-15 {
                continue;
            }
            let ap = (a.0 - p.0, a.1 - p.1);
            let t = (ap.0 * e.1 - ap.1 * e.0) / denom;
            let u = (ap.0 * d.1 - ap.1 * d.0) / denom;
            let len = (e.0 * e.0 + e.1 * e.1).sqrt();
            if t <= 1e-12 || u < -FLOAT_EPS / len || u > 1.0 + FLOAT_EPS / len {
                continue;
            }
            if best.is_none_or(|(bt, _, _)| t < bt) {
                best = Some((t, j, u * len));
            }
        }
        let (t, j, along) = best.ok_or(FlowError::BadStart(poly))?;
        if time + t > opts.time {
            time = opts.time;
            break;
        }
        let len = {
            let a = vs[j];
            let b = vs[(j + 1) % n];
            ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt()
        };
        if along < FLOAT_EPS || len - along < FLOAT_EPS {
            return Err(FlowError::HitSingularity { time: time + t, polygon: poly });
        }
        time += t;
        stats.record(time, incs[poly][j]);
        let hit = (p.0 + t * d.0, p.1 + t * d.1);
        let sh = shifts[poly][j];
        p = (hit.0 + sh.0, hit.1 + sh.1);
        let f = s.partner(EdgeRef::new(poly, j));
        poly = f.polygon;
        skip = Some(f.edge);
        if opts.record_trace {
            trace.push(TraceRow { t: time, polygon: poly, n: stats.n });
        }
    }
    let (hx, hy) = c.hol_w.to_f64();
    let pred = (hx * d.1 - hy * d.0) / s.area().to_f64();
    Ok(FlowReport {
        mode: Mode::Float,
        direction: [d.0, d.1],
        total_time: time,
        crossings: stats.crossings,
        final_sheet: stats.n,
        max_abs_sheet: stats.max_abs,
        returns_to_zero: stats.returns,
        drift_slope: stats.slope(),
        predicted_drift: pred,
        predicted_drift_exact: None,
        trace,
    })
}

/// One continuity interval of the first-return map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnInterval {
    /// Entry edge (seen from the polygon the flow enters) and its y-range.
    pub entry: EdgeRef,
    pub y0: QuadNumber,
    pub y1: QuadNumber,
    /// Exit edge of the same polygon.
    pub exit: EdgeRef,
    pub length: QuadNumber,
    pub cocycle: BigInt,
    /// Position in the concatenated transversal, before and after.
    pub domain_start: QuadNumber,
    pub image_start: QuadNumber,
}

#[derive(Clone, Debug)]
pub struct ReturnIet {
    pub direction: Vec2K,
    /// Entry edges making up the transversal, in order, with their lengths.
    pub transversal: Vec<(EdgeRef, QuadNumber)>,
    pub intervals: Vec<ReturnInterval>,
    /// perm[j] = rank of interval j's image among all images.
    pub perm: Vec<usize>,
    /// cross(hol(w), v) / |v|²: the right-normal holonomy in rotated units.
    pub hol_theta_prime: QuadNumber,
}

impl ReturnIet {
    pub fn lengths(&self) -> Vec<QuadNumber> {
        self.intervals.iter().map(|i| i.length.clone()).collect()
    }

    pub fn total_length(&self) -> QuadNumber {
        self.transversal.iter().fold(QuadNumber::zero(), |a, (_, l)| a + l)
    }

    /// Σ μ(I_j)·f_j.
    pub fn cocycle_integral(&self) -> QuadNumber {
        self.intervals.iter().fold(QuadNumber::zero(), |a, i| {
            a + i.length.scale(&Rational::from_integer(i.cocycle.clone()))
        })
    }

    /// Merge neighbouring intervals that translate together with equal cocycle.
    pub fn merged(&self) -> ReturnIet {
        let mut order: Vec<usize> = (0..self.intervals.len()).collect();
        order.sort_by(|&a, &b| self.intervals[a].domain_start.cmp(&self.intervals[b].domain_start));
        let mut out: Vec<ReturnInterval> = Vec::new();
        for j in order {
            let iv = &self.intervals[j];
            if let Some(last) = out.last_mut() {
                let contiguous = &last.domain_start + &last.length == iv.domain_start
                    && &last.image_start + &last.length == iv.image_start
                    && last.cocycle == iv.cocycle;
                if contiguous {
                    last.length = &last.length + &iv.length;
                    last.y1 = iv.y1.clone();
                    continue;
                }
            }
            out.push(iv.clone());
        }
        let perm = image_ranks(&out);
        ReturnIet {
            direction: self.direction.clone(),
            transversal: self.transversal.clone(),
            intervals: out,
            perm,
            hol_theta_prime: self.hol_theta_prime.clone(),
        }
    }

    /// The map on the concatenated transversal.
    pub fn apply(&self, x: &QuadNumber) -> Option<QuadNumber> {
        self.intervals.iter().find_map(|iv| {
            let end = &iv.domain_start + &iv.length;
            (*x >= iv.domain_start && *x < end).then(|| x - &iv.domain_start + &iv.image_start)
        })
    }
}

fn image_ranks(ivs: &[ReturnInterval]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ivs.len()).collect();
    idx.sort_by(|&a, &b| ivs[a].image_start.cmp(&ivs[b].image_start));
    let mut perm = vec![0; ivs.len()];
    for (rank, j) in idx.into_iter().enumerate() {
        perm[j] = rank;
    }
    perm
}

/// First-return map of the flow in direction `dir` to the union of all
/// edges transverse to it, split at the levels of the vertices.
pub fn first_return_iet(
    s: &TranslationSurface,
    h: &HomologyModel,
    c: &ZCoverClass,
    dir: &Vec2K,
) -> Result<ReturnIet, FlowError> {
    let (lifted, v) = over_common_field(s, dir)?;
    let s = &lifted;
    let rot = Mat2K::to_horizontal(&v)?;
    let rs = s.apply_matrix(&rot)?;
    let cocycle = CocycleSpec::new(h, c);
    // entry edges: going downward in a ccw polygon means the flow enters there
    let mut entries: Vec<EdgeRef> = Vec::new();
    for p in 0..rs.num_polygons() {
        for i in 0..rs.polygon(p).len() {
            if rs.polygon(p).edge_vector(i).y.is_negative() {
                entries.push(EdgeRef::new(p, i));
            }
        }
    }
    let mut offsets = Vec::with_capacity(entries.len());
    let mut acc = QuadNumber::zero();
    let mut transversal = Vec::with_capacity(entries.len());
    for &e in &entries {
        offsets.push(acc.clone());
        let len = -rs.edge_vector(e).y;
        acc = &acc + &len;
        transversal.push((e, len));
    }
    let position = |e: EdgeRef, y: &QuadNumber| -> Option<QuadNumber> {
        let k = entries.iter().position(|&x| x == e)?;
        let low = rs.polygon(e.polygon).vertex(e.edge + 1).y.clone();
        Some(&offsets[k] + &(y - &low))
    };
    let east = Vec2K::ints(1, 0);
    let mut intervals = Vec::new();
    for &e in &entries {
        let poly = rs.polygon(e.polygon);
        let top = poly.vertex(e.edge).clone();
        let bottom = poly.vertex(e.edge + 1).clone();
        let mut levels: Vec<QuadNumber> = (0..poly.len())
            .map(|i| poly.vertex(i).y.clone())
            .filter(|y| *y > bottom.y && *y < top.y)
            .collect();
        levels.push(bottom.y.clone());
        levels.push(top.y.clone());
        levels.sort();
        levels.dedup();
        for w in levels.windows(2) {
            let (y0, y1) = (&w[0], &w[1]);
            let mid_y = (y0 + y1).scale(&Rational::new(1.into(), 2.into()));
            // point on the entry edge at height mid_y
            let frac = &(&top.y - &mid_y) / &(&top.y - &bottom.y);
            let start = &top + &(&bottom - &top).scale(&frac);
            let exit = match ray_exit(poly, &start, &east) {
                Some(Hit::Edge { edge, .. }) => EdgeRef::new(e.polygon, edge),
                _ => return Err(FlowError::NotExtractable("interval midpoint runs into a vertex".into())),
            };
            let shift = rs.crossing_translation(exit);
            let target = rs.partner(exit);
            let domain_start = position(e, y0).expect("entry edge");
            let image_start = position(target, &(y0 + &shift.y))
                .ok_or_else(|| FlowError::NotExtractable("exit edge partner is not an entry edge".into()))?;
            intervals.push(ReturnInterval {
                entry: e,
                y0: y0.clone(),
                y1: y1.clone(),
                exit,
                length: y1 - y0,
                cocycle: cocycle.increment(&rs, exit),
                domain_start,
                image_start,
            });
        }
    }
    let perm = image_ranks(&intervals);
    let norm2 = v.dot(&v);
    let hol_theta_prime = &c.hol_w.cross(&v) / &norm2;
    log::debug!("return map with {} intervals, total {}", intervals.len(), acc);
    Ok(ReturnIet { direction: v, transversal, intervals, perm, hol_theta_prime })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithRecurrent,
    Transient,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceSummary {
    pub verdict: Verdict,
    pub used: usize,
    pub excluded_periodic: usize,
    pub note: &'static str,
}

/// Empirical verdict over sampled directions; periodic directions are excluded.
pub fn recurrence_verdict(reports: &[(FlowReport, bool)]) -> RecurrenceSummary {
    let used: Vec<&FlowReport> = reports.iter().filter(|(_, periodic)| !periodic).map(|(r, _)| r).collect();
    let excluded = reports.len() - used.len();
    let note = "heuristic evidence from finite orbits, not a proof";
    if used.len() < 3 {
        return RecurrenceSummary { verdict: Verdict::Inconclusive, used: used.len(), excluded_periodic: excluded, note };
    }
    let recurrent = used.iter().all(|r| r.drift_slope.abs() < 0.01 && r.predicted_drift.abs() < 1e-12 && r.returns_to_zero >= 10);
    let transient = used.iter().all(|r| {
        r.predicted_drift.abs() > 1e-6 && ((r.drift_slope - r.predicted_drift) / r.predicted_drift).abs() < 0.02
    });
    let verdict = if recurrent {
        Verdict::ConsistentWithRecurrent
    } else if transient {
        Verdict::Transient
    } else {
        Verdict::Inconclusive
    };
    RecurrenceSummary { verdict, used: used.len(), excluded_periodic: excluded, note }
}

/// Directions with slope r·√p for primes p outside the surface field.
pub fn sample_directions(s: &TranslationSurface, n: usize, rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let primes: Vec<u32> = [3u32, 5, 7, 11, 13, 17].into_iter().filter(|&p| p != s.field_d()).collect();
    (0..n)
        .map(|_| {
            let p = primes[rng.gen_range(0..primes.len())] as f64;
            let r = rng.gen_range(1..6) as f64 / rng.gen_range(1..6) as f64;
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (1.0, sign * r * p.sqrt())
        })
        .collect()
}
