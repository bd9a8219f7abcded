//! Integer linear algebra: Smith and Hermite normal forms, kernels,
//! saturated submodules, intersections and membership.
//!
//! Linear maps act on column vectors; submodule bases are stored as rows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("ambient rank mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("map does not preserve the submodule")]
    NotPreserved,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows().iter().map(|r| {
            r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        })).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn bigvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * k).collect()
}

pub fn vec_neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_gcd(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        IntMatrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| bigvec(r)).collect(), cols)
    }

    pub fn from_cols(cols: Vec<Vec<BigInt>>, rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * r.cols + j;
                        r.data[idx] += a * b;
                    }
                }
            }
        }
        r
    }

    /// M·v for a column vector v.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// vᵀ·M for a row vector v.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "vector-matrix dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * self.get(i, j);
            }
        }
        out
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &o.data) }
    }

    pub fn sub(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &o.data) }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, k) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn vstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        IntMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, o: &IntMatrix) -> IntMatrix {
        self.transpose().vstack(&o.transpose()).transpose()
    }

    pub fn select_cols(&self, cols: std::ops::Range<usize>) -> IntMatrix {
        let rows = (0..self.rows)
            .map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows, cols.len())
    }

    pub fn select_rows(&self, rows: std::ops::Range<usize>) -> IntMatrix {
        let n = rows.len();
        Self::from_rows(rows.map(|i| self.row(i)).collect(), self.cols).with_shape(n, self.cols)
    }

    fn with_shape(mut self, rows: usize, cols: usize) -> Self {
        self.rows = rows;
        self.cols = cols;
        self
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut r = Self::identity(self.rows);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

/// Result of a Smith normal form computation: U·A·V = S.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Work {
    s: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    vi: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.s.swap(a, b);
            self.u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in self.s.iter_mut() {
                r.swap(a, b);
            }
            for r in self.v.iter_mut() {
                r.swap(a, b);
            }
            self.vi.swap(a, b);
        }
    }

    /// row_i -= q·row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        for j in 0..self.n {
            let d = q * &self.s[t][j];
            self.s[i][j] -= d;
        }
        for j in 0..self.m {
            let d = q * &self.u[t][j];
            self.u[i][j] -= d;
        }
    }

    /// col_j -= q·col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for i in 0..self.m {
            let d = q * &self.s[i][t];
            self.s[i][j] -= d;
        }
        for i in 0..self.n {
            let d = q * &self.v[i][t];
            self.v[i][j] -= d;
        }
        // V⁻¹: row_t += q·row_j
        for k in 0..self.n {
            let d = q * &self.vi[j][k];
            self.vi[t][k] += d;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.s[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
    }
}

fn to_mat(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::from_rows(rows, cols).with_shape(r, cols)
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let ident = |k: usize| IntMatrix::identity(k).to_rows();
    let mut w = Work { s: a.to_rows(), u: ident(m), v: ident(n), vi: ident(n), m, n };
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w.s[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| w.s[i][j].abs() < w.s[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !w.s[i][t].is_zero() {
                    let q = w.s[i][t].div_floor(&w.s[t][t]);
                    w.row_axpy(i, t, &q);
                    if !w.s[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !w.s[t][j].is_zero() {
                    let q = w.s[t][j].div_floor(&w.s[t][t]);
                    w.col_axpy(j, t, &q);
                    if !w.s[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..m {
                    if !w.s[i][t].is_zero() && w.s[i][t].abs() < w.s[bi][bj].abs() {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    if !w.s[t][j].is_zero() && w.s[t][j].abs() < w.s[bi][bj].abs() {
                        bi = t;
                        bj = j;
                    }
                }
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
                continue;
            }
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !w.s[i][j].mod_floor(&w.s[t][t]).is_zero() {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.s[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    Smith {
        u: to_mat(w.u, m),
        s: to_mat(w.s, n),
        v: to_mat(w.v, n),
        v_inv: to_mat(w.vi, n),
        rank: t,
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let r = smith(a);
    (r.u, r.s, r.v)
}

/// Row-style Hermite normal form; returns the nonzero rows.
pub fn hermite_rows(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols;
    let mut rows: Vec<Vec<BigInt>> = a.to_rows().into_iter().filter(|r| !is_zero_vec(r)).collect();
    let m = rows.len();
    let mut pr = 0;
    for col in 0..n {
        if pr == m {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(pr) {
                if !row[col].is_zero() && best.is_none_or(|b| row[col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pr, b);
            found = true;
            let mut done = true;
            for i in pr + 1..m {
                if !rows[i][col].is_zero() {
                    let q = rows[i][col].div_floor(&rows[pr][col]);
                    let sub = vec_scale(&rows[pr], &q);
                    rows[i] = vec_sub(&rows[i], &sub);
                    if !rows[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !found {
            continue;
        }
        if rows[pr][col].is_negative() {
            rows[pr] = vec_neg(&rows[pr]);
        }
        for i in 0..pr {
            let q = rows[i][col].div_floor(&rows[pr][col]);
            if !q.is_zero() {
                let sub = vec_scale(&rows[pr], &q);
                rows[i] = vec_sub(&rows[i], &sub);
            }
        }
        pr += 1;
    }
    rows.truncate(pr);
    rows
}

pub fn rank(a: &IntMatrix) -> usize {
    hermite_rows(a).len()
}

/// Saturated basis of {x : A·x = 0}.
pub fn kernel(a: &IntMatrix) -> Submodule {
    let sm = smith(a);
    let n = a.cols;
    let rows: Vec<Vec<BigInt>> = (sm.rank..n).map(|j| sm.v.col(j)).collect();
    Submodule::from_generators(&to_mat(rows, n))
}

/// Scale each rational row by the lcm of its denominators.
pub fn clear_denominators(rows: &[Vec<Rational>], cols: usize) -> IntMatrix {
    let out = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    to_mat(out, cols)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(Vec<BigInt>),
    RationalOnly,
    No,
}

/// A Z-submodule of Z^n with a full-row-rank basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    ambient: usize,
    basis: IntMatrix,
}

impl Submodule {
    pub fn zero(ambient: usize) -> Self {
        Submodule { ambient, basis: IntMatrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Submodule { ambient, basis: IntMatrix::identity(ambient) }
    }

    /// Z-span of the rows of `gens`.
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let rows = hermite_rows(gens);
        Submodule { ambient: gens.cols, basis: to_mat(rows, gens.cols) }
    }

    pub fn from_vectors(ambient: usize, gens: &[Vec<BigInt>]) -> Self {
        Self::from_generators(&to_mat(gens.to_vec(), ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_rows()
    }

    pub fn solver(&self) -> SpanSolver {
        SpanSolver::new(self)
    }

    pub fn membership(&self, v: &[BigInt]) -> Membership {
        self.solver().membership(v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        matches!(self.membership(v), Membership::Yes(_))
    }

    pub fn contains_module(&self, o: &Submodule) -> bool {
        let s = self.solver();
        o.basis_vectors().iter().all(|v| matches!(s.membership(v), Membership::Yes(_)))
    }

    pub fn sum(&self, o: &Submodule) -> Result<Submodule, LatticeError> {
        self.check_ambient(o)?;
        Ok(Submodule::from_generators(&self.basis.vstack(&o.basis)))
    }

    fn check_ambient(&self, o: &Submodule) -> Result<(), LatticeError> {
        if self.ambient != o.ambient {
            return Err(LatticeError::AmbientMismatch(self.ambient, o.ambient));
        }
        Ok(())
    }

    /// Q-span ∩ Z^n.
    pub fn saturate(&self) -> Submodule {
        let comp = kernel(&self.basis);
        kernel(&comp.basis)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// {x ∈ self : M·x = 0}.
    pub fn kernel_of_map(&self, m: &IntMatrix) -> Submodule {
        // columns M·b_j; coefficients y with Σ y_j M b_j = 0
        let mb = m.mul(&self.basis.transpose());
        let k = kernel(&mb);
        let gens = k.basis.mul(&self.basis);
        Submodule::from_generators(&gens).with_ambient(self.ambient)
    }

    /// Z-span of M·b over basis vectors b.
    pub fn image_under(&self, m: &IntMatrix) -> Submodule {
        let imgs = self.basis.mul(&m.transpose());
        Submodule::from_generators(&imgs).with_ambient(m.rows)
    }

    fn with_ambient(mut self, n: usize) -> Self {
        self.ambient = n;
        if self.basis.rows == 0 {
            self.basis = IntMatrix::zeros(0, n);
        }
        self
    }

    /// Matrix of M restricted to self, in self's basis (column convention).
    pub fn restrict_map(&self, m: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        let s = self.solver();
        let mut cols = Vec::with_capacity(self.rank());
        for b in self.basis_vectors() {
            match s.membership(&m.mul_vec(&b)) {
                Membership::Yes(c) => cols.push(c),
                _ => return Err(LatticeError::NotPreserved),
            }
        }
        Ok(IntMatrix::from_cols(cols, self.rank()).with_shape(self.rank(), self.rank()))
    }

    pub fn combination(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        self.basis.vec_mul(coeffs)
    }
}

/// A ∩ B as Z-modules.
pub fn intersect(a: &Submodule, b: &Submodule) -> Result<Submodule, LatticeError> {
    a.check_ambient(b)?;
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Submodule::zero(a.ambient));
    }
    // x·A = y·B  ⇔  (x, −y) ∈ ker [Aᵀ | Bᵀ]
    let m = a.basis.transpose().hstack(&b.basis.transpose());
    let k = kernel(&m);
    let xs = k.basis.select_cols(0..a.rank());
    Ok(Submodule::from_generators(&xs.mul(&a.basis)).with_ambient(a.ambient))
}

pub fn membership(v: &[BigInt], a: &Submodule) -> Membership {
    a.membership(v)
}

/// Precomputed solver for coordinates x with x·B = v.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    ambient: usize,
    k: usize,
    u: IntMatrix,
    v: IntMatrix,
    diag: Vec<BigInt>,
}

impl SpanSolver {
    pub fn new(sub: &Submodule) -> Self {
        let sm = smith(&sub.basis.transpose());
        SpanSolver { ambient: sub.ambient, k: sub.rank(), diag: sm.diagonal(), u: sm.u, v: sm.v }
    }

    pub fn membership(&self, vec: &[BigInt]) -> Membership {
        assert_eq!(vec.len(), self.ambient, "membership: length mismatch");
        let c = self.u.mul_vec(vec);
        let r = self.diag.len();
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Membership::No;
        }
        let mut y = vec![BigInt::zero(); self.k];
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&self.diag[i]);
            if !rem.is_zero() {
                return Membership::RationalOnly;
            }
            y[i] = q;
        }
        Membership::Yes(self.v.mul_vec(&y))
    }

    pub fn coordinates(&self, vec: &[BigInt]) -> Option<Vec<BigInt>> {
        match self.membership(vec) {
            Membership::Yes(c) => Some(c),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn sub(rows: &[&[i64]]) -> Submodule {
        Submodule::from_generators(&m(rows))
    }

    fn check_snf(a: &IntMatrix) {
        let sm = smith(a);
        assert_eq!(sm.u.mul(a).mul(&sm.v), sm.s);
        assert_eq!(sm.u.det().abs(), BigInt::one());
        assert_eq!(sm.v.det().abs(), BigInt::one());
        assert!(sm.v.mul(&sm.v_inv).is_identity());
    }

    #[test]
    fn snf_examples() {
        let a = m(&[&[2, 4], &[6, 8]]);
        check_snf(&a);
        // elimination by hand: gcd of entries is 2, |det| = 8 ⇒ diag(2, 4)
        assert_eq!(smith(&a).diagonal(), bigvec(&[2, 4]));
        assert_eq!(smith(&IntMatrix::identity(3)).diagonal(), bigvec(&[1, 1, 1]));
        let z = IntMatrix::zeros(2, 3);
        let sm = smith(&z);
        assert!(sm.s.is_zero());
        assert_eq!(sm.rank, 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&m(&[&[1, 1]])), sub(&[&[1, -1]]));
        assert_eq!(kernel(&m(&[&[2, 1], &[1, 1]])).rank(), 0);
        assert_eq!(kernel(&m(&[&[2, 2], &[1, 1]])), sub(&[&[1, -1]]));
    }

    #[test]
    fn intersect_examples() {
        let a = sub(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = sub(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&a, &b).unwrap(), sub(&[&[0, 1, 0]]));
        assert_eq!(intersect(&a, &a).unwrap(), a);
        let c = sub(&[&[2, 0]]);
        let d = sub(&[&[3, 0]]);
        assert_eq!(intersect(&c, &d).unwrap(), sub(&[&[6, 0]]));
        assert!(matches!(
            intersect(&a, &c),
            Err(LatticeError::AmbientMismatch(3, 2))
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[1, 0], &[0, 0]])), 1);
        assert_eq!(rank(&IntMatrix::zeros(3, 2)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4], &[3, 6]])), 1);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(sub(&[&[1, 1]]).membership(&bigvec(&[2, 2])), Membership::Yes(bigvec(&[2])));
        assert_eq!(sub(&[&[2, 2]]).membership(&bigvec(&[1, 1])), Membership::RationalOnly);
        assert_eq!(sub(&[&[1, 1]]).membership(&bigvec(&[1, 0])), Membership::No);
    }

    #[test]
    fn saturation_and_restriction() {
        let s = sub(&[&[2, 2, 0]]);
        assert_eq!(s.saturate(), sub(&[&[1, 1, 0]]));
        let full = Submodule::full(2);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(full.restrict_map(&swap).unwrap(), swap);
        let line = sub(&[&[1, 0]]);
        assert_eq!(line.restrict_map(&swap), Err(LatticeError::NotPreserved));
        assert_eq!(full.kernel_of_map(&m(&[&[1, -1], &[2, -2]])), sub(&[&[1, 1]]));
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), big(1));
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]).det(), big(-3));
    }
}
