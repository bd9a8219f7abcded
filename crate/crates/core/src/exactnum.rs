//! Exact arithmetic in Q and real quadratic fields Q(√d), with planar
//! vectors and 2×2 matrices over them.
//!
//! A `QuadNumber` with `d = 0` is a plain rational. Rationals combine freely
//! with numbers of any field (Q embeds everywhere); two irrational fields with
//! different `d` never mix.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("field mismatch: Q(sqrt({0})) vs Q(sqrt({1}))")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field parameter {0}: must be 0 or square-free >= 2")]
    BadField(u64),
    #[error("cannot parse number '{0}'")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Write n = s²·r with r square-free; returns (s, r).
fn split_square(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut r = n;
    let mut p = 2u64;
    while p * p <= r {
        while r.is_multiple_of(p * p) {
            r /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, r)
}

/// Element a + b·√d of Q(√d).
#[derive(Clone, Debug)]
pub struct QuadNumber {
    a: Rational,
    b: Rational,
    d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadNumber {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self, NumError> {
        if d == 0 {
            if !b.is_zero() {
                return Err(NumError::BadField(0));
            }
        } else if !is_square_free(d as u64) {
            return Err(NumError::BadField(d as u64));
        }
        Ok(QuadNumber { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        QuadNumber { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// √d itself.
    pub fn sqrt(d: u32) -> Result<Self, NumError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Re-express in Q(√d_new). Rationals embed everywhere.
    pub fn in_field(&self, d_new: u32) -> Result<Self, NumError> {
        if self.d == d_new {
            return Ok(self.clone());
        }
        if self.b.is_zero() {
            if d_new != 0 && !is_square_free(d_new as u64) {
                return Err(NumError::BadField(d_new as u64));
            }
            return Ok(QuadNumber { a: self.a.clone(), b: Rational::zero(), d: d_new });
        }
        Err(NumError::FieldMismatch(self.d, d_new))
    }

    fn join(&self, other: &Self) -> Result<u32, NumError> {
        if self.d == other.d || other.d == 0 {
            Ok(self.d)
        } else if self.d == 0 {
            Ok(other.d)
        } else if self.b.is_zero() && other.b.is_zero() {
            Ok(self.d.max(other.d))
        } else {
            Err(NumError::FieldMismatch(self.d, other.d))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, NumError> {
        let d = self.join(o)?;
        Ok(QuadNumber { a: &self.a + &o.a, b: &self.b + &o.b, d })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, NumError> {
        let d = self.join(o)?;
        Ok(QuadNumber { a: &self.a - &o.a, b: &self.b - &o.b, d })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, NumError> {
        let d = self.join(o)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(QuadNumber { a, b, d })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, NumError> {
        self.join(o)?;
        let inv = o.inverse()?;
        self.checked_mul(&inv)
    }

    /// a² − d·b², the field norm.
    pub fn norm(&self) -> Rational {
        let dd = Rational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * dd
    }

    pub fn inverse(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadNumber { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }

    /// Galois conjugate a − b√d.
    pub fn conjugate(&self) -> Self {
        QuadNumber { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Exact sign of the real number a + b√d.
    pub fn sign(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let dd = Rational::from_integer(BigInt::from(self.d));
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * dd;
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadNumber { a: &self.a * r, b: &self.b * r, d: self.d }
    }
}

fn sgn(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn qn_arith(op: ArithOp, l: &QuadNumber, r: &QuadNumber) -> Result<QuadNumber, NumError> {
    match op {
        ArithOp::Add => l.checked_add(r),
        ArithOp::Sub => l.checked_sub(r),
        ArithOp::Mul => l.checked_mul(r),
        ArithOp::Div => l.checked_div(r),
    }
}

pub fn qn_sign(x: &QuadNumber) -> i32 {
    x.sign()
}

/// Coordinates (a, b) of x = a + b√d over Q.
pub fn rational_embed(x: &QuadNumber) -> [Rational; 2] {
    [x.a.clone(), x.b.clone()]
}

impl PartialEq for QuadNumber {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

impl Eq for QuadNumber {}

impl Hash for QuadNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

impl PartialOrd for QuadNumber {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QuadNumber {
    /// Panics on mixed irrational fields.
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).sign().cmp(&0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadNumber> for &'a QuadNumber {
            type Output = QuadNumber;
            fn $m(self, o: &'a QuadNumber) -> QuadNumber {
                match self.$checked(o) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $tr<QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $m(self, o: QuadNumber) -> QuadNumber {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $m(self, o: &'a QuadNumber) -> QuadNumber {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<QuadNumber> for &'a QuadNumber {
            type Output = QuadNumber;
            fn $m(self, o: QuadNumber) -> QuadNumber {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl From<i64> for QuadNumber {
    fn from(n: i64) -> Self {
        QuadNumber::from_int(n)
    }
}

impl From<Rational> for QuadNumber {
    fn from(r: Rational) -> Self {
        QuadNumber::rational(r)
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "sqrt({})", self.d)
        } else if (-&self.b).is_one() {
            write!(f, "-sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", self.b, self.d)
        }
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<Rational, NumError> {
    let bad = || NumError::Parse(whole.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    } else {
        Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

impl FromStr for QuadNumber {
    type Err = NumError;

    /// Accepts sums of terms `r`, `r*sqrt(n)`, `sqrt(n)`, `sqrt(n)*r` with
    /// `r` an integer or `p/q`; `sqrt(8)` is reduced to `2*sqrt(2)`.
    fn from_str(input: &str) -> Result<Self, NumError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(input.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !(cur.ends_with('/') || cur.ends_with('*')) {
                if cur.is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                    continue;
                }
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad());
        }
        terms.push((neg, cur));

        let mut a = Rational::zero();
        let mut b = Rational::zero();
        let mut d: u32 = 0;
        for (neg, term) in terms {
            let mut coef = Rational::one();
            let mut root: Option<u64> = None;
            for factor in term.split('*') {
                if let Some(inner) = factor.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                    if root.is_some() {
                        return Err(bad());
                    }
                    let n: u64 = inner.parse().map_err(|_| bad())?;
                    root = Some(n);
                } else {
                    coef *= parse_rational(factor, input)?;
                }
            }
            if neg {
                coef = -coef;
            }
            match root {
                None => a += coef,
                Some(n) => {
                    let (sq, r) = split_square(n);
                    let c = coef * Rational::from_integer(BigInt::from(sq));
                    if r == 1 || n == 0 {
                        if n != 0 {
                            a += c;
                        }
                    } else {
                        let r32 = u32::try_from(r).map_err(|_| bad())?;
                        if d != 0 && d != r32 {
                            return Err(NumError::FieldMismatch(d, r32));
                        }
                        d = r32;
                        b += c;
                    }
                }
            }
        }
        Ok(QuadNumber { a, b, d })
    }
}

/// Exact planar vector over Q(√d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec2K {
    pub x: QuadNumber,
    pub y: QuadNumber,
}

impl Vec2K {
    pub fn new(x: QuadNumber, y: QuadNumber) -> Self {
        Vec2K { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2K::new(x.into(), y.into())
    }

    pub fn zero() -> Self {
        Vec2K::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn d(&self) -> u32 {
        self.x.d().max(self.y.d())
    }

    pub fn in_field(&self, d: u32) -> Result<Self, NumError> {
        Ok(Vec2K::new(self.x.in_field(d)?, self.y.in_field(d)?))
    }

    pub fn cross(&self, o: &Vec2K) -> QuadNumber {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2K) -> QuadNumber {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn scale(&self, s: &QuadNumber) -> Vec2K {
        Vec2K::new(&self.x * s, &self.y * s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// True if `o` is a positive multiple of `self`.
    pub fn same_ray(&self, o: &Vec2K) -> bool {
        self.cross(o).is_zero() && self.dot(o).is_positive()
    }

    /// 0 if the ccw angle from `base` to self is in [0, π), else 1.
    fn half_from(&self, base: &Vec2K) -> u8 {
        let c = base.cross(self).sign();
        if c > 0 || (c == 0 && base.dot(self).is_positive()) {
            0
        } else {
            1
        }
    }

    /// Compare the ccw angles (in [0, 2π)) from `base` to `a` and to `b`.
    pub fn angle_cmp_from(base: &Vec2K, a: &Vec2K, b: &Vec2K) -> Ordering {
        let ha = a.half_from(base);
        let hb = b.half_from(base);
        if ha != hb {
            return ha.cmp(&hb);
        }
        match a.cross(b).sign() {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Is `self` in the half-open ccw sector [u, w)?
    pub fn in_sector(&self, u: &Vec2K, w: &Vec2K) -> bool {
        Vec2K::angle_cmp_from(u, self, w) == Ordering::Less
    }
}

impl<'a> Add<&'a Vec2K> for &'a Vec2K {
    type Output = Vec2K;
    fn add(self, o: &'a Vec2K) -> Vec2K {
        Vec2K::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Vec2K> for &'a Vec2K {
    type Output = Vec2K;
    fn sub(self, o: &'a Vec2K) -> Vec2K {
        Vec2K::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Vec2K {
    type Output = Vec2K;
    fn add(self, o: Vec2K) -> Vec2K {
        &self + &o
    }
}

impl Sub for Vec2K {
    type Output = Vec2K;
    fn sub(self, o: Vec2K) -> Vec2K {
        &self - &o
    }
}

impl Neg for &Vec2K {
    type Output = Vec2K;
    fn neg(self) -> Vec2K {
        Vec2K::new(-&self.x, -&self.y)
    }
}

impl Neg for Vec2K {
    type Output = Vec2K;
    fn neg(self) -> Vec2K {
        -&self
    }
}

impl fmt::Display for Vec2K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl FromStr for Vec2K {
    type Err = NumError;
    /// "x,y" or "(x, y)" with both coordinates in the QuadNumber grammar.
    fn from_str(s: &str) -> Result<Self, NumError> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (x, y) = t.split_once(',').ok_or_else(|| NumError::Parse(s.to_string()))?;
        let x: QuadNumber = x.parse()?;
        let y: QuadNumber = y.parse()?;
        x.join(&y)?;
        Ok(Vec2K::new(x, y))
    }
}

/// 2×2 matrix [[a11, a12], [a21, a22]].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2K {
    pub a11: QuadNumber,
    pub a12: QuadNumber,
    pub a21: QuadNumber,
    pub a22: QuadNumber,
}

impl Mat2K {
    pub fn new(a11: QuadNumber, a12: QuadNumber, a21: QuadNumber, a22: QuadNumber) -> Self {
        Mat2K { a11, a12, a21, a22 }
    }

    pub fn ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Mat2K::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Mat2K::ints(1, 0, 0, 1)
    }

    pub fn scalar(s: QuadNumber) -> Self {
        Mat2K::new(s.clone(), QuadNumber::zero(), QuadNumber::zero(), s)
    }

    pub fn det(&self) -> QuadNumber {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn trace(&self) -> QuadNumber {
        &self.a11 + &self.a22
    }

    pub fn checked_apply(&self, v: &Vec2K) -> Result<Vec2K, NumError> {
        let x = self.a11.checked_mul(&v.x)?.checked_add(&self.a12.checked_mul(&v.y)?)?;
        let y = self.a21.checked_mul(&v.x)?.checked_add(&self.a22.checked_mul(&v.y)?)?;
        Ok(Vec2K::new(x, y))
    }

    pub fn apply(&self, v: &Vec2K) -> Vec2K {
        match self.checked_apply(v) {
            Ok(r) => r,
            Err(e) => panic!("{}", e),
        }
    }

    pub fn mul(&self, o: &Mat2K) -> Mat2K {
        Mat2K::new(
            &self.a11 * &o.a11 + &self.a12 * &o.a21,
            &self.a11 * &o.a12 + &self.a12 * &o.a22,
            &self.a21 * &o.a11 + &self.a22 * &o.a21,
            &self.a21 * &o.a12 + &self.a22 * &o.a22,
        )
    }

    pub fn inverse(&self) -> Result<Mat2K, NumError> {
        let det = self.det();
        let inv = det.inverse()?;
        Ok(Mat2K::new(
            &self.a22 * &inv,
            -(&self.a12 * &inv),
            -(&self.a21 * &inv),
            &self.a11 * &inv,
        ))
    }

    pub fn neg(&self) -> Mat2K {
        Mat2K::new(-&self.a11, -&self.a12, -&self.a21, -&self.a22)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2K::identity()
    }

    pub fn entries(&self) -> [&QuadNumber; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    /// Conformal map R = [[x, y], [−y, x]] / |v|² sending v to (1, 0).
    pub fn to_horizontal(v: &Vec2K) -> Result<Mat2K, NumError> {
        let n2 = v.dot(v);
        let inv = n2.inverse()?;
        Ok(Mat2K::new(
            &v.x * &inv,
            &v.y * &inv,
            -(&v.y * &inv),
            &v.x * &inv,
        ))
    }

    pub fn shear(mu: QuadNumber) -> Mat2K {
        Mat2K::new(QuadNumber::one(), mu, QuadNumber::zero(), QuadNumber::one())
    }
}

pub mod matrix_mod {
    //! Congruence helpers for matrices with rational-integer entries.
    use super::*;

    /// Is every entry of m − I an integer divisible by n?
    pub fn is_identity_mod(m: &Mat2K, n: i64) -> bool {
        let id = Mat2K::identity();
        let nn = BigInt::from(n);
        m.entries().iter().zip(id.entries().iter()).all(|(x, y)| {
            let diff = *x - *y;
            match diff.to_integer() {
                Some(k) => k.mod_floor(&nn).is_zero(),
                None => false,
            }
        })
    }
}

impl fmt::Display for Mat2K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}
