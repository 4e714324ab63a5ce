//! Exact rationals and quadratic irrationals.
//!
//! Every breakpoint, gauge value and jumping number produced by this crate
//! is an [`ExactReal`]: either a rational or `a + b√d` with `d ≥ 2`
//! square-free and `b ≠ 0`. The representation is canonical, so structural
//! equality is value equality. Values with different radicands are never
//! combined into a stored number; comparisons across radicands go through
//! [`RadicalSum`] and are exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::NumberError;
use crate::radical::{rational_to_f64, square_free_decompose, RadicalSum};

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn parse_rational(s: &str) -> Result<Rational, NumberError> {
    let t = s.trim();
    let r: Result<Rational, _> = t.parse();
    match r {
        Ok(v) => Ok(v),
        Err(_) => Err(NumberError::Parse(s.to_string())),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rat(Rational),
    /// `a + b·√d`
    Quad { a: Rational, b: Rational, d: BigInt },
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactReal::Rat(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExactReal::Rat(rat(n, d))
    }

    /// Canonical form of `a + b·√d` for `d ≥ 0`: square factors of `d` move into `b`.
    pub fn canonicalize(a: Rational, b: Rational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return ExactReal::Rat(a);
        }
        let (k, m) = square_free_decompose(&d);
        let b = b * Rational::from_integer(k);
        if m.is_one() {
            ExactReal::Rat(a + b)
        } else {
            ExactReal::Quad { a, b, d: m }
        }
    }

    /// `√q` for a nonnegative rational.
    pub fn sqrt_rational(q: &Rational) -> Result<Self, NumberError> {
        if q.is_negative() {
            return Err(NumberError::NegativeSqrt);
        }
        // √(n/d) = √(n d) / d
        let n = q.numer() * q.denom();
        Ok(Self::canonicalize(
            Rational::zero(),
            Rational::new(BigInt::one(), q.denom().clone()),
            n,
        ))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactReal::Rat(q) => Some(q),
            ExactReal::Quad { .. } => None,
        }
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        match self {
            ExactReal::Rat(_) => None,
            ExactReal::Quad { d, .. } => Some(d),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rat(q) if q.is_zero())
    }

    pub fn to_radical_sum(&self) -> RadicalSum {
        match self {
            ExactReal::Rat(q) => RadicalSum::from_rational(q.clone()),
            ExactReal::Quad { a, b, d } => RadicalSum::from_rational(a.clone())
                .add(&RadicalSum::from_term(b.clone(), d.clone())),
        }
    }

    /// Converts back from a radical sum; fails when more than one radicand survives.
    pub fn from_radical_sum(s: &RadicalSum) -> Result<Self, NumberError> {
        if s.irrational_count() > 1 {
            return Err(NumberError::NotQuadratic);
        }
        let a = s.rational_part();
        match s.terms().find(|(d, _)| !d.is_one()) {
            None => Ok(ExactReal::Rat(a)),
            Some((d, b)) => Ok(ExactReal::Quad {
                a,
                b: b.clone(),
                d: d.clone(),
            }),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            ExactReal::Rat(q) => q.cmp(&Rational::zero()),
            ExactReal::Quad { a, b, d } => quad_sign(a, b, d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactReal::Rat(q) => ExactReal::Rat(-q),
            ExactReal::Quad { a, b, d } => ExactReal::Quad {
                a: -a,
                b: -b,
                d: d.clone(),
            },
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        match self {
            ExactReal::Rat(q) => ExactReal::Rat(q * k),
            ExactReal::Quad { a, b, d } => {
                if k.is_zero() {
                    ExactReal::zero()
                } else {
                    ExactReal::Quad {
                        a: a * k,
                        b: b * k,
                        d: d.clone(),
                    }
                }
            }
        }
    }

    pub fn add_rational(&self, k: &Rational) -> Self {
        match self {
            ExactReal::Rat(q) => ExactReal::Rat(q + k),
            ExactReal::Quad { a, b, d } => ExactReal::Quad {
                a: a + k,
                b: b.clone(),
                d: d.clone(),
            },
        }
    }

    fn common_radicand<'a>(&'a self, other: &'a Self) -> Option<Option<&'a BigInt>> {
        match (self.radicand(), other.radicand()) {
            (None, None) => Some(None),
            (Some(d), None) | (None, Some(d)) => Some(Some(d)),
            (Some(d1), Some(d2)) if d1 == d2 => Some(Some(d1)),
            _ => None,
        }
    }

    fn parts(&self) -> (Rational, Rational) {
        match self {
            ExactReal::Rat(q) => (q.clone(), Rational::zero()),
            ExactReal::Quad { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    fn from_parts(a: Rational, b: Rational, d: Option<&BigInt>) -> Self {
        match d {
            Some(d) if !b.is_zero() => ExactReal::Quad { a, b, d: d.clone() },
            _ => ExactReal::Rat(a),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumberError> {
        match self.common_radicand(other) {
            Some(d) => {
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                Ok(Self::from_parts(a1 + a2, b1 + b2, d))
            }
            None => Self::from_radical_sum(&self.to_radical_sum().add(&other.to_radical_sum())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumberError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumberError> {
        match self.common_radicand(other) {
            Some(d) => {
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                let dq = d
                    .map(|d| Rational::from_integer(d.clone()))
                    .unwrap_or_else(Rational::zero);
                let a = &a1 * &a2 + &b1 * &b2 * dq;
                let b = a1 * b2 + a2 * b1;
                Ok(Self::from_parts(a, b, d))
            }
            None => Self::from_radical_sum(&self.to_radical_sum().mul(&other.to_radical_sum())),
        }
    }

    pub fn inv(&self) -> Result<Self, NumberError> {
        match self {
            ExactReal::Rat(q) => {
                if q.is_zero() {
                    Err(NumberError::DivisionByZero)
                } else {
                    Ok(ExactReal::Rat(q.recip()))
                }
            }
            ExactReal::Quad { a, b, d } => {
                // (a − b√d)/(a² − b²d); the norm is nonzero since √d is irrational
                let norm = a * a - b * b * Rational::from_integer(d.clone());
                Ok(ExactReal::Quad {
                    a: a / &norm,
                    b: -b / &norm,
                    d: d.clone(),
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumberError> {
        self.mul(&other.inv()?)
    }

    /// Square root, provided it lies in a quadratic field.
    ///
    /// For `α + β√d` this tries the denesting
    /// `√(α + β√d) = √((α+n)/2) + sgn(β)·√((α−n)/2)` with `n = √(α² − dβ²)`.
    pub fn sqrt(&self) -> Result<Self, NumberError> {
        match self {
            ExactReal::Rat(q) => Self::sqrt_rational(q),
            ExactReal::Quad { a, b, d } => {
                if self.signum() == Ordering::Less {
                    return Err(NumberError::NegativeSqrt);
                }
                let norm = a * a - b * b * Rational::from_integer(d.clone());
                let n = rational_sqrt_exact(&norm).ok_or(NumberError::NotQuadratic)?;
                let two = Rational::from_integer(2.into());
                let first = Self::sqrt_rational(&((a + &n) / &two))?;
                let second = Self::sqrt_rational(&((a - &n) / &two))?;
                let second = if b.is_negative() { second.neg() } else { second };
                first.add(&second)
            }
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactReal::Rat(x), ExactReal::Rat(y)) => x.cmp(y),
            _ => {
                if let (Some((x, rx)), Some((y, ry))) = (self.enclosure(), other.enclosure()) {
                    if x + rx < y - ry {
                        return Ordering::Less;
                    }
                    if x - rx > y + ry {
                        return Ordering::Greater;
                    }
                }
                self.cmp_slow(other)
            }
        }
    }

    /// Float midpoint and a radius far larger than the rounding error.
    fn enclosure(&self) -> Option<(f64, f64)> {
        let (a, b, d) = match self {
            ExactReal::Rat(q) => (rational_to_f64(q), 0.0, 0.0),
            ExactReal::Quad { a, b, d } => (rational_to_f64(a), rational_to_f64(b), num_traits::ToPrimitive::to_f64(d)?),
        };
        let t = b * d.sqrt();
        let (mid, mag) = (a + t, a.abs() + t.abs());
        (mid.is_finite() && mag.is_finite()).then_some((mid, mag * 1e-12 + 1e-300))
    }

    fn cmp_slow(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactReal::Rat(x), ExactReal::Rat(y)) => x.cmp(y),
            _ => match self.common_radicand(other) {
                Some(Some(d)) => {
                    let (a1, b1) = self.parts();
                    let (a2, b2) = other.parts();
                    quad_sign(&(a1 - a2), &(b1 - b2), d)
                }
                _ => self.to_radical_sum().cmp_value(&other.to_radical_sum()),
            },
        }
    }

    /// Largest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        match self {
            ExactReal::Rat(q) => q.floor().to_integer(),
            ExactReal::Quad { a, b, d } => {
                // b√d = ±√(b² d); isqrt of the integer part brackets it within 1
                let b2d = b * b * Rational::from_integer(d.clone());
                let r = (b2d.numer() * b2d.denom()).sqrt() / b2d.denom(); // ≈ |b|√d, floor-ish
                let approx = if b.is_negative() {
                    a - Rational::from_integer(r)
                } else {
                    a + Rational::from_integer(r)
                };
                let mut f = approx.floor().to_integer() - 2;
                while self.cmp_exact(&ExactReal::Rat(Rational::from_integer(&f + 1)))
                    != Ordering::Less
                {
                    f += 1;
                }
                f
            }
        }
    }

    /// Smallest integer `≥ self`.
    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rat(q) => rational_to_f64(q),
            ExactReal::Quad { .. } => {
                // a + b√d can cancel badly in f64; go through a 96-bit rational approximation
                rational_to_f64(&self.approx(96))
            }
        }
    }

    /// Rational within `2^-bits` of the value, computed by integer square roots.
    /// Independent of the sign-analysis comparison path.
    pub fn approx(&self, bits: u32) -> Rational {
        match self {
            ExactReal::Rat(q) => q.clone(),
            ExactReal::Quad { a, b, d } => {
                let scale = BigInt::one() << (2 * bits + 8);
                let b2d = b * b * Rational::from_integer(d.clone());
                let scaled = (b2d.numer() * &scale) / b2d.denom();
                let root = scaled.sqrt();
                let denom = BigInt::one() << (bits + 4);
                let mag = Rational::new(root, denom);
                if b.is_negative() {
                    a - mag
                } else {
                    a + mag
                }
            }
        }
    }
}

fn quad_sign(a: &Rational, b: &Rational, d: &BigInt) -> Ordering {
    let sa = a.cmp(&Rational::zero());
    let sb = b.cmp(&Rational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare a² with b²d
    let lhs = a * a;
    let rhs = b * b * Rational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn rational_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl From<Rational> for ExactReal {
    fn from(q: Rational) -> Self {
        ExactReal::Rat(q)
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::from_int(n)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rat(q) => f.write_str(&format_rational(q)),
            ExactReal::Quad { a, b, d } => {
                let radical = |c: &Rational| {
                    if c.is_one() {
                        format!("sqrt({d})")
                    } else {
                        format!("{}*sqrt({d})", format_rational(c))
                    }
                };
                if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-{}", radical(&-b))
                    } else {
                        f.write_str(&radical(b))
                    }
                } else if b.is_negative() {
                    write!(f, "{} - {}", format_rational(a), radical(&-b))
                } else {
                    write!(f, "{} + {}", format_rational(a), radical(b))
                }
            }
        }
    }
}

impl FromStr for ExactReal {
    type Err = NumberError;

    /// Sums of signed terms `p/q`, `r/s*sqrt(d)` or `sqrt(d)`, in any order,
    /// with at most one radicand after simplification.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || NumberError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut starts = vec![0];
        for (i, c) in t.char_indices().skip(1) {
            if (c == '+' || c == '-') && !t[..i].ends_with(['/', '*', '+', '-']) {
                starts.push(i);
            }
        }
        starts.push(t.len());
        let mut total = ExactReal::zero();
        for w in starts.windows(2) {
            let term = &t[w[0]..w[1]];
            let (sign, body) = match term.as_bytes()[0] {
                b'+' => (Rational::one(), &term[1..]),
                b'-' => (-Rational::one(), &term[1..]),
                _ => (Rational::one(), term),
            };
            let value = match body.find("sqrt(") {
                None => ExactReal::Rat(parse_rational(body)?),
                Some(at) => {
                    let inner = body[at + 5..].strip_suffix(')').ok_or_else(err)?;
                    let d: BigInt = inner.parse().map_err(|_| err())?;
                    if d.is_negative() {
                        return Err(err());
                    }
                    let coef = match &body[..at] {
                        "" => Rational::one(),
                        head => parse_rational(head.strip_suffix('*').ok_or_else(err)?)?,
                    };
                    ExactReal::canonicalize(Rational::zero(), coef, d)
                }
            };
            total = total.add(&value.scale(&sign)).map_err(|_| err())?;
        }
        Ok(total)
    }
}

impl Serialize for ExactReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializes a rational as its text form, for `#[serde(serialize_with)]`.
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// A point of `Z²≥0`, used as a monomial exponent or a shifted exponent `A + (1,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: u64,
    pub y: u64,
}

impl LatticePoint {
    pub const fn new(x: u64, y: u64) -> Self {
        LatticePoint { x, y }
    }

    pub fn is_positive(&self) -> bool {
        self.x >= 1 && self.y >= 1
    }

    pub fn scaled(&self, m: u64) -> Self {
        LatticePoint::new(self.x * m, self.y * m)
    }

    pub fn divides(&self, other: &LatticePoint) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn to_rational(&self) -> (Rational, Rational) {
        (
            Rational::from_integer(self.x.into()),
            Rational::from_integer(self.y.into()),
        )
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn bigint_to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

/// Least common multiple of `1..=n`.
pub fn lcm_upto(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    fn quad() -> impl proptest::strategy::Strategy<Value = ExactReal> {
        use proptest::prelude::*;
        (-40i64..40, 1i64..8, -40i64..40, 1i64..8, 1i64..30)
            .prop_map(|(an, ad, bn, bd, d)| ExactReal::canonicalize(rat(an, ad), rat(bn, bd), d.into()))
    }

    proptest::proptest! {
        #[test]
        fn float_filter_agrees_with_exact(x in quad(), y in quad(), k in 0u32..60) {
            proptest::prop_assert_eq!(x.cmp_exact(&y), x.cmp_slow(&y));
            // near ties: a rational within 2^-k
            let near = ExactReal::from(x.approx(k));
            proptest::prop_assert_eq!(x.cmp_exact(&near), x.cmp_slow(&near));
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ex("3/2").cmp(&ex("3/2")), Ordering::Equal);
        // (2√2)² = 8 < 9
        assert_eq!(ex("1 + 2*sqrt(2)").cmp(&ex("4")), Ordering::Less);
        // 2 > 49/25
        assert_eq!(ex("sqrt(2)").cmp(&ex("7/5")), Ordering::Greater);
    }

    #[test]
    fn compare_across_radicands() {
        assert_eq!(ex("sqrt(3)").cmp(&ex("sqrt(2)")), Ordering::Greater);
        assert_eq!(ex("1 + sqrt(2)").cmp(&ex("sqrt(6)")), Ordering::Less); // 2.414 < 2.449
        assert_eq!(ex("5/2 - sqrt(2)").cmp(&ex("2 - 1/2*sqrt(3)")), Ordering::Less);
    }

    #[test]
    fn canonicalize_examples() {
        let r = |n, d| rat(n, d);
        assert_eq!(
            ExactReal::canonicalize(r(1, 1), r(1, 1), 8.into()),
            ex("1 + 2*sqrt(2)")
        );
        assert_eq!(ExactReal::canonicalize(r(3, 1), r(0, 1), 5.into()), ex("3"));
        assert_eq!(ExactReal::canonicalize(r(0, 1), r(1, 2), 4.into()), ex("1"));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let v = ExactReal::canonicalize(rat(1, 3), rat(5, 7), 72.into());
        if let ExactReal::Quad { a, b, d } = v.clone() {
            assert_eq!(ExactReal::canonicalize(a, b, d), v);
        } else {
            panic!("expected quadratic");
        }
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "3/2",
            "-4",
            "sqrt(2)",
            "-sqrt(5)",
            "3/2 - 1/2*sqrt(5)",
            "1 + 2*sqrt(2)",
            "-7/3 + 4/9*sqrt(30)",
            "-1/2*sqrt(3)",
        ] {
            let v = ex(s);
            assert_eq!(v.to_string(), s);
            assert_eq!(ex(&v.to_string()), v);
        }
        assert_eq!(ex("1/2 + 3/4*sqrt(8)"), ex("1/2 + 3/2*sqrt(2)"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<ExactReal>().is_err());
        assert!("1/0x".parse::<ExactReal>().is_err());
        assert!("sqrt(2".parse::<ExactReal>().is_err());
        assert!("sqrt(-2)".parse::<ExactReal>().is_err());
    }

    #[test]
    fn arithmetic_in_one_field() {
        let x = ex("1 + sqrt(2)");
        let y = x.inv().unwrap();
        assert_eq!(y, ex("-1 + sqrt(2)"));
        assert_eq!(x.mul(&y).unwrap(), ExactReal::one());
        assert_eq!(x.mul(&x).unwrap(), ex("3 + 2*sqrt(2)"));
    }

    #[test]
    fn mixed_field_sum_is_rejected() {
        assert_eq!(
            ex("sqrt(2)").add(&ex("sqrt(3)")),
            Err(NumberError::NotQuadratic)
        );
        // but cancellations back into one field are fine
        let z = ex("sqrt(2)").mul(&ex("sqrt(3)")).unwrap();
        assert_eq!(z, ex("sqrt(6)"));
    }

    #[test]
    fn denesting_square_roots() {
        assert_eq!(ex("3 + 2*sqrt(2)").sqrt().unwrap(), ex("1 + sqrt(2)"));
        assert_eq!(ex("9/4").sqrt().unwrap(), ex("3/2"));
        assert_eq!(ex("8").sqrt().unwrap(), ex("2*sqrt(2)"));
        assert_eq!(ex("1 + sqrt(2)").sqrt(), Err(NumberError::NotQuadratic));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(ex("1 + 2*sqrt(2)").floor(), 3.into());
        assert_eq!(ex("-sqrt(2)").floor(), (-2).into());
        assert_eq!(ex("7/2").ceil(), 4.into());
        assert_eq!(ex("4").floor(), 4.into());
        assert_eq!(ex("sqrt(2)").ceil(), 2.into());
    }

    #[test]
    fn float_conversion() {
        assert!((ex("3/2 - 1/2*sqrt(5)").to_f64() - 0.3819660112501051).abs() < 1e-15);
    }
}
