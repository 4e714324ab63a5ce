//! Linear combinations of square roots over the rationals.
//!
//! A [`RadicalSum`] is an element of a multiquadratic field
//! `Q(√p₁, …, √p_k)`, stored as `Σ cᵢ √dᵢ` with square-free radicands.
//! The field is closed under `+ − × ÷`, and the sign of an element is
//! decided exactly by eliminating one prime at a time: writing
//! `S = U + V√p` with `U, V` free of `p`, either `U` and `V` agree in sign
//! or the sign follows from `U² − pV²`, which no longer involves `p`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::number::Rational;

/// `Σ coeff · √radicand`, radicands square-free and `≥ 1`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, Rational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(BigInt::one(), q);
        s
    }

    /// `coeff · √radicand` for an already square-free radicand.
    pub fn from_term(coeff: Rational, radicand: BigInt) -> Self {
        let mut s = Self::zero();
        s.add_term(radicand, coeff);
        s
    }

    fn add_term(&mut self, radicand: BigInt, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    /// Number of distinct irrational radicands.
    pub fn irrational_count(&self) -> usize {
        self.terms.keys().filter(|d| !d.is_one()).count()
    }

    pub fn rational_part(&self) -> Rational {
        self.terms.get(&BigInt::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                // √d1·√d2 = g·√(d1 d2 / g²) with g = gcd(d1, d2)
                let g = d1.gcd(d2);
                let radicand = (d1 / &g) * (d2 / &g);
                out.add_term(radicand, c1 * c2 * Rational::from_integer(g));
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Splits `self = U + V·√p`, where neither `U` nor `V` involves `p`.
    fn split(&self, p: &BigInt) -> (Self, Self) {
        let mut u = Self::zero();
        let mut v = Self::zero();
        for (d, c) in &self.terms {
            if d.is_multiple_of(p) {
                v.add_term(d / p, c.clone());
            } else {
                u.add_term(d.clone(), c.clone());
            }
        }
        (u, v)
    }

    fn pivot_prime(&self) -> Option<BigInt> {
        self.terms
            .keys()
            .filter(|d| !d.is_one())
            .max()
            .map(smallest_prime_factor)
    }

    /// Exact sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            let c = self.terms.values().next().expect("one term");
            return c.cmp(&Rational::zero());
        }
        let p = self.pivot_prime().expect("more than one term implies a radical");
        let (u, v) = self.split(&p);
        let su = u.signum();
        let sv = v.signum();
        if sv == Ordering::Equal {
            return su;
        }
        if su == Ordering::Equal || su == sv {
            return sv;
        }
        // opposite signs: |U| vs |V|√p
        let pq = Rational::from_integer(p);
        let w = u.square().sub(&v.square().scale(&pq));
        match w.signum() {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            let (d, c) = self.terms.iter().next().expect("one term");
            // 1/(c√d) = √d / (c d)
            return Some(Self::from_term(
                Rational::one() / (c * Rational::from_integer(d.clone())),
                d.clone(),
            ));
        }
        let p = self.pivot_prime().expect("radical present");
        let (u, v) = self.split(&p);
        // (U + V√p)(U − V√p) = U² − pV²
        let pq = Rational::from_integer(p.clone());
        let norm = u.square().sub(&v.square().scale(&pq));
        let norm_inv = norm.inv()?;
        let conj = u.sub(&v.mul(&Self::from_term(Rational::one(), p)));
        Some(conj.mul(&norm_inv))
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| rational_to_f64(c) * big_to_f64(d).sqrt())
            .sum()
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn big_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// Smallest prime factor of `n ≥ 2` by trial division.
pub(crate) fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if n.is_even() {
        return two;
    }
    let mut f = BigInt::from(3);
    while &f * &f <= *n {
        if n.is_multiple_of(&f) {
            return f;
        }
        f += 2;
    }
    n.clone()
}

/// Writes `n ≥ 0` as `k² · m` with `m` square-free; returns `(k, m)`.
pub(crate) fn square_free_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "square_free_decompose of a negative integer");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut rest = n.clone();
    let mut k = BigInt::one();
    let mut m = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        if rest.is_multiple_of(&f) {
            let mut e = 0u32;
            while rest.is_multiple_of(&f) {
                rest /= &f;
                e += 1;
            }
            k *= f.pow(e / 2);
            if e % 2 == 1 {
                m *= &f;
            }
        }
        f += if f == BigInt::from(2) { 1 } else { 2 };
    }
    m *= rest;
    (k, m)
}
