use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactValue, NumericError, Rational};

/// `p + q·√s` with `q ≠ 0` and `s ≥ 2` free of small square factors.
///
/// Values with `q = 0` or a perfect-square radicand are always stored as
/// plain rationals by the constructors, so two `Surd`s with equal fields are
/// equal numbers and a `Surd` is never rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    p: Rational,
    q: Rational,
    s: BigInt,
}

impl Surd {
    /// Builds `p + q√s`, normalizing the radicand. Returns a rational when
    /// the irrational part vanishes.
    pub fn new(p: Rational, q: Rational, s: BigInt) -> Result<ExactValue, NumericError> {
        if s.is_negative() {
            return Err(NumericError::NegativeRadicand);
        }
        if q.is_zero() || s.is_zero() {
            return Ok(ExactValue::Rational(p));
        }
        let (k, free) = square_free_decompose(&s);
        let q = q * BigRational::from_integer(k);
        if free.is_one() {
            return Ok(ExactValue::Rational(p + q));
        }
        Ok(ExactValue::Surd(Surd { p, q, s: free }))
    }

    /// Trusted constructor for values whose radicand is already normalized.
    pub(crate) fn from_parts(p: Rational, q: Rational, s: BigInt) -> ExactValue {
        if q.is_zero() {
            ExactValue::Rational(p)
        } else {
            ExactValue::Surd(Surd { p, q, s })
        }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.s
    }

    pub fn sign(&self) -> Ordering {
        sign_p_plus_q_sqrt(&self.p, &self.q, &self.s)
    }

    pub fn neg(&self) -> Surd {
        Surd {
            p: -&self.p,
            q: -&self.q,
            s: self.s.clone(),
        }
    }

    pub fn abs(&self) -> Surd {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub(crate) fn add_same(&self, other: &Surd) -> ExactValue {
        debug_assert_eq!(self.s, other.s);
        Surd::from_parts(&self.p + &other.p, &self.q + &other.q, self.s.clone())
    }

    pub(crate) fn add_rational(&self, r: &Rational) -> Surd {
        Surd {
            p: &self.p + r,
            q: self.q.clone(),
            s: self.s.clone(),
        }
    }

    pub(crate) fn scale(&self, r: &Rational) -> ExactValue {
        Surd::from_parts(&self.p * r, &self.q * r, self.s.clone())
    }

    pub(crate) fn mul_same(&self, other: &Surd) -> ExactValue {
        debug_assert_eq!(self.s, other.s);
        let s = BigRational::from_integer(self.s.clone());
        let p = &self.p * &other.p + &self.q * &other.q * s;
        let q = &self.p * &other.q + &other.p * &self.q;
        Surd::from_parts(p, q, self.s.clone())
    }

    /// `1 / (p + q√s) = (p − q√s) / (p² − q²s)`; the denominator is never
    /// zero because `√s` is irrational.
    pub(crate) fn recip(&self) -> ExactValue {
        let norm = &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.s.clone());
        Surd::from_parts(&self.p / &norm, -&self.q / &norm, self.s.clone())
    }

    /// Exact square: `p² + q²s + 2pq√s`.
    pub(crate) fn square(&self) -> ExactValue {
        self.mul_same(self)
    }

    pub fn to_f64(&self) -> f64 {
        let s = self.s.to_f64().unwrap_or(f64::INFINITY);
        super::rational_to_f64(&self.p) + super::rational_to_f64(&self.q) * s.sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.p, self.q, self.s)
    }
}

/// Exact sign of `p + q√s` for `s ≥ 0`.
pub(crate) fn sign_p_plus_q_sqrt(p: &Rational, q: &Rational, s: &BigInt) -> Ordering {
    let sp = p.cmp(&Rational::zero());
    let sq = if s.is_zero() {
        Ordering::Equal
    } else {
        q.cmp(&Rational::zero())
    };
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // Opposite signs: compare p² with q²s.
    let p2 = p * p;
    let q2s = q * q * BigRational::from_integer(s.clone());
    match p2.cmp(&q2s) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Splits `n ≥ 0` as `k²·s`. Radicands below 2⁴⁰ are made fully square-free;
/// larger ones have square factors of primes below 2¹⁶ removed and are
/// checked for being a perfect square outright.
pub fn square_free_decompose(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut free = BigInt::one();
    let limit: u64 = if rest.bits() <= 40 {
        rest.sqrt().to_u64().unwrap_or(1 << 20) + 1
    } else {
        1 << 16
    };
    let mut p: u64 = 2;
    while p <= limit {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut count = 0u32;
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            count += 1;
        }
        for _ in 0..count / 2 {
            k *= &pb;
        }
        if count % 2 == 1 {
            free *= &pb;
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        (k * r, free)
    } else {
        (k, free * rest)
    }
}

/// Square root of a non-negative rational: rational when `a` is a square,
/// else `0 + q√s` with `q²s = a`.
pub fn sqrt_exact(a: &Rational) -> Result<ExactValue, NumericError> {
    if a.is_negative() {
        return Err(NumericError::NegativeRadicand);
    }
    if a.is_zero() {
        return Ok(ExactValue::Rational(Rational::zero()));
    }
    // √(n/d) = √(n·d) / d
    let n = a.numer();
    let d = a.denom();
    let (k, s) = square_free_decompose(&(n * d));
    let q = BigRational::new(k, d.clone());
    if s.is_one() {
        Ok(ExactValue::Rational(q))
    } else {
        Ok(ExactValue::Surd(Surd {
            p: Rational::zero(),
            q,
            s,
        }))
    }
}
