//! Exact and certified real arithmetic.
//!
//! Every coordinate the sweep touches is one of three shapes: a rational, a
//! quadratic surd `p + q√s`, or a certified expression over `{+, −, ×, ÷, √}`
//! whose value is known through shrinking dyadic enclosures. Comparisons of
//! the first two kinds are exact. Comparisons involving certified values
//! refine until the enclosures separate; they never report equality from
//! numerics alone.

mod certified;
mod surd;
mod value;

use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use certified::{CertifiedValue, Enclosure, Node};
pub use surd::{sqrt_exact, square_free_decompose, Surd};
pub use value::{solve_quadratic, ExactValue};

pub type Rational = BigRational;

/// Default cap on enclosure precision, in fractional bits.
pub const DEFAULT_MAX_PRECISION: u32 = 4096;

/// First precision tried when refining an enclosure.
pub const START_PRECISION: u32 = 64;

static MAX_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_MAX_PRECISION);

pub fn max_precision() -> u32 {
    MAX_PRECISION.load(AtomicOrdering::Relaxed)
}

/// Overrides the process-wide precision cap. Values below
/// [`START_PRECISION`] are clamped up.
pub fn set_max_precision(bits: u32) {
    MAX_PRECISION.store(bits.max(START_PRECISION), AtomicOrdering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("enclosures still overlap at the precision cap of {cap} bits")]
    PrecisionExhausted { cap: u32 },
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("all coefficients of the quadratic are zero")]
    DegenerateEquation,
    #[error("cannot parse exact value: {0}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a finite decimal like `"-1.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, NumericError> {
    let s = text.trim();
    let bad = || NumericError::Parse(text.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_int: BigInt = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            whole_abs.parse().map_err(|_| bad())?
        };
        let frac_int: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(whole_int * &scale + frac_int, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, lowest terms.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (continued-fraction descent).
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "simplest_between called with lo > hi");
    if lo.is_positive() {
        simplest_positive(lo, hi)
    } else if hi.is_negative() {
        -simplest_positive(&-hi, &-lo)
    } else {
        Rational::zero()
    }
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl < hi.floor() || &(fl.clone() + Rational::one()) <= hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the
    // fractional parts (order flips).
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_positive(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

fn upper_at(v: &ExactValue, level: u32) -> Result<Option<Rational>, NumericError> {
    Ok(match v {
        ExactValue::Rational(r) => Some(r.clone()),
        _ => v.enclosure_at_level(level)?.map(|e| e.hi()),
    })
}

fn lower_at(v: &ExactValue, level: u32) -> Result<Option<Rational>, NumericError> {
    Ok(match v {
        ExactValue::Rational(r) => Some(r.clone()),
        _ => v.enclosure_at_level(level)?.map(|e| e.lo()),
    })
}

/// A simple rational strictly between `a` and `b`, assuming `a < b`.
/// Refines enclosures until they separate.
pub fn rational_between(a: &ExactValue, b: &ExactValue) -> Result<Rational, NumericError> {
    let cap = max_precision();
    for level in 0..certified::levels_under(cap) {
        let (Some(ua), Some(lb)) = (upper_at(a, level)?, lower_at(b, level)?) else {
            continue;
        };
        if ua < lb {
            let quarter = (&lb - &ua) / int(4);
            return Ok(simplest_between(&(ua + &quarter), &(lb - quarter)));
        }
    }
    Err(NumericError::PrecisionExhausted { cap })
}

/// An integer strictly below `a`.
pub fn integer_below(a: &ExactValue) -> Result<Rational, NumericError> {
    let cap = max_precision();
    for level in 0..certified::levels_under(cap) {
        if let Some(lo) = lower_at(a, level)? {
            return Ok(lo.floor() - Rational::one());
        }
    }
    Err(NumericError::PrecisionExhausted { cap })
}

/// An integer strictly above `a`.
pub fn integer_above(a: &ExactValue) -> Result<Rational, NumericError> {
    let cap = max_precision();
    for level in 0..certified::levels_under(cap) {
        if let Some(hi) = upper_at(a, level)? {
            return Ok(hi.ceil() + Rational::one());
        }
    }
    Err(NumericError::PrecisionExhausted { cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 2), &rat(-3, 1)), int(-3));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(31, 10), &rat(32, 10)), rat(16, 5));
    }

    #[test]
    fn rationals_between_values() {
        let r2 = sqrt_exact(&int(2)).unwrap();
        let r3 = sqrt_exact(&int(3)).unwrap();
        let q = rational_between(&r2, &r3).unwrap();
        let qv = ExactValue::Rational(q.clone());
        assert_eq!(r2.compare(&qv).unwrap(), std::cmp::Ordering::Less);
        assert_eq!(qv.compare(&r3).unwrap(), std::cmp::Ordering::Less);
        let x = rational_between(&ExactValue::Rational(int(1)), &ExactValue::Rational(int(2))).unwrap();
        assert!(x > int(1) && x < int(2));
        assert!(integer_below(&r2).unwrap() < int(1));
        assert!(integer_above(&r2).unwrap() > int(2));
    }
}
