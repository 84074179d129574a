use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{max_precision, NumericError, Rational, Surd, START_PRECISION};

/// Expression tree over exact leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Rational(Rational),
    Surd(Surd),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Neg(Arc<Node>),
    Sqrt(Arc<Node>),
}

/// Closed dyadic interval `[lo / 2^prec, hi / 2^prec]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.is_positive() {
        n.sqrt()
    } else {
        BigInt::zero()
    }
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    if !n.is_positive() {
        return BigInt::zero();
    }
    let r = n.sqrt();
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

impl Enclosure {
    pub fn from_rational(r: &Rational, prec: u32) -> Enclosure {
        let scaled = r.numer() << prec;
        Enclosure {
            lo: floor_div(&scaled, r.denom()),
            hi: ceil_div(&scaled, r.denom()),
            prec,
        }
    }

    pub fn from_surd(s: &Surd, prec: u32) -> Enclosure {
        // √s · 2^prec = √(s · 4^prec)
        let scaled = s.radicand() << (2 * prec);
        let root = Enclosure {
            lo: isqrt_floor(&scaled),
            hi: isqrt_ceil(&scaled),
            prec,
        };
        Enclosure::from_rational(s.p(), prec).add(&Enclosure::from_rational(s.q(), prec).mul(&root))
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> Rational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi(&self) -> Rational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn width(&self) -> Rational {
        BigRational::new(&self.hi - &self.lo, pow2(self.prec))
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        let (a, b) = align(self, other);
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.lo() <= *r && *r <= self.hi()
    }

    /// Order of two enclosures when they are disjoint.
    pub fn separation(&self, other: &Enclosure) -> Option<Ordering> {
        let (a, b) = align(self, other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if b.hi < a.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        super::rational_to_f64(&((self.lo() + self.hi()) / super::int(2)))
    }

    fn rescale(&self, prec: u32) -> Enclosure {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Enclosure {
                lo: &self.lo << (prec - self.prec),
                hi: &self.hi << (prec - self.prec),
                prec,
            },
            Ordering::Less => {
                let d = pow2(self.prec - prec);
                Enclosure {
                    lo: floor_div(&self.lo, &d),
                    hi: ceil_div(&self.hi, &d),
                    prec,
                }
            }
        }
    }

    fn intersect(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = align(self, other);
        let lo = a.lo.clone().max(b.lo.clone());
        let hi = a.hi.clone().min(b.hi.clone());
        if lo > hi {
            // cannot happen for sound enclosures of the same value
            return a;
        }
        Enclosure { lo, hi, prec: a.prec }
    }

    fn add(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = align(self, other);
        Enclosure {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
            prec: a.prec,
        }
    }

    fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    fn sub(&self, other: &Enclosure) -> Enclosure {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = align(self, other);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        let d = pow2(a.prec);
        Enclosure {
            lo: floor_div(min, &d),
            hi: ceil_div(max, &d),
            prec: a.prec,
        }
    }

    fn div(&self, other: &Enclosure) -> Option<Enclosure> {
        let (a, b) = align(self, other);
        if !(b.lo.is_positive() || b.hi.is_negative()) {
            return None;
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for num in [&a.lo, &a.hi] {
            let scaled = num << a.prec;
            for den in [&b.lo, &b.hi] {
                let f = floor_div(&scaled, den);
                let c = ceil_div(&scaled, den);
                lo = Some(match lo {
                    Some(v) if v <= f => v,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(v) if v >= c => v,
                    _ => c,
                });
            }
        }
        Some(Enclosure {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: a.prec,
        })
    }

    fn sqrt(&self) -> Result<Enclosure, NumericError> {
        if self.hi.is_negative() {
            return Err(NumericError::NegativeRadicand);
        }
        // √(L / 2^p) · 2^p = √(L · 2^p); a slightly negative lower end is an
        // artifact of rounding and clamps to zero.
        Ok(Enclosure {
            lo: isqrt_floor(&(&self.lo << self.prec)),
            hi: isqrt_ceil(&(&self.hi << self.prec)),
            prec: self.prec,
        })
    }
}

fn align(a: &Enclosure, b: &Enclosure) -> (Enclosure, Enclosure) {
    let p = a.prec.max(b.prec);
    (a.rescale(p), b.rescale(p))
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", super::rational_to_f64(&self.lo()), super::rational_to_f64(&self.hi()))
    }
}

/// Raw interval evaluation at a fixed precision. `Ok(None)` means a divisor
/// enclosure still straddled zero.
pub(crate) fn evaluate(node: &Node, prec: u32) -> Result<Option<Enclosure>, NumericError> {
    Ok(Some(match node {
        Node::Rational(r) => Enclosure::from_rational(r, prec),
        Node::Surd(s) => Enclosure::from_surd(s, prec),
        Node::Add(a, b) => match (evaluate(a, prec)?, evaluate(b, prec)?) {
            (Some(x), Some(y)) => x.add(&y),
            _ => return Ok(None),
        },
        Node::Sub(a, b) => match (evaluate(a, prec)?, evaluate(b, prec)?) {
            (Some(x), Some(y)) => x.sub(&y),
            _ => return Ok(None),
        },
        Node::Mul(a, b) => match (evaluate(a, prec)?, evaluate(b, prec)?) {
            (Some(x), Some(y)) => x.mul(&y),
            _ => return Ok(None),
        },
        Node::Div(a, b) => match (evaluate(a, prec)?, evaluate(b, prec)?) {
            (Some(x), Some(y)) => match x.div(&y) {
                Some(q) => q,
                None => return Ok(None),
            },
            _ => return Ok(None),
        },
        Node::Neg(a) => match evaluate(a, prec)? {
            Some(x) => x.neg(),
            None => return Ok(None),
        },
        Node::Sqrt(a) => match evaluate(a, prec)? {
            Some(x) => x.sqrt()?,
            None => return Ok(None),
        },
    }))
}

/// Precision used at refinement level `level`: 64, 128, 256, …
pub(crate) fn level_precision(level: u32) -> u32 {
    START_PRECISION.saturating_mul(1u32 << level.min(26))
}

/// Number of refinement levels allowed under `cap`.
pub(crate) fn levels_under(cap: u32) -> u32 {
    let mut level = 0;
    while level_precision(level + 1) <= cap && level < 26 {
        level += 1;
    }
    level + 1
}

/// A real number known through an expression tree and enclosures that
/// shrink as precision doubles.
///
/// The enclosure at a given level is the intersection of the raw
/// evaluations at every level up to it, so a higher level never reports a
/// wider interval than a lower one.
#[derive(Clone)]
pub struct CertifiedValue {
    node: Arc<Node>,
    cache: Arc<Mutex<Vec<Option<Enclosure>>>>,
}

impl CertifiedValue {
    pub fn new(node: Node) -> CertifiedValue {
        CertifiedValue::from_arc(Arc::new(node))
    }

    pub fn from_arc(node: Arc<Node>) -> CertifiedValue {
        CertifiedValue {
            node,
            cache: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn node(&self) -> &Arc<Node> {
        &self.node
    }

    /// Symbolic identity: same tree (pointer or structure).
    pub fn same_expression(&self, other: &CertifiedValue) -> bool {
        Arc::ptr_eq(&self.node, &other.node) || self.node == other.node
    }

    /// Enclosure at refinement `level` (precision `64·2^level`). `Ok(None)`
    /// when no finite enclosure is available yet.
    pub fn enclosure_at_level(&self, level: u32) -> Result<Option<Enclosure>, NumericError> {
        let mut cache = self.cache.lock().expect("enclosure cache poisoned");
        while cache.len() <= level as usize {
            let next = cache.len() as u32;
            let raw = evaluate(&self.node, level_precision(next))?;
            let prev = cache.last().cloned().flatten();
            let merged = match (prev, raw) {
                (Some(p), Some(r)) => Some(r.intersect(&p)),
                (Some(p), None) => Some(p.rescale(level_precision(next))),
                (None, r) => r,
            };
            cache.push(merged);
        }
        Ok(cache[level as usize].clone())
    }

    /// Enclosure at the smallest refinement level whose precision is at
    /// least `prec` bits.
    pub fn enclosure(&self, prec: u32) -> Result<Option<Enclosure>, NumericError> {
        let mut level = 0;
        while level_precision(level) < prec && level < 26 {
            level += 1;
        }
        self.enclosure_at_level(level)
    }

    /// Refines until the enclosure is narrower than `width` or the cap is hit.
    pub fn approximate(&self, width: &Rational) -> Result<Enclosure, NumericError> {
        let cap = max_precision();
        for level in 0..levels_under(cap) {
            if let Some(e) = self.enclosure_at_level(level)? {
                if &e.width() <= width {
                    return Ok(e);
                }
            }
        }
        Err(NumericError::PrecisionExhausted { cap })
    }
}

impl PartialEq for CertifiedValue {
    fn eq(&self, other: &Self) -> bool {
        self.same_expression(other)
    }
}

impl fmt::Debug for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CertifiedValue").field(&self.node).finish()
    }
}
