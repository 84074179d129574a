use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::certified::levels_under;
use super::surd::sign_p_plus_q_sqrt;
use super::{
    format_rational, max_precision, parse_rational, sqrt_exact, CertifiedValue, Enclosure, Node,
    NumericError, Rational, Surd,
};

/// A real number in one of the three exact representations.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactValue {
    Rational(Rational),
    Surd(Surd),
    Certified(CertifiedValue),
}

impl From<Rational> for ExactValue {
    fn from(r: Rational) -> Self {
        ExactValue::Rational(r)
    }
}

impl From<Surd> for ExactValue {
    fn from(s: Surd) -> Self {
        ExactValue::Surd(s)
    }
}

impl ExactValue {
    pub fn zero() -> ExactValue {
        ExactValue::Rational(Rational::zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactValue::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactValue::Certified(_))
    }

    /// True only when the value is known to be zero without numerics.
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, ExactValue::Rational(r) if r.is_zero())
    }

    pub fn to_node(&self) -> Arc<Node> {
        match self {
            ExactValue::Rational(r) => Arc::new(Node::Rational(r.clone())),
            ExactValue::Surd(s) => Arc::new(Node::Surd(s.clone())),
            ExactValue::Certified(c) => c.node().clone(),
        }
    }

    fn certified(node: Node) -> ExactValue {
        ExactValue::Certified(CertifiedValue::new(node))
    }

    pub fn neg(&self) -> ExactValue {
        match self {
            ExactValue::Rational(r) => ExactValue::Rational(-r),
            ExactValue::Surd(s) => ExactValue::Surd(s.neg()),
            ExactValue::Certified(c) => ExactValue::certified(Node::Neg(c.node().clone())),
        }
    }

    pub fn add(&self, other: &ExactValue) -> ExactValue {
        use ExactValue::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Rational(a + b),
            (Rational(r), Surd(s)) | (Surd(s), Rational(r)) => Surd(s.add_rational(r)),
            (Surd(a), Surd(b)) if a.radicand() == b.radicand() => a.add_same(b),
            _ if other.is_exact_zero() => self.clone(),
            _ if self.is_exact_zero() => other.clone(),
            _ => ExactValue::certified(Node::Add(self.to_node(), other.to_node())),
        }
    }

    pub fn sub(&self, other: &ExactValue) -> ExactValue {
        use ExactValue::*;
        match (self, other) {
            (Rational(_), Rational(_)) | (Rational(_), Surd(_)) | (Surd(_), Rational(_)) => {
                self.add(&other.neg())
            }
            (Surd(a), Surd(b)) if a.radicand() == b.radicand() => self.add(&other.neg()),
            _ if other.is_exact_zero() => self.clone(),
            _ => ExactValue::certified(Node::Sub(self.to_node(), other.to_node())),
        }
    }

    pub fn mul(&self, other: &ExactValue) -> ExactValue {
        use ExactValue::*;
        if self.is_exact_zero() || other.is_exact_zero() {
            return ExactValue::zero();
        }
        match (self, other) {
            (Rational(a), Rational(b)) => Rational(a * b),
            (Rational(r), Surd(s)) | (Surd(s), Rational(r)) => s.scale(r),
            (Surd(a), Surd(b)) if a.radicand() == b.radicand() => a.mul_same(b),
            _ => ExactValue::certified(Node::Mul(self.to_node(), other.to_node())),
        }
    }

    pub fn div(&self, other: &ExactValue) -> Result<ExactValue, NumericError> {
        use ExactValue::*;
        if other.is_exact_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if self.is_exact_zero() {
            return Ok(ExactValue::zero());
        }
        Ok(match (self, other) {
            (Rational(a), Rational(b)) => Rational(a / b),
            (Surd(s), Rational(r)) => s.scale(&r.recip()),
            (Rational(_), Surd(s)) => self.mul(&s.recip()),
            (Surd(a), Surd(b)) if a.radicand() == b.radicand() => self.mul(&b.recip()),
            _ => ExactValue::certified(Node::Div(self.to_node(), other.to_node())),
        })
    }

    pub fn square(&self) -> ExactValue {
        match self {
            ExactValue::Rational(r) => ExactValue::Rational(r * r),
            ExactValue::Surd(s) => s.square(),
            ExactValue::Certified(c) => {
                ExactValue::certified(Node::Mul(c.node().clone(), c.node().clone()))
            }
        }
    }

    pub fn sqrt(&self) -> Result<ExactValue, NumericError> {
        match self {
            ExactValue::Rational(r) => sqrt_exact(r),
            ExactValue::Surd(s) => {
                if s.sign() == Ordering::Less {
                    return Err(NumericError::NegativeRadicand);
                }
                Ok(ExactValue::certified(Node::Sqrt(self.to_node())))
            }
            ExactValue::Certified(c) => Ok(ExactValue::certified(Node::Sqrt(c.node().clone()))),
        }
    }

    pub fn sign(&self) -> Result<Ordering, NumericError> {
        match self {
            ExactValue::Rational(r) => Ok(r.cmp(&Rational::zero())),
            ExactValue::Surd(s) => Ok(s.sign()),
            ExactValue::Certified(_) => self.compare(&ExactValue::zero()),
        }
    }

    pub fn abs(&self) -> Result<ExactValue, NumericError> {
        Ok(match self {
            ExactValue::Rational(r) => ExactValue::Rational(r.abs()),
            ExactValue::Surd(s) => ExactValue::Surd(s.abs()),
            ExactValue::Certified(_) => {
                if self.sign()? == Ordering::Less {
                    self.neg()
                } else {
                    self.clone()
                }
            }
        })
    }

    /// Exact ordering for rationals and surds; certified values are refined
    /// up to the process-wide precision cap.
    pub fn compare(&self, other: &ExactValue) -> Result<Ordering, NumericError> {
        self.compare_with_cap(other, max_precision())
    }

    pub fn compare_with_cap(&self, other: &ExactValue, cap: u32) -> Result<Ordering, NumericError> {
        use ExactValue::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(a.cmp(b)),
            (Surd(s), Rational(r)) => Ok(s.add_rational(&-r).sign()),
            (Rational(r), Surd(s)) => Ok(s.add_rational(&-r).sign().reverse()),
            (Surd(a), Surd(b)) => Ok(compare_surds(a, b)),
            (Certified(a), Certified(b)) if a.same_expression(b) => Ok(Ordering::Equal),
            _ => compare_by_refinement(self, other, cap),
        }
    }

    pub fn enclosure_at_level(&self, level: u32) -> Result<Option<Enclosure>, NumericError> {
        let prec = super::certified::level_precision(level);
        Ok(match self {
            ExactValue::Rational(r) => Some(Enclosure::from_rational(r, prec)),
            ExactValue::Surd(s) => Some(Enclosure::from_surd(s, prec)),
            ExactValue::Certified(c) => c.enclosure_at_level(level)?,
        })
    }

    /// Enclosure with at least `prec` fractional bits.
    pub fn enclosure(&self, prec: u32) -> Result<Option<Enclosure>, NumericError> {
        match self {
            ExactValue::Rational(r) => Ok(Some(Enclosure::from_rational(r, prec))),
            ExactValue::Surd(s) => Ok(Some(Enclosure::from_surd(s, prec))),
            ExactValue::Certified(c) => c.enclosure(prec),
        }
    }

    /// Best-effort float; exact values round, certified values use a
    /// 64-bit-precision enclosure midpoint.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactValue::Rational(r) => super::rational_to_f64(r),
            ExactValue::Surd(s) => s.to_f64(),
            ExactValue::Certified(c) => {
                for level in 0..4 {
                    if let Ok(Some(e)) = c.enclosure_at_level(level) {
                        return e.to_f64_mid();
                    }
                }
                f64::NAN
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExactValue::Rational(r) => Value::String(format_rational(r)),
            ExactValue::Surd(s) => {
                let radicand = match s.radicand().to_u64() {
                    Some(n) => json!(n),
                    None => Value::String(s.radicand().to_string()),
                };
                json!({
                    "p": format_rational(s.p()),
                    "q": format_rational(s.q()),
                    "s": radicand,
                })
            }
            // Never round-tripped; recomputed from the arrangement.
            ExactValue::Certified(_) => json!({ "certified": format!("{:.17e}", self.to_f64()) }),
        }
    }

    pub fn from_json(v: &Value) -> Result<ExactValue, NumericError> {
        let bad = || NumericError::Parse(v.to_string());
        match v {
            Value::String(s) => Ok(ExactValue::Rational(parse_rational(s)?)),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(ExactValue::Rational(super::int(i)))
                } else {
                    parse_rational(&n.to_string()).map(ExactValue::Rational)
                }
            }
            Value::Object(map) => {
                let p = map.get("p").ok_or_else(bad)?;
                let q = map.get("q").ok_or_else(bad)?;
                let s = map.get("s").ok_or_else(bad)?;
                let p = rational_field(p).ok_or_else(bad)?;
                let q = rational_field(q).ok_or_else(bad)?;
                let s: BigInt = match s {
                    Value::Number(n) => n.as_u64().map(BigInt::from).ok_or_else(bad)?,
                    Value::String(t) => t.parse().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                Surd::new(p, q, s)
            }
            _ => Err(bad()),
        }
    }
}

fn rational_field(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok(),
        Value::Number(n) => n.as_i64().map(super::int),
        _ => None,
    }
}

/// Sign of `(p₁ − p₂) + q₁√s₁ − q₂√s₂` by one squaring step.
fn compare_surds(a: &Surd, b: &Surd) -> Ordering {
    let big_a = a.p() - b.p();
    if a.radicand() == b.radicand() {
        return sign_p_plus_q_sqrt(&big_a, &(a.q() - b.q()), a.radicand());
    }
    // u = A + B√s₁, v = C√s₂
    let big_b = a.q().clone();
    let big_c = -b.q().clone();
    let su = sign_p_plus_q_sqrt(&big_a, &big_b, a.radicand());
    let sv = big_c.cmp(&Rational::zero());
    if su == Ordering::Equal {
        return sv;
    }
    if sv == Ordering::Equal || su == sv {
        return su;
    }
    // |u| vs |v|: u² − v² = (A² + B²s₁ − C²s₂) + 2AB√s₁
    let s1 = Rational::from_integer(a.radicand().clone());
    let s2 = Rational::from_integer(b.radicand().clone());
    let p = &big_a * &big_a + &big_b * &big_b * s1 - &big_c * &big_c * s2;
    let q = super::int(2) * &big_a * &big_b;
    match sign_p_plus_q_sqrt(&p, &q, a.radicand()) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

fn compare_by_refinement(a: &ExactValue, b: &ExactValue, cap: u32) -> Result<Ordering, NumericError> {
    for level in 0..levels_under(cap) {
        let (Some(ea), Some(eb)) = (a.enclosure_at_level(level)?, b.enclosure_at_level(level)?) else {
            continue;
        };
        if let Some(ord) = ea.separation(&eb) {
            return Ok(ord);
        }
    }
    Err(NumericError::PrecisionExhausted { cap })
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(r) => write!(f, "{r}"),
            ExactValue::Surd(s) => write!(f, "{s}"),
            ExactValue::Certified(_) => write!(f, "≈{:.12}", self.to_f64()),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        ExactValue::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Real roots of `a·x² + b·x + c` in increasing order.
pub fn solve_quadratic(a: &Rational, b: &Rational, c: &Rational) -> Result<Vec<ExactValue>, NumericError> {
    if a.is_zero() && b.is_zero() {
        if c.is_zero() {
            return Err(NumericError::DegenerateEquation);
        }
        return Ok(Vec::new());
    }
    if a.is_zero() {
        return Ok(vec![ExactValue::Rational(-c / b)]);
    }
    let disc = b * b - super::int(4) * a * c;
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    let two_a = super::int(2) * a;
    let minus_b = ExactValue::Rational(-b);
    let denom = ExactValue::Rational(two_a.clone());
    if disc.is_zero() {
        return Ok(vec![ExactValue::Rational(-b / &two_a)]);
    }
    let root = sqrt_exact(&disc)?;
    let mut r1 = minus_b.sub(&root).div(&denom)?;
    let mut r2 = minus_b.add(&root).div(&denom)?;
    if a.is_negative() {
        std::mem::swap(&mut r1, &mut r2);
    }
    Ok(vec![r1, r2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn surd(p: Rational, q: Rational, s: i64) -> ExactValue {
        Surd::new(p, q, BigInt::from(s)).unwrap()
    }

    #[test]
    fn compare_examples() {
        let half3 = ExactValue::Rational(rat(3, 2));
        assert_eq!(half3.compare(&half3.clone()).unwrap(), Ordering::Equal);
        let one_plus_r2 = surd(int(1), int(1), 2);
        assert_eq!(one_plus_r2.compare(&ExactValue::Rational(rat(5, 2))).unwrap(), Ordering::Less);
        let two_minus_r2 = surd(int(2), int(-1), 2);
        assert_eq!(two_minus_r2.compare(&ExactValue::Rational(rat(1, 2))).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mixed_radicands_compare_exactly() {
        // √2 + √3 ≈ 3.146 vs 1 + √5 ≈ 3.236
        let a = surd(int(0), int(1), 2).add(&surd(int(0), int(1), 3));
        assert!(matches!(a, ExactValue::Certified(_)));
        let b = surd(int(1), int(1), 5);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        // √3 vs 1 + √2/2·... exact surd-vs-surd path
        let c = surd(int(0), int(1), 3);
        let d = surd(rat(1, 2), rat(1, 1), 2);
        assert_eq!(compare_surds(c.as_surd(), d.as_surd()), Ordering::Less);
    }

    #[test]
    fn certified_equality_is_never_numeric() {
        let r2 = surd(int(0), int(1), 2);
        let r3 = surd(int(0), int(1), 3);
        let x = r2.add(&r3);
        let y = r3.add(&r2);
        // same number, different trees
        assert!(matches!(
            x.compare_with_cap(&y, 256),
            Err(NumericError::PrecisionExhausted { cap: 256 })
        ));
        assert_eq!(x.compare(&x.clone()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn quadratic_examples() {
        let roots = solve_quadratic(&int(1), &int(-2), &int(-1)).unwrap();
        assert_eq!(roots, vec![surd(int(1), int(-1), 2), surd(int(1), int(1), 2)]);
        let roots = solve_quadratic(&int(1), &int(0), &int(-4)).unwrap();
        assert_eq!(roots, vec![ExactValue::Rational(int(-2)), ExactValue::Rational(int(2))]);
        assert!(solve_quadratic(&int(1), &int(0), &int(1)).unwrap().is_empty());
        assert!(solve_quadratic(&int(0), &int(0), &int(3)).unwrap().is_empty());
        assert_eq!(
            solve_quadratic(&int(0), &int(0), &int(0)),
            Err(NumericError::DegenerateEquation)
        );
        let roots = solve_quadratic(&int(-1), &int(0), &int(2)).unwrap();
        assert_eq!(roots[0].compare(&roots[1]).unwrap(), Ordering::Less);
    }

    #[test]
    fn surd_arithmetic_closes_within_a_radicand() {
        // (1 + √2)(1 − √2) = −1
        let a = surd(int(1), int(1), 2);
        let b = surd(int(1), int(-1), 2);
        assert_eq!(a.mul(&b), ExactValue::Rational(int(-1)));
        // (1 + √2) / (1 + √2) = 1
        assert_eq!(a.div(&a).unwrap(), ExactValue::Rational(int(1)));
    }

    #[test]
    fn json_forms() {
        let r = ExactValue::Rational(rat(-3, 4));
        assert_eq!(r.to_json(), json!("-3/4"));
        let s = surd(rat(1, 2), int(3), 8);
        assert_eq!(s.to_json(), json!({"p": "1/2", "q": "6", "s": 2}));
        assert_eq!(ExactValue::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(ExactValue::from_json(&json!("6/8")).unwrap(), ExactValue::Rational(rat(3, 4)));
    }

    impl ExactValue {
        fn as_surd(&self) -> &Surd {
            match self {
                ExactValue::Surd(s) => s,
                _ => panic!("not a surd"),
            }
        }
    }
}
