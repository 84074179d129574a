use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Arrangement, ArrangementError, CircleConstraint, Side, MAX_SLICE_COMPONENTS};
use crate::numeric::{ExactValue, NumericError, Rational};

/// Which band end an interval endpoint came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndSource {
    pub constraint: usize,
    pub upper: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub value: ExactValue,
    pub source: Option<EndSource>,
}

/// Closed interval; `None` ends are infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn full() -> Interval {
        Interval { lo: None, hi: None }
    }

    pub fn is_point(&self) -> Result<bool, NumericError> {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => Ok(l.value.compare(&h.value)? == Ordering::Equal),
            _ => Ok(false),
        }
    }

    pub fn contains_value(&self, v: &ExactValue) -> Result<bool, NumericError> {
        if let Some(l) = &self.lo {
            if l.value.compare(v)? == Ordering::Greater {
                return Ok(false);
            }
        }
        if let Some(h) = &self.hi {
            if h.value.compare(v)? == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.as_ref().map_or(f64::NEG_INFINITY, |b| b.value.to_f64())
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.as_ref().map_or(f64::INFINITY, |b| b.value.to_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Some(b) => write!(f, "[{}, ", b.value)?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.hi {
            Some(b) => write!(f, "{}]", b.value),
            None => write!(f, "+inf)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateSlice {
    pub coord: usize,
    pub t: ExactValue,
    pub components: Vec<Interval>,
}

/// Effect of one constraint on its coordinate at a fixed x₁.
#[derive(Debug, Clone, PartialEq)]
pub enum Band {
    /// Nothing allowed (inactive `Inside`).
    Empty,
    /// No restriction (inactive `Outside`, or `Outside` at its tangency).
    All,
    /// Closed interval allowed.
    Allowed(Bound, Bound),
    /// Open interval removed.
    Forbidden(Bound, Bound),
}

/// Exact facts about an event value that numerics cannot establish: circles
/// whose half-width vanishes there and band ends pinned to crossing
/// ordinates shared by two circles.
#[derive(Debug, Clone, Default)]
pub struct SliceContext {
    pub zero_width: BTreeSet<usize>,
    pub pins: BTreeMap<usize, Vec<ExactValue>>,
}

fn two() -> ExactValue {
    ExactValue::Rational(Rational::from_integer(2.into()))
}

/// Band ends `(b − w, b + w)`, or `None` when the circle misses `x₁ = t`.
pub(crate) fn band_ends(
    c: &CircleConstraint,
    index: usize,
    t: &ExactValue,
    ctx: &SliceContext,
) -> Result<Option<(ExactValue, ExactValue)>, NumericError> {
    if ctx.zero_width.contains(&index) {
        return Ok(Some((c.b.clone(), c.b.clone())));
    }
    if let Some(pins) = ctx.pins.get(&index) {
        match pins.as_slice() {
            [y] => {
                let reflect = c.b.mul(&two()).sub(y);
                return Ok(Some(match y.compare(&c.b)? {
                    Ordering::Greater => (reflect, y.clone()),
                    Ordering::Less => (y.clone(), reflect),
                    Ordering::Equal => (y.clone(), y.clone()),
                }));
            }
            [y1, y2] => {
                return Ok(Some(if y1.compare(y2)? == Ordering::Greater {
                    (y2.clone(), y1.clone())
                } else {
                    (y1.clone(), y2.clone())
                }));
            }
            _ => {}
        }
    }
    let d = t.sub(&ExactValue::Rational(c.a.clone()));
    let r2 = ExactValue::Rational(&c.radius * &c.radius).sub(&d.square());
    match r2.sign()? {
        Ordering::Less => Ok(None),
        Ordering::Equal => Ok(Some((c.b.clone(), c.b.clone()))),
        Ordering::Greater => {
            let w = r2.sqrt()?;
            Ok(Some((c.b.sub(&w), c.b.add(&w))))
        }
    }
}

/// Band of constraint `index` at `x₁ = t`.
pub fn band(c: &CircleConstraint, index: usize, t: &ExactValue, ctx: &SliceContext) -> Result<Band, NumericError> {
    let Some((lo, hi)) = band_ends(c, index, t, ctx)? else {
        return Ok(match c.side {
            Side::Inside => Band::Empty,
            Side::Outside => Band::All,
        });
    };
    let lo = Bound {
        value: lo,
        source: Some(EndSource {
            constraint: index,
            upper: false,
        }),
    };
    let hi = Bound {
        value: hi,
        source: Some(EndSource {
            constraint: index,
            upper: true,
        }),
    };
    match c.side {
        Side::Inside => Ok(Band::Allowed(lo, hi)),
        Side::Outside => {
            if lo.value.compare(&hi.value)? == Ordering::Equal {
                Ok(Band::All)
            } else {
                Ok(Band::Forbidden(lo, hi))
            }
        }
    }
}

fn le_lo(a: &Option<Bound>, b: &Bound) -> Result<bool, NumericError> {
    match a {
        None => Ok(true),
        Some(a) => Ok(a.value.compare(&b.value)? != Ordering::Greater),
    }
}

fn ge_hi(a: &Option<Bound>, b: &Bound) -> Result<bool, NumericError> {
    match a {
        None => Ok(true),
        Some(a) => Ok(a.value.compare(&b.value)? != Ordering::Less),
    }
}

fn nonempty(iv: &Interval) -> Result<bool, NumericError> {
    match (&iv.lo, &iv.hi) {
        (Some(l), Some(h)) => Ok(l.value.compare(&h.value)? != Ordering::Greater),
        _ => Ok(true),
    }
}

fn intersect(parts: Vec<Interval>, band: Band) -> Result<Vec<Interval>, NumericError> {
    let mut out = Vec::with_capacity(parts.len() + 1);
    match band {
        Band::All => return Ok(parts),
        Band::Empty => return Ok(out),
        Band::Allowed(l, h) => {
            for iv in parts {
                let lo = if le_lo(&iv.lo, &l)? { Some(l.clone()) } else { iv.lo };
                let hi = if ge_hi(&iv.hi, &h)? { Some(h.clone()) } else { iv.hi };
                let cut = Interval { lo, hi };
                if nonempty(&cut)? {
                    out.push(cut);
                }
            }
        }
        Band::Forbidden(l, h) => {
            for iv in parts {
                if le_lo(&iv.lo, &l)? {
                    let hi = if ge_hi(&iv.hi, &l)? { Some(l.clone()) } else { iv.hi.clone() };
                    out.push(Interval { lo: iv.lo.clone(), hi });
                }
                if ge_hi(&iv.hi, &h)? {
                    let lo = if le_lo(&iv.lo, &h)? { Some(h.clone()) } else { iv.lo.clone() };
                    out.push(Interval { lo, hi: iv.hi.clone() });
                }
            }
        }
    }
    Ok(out)
}

pub fn slice(arr: &Arrangement, m: usize, t: &ExactValue) -> Result<CoordinateSlice, ArrangementError> {
    slice_in_context(arr, m, t, &SliceContext::default())
}

/// Closed slice of coordinate `m` at `x₁ = t`: the sorted disjoint closed
/// intervals of `x_m` allowed by every coordinate-`m` constraint.
pub fn slice_in_context(
    arr: &Arrangement,
    m: usize,
    t: &ExactValue,
    ctx: &SliceContext,
) -> Result<CoordinateSlice, ArrangementError> {
    let mut parts = vec![Interval::full()];
    for i in arr.in_coord(m) {
        let b = band(&arr.constraints[i], i, t, ctx)?;
        parts = intersect(parts, b)?;
        if parts.is_empty() {
            break;
        }
        if parts.len() > MAX_SLICE_COMPONENTS {
            return Err(ArrangementError::TooManyComponents(m));
        }
    }
    Ok(CoordinateSlice {
        coord: m,
        t: t.clone(),
        components: parts,
    })
}

/// Closure membership of a point, with the constraints it lies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub in_closure: bool,
    pub on_boundary: Vec<usize>,
    pub violated: Vec<usize>,
}

/// Evaluates every constraint at `point` (coordinates `x₁..x_k`) with
/// non-strict inequalities. Constraints listed in `known_on` are taken to
/// pass through the point without evaluation, which avoids asking the
/// numerics to certify an exact zero.
pub fn contains(arr: &Arrangement, point: &[ExactValue], known_on: &[usize]) -> Result<Membership, ArrangementError> {
    if point.len() != arr.ambient_dim {
        return Err(ArrangementError::PointDimension {
            expected: arr.ambient_dim,
            got: point.len(),
        });
    }
    let mut on_boundary = Vec::new();
    let mut violated = Vec::new();
    for (i, c) in arr.constraints.iter().enumerate() {
        if known_on.contains(&i) {
            on_boundary.push(i);
            continue;
        }
        let dx = point[0].sub(&ExactValue::Rational(c.a.clone()));
        let dy = point[c.coord - 1].sub(&c.b);
        let f = dx.square().add(&dy.square()).sub(&ExactValue::Rational(&c.radius * &c.radius));
        match (f.sign()?, c.side) {
            (Ordering::Equal, _) => on_boundary.push(i),
            (Ordering::Greater, Side::Inside) | (Ordering::Less, Side::Outside) => violated.push(i),
            _ => {}
        }
    }
    Ok(Membership {
        in_closure: violated.is_empty(),
        on_boundary,
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::numeric::{int, rat};

    fn r(x: Rational) -> ExactValue {
        ExactValue::Rational(x)
    }

    fn ends(s: &CoordinateSlice) -> Vec<(Option<ExactValue>, Option<ExactValue>)> {
        s.components
            .iter()
            .map(|iv| (iv.lo.as_ref().map(|b| b.value.clone()), iv.hi.as_ref().map(|b| b.value.clone())))
            .collect()
    }

    #[test]
    fn band_examples() {
        let ctx = SliceContext::default();
        let inside = circle("c", 2, int(0), int(0), int(1), Side::Inside);
        match band(&inside, 0, &r(int(0)), &ctx).unwrap() {
            Band::Allowed(l, h) => assert_eq!((l.value, h.value), (r(int(-1)), r(int(1)))),
            other => panic!("{other:?}"),
        }
        let outside = circle("c", 2, int(0), int(0), int(1), Side::Outside);
        match band(&outside, 0, &r(int(0)), &ctx).unwrap() {
            Band::Forbidden(l, h) => assert_eq!((l.value, h.value), (r(int(-1)), r(int(1)))),
            other => panic!("{other:?}"),
        }
        assert_eq!(band(&outside, 0, &r(int(2)), &ctx).unwrap(), Band::All);
        assert_eq!(band(&inside, 0, &r(int(2)), &ctx).unwrap(), Band::Empty);
        let shifted = circle("c", 2, int(0), rat(3, 5), int(1), Side::Inside);
        match band(&shifted, 0, &r(rat(4, 5)), &ctx).unwrap() {
            Band::Allowed(l, h) => assert_eq!((l.value, h.value), (r(int(0)), r(rat(6, 5)))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tangency_bands_degenerate() {
        let ctx = SliceContext::default();
        let inside = circle("c", 2, int(0), int(5), int(1), Side::Inside);
        match band(&inside, 0, &r(int(1)), &ctx).unwrap() {
            Band::Allowed(l, h) => assert_eq!((l.value, h.value), (r(int(5)), r(int(5)))),
            other => panic!("{other:?}"),
        }
        let outside = circle("c", 2, int(0), int(5), int(1), Side::Outside);
        assert_eq!(band(&outside, 0, &r(int(-1)), &ctx).unwrap(), Band::All);
    }

    #[test]
    fn slice_examples() {
        let arr = lens(2);
        let s = slice(&arr, 2, &r(int(0))).unwrap();
        assert_eq!(ends(&s), vec![(Some(r(rat(-2, 5))), Some(r(rat(2, 5))))]);
        let s = slice(&arr, 2, &r(rat(4, 5))).unwrap();
        assert_eq!(ends(&s), vec![(Some(r(int(0))), Some(r(int(0))))]);
        assert!(s.components[0].is_point().unwrap());
        assert!(slice(&arr, 2, &r(int(1))).unwrap().components.is_empty());

        let mut arr = lens(2);
        arr.constraints
            .push(circle("far", 2, rat(9, 5), int(0), int(1), Side::Outside));
        let s = slice(&arr, 2, &r(int(0))).unwrap();
        assert_eq!(ends(&s), vec![(Some(r(rat(-2, 5))), Some(r(rat(2, 5))))]);

        let free = slice(&lens(3), 3, &r(int(0))).unwrap();
        assert_eq!(ends(&free), vec![(None, None)]);
    }

    #[test]
    fn outside_circle_splits_line() {
        let arr = Arrangement::new(2, vec![circle("o", 2, int(0), int(0), int(1), Side::Outside)]).unwrap();
        let s = slice(&arr, 2, &r(int(0))).unwrap();
        assert_eq!(
            ends(&s),
            vec![(None, Some(r(int(-1)))), (Some(r(int(1))), None)]
        );
    }

    #[test]
    fn membership_examples() {
        let arr = lens(3);
        let corner = [r(rat(4, 5)), r(int(0)), r(int(7))];
        let m = contains(&arr, &corner, &[]).unwrap();
        assert!(m.in_closure);
        assert_eq!(m.on_boundary, vec![0, 1]);
        let m = contains(&arr, &[r(int(0)), r(int(0)), r(int(0))], &[]).unwrap();
        assert!(m.in_closure && m.on_boundary.is_empty());
        let m = contains(&arr, &[r(int(2)), r(int(0)), r(int(0))], &[]).unwrap();
        assert!(!m.in_closure);
        assert!(contains(&arr, &[r(int(0))], &[]).is_err());
    }
}
