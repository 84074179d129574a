use std::cmp::Ordering;

use super::{Arrangement, ArrangementError};
use crate::numeric::{sqrt_exact, ExactValue, NumericError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TangencyEnd {
    /// `x₁ = a − R`
    Left,
    /// `x₁ = a + R`
    Right,
}

/// Which of a pair's intersection points. When both points share an
/// x₁-value, `Low` is the one with the smaller ordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Root {
    Low,
    High,
    Tangent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventSource {
    Tangency {
        constraint: usize,
        end: TangencyEnd,
    },
    /// Intersection point `(t, y)` of two same-plane circles, `first < second`.
    Crossing {
        first: usize,
        second: usize,
        root: Root,
        y: ExactValue,
    },
    Synthetic(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEvent {
    pub t: ExactValue,
    pub sources: Vec<EventSource>,
}

impl SweepEvent {
    pub fn tangent_constraints(&self) -> Vec<usize> {
        self.sources
            .iter()
            .filter_map(|s| match s {
                EventSource::Tangency { constraint, .. } => Some(*constraint),
                _ => None,
            })
            .collect()
    }
}

fn r(x: Rational) -> ExactValue {
    ExactValue::Rational(x)
}

/// `|dy|·√Q / D`, kept exact when `dy²` is rational.
fn scaled_root(factor: &ExactValue, q: &ExactValue, d: &ExactValue) -> Result<ExactValue, NumericError> {
    let f2 = factor.square();
    if let (Some(q), Some(f2)) = (q.as_rational(), f2.as_rational()) {
        return sqrt_exact(&(q * f2))?.div(d);
    }
    factor.abs()?.mul(&q.sqrt()?).div(d)
}

/// Intersection points of every pair of same-plane circles, as
/// `(x₁, source)` pairs in no particular order.
pub fn crossings(arr: &Arrangement) -> Result<Vec<(ExactValue, EventSource)>, ArrangementError> {
    let mut out = Vec::new();
    let n = arr.constraints.len();
    let half = r(Rational::new(1.into(), 2.into()));
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (&arr.constraints[i], &arr.constraints[j]);
            if ci.coord != cj.coord {
                continue;
            }
            let dx = r(&cj.a - &ci.a);
            let dy = cj.b.sub(&ci.b);
            let sdy = dy.sign()?;
            if dx.is_exact_zero() && sdy == Ordering::Equal {
                if ci.radius == cj.radius {
                    return Err(ArrangementError::IdenticalCircles(ci.id.clone(), cj.id.clone()));
                }
                continue;
            }
            let ri2 = r(&ci.radius * &ci.radius);
            let rj2 = r(&cj.radius * &cj.radius);
            let d = dx.square().add(&dy.square());
            let e = d.add(&ri2).sub(&rj2);
            let q = ri2.mul(&d).sub(&e.square().mul(&r(Rational::new(1.into(), 4.into()))));
            let along = e.mul(&half).div(&d)?;
            let px = r(ci.a.clone()).add(&along.mul(&dx));
            let py = ci.b.add(&along.mul(&dy));
            match q.sign()? {
                Ordering::Less => {}
                Ordering::Equal => out.push((
                    px,
                    EventSource::Crossing {
                        first: i,
                        second: j,
                        root: Root::Tangent,
                        y: py,
                    },
                )),
                Ordering::Greater => {
                    let x_off = scaled_root(&dy.abs()?, &q, &d)?;
                    let y_off = scaled_root(&dx, &q, &d)?;
                    let y_off = if dx.sign()? == Ordering::Less { y_off.neg() } else { y_off };
                    match sdy {
                        Ordering::Equal => {
                            // vertical chord: both points at x₁ = px
                            let y_off = y_off.abs()?;
                            for (root, y) in [(Root::Low, py.sub(&y_off)), (Root::High, py.add(&y_off))] {
                                out.push((px.clone(), EventSource::Crossing { first: i, second: j, root, y }));
                            }
                        }
                        s => {
                            let y_low = if s == Ordering::Greater { py.add(&y_off) } else { py.sub(&y_off) };
                            let y_high = if s == Ordering::Greater { py.sub(&y_off) } else { py.add(&y_off) };
                            out.push((
                                px.sub(&x_off),
                                EventSource::Crossing {
                                    first: i,
                                    second: j,
                                    root: Root::Low,
                                    y: y_low,
                                },
                            ));
                            out.push((
                                px.add(&x_off),
                                EventSource::Crossing {
                                    first: i,
                                    second: j,
                                    root: Root::High,
                                    y: y_high,
                                },
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Inserts `(t, source)` into a sorted event list, merging with an equal
/// event.
pub(crate) fn insert_event(list: &mut Vec<SweepEvent>, t: ExactValue, source: EventSource) -> Result<(), NumericError> {
    let (mut lo, mut hi) = (0, list.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        match list[mid].t.compare(&t)? {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid,
            Ordering::Equal => {
                list[mid].sources.push(source);
                return Ok(());
            }
        }
    }
    list.insert(
        lo,
        SweepEvent {
            t,
            sources: vec![source],
        },
    );
    Ok(())
}

/// All tangency and crossing x₁-values, sorted, with equal values merged.
pub fn events(arr: &Arrangement) -> Result<Vec<SweepEvent>, ArrangementError> {
    let mut list = Vec::new();
    for (i, c) in arr.constraints.iter().enumerate() {
        insert_event(
            &mut list,
            r(c.left()),
            EventSource::Tangency {
                constraint: i,
                end: TangencyEnd::Left,
            },
        )?;
        insert_event(
            &mut list,
            r(c.right()),
            EventSource::Tangency {
                constraint: i,
                end: TangencyEnd::Right,
            },
        )?;
    }
    for (t, source) in crossings(arr)? {
        insert_event(&mut list, t, source)?;
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::Side;
    use super::*;
    use super::super::CircleConstraint;
    use crate::numeric::{int, rat, sqrt_exact};
    use num_traits::ToPrimitive;

    fn values(ev: &[SweepEvent]) -> Vec<ExactValue> {
        ev.iter().map(|e| e.t.clone()).collect()
    }

    #[test]
    fn single_circle_tangencies() {
        let arr = Arrangement::new(2, vec![circle("c", 2, int(2), int(0), int(1), Side::Inside)]).unwrap();
        assert_eq!(values(&events(&arr).unwrap()), vec![r(int(1)), r(int(3))]);
    }

    #[test]
    fn lens_crossings() {
        let ev = events(&lens(2)).unwrap();
        assert_eq!(
            values(&ev),
            vec![r(int(-1)), r(rat(-4, 5)), r(rat(4, 5)), r(int(1))]
        );
        // tangencies of both circles coincide at ±1
        assert_eq!(ev[0].sources.len(), 2);
        match &ev[1].sources[0] {
            EventSource::Crossing { y, root, .. } => {
                assert_eq!(y, &r(int(0)));
                assert_eq!(*root, Root::Low);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn blocking_pair_crossings_are_surds() {
        // centers (0, ±1/2), R = 1: crossings at ±√(1 − 1/4) = ±√3/2
        let arr = Arrangement::new(
            2,
            vec![
                circle("p", 2, int(0), rat(1, 2), int(1), Side::Outside),
                circle("q", 2, int(0), rat(-1, 2), int(1), Side::Outside),
            ],
        )
        .unwrap();
        let xs = crossings(&arr).unwrap();
        assert_eq!(xs.len(), 2);
        let three_quarters = r(rat(3, 4));
        for (x, src) in &xs {
            assert!(matches!(x, ExactValue::Surd(_)));
            assert_eq!(x.square(), three_quarters);
            match src {
                EventSource::Crossing { y, .. } => assert_eq!(y, &r(int(0))),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn crossing_points_lie_on_both_circles() {
        let arr = Arrangement::new(
            2,
            vec![
                circle("p", 2, int(0), int(0), int(2), Side::Inside),
                circle("q", 2, int(1), rat(3, 2), int(1), Side::Outside),
            ],
        )
        .unwrap();
        let xs = crossings(&arr).unwrap();
        assert_eq!(xs.len(), 2);
        for (x, src) in xs {
            let EventSource::Crossing { y, .. } = src else { panic!() };
            for c in &arr.constraints {
                let f = x
                    .sub(&r(c.a.clone()))
                    .square()
                    .add(&y.sub(&c.b).square())
                    .sub(&r(&c.radius * &c.radius));
                assert!(f.to_f64().abs() < 1e-12, "residual {}", f.to_f64());
            }
        }
    }

    #[test]
    fn crossing_points_with_surd_offset_and_left_partner() {
        // second center left of the first and a √3 vertical offset
        let arr = Arrangement::new(
            2,
            vec![
                CircleConstraint::new("p", 2, int(1), sqrt_exact(&int(3)).unwrap(), int(2), Side::Inside),
                circle("q", 2, int(-1), rat(-1, 2), int(2), Side::Outside),
            ],
        )
        .unwrap();
        let xs = crossings(&arr).unwrap();
        assert_eq!(xs.len(), 2);
        for (x, src) in xs {
            let EventSource::Crossing { y, .. } = src else { panic!() };
            for c in &arr.constraints {
                let (a, rad) = (c.a.to_f64().unwrap(), c.radius.to_f64().unwrap());
                let (dx, dy) = (x.to_f64() - a, y.to_f64() - c.b.to_f64());
                let res = dx * dx + dy * dy - rad * rad;
                assert!(res.abs() < 1e-9, "residual {res}");
            }
        }
    }

    #[test]
    fn vertical_chord_has_two_points_at_one_level() {
        let arr = Arrangement::new(
            2,
            vec![
                circle("l", 2, int(0), int(0), int(1), Side::Inside),
                circle("r", 2, int(1), int(0), int(1), Side::Inside),
            ],
        )
        .unwrap();
        let xs = crossings(&arr).unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[0].0, r(rat(1, 2)));
        assert_eq!(xs[1].0, r(rat(1, 2)));
        let ev = events(&arr).unwrap();
        let mid = ev.iter().find(|e| e.t == r(rat(1, 2))).unwrap();
        assert_eq!(mid.sources.len(), 2);
    }

    #[test]
    fn identical_circles_rejected() {
        let c = circle("a", 2, int(0), int(0), int(1), Side::Inside);
        let mut d = c.clone();
        d.id = "b".into();
        d.side = Side::Outside;
        let arr = Arrangement::new(2, vec![c, d]).unwrap();
        assert!(matches!(events(&arr), Err(ArrangementError::IdenticalCircles(..))));
    }
}
