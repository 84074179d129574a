use serde_json::{json, Value};

use super::{LevelSlices, SweepError};
use crate::arrangement::{contains, Arrangement, EventSource, Interval, SliceContext, SweepEvent};
use crate::numeric::{rational_between, ExactValue, NumericError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularKind {
    /// Vertical tangency of one circle.
    Tangency,
    /// Intersection of two circles in the same plane.
    Corner,
}

/// A singular point `(x₁, x_m)` in one coordinate plane; the remaining
/// coordinates range over the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub x1: ExactValue,
    pub coord: usize,
    pub xm: ExactValue,
    pub constraints: Vec<usize>,
    pub kind: SingularKind,
}

impl SingularPoint {
    pub fn to_json(&self, arr: &Arrangement) -> Value {
        json!({
            "kind": match self.kind {
                SingularKind::Tangency => "tangency",
                SingularKind::Corner => "corner",
            },
            "coord": self.coord,
            "x1": self.x1.to_json(),
            "xm": self.xm.to_json(),
            "constraints": self.constraints.iter().map(|&i| arr.constraints[i].id.clone()).collect::<Vec<_>>(),
        })
    }
}

/// Facts carried by an event's provenance: tangent circles have zero
/// half-width and crossing circles share the crossing ordinate exactly.
pub fn event_context(e: &SweepEvent) -> SliceContext {
    let mut ctx = SliceContext::default();
    for s in &e.sources {
        match s {
            EventSource::Tangency { constraint, .. } => {
                ctx.zero_width.insert(*constraint);
            }
            EventSource::Crossing { first, second, y, .. } => {
                ctx.pins.entry(*first).or_default().push(y.clone());
                ctx.pins.entry(*second).or_default().push(y.clone());
            }
            EventSource::Synthetic(_) => {}
        }
    }
    ctx
}

fn candidates(arr: &Arrangement, e: &SweepEvent) -> Vec<SingularPoint> {
    e.sources
        .iter()
        .filter_map(|s| match s {
            EventSource::Tangency { constraint, .. } => {
                let c = &arr.constraints[*constraint];
                Some(SingularPoint {
                    x1: e.t.clone(),
                    coord: c.coord,
                    xm: c.b.clone(),
                    constraints: vec![*constraint],
                    kind: SingularKind::Tangency,
                })
            }
            EventSource::Crossing { first, second, y, .. } => Some(SingularPoint {
                x1: e.t.clone(),
                coord: arr.constraints[*first].coord,
                xm: y.clone(),
                constraints: vec![*first, *second],
                kind: SingularKind::Corner,
            }),
            EventSource::Synthetic(_) => None,
        })
        .collect()
}

/// A point of `iv` in coordinate `m` at `x₁ = t` where no constraint of
/// that coordinate vanishes, so membership never needs an exact zero.
/// Degenerate intervals return their single value.
pub(crate) fn representative(arr: &Arrangement, m: usize, t: &ExactValue, iv: &Interval) -> Result<ExactValue, NumericError> {
    let r = |n: i64| ExactValue::Rational(Rational::from_integer(n.into()));
    let (lo, mut hi) = match (&iv.lo, &iv.hi) {
        (Some(l), Some(h)) => {
            if l.value.compare(&h.value)? == std::cmp::Ordering::Equal {
                return Ok(l.value.clone());
            }
            (l.value.clone(), h.value.clone())
        }
        (Some(l), None) => (l.value.clone(), l.value.add(&r(2))),
        (None, Some(h)) => (h.value.sub(&r(2)), h.value.clone()),
        (None, None) => (r(-1), r(1)),
    };
    let in_plane: Vec<_> = arr.constraints.iter().filter(|c| c.coord == m).collect();
    let mut last = None;
    for _ in 0..=2 * in_plane.len() {
        let y = ExactValue::Rational(rational_between(&lo, &hi)?);
        let mut clear = true;
        for c in &in_plane {
            let dx = t.sub(&ExactValue::Rational(c.a.clone()));
            let dy = y.sub(&c.b);
            let f = dx.square().add(&dy.square()).sub(&ExactValue::Rational(&c.radius * &c.radius));
            match f.sign() {
                Ok(std::cmp::Ordering::Equal) | Err(NumericError::PrecisionExhausted { .. }) => {
                    clear = false;
                    break;
                }
                Ok(_) => {}
                Err(e) => return Err(e),
            }
        }
        if clear {
            return Ok(y);
        }
        hi = y.clone();
        last = Some(y);
    }
    // each constraint vanishes at most twice on the line, so this is unreachable
    Ok(last.expect("loop ran"))
}

/// Candidate singular points lying in the closure, each tagged with the
/// position of its coordinate in `slices` and the slice component holding
/// it. The region components containing the point are exactly those whose
/// index vector has that component at that position.
pub(crate) fn closure_slabs(
    arr: &Arrangement,
    e: &SweepEvent,
    slices: &LevelSlices,
) -> Result<Vec<(usize, usize, SingularPoint)>, SweepError> {
    let mut out = Vec::new();
    if slices.count() == 0 {
        return Ok(out);
    }
    for p in candidates(arr, e) {
        let Some(pos) = slices.coords.iter().position(|&m| m == p.coord) else {
            continue;
        };
        let mut comp = None;
        for (j, iv) in slices.parts[pos].iter().enumerate() {
            if iv.contains_value(&p.xm)? {
                comp = Some(j);
                break;
            }
        }
        let Some(comp) = comp else { continue };

        // re-check membership on a concrete point of the slab
        let mut point = vec![ExactValue::zero(); arr.ambient_dim];
        point[0] = p.x1.clone();
        let mut known = p.constraints.clone();
        for (q, &m) in slices.coords.iter().enumerate() {
            let iv = if q == pos { &slices.parts[q][comp] } else { &slices.parts[q][0] };
            point[m - 1] = if q == pos { p.xm.clone() } else { representative(arr, m, &p.x1, iv)? };
            if q != pos && iv.is_point()? {
                known.extend(iv.lo.iter().chain(iv.hi.iter()).filter_map(|b| b.source.map(|s| s.constraint)));
            }
        }
        known.extend(pins_through(arr, e, &p));
        let m = contains(arr, &point, &known)?;
        if !m.in_closure {
            return Err(SweepError::Internal(format!(
                "singular point at x1 = {} in coordinate {} found in slice but not in closure",
                p.x1, p.coord
            )));
        }
        out.push((pos, comp, p));
    }
    Ok(out)
}

/// Constraints known to pass through the same in-plane point as `p`.
fn pins_through(arr: &Arrangement, e: &SweepEvent, p: &SingularPoint) -> Vec<usize> {
    let mut out = Vec::new();
    for s in &e.sources {
        match s {
            EventSource::Crossing { first, second, y, .. } if y == &p.xm && arr.constraints[*first].coord == p.coord => {
                out.push(*first);
                out.push(*second);
            }
            EventSource::Tangency { constraint, .. }
                if arr.constraints[*constraint].b == p.xm && arr.constraints[*constraint].coord == p.coord =>
            {
                out.push(*constraint);
            }
            _ => {}
        }
    }
    out
}

/// Singular points at event `e` that lie in the closure of the region.
pub fn singular_points_at(arr: &Arrangement, e: &SweepEvent) -> Result<Vec<SingularPoint>, SweepError> {
    let mut coords: Vec<usize> = arr.constraints.iter().map(|c| c.coord).collect();
    coords.sort_unstable();
    coords.dedup();
    let slices = LevelSlices::compute(arr, &coords, &e.t, &event_context(e))?;
    Ok(closure_slabs(arr, e, &slices)?.into_iter().map(|(_, _, p)| p).collect())
}
