//! Circle-cylinder constraints, per-coordinate slices and sweep events.

mod events;
mod slice;

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;

use crate::numeric::{format_rational, parse_rational, ExactValue, NumericError, Rational};

pub use events::{crossings, events, EventSource, Root, SweepEvent, TangencyEnd};
pub(crate) use slice::band_ends;
pub use slice::{band, contains, slice, slice_in_context, Band, Bound, CoordinateSlice, EndSource, Interval, Membership, SliceContext};

pub const MAX_AMBIENT_DIM: usize = 64;
pub const MAX_CONSTRAINTS: usize = 512;
pub const MAX_SLICE_COMPONENTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrangementError {
    #[error("coordinate {coord} of constraint {id} is outside 2..={dim}")]
    InvalidCoordinate { id: String, coord: usize, dim: usize },
    #[error("radius of constraint {0} must be positive")]
    InvalidRadius(String),
    #[error("duplicate constraint id {0}")]
    DuplicateId(String),
    #[error("ambient dimension {0} is outside 2..=64")]
    InvalidDimension(usize),
    #[error("{0} constraints exceed the cap of 512")]
    TooManyConstraints(usize),
    #[error("constraints {0} and {1} are the same circle")]
    IdenticalCircles(String, String),
    #[error("slice of coordinate {0} has more than 4096 components")]
    TooManyComponents(usize),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("malformed arrangement: {0}")]
    Parse(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Inside,
    Outside,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Inside => "inside",
            Side::Outside => "outside",
        }
    }
}

/// Cylinder over a circle in the plane `(x₁, x_m)`: the disk when `Inside`,
/// the closed complement of the open disk when `Outside`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleConstraint {
    pub id: String,
    pub coord: usize,
    pub a: Rational,
    pub b: ExactValue,
    pub radius: Rational,
    pub side: Side,
}

impl CircleConstraint {
    pub fn new(id: impl Into<String>, coord: usize, a: Rational, b: ExactValue, radius: Rational, side: Side) -> Self {
        CircleConstraint {
            id: id.into(),
            coord,
            a,
            b,
            radius,
            side,
        }
    }

    pub fn left(&self) -> Rational {
        &self.a - &self.radius
    }

    pub fn right(&self) -> Rational {
        &self.a + &self.radius
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "coord": self.coord,
            "center": [format_rational(&self.a), self.b.to_json()],
            "radius": format_rational(&self.radius),
            "side": self.side.as_str(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CircleConstraint, ArrangementError> {
        let bad = |what: &str| ArrangementError::Parse(format!("{what} in {v}"));
        let id = v.get("id").and_then(Value::as_str).ok_or_else(|| bad("missing id"))?;
        let coord = v.get("coord").and_then(Value::as_u64).ok_or_else(|| bad("missing coord"))? as usize;
        let center = v
            .get("center")
            .and_then(Value::as_array)
            .filter(|c| c.len() == 2)
            .ok_or_else(|| bad("center must be a pair"))?;
        let a = rational_json(&center[0]).ok_or_else(|| bad("center a must be rational"))?;
        if center[1].get("certified").is_some() {
            return Err(bad("certified center"));
        }
        let b = ExactValue::from_json(&center[1])?;
        let radius = rational_json(v.get("radius").ok_or_else(|| bad("missing radius"))?)
            .ok_or_else(|| bad("radius must be rational"))?;
        let side = match v.get("side").and_then(Value::as_str) {
            Some("inside") => Side::Inside,
            Some("outside") => Side::Outside,
            _ => return Err(bad("side must be inside or outside")),
        };
        Ok(CircleConstraint::new(id, coord, a, b, radius, side))
    }
}

fn rational_json(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok(),
        Value::Number(n) => parse_rational(&n.to_string()).ok(),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement {
    pub ambient_dim: usize,
    pub constraints: Vec<CircleConstraint>,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, constraints: Vec<CircleConstraint>) -> Result<Arrangement, ArrangementError> {
        let arr = Arrangement {
            ambient_dim,
            constraints,
        };
        arr.check()?;
        Ok(arr)
    }

    pub fn check(&self) -> Result<(), ArrangementError> {
        if !(2..=MAX_AMBIENT_DIM).contains(&self.ambient_dim) {
            return Err(ArrangementError::InvalidDimension(self.ambient_dim));
        }
        if self.constraints.len() > MAX_CONSTRAINTS {
            return Err(ArrangementError::TooManyConstraints(self.constraints.len()));
        }
        let mut ids = BTreeSet::new();
        for c in &self.constraints {
            if !ids.insert(c.id.as_str()) {
                return Err(ArrangementError::DuplicateId(c.id.clone()));
            }
            if c.coord < 2 || c.coord > self.ambient_dim {
                return Err(ArrangementError::InvalidCoordinate {
                    id: c.id.clone(),
                    coord: c.coord,
                    dim: self.ambient_dim,
                });
            }
            if c.radius <= Rational::from_integer(0.into()) {
                return Err(ArrangementError::InvalidRadius(c.id.clone()));
            }
        }
        Ok(())
    }

    /// Indices of the constraints acting on coordinate `m`.
    pub fn in_coord(&self, m: usize) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| self.constraints[i].coord == m)
            .collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.constraints.iter().position(|c| c.id == id)
    }

    /// True when some coordinate has an `Inside` constraint, which bounds
    /// the region's x₁-extent.
    pub fn has_inside(&self) -> bool {
        self.constraints.iter().any(|c| c.side == Side::Inside)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient_dim": self.ambient_dim,
            "constraints": self.constraints.iter().map(CircleConstraint::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Arrangement, ArrangementError> {
        let k = v
            .get("ambient_dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| ArrangementError::Parse("missing ambient_dim".into()))? as usize;
        let list = v
            .get("constraints")
            .and_then(Value::as_array)
            .ok_or_else(|| ArrangementError::Parse("missing constraints array".into()))?;
        let constraints = list.iter().map(CircleConstraint::from_json).collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(k, constraints)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::numeric::{int, rat};

    pub fn circle(id: &str, coord: usize, a: Rational, b: Rational, r: Rational, side: Side) -> CircleConstraint {
        CircleConstraint::new(id, coord, a, ExactValue::Rational(b), r, side)
    }

    /// Inside pair centered `(0, ±3/5)` with radius 1 in coordinate 2.
    pub fn lens(k: usize) -> Arrangement {
        Arrangement::new(
            k,
            vec![
                circle("up", 2, int(0), rat(3, 5), int(1), Side::Inside),
                circle("down", 2, int(0), rat(-3, 5), int(1), Side::Inside),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::numeric::{int, sqrt_exact};

    #[test]
    fn json_round_trip_with_surd_center() {
        let mut arr = lens(3);
        arr.constraints.push(CircleConstraint::new(
            "s",
            3,
            int(2),
            sqrt_exact(&int(3)).unwrap(),
            int(2),
            Side::Outside,
        ));
        let text = serde_json::to_string(&arr.to_json()).unwrap();
        let back = Arrangement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, arr);
    }

    #[test]
    fn rejects_bad_input() {
        let c = circle("x", 3, int(0), int(0), int(1), Side::Inside);
        assert!(matches!(
            Arrangement::new(2, vec![c.clone()]),
            Err(ArrangementError::InvalidCoordinate { .. })
        ));
        let mut z = c.clone();
        z.radius = int(0);
        assert!(matches!(Arrangement::new(3, vec![z]), Err(ArrangementError::InvalidRadius(_))));
        assert!(matches!(
            Arrangement::new(3, vec![c.clone(), c]),
            Err(ArrangementError::DuplicateId(_))
        ));
        assert!(Arrangement::from_json(&json!({"ambient_dim": 2})).is_err());
    }
}
