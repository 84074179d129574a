use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::numeric::{ExactValue, NumericError};

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A closure point lying on the listed constraints.
    Point { point: Vec<ExactValue>, constraints: Vec<String> },
    Constraints(Vec<String>),
    /// Constraint ids bounding each region component.
    Components(Vec<Vec<String>>),
    /// Vertex levels outside the prescribed set, and prescribed levels
    /// carrying no vertex.
    Levels { extra: Vec<ExactValue>, missing: Vec<ExactValue> },
    /// Vertex bijection, reeb id to target id.
    Mapping(Vec<(String, String)>),
    /// (reeb, target) counts.
    Counts { vertices: (usize, usize), edges: (usize, usize) },
    Message(String),
}

fn values(vs: &[ExactValue]) -> Vec<Value> {
    vs.iter().map(ExactValue::to_json).collect()
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Point { point, constraints } => json!({"point": values(point), "constraints": constraints}),
            Witness::Constraints(ids) => json!({"constraints": ids}),
            Witness::Components(parts) => json!({"components": parts}),
            Witness::Levels { extra, missing } => json!({"extra_levels": values(extra), "missing_levels": values(missing)}),
            Witness::Mapping(pairs) => {
                json!({"mapping": pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()})
            }
            Witness::Counts { vertices, edges } => json!({
                "vertices": [vertices.0, vertices.1],
                "edges": [edges.0, edges.1],
            }),
            Witness::Message(m) => json!({"message": m}),
        }
    }
}

/// True when the boundary normals of constraints `on` at `point` are
/// linearly dependent. Each normal is `α e₁ + β e_m`; the span is `e₁`
/// (when some `β` vanishes or some plane holds two independent normals)
/// plus one `e_m` per plane with a nonzero `β`.
pub fn normals_dependent(arr: &Arrangement, point: &[ExactValue], on: &[usize]) -> Result<bool, NumericError> {
    let mut planes: BTreeMap<usize, Vec<(ExactValue, ExactValue)>> = BTreeMap::new();
    for &i in on {
        let c = &arr.constraints[i];
        let alpha = point[0].sub(&ExactValue::Rational(c.a.clone()));
        let beta = point[c.coord - 1].sub(&c.b);
        planes.entry(c.coord).or_default().push((alpha, beta));
    }
    let mut has_e1 = false;
    let mut dim = 0;
    for normals in planes.values() {
        let mut vertical = false;
        for (_, beta) in normals {
            if beta.sign()? == Ordering::Equal {
                has_e1 = true;
            } else {
                vertical = true;
            }
        }
        if vertical {
            dim += 1;
        }
        'pairs: for (i, (a1, b1)) in normals.iter().enumerate() {
            for (a2, b2) in &normals[i + 1..] {
                if a1.mul(b2).sub(&a2.mul(b1)).sign()? != Ordering::Equal {
                    has_e1 = true;
                    break 'pairs;
                }
            }
        }
    }
    Ok(dim + usize::from(has_e1) < on.len())
}
