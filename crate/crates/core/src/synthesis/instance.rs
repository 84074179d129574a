use serde_json::{json, Value};

use super::SynthesisError;
use crate::digraph::{target_theorem1, target_theorem2, BalancedTreeSpec, DigraphError, LeveledDigraph};
use crate::numeric::{format_rational, parse_rational, ExactValue, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// A stem into a balanced tree.
    One,
    /// Two balanced trees glued at their roots, the first reversed.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bounded,
    ComplementOnly,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Bounded => "bounded",
            Mode::ComplementOnly => "complement-only",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "bounded" => Some(Mode::Bounded),
            "complement-only" | "complement_only" => Some(Mode::ComplementOnly),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadiusChoice {
    Auto,
    Fixed(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremInstance {
    pub theorem: Theorem,
    pub spec1: BalancedTreeSpec,
    pub spec2: Option<BalancedTreeSpec>,
    pub levels: Vec<Rational>,
    pub radius: RadiusChoice,
    pub mode: Mode,
}

fn invalid(msg: impl Into<String>) -> SynthesisError {
    SynthesisError::InvalidInstance(msg.into())
}

impl TheoremInstance {
    pub fn theorem1(children: Vec<u32>, levels: Vec<Rational>) -> TheoremInstance {
        TheoremInstance {
            theorem: Theorem::One,
            spec1: BalancedTreeSpec { children },
            spec2: None,
            levels,
            radius: RadiusChoice::Auto,
            mode: Mode::Bounded,
        }
    }

    pub fn theorem2(children1: Vec<u32>, children2: Vec<u32>, levels: Vec<Rational>) -> TheoremInstance {
        TheoremInstance {
            theorem: Theorem::Two,
            spec1: BalancedTreeSpec { children: children1 },
            spec2: Some(BalancedTreeSpec { children: children2 }),
            levels,
            radius: RadiusChoice::Auto,
            mode: Mode::Bounded,
        }
    }

    pub fn expected_level_count(&self) -> usize {
        match self.theorem {
            Theorem::One => self.spec1.depth() + 2,
            Theorem::Two => self.spec1.depth() + self.spec2.as_ref().map_or(0, |s| s.depth()) + 1,
        }
    }

    /// Checks the instance and returns warnings for child counts of 1,
    /// which the construction cannot realize as vertices (except for the
    /// first tree of theorem 2 at depth 1 with a single child, where the
    /// target coincides with theorem 1's).
    pub fn check(&self) -> Result<Vec<String>, SynthesisError> {
        let bad_spec = |e: DigraphError| invalid(e.to_string());
        self.spec1.validate().map_err(bad_spec)?;
        match (self.theorem, &self.spec2) {
            (Theorem::One, Some(_)) => return Err(invalid("theorem 1 takes one tree")),
            (Theorem::Two, None) => return Err(invalid("theorem 2 needs a second tree")),
            (Theorem::Two, Some(s)) => s.validate().map_err(bad_spec)?,
            _ => {}
        }
        let want = self.expected_level_count();
        if self.levels.len() != want {
            return Err(invalid(format!(
                "expected {want} levels, got {}",
                self.levels.len()
            )));
        }
        if let Some(i) = (1..self.levels.len()).find(|&i| self.levels[i - 1] >= self.levels[i]) {
            return Err(invalid(format!("levels must be strictly increasing (position {i})")));
        }
        if let RadiusChoice::Fixed(r) = &self.radius {
            if *r <= Rational::from_integer(0.into()) {
                return Err(invalid("radius must be positive"));
            }
        }
        let mut warnings = Vec::new();
        let remark = self.theorem == Theorem::Two && self.spec1.children == [1];
        for d in self.spec1.unit_depths() {
            if !remark {
                warnings.push(format!("tree 1 has a single child at depth {d}; no vertex can be realized there"));
            }
        }
        if let Some(s) = &self.spec2 {
            for d in s.unit_depths() {
                warnings.push(format!("tree 2 has a single child at depth {d}; no vertex can be realized there"));
            }
        }
        Ok(warnings)
    }

    pub fn level_values(&self) -> Vec<ExactValue> {
        self.levels.iter().cloned().map(ExactValue::Rational).collect()
    }

    pub fn target(&self) -> Result<LeveledDigraph, DigraphError> {
        let levels = self.level_values();
        match (&self.theorem, &self.spec2) {
            (Theorem::Two, Some(s2)) => target_theorem2(&self.spec1, s2, &levels),
            _ => target_theorem1(&self.spec1, &levels),
        }
    }

    /// `Σ(n_i + 1) + 2` summed over every tree.
    pub fn paper_circle_count(&self) -> usize {
        let sum = |s: &BalancedTreeSpec| s.children.iter().map(|&n| n as usize + 1).sum::<usize>();
        2 + sum(&self.spec1) + self.spec2.as_ref().map_or(0, sum)
    }

    /// Circles the construction emits. Theorem 2 shares one bounding pair
    /// between the two depth-1 families.
    pub fn expected_circle_count(&self) -> usize {
        match self.mode {
            Mode::Bounded => match self.theorem {
                Theorem::One => self.paper_circle_count(),
                Theorem::Two => self.paper_circle_count() - 2,
            },
            Mode::ComplementOnly => {
                let sum = |s: &BalancedTreeSpec| s.children.iter().map(|&n| n as usize - 1).sum::<usize>();
                2 + sum(&self.spec1) + self.spec2.as_ref().map_or(0, sum)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "theorem": match self.theorem { Theorem::One => 1, Theorem::Two => 2 },
            "depth": self.spec1.depth(),
            "children": self.spec1.children,
            "levels": self.levels.iter().map(format_rational).collect::<Vec<_>>(),
            "radius": match &self.radius {
                RadiusChoice::Auto => "auto".to_string(),
                RadiusChoice::Fixed(r) => format_rational(r),
            },
            "mode": self.mode.as_str(),
        });
        if let Some(s) = &self.spec2 {
            v["depth2"] = json!(s.depth());
            v["children2"] = json!(s.children);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<TheoremInstance, SynthesisError> {
        let theorem = match v.get("theorem").and_then(Value::as_u64) {
            Some(1) => Theorem::One,
            Some(2) => Theorem::Two,
            _ => return Err(invalid("theorem must be 1 or 2")),
        };
        let children = |key: &str| -> Result<Option<Vec<u32>>, SynthesisError> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Array(xs)) => xs
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|n| u32::try_from(n).ok())
                            .ok_or_else(|| invalid(format!("{key} must hold positive integers")))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some),
                Some(_) => Err(invalid(format!("{key} must be an array"))),
            }
        };
        let spec1 = BalancedTreeSpec {
            children: children("children")?.ok_or_else(|| invalid("missing children"))?,
        };
        let spec2 = children("children2")?.map(|children| BalancedTreeSpec { children });
        for (key, spec) in [("depth", Some(&spec1)), ("depth2", spec2.as_ref())] {
            if let (Some(d), Some(s)) = (v.get(key).and_then(Value::as_u64), spec) {
                if d as usize != s.depth() {
                    return Err(invalid(format!("{key} {d} disagrees with the children list")));
                }
            }
        }
        let levels = v
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| invalid("missing levels"))?
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_rational(s).map_err(|e| invalid(e.to_string())),
                Value::Number(n) => parse_rational(&n.to_string()).map_err(|e| invalid(e.to_string())),
                _ => Err(invalid("levels must be rationals")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let radius = match v.get("radius") {
            None => RadiusChoice::Auto,
            Some(Value::String(s)) if s == "auto" => RadiusChoice::Auto,
            Some(Value::String(s)) => RadiusChoice::Fixed(parse_rational(s).map_err(|e| invalid(e.to_string()))?),
            Some(Value::Number(n)) => {
                RadiusChoice::Fixed(parse_rational(&n.to_string()).map_err(|e| invalid(e.to_string()))?)
            }
            Some(_) => return Err(invalid("radius must be \"auto\" or a rational")),
        };
        let mode = match v.get("mode").and_then(Value::as_str) {
            None => Mode::Bounded,
            Some(s) => Mode::parse(s).ok_or_else(|| invalid(format!("unknown mode {s}")))?,
        };
        let inst = TheoremInstance {
            theorem,
            spec1,
            spec2,
            levels,
            radius,
            mode,
        };
        inst.check()?;
        Ok(inst)
    }
}
