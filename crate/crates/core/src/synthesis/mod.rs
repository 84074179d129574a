//! Explicit arrangements whose Reeb digraph is a prescribed balanced-tree
//! shape.
//!
//! Coordinate 2 carries a lens of two `Inside` circles whose corners sit at
//! the first and last level. Every branching family lives in its own
//! coordinate: `n − 1` `Outside` circles tangent at the branching level,
//! stacked at spacing δ inside an `Inside` bounding pair so that their
//! forbidden bands stay disjoint over the whole extent.

mod instance;

use std::cmp::Ordering;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, CircleConstraint, Side};
use crate::numeric::{int, rat, simplest_between, sqrt_exact, ExactValue, NumericError, Rational};
use crate::validate::{verify_theorem, ValidationReport};

pub use instance::{Mode, RadiusChoice, Theorem, TheoremInstance};

/// Radius doublings tried by the automatic search.
pub const MAX_DOUBLINGS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("no radius up to {last_radius} verifies; last failing check: {failure}")]
    SynthesisFailed { last_radius: Rational, failure: String },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Which way a family's blocking circles face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Facing {
    /// Tangent on their left at the branching level; bands open to the right.
    Branch,
    /// Tangent on their right at the merging level; bands close there.
    Merge,
}

/// One branching (or merging) family of the target tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub tree: u8,
    pub depth: usize,
    pub coord: usize,
    pub children: u32,
    pub level: Rational,
    pub facing: Facing,
    /// x₁-distance from the branching level to the far end of the extent.
    pub reach: Rational,
}

/// Family layout for an instance. Theorem 2 puts both depth-1 families in
/// coordinate 3 so the root's tangencies are in one plane.
pub fn families(inst: &TheoremInstance) -> Vec<Family> {
    let l = &inst.levels;
    let (first, last) = (&l[0], &l[l.len() - 1]);
    let mut out = Vec::new();
    match inst.theorem {
        Theorem::One => {
            for (i, &n) in inst.spec1.children.iter().enumerate() {
                let level = l[i + 1].clone();
                out.push(Family {
                    tree: 1,
                    depth: i + 1,
                    coord: i + 3,
                    children: n,
                    reach: last - &level,
                    level,
                    facing: Facing::Branch,
                });
            }
        }
        Theorem::Two => {
            let spec2 = inst.spec2.as_ref().expect("theorem 2 needs a second tree");
            let d1 = inst.spec1.depth();
            let root = l[d1].clone();
            out.push(Family {
                tree: 1,
                depth: 1,
                coord: 3,
                children: inst.spec1.children[0],
                reach: &root - first,
                level: root.clone(),
                facing: Facing::Merge,
            });
            out.push(Family {
                tree: 2,
                depth: 1,
                coord: 3,
                children: spec2.children[0],
                reach: last - &root,
                level: root,
                facing: Facing::Branch,
            });
            let mut coord = 4;
            for i in 2..=d1 {
                let level = l[d1 - i + 1].clone();
                out.push(Family {
                    tree: 1,
                    depth: i,
                    coord,
                    children: inst.spec1.children[i - 1],
                    reach: &level - first,
                    level,
                    facing: Facing::Merge,
                });
                coord += 1;
            }
            for i in 2..=spec2.depth() {
                let level = l[d1 + i - 1].clone();
                out.push(Family {
                    tree: 2,
                    depth: i,
                    coord,
                    children: spec2.children[i - 1],
                    reach: last - &level,
                    level,
                    facing: Facing::Branch,
                });
                coord += 1;
            }
        }
    }
    out
}

/// `2·√(Δ(2R − Δ))`: twice the largest half-width a blocking circle's band
/// reaches over the extent.
pub fn spacing_bound(reach: &Rational, radius: &Rational) -> Result<ExactValue, NumericError> {
    let inner = reach * (int(2) * radius - reach);
    Ok(sqrt_exact(&inner)?.mul(&ExactValue::Rational(int(2))))
}

/// Simplest rational in `[1.05·B, 1.06·B]`, strictly above `B`.
pub fn spacing(reach: &Rational, radius: &Rational) -> Result<Rational, NumericError> {
    let b = spacing_bound(reach, radius)?;
    let (lo, hi) = match &b {
        ExactValue::Rational(r) => (r.clone(), r.clone()),
        other => {
            let e = other
                .enclosure_at_level(0)?
                .ok_or(NumericError::PrecisionExhausted { cap: 64 })?;
            (e.lo(), e.hi())
        }
    };
    Ok(simplest_between(&(hi * rat(105, 100)), &(lo * rat(106, 100))))
}

fn half(r: &Rational) -> Rational {
    r / int(2)
}

/// Parameters of one construction at a fixed radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub radius: Rational,
    pub center: Rational,
    pub half_span: Rational,
    pub main_offset: ExactValue,
    pub bounding_offset: ExactValue,
    /// Narrowest half-height of a bounding band over the extent.
    pub band_half_height: ExactValue,
    pub families: Vec<(Family, Rational)>,
}

impl Layout {
    pub fn new(inst: &TheoremInstance, radius: &Rational) -> Result<Layout, SynthesisError> {
        let l = &inst.levels;
        let (first, last) = (&l[0], &l[l.len() - 1]);
        let center = half(&(first + last));
        let w = half(&(last - first));
        if radius <= &w {
            return Err(SynthesisError::InvalidInstance(format!(
                "radius {radius} does not exceed the half-span {w}"
            )));
        }
        let main_offset = sqrt_exact(&(radius * radius - &w * &w))?;
        // bounding pair: half-span R/2, centers at ±R√3/2
        let bounding_offset = sqrt_exact(&(rat(3, 4) * radius * radius))?;
        let band_half_height = main_offset.sub(&bounding_offset);
        let mut fams = Vec::new();
        let all = families(inst);
        for f in &all {
            let delta = all
                .iter()
                .filter(|g| g.coord == f.coord)
                .map(|g| spacing(&g.reach, radius))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .max()
                .expect("family present");
            fams.push((f.clone(), delta));
        }
        Ok(Layout {
            radius: radius.clone(),
            center,
            half_span: w,
            main_offset,
            bounding_offset,
            band_half_height,
            families: fams,
        })
    }

    /// Offset of a family's stack from the axis. Stacks of equal parity
    /// sit on the same lattice, so the second family sharing a coordinate
    /// shifts by δ/2 to keep its tangency points off the first's.
    fn stack_shift(&self, index: usize) -> Rational {
        let (f, delta) = &self.families[index];
        let earlier = self.families[..index]
            .iter()
            .any(|(g, _)| g.coord == f.coord && g.children % 2 == f.children % 2);
        if earlier {
            half(delta)
        } else {
            int(0)
        }
    }

    /// Every stack, widened by half a spacing, fits in its bounding band.
    pub fn feasible(&self) -> Result<bool, NumericError> {
        if self.band_half_height.sign()? != Ordering::Greater {
            return Ok(false);
        }
        for (i, (f, delta)) in self.families.iter().enumerate() {
            let need = Rational::from_integer((f.children + 1).into()) * half(delta) + self.stack_shift(i);
            if ExactValue::Rational(need).compare(&self.band_half_height)? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn arrangement(&self, inst: &TheoremInstance) -> Result<Arrangement, SynthesisError> {
        let r = &self.radius;
        let c = &self.center;
        let mut cs = vec![
            CircleConstraint::new("main+", 2, c.clone(), self.main_offset.clone(), r.clone(), Side::Inside),
            CircleConstraint::new("main-", 2, c.clone(), self.main_offset.neg(), r.clone(), Side::Inside),
        ];
        let mut coords: Vec<usize> = self.families.iter().map(|(f, _)| f.coord).collect();
        coords.dedup();
        for m in coords {
            if inst.mode == Mode::Bounded {
                cs.push(CircleConstraint::new(
                    format!("bound{m}+"),
                    m,
                    c.clone(),
                    self.bounding_offset.clone(),
                    r.clone(),
                    Side::Inside,
                ));
                cs.push(CircleConstraint::new(
                    format!("bound{m}-"),
                    m,
                    c.clone(),
                    self.bounding_offset.neg(),
                    r.clone(),
                    Side::Inside,
                ));
            }
            for (i, (f, delta)) in self.families.iter().enumerate() {
                if f.coord != m {
                    continue;
                }
                let a = match f.facing {
                    Facing::Branch => &f.level + r,
                    Facing::Merge => &f.level - r,
                };
                let shift = self.stack_shift(i);
                let blockers = f.children.saturating_sub(1);
                let mid = rat(blockers as i64 - 1, 2);
                for j in 0..blockers {
                    let b = (Rational::from_integer(j.into()) - &mid) * delta + &shift;
                    cs.push(CircleConstraint::new(
                        format!("block{m}.t{}.{j}", f.tree),
                        m,
                        a.clone(),
                        ExactValue::Rational(b),
                        r.clone(),
                        Side::Outside,
                    ));
                }
            }
        }
        let k = self.families.iter().map(|(f, _)| f.coord).max().unwrap_or(2);
        Ok(Arrangement::new(k, cs)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "radius": self.radius.to_string(),
            "center": self.center.to_string(),
            "half_span": self.half_span.to_string(),
            "main_offset": self.main_offset.to_json(),
            "bounding_offset": self.bounding_offset.to_json(),
            "band_half_height": self.band_half_height.to_json(),
            "families": self.families.iter().map(|(f, delta)| json!({
                "tree": f.tree,
                "depth": f.depth,
                "coord": f.coord,
                "children": f.children,
                "level": f.level.to_string(),
                "facing": match f.facing { Facing::Branch => "branch", Facing::Merge => "merge" },
                "reach": f.reach.to_string(),
                "delta": delta.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Smallest integer radius at which the construction's closed-form
/// conditions hold: `R > 2w` and every stack fits (bounded mode), or
/// `R > w` (complement-only mode).
pub fn lower_bound_radius(inst: &TheoremInstance) -> Result<Rational, SynthesisError> {
    inst.check()?;
    let l = &inst.levels;
    let w = half(&(&l[l.len() - 1] - &l[0]));
    let floor_plus_one = |x: Rational| x.floor() + int(1);
    if inst.mode == Mode::ComplementOnly {
        return Ok(floor_plus_one(w));
    }
    let base = floor_plus_one(int(2) * w);
    let ok = |r: &Rational| -> Result<bool, SynthesisError> { Ok(Layout::new(inst, r)?.feasible()?) };
    if ok(&base)? {
        return Ok(base);
    }
    let mut lo = base.clone();
    let mut hi = base * int(2);
    let mut guard = 0;
    while !ok(&hi)? {
        lo = hi.clone();
        hi *= int(2);
        guard += 1;
        if guard > 200 {
            return Err(SynthesisError::InvalidInstance("no feasible radius".into()));
        }
    }
    // smallest feasible integer in (lo, hi]
    while &hi - &lo > int(1) {
        let mid = ((&lo + &hi) / int(2)).floor();
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Arrangement at a fixed radius, without verification.
pub fn build(inst: &TheoremInstance, radius: &Rational) -> Result<(Arrangement, Layout), SynthesisError> {
    inst.check()?;
    let layout = Layout::new(inst, radius)?;
    Ok((layout.arrangement(inst)?, layout))
}

#[derive(Debug, Clone)]
pub struct Attempt {
    pub radius: Rational,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub arrangement: Arrangement,
    pub layout: Layout,
    pub attempts: Vec<Attempt>,
    pub verification: ValidationReport,
    pub warnings: Vec<String>,
}

impl Synthesis {
    pub fn report_json(&self, inst: &TheoremInstance) -> Value {
        json!({
            "instance": inst.to_json(),
            "ambient_dim": self.arrangement.ambient_dim,
            "circle_count": self.arrangement.constraints.len(),
            "expected_circle_count": inst.expected_circle_count(),
            "layout": self.layout.to_json(),
            "attempts": self.attempts.iter().map(|a| json!({
                "radius": a.radius.to_string(),
                "passed": a.passed,
                "failure": a.failure,
            })).collect::<Vec<_>>(),
            "verification": self.verification.to_json(),
            "warnings": self.warnings,
        })
    }
}

/// Builds and verifies. With an automatic radius, starts at
/// [`lower_bound_radius`] and doubles on failure.
pub fn synthesize(inst: &TheoremInstance) -> Result<Synthesis, SynthesisError> {
    let warnings = inst.check()?;
    let (mut radius, tries) = match &inst.radius {
        RadiusChoice::Fixed(r) => (r.clone(), 1),
        RadiusChoice::Auto => (lower_bound_radius(inst)?, MAX_DOUBLINGS + 1),
    };
    let mut attempts = Vec::new();
    let mut last_failure = String::new();
    for _ in 0..tries {
        let (arr, layout) = build(inst, &radius)?;
        let report = verify_theorem(inst, &arr);
        if report.overall {
            attempts.push(Attempt {
                radius: radius.clone(),
                passed: true,
                failure: None,
            });
            return Ok(Synthesis {
                arrangement: arr,
                layout,
                attempts,
                verification: report,
                warnings,
            });
        }
        last_failure = report.first_failure().unwrap_or_default();
        attempts.push(Attempt {
            radius: radius.clone(),
            passed: false,
            failure: Some(last_failure.clone()),
        });
        radius *= int(2);
    }
    Err(SynthesisError::SynthesisFailed {
        last_radius: attempts.last().map(|a| a.radius.clone()).unwrap_or(radius),
        failure: last_failure,
    })
}
