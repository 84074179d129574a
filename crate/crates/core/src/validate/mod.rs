//! Checks that an arrangement cuts out a well-behaved region and that its
//! Reeb digraph realizes a theorem instance.
//!
//! Every boundary normal has the form `α e₁ + β e_m`, so independence at a
//! closure point only fails when two circles of one plane are tangent there,
//! when more than two circles of one plane pass through it, or when `e₁` is
//! reached twice: by a vertical tangency (`β = 0`) or by a transversal
//! corner, in two different planes at once.

mod witness;

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::arrangement::{band_ends, contains, slice, Arrangement, ArrangementError, SliceContext};
use crate::digraph::{leveled_isomorphic, LeveledDigraph};
use crate::numeric::{ExactValue, NumericError, Rational};
use crate::sweep::{event_context, reeb, representative, singular_points_at, PRGraph, SweepError, SweepOptions};
use crate::synthesis::TheoremInstance;

pub use witness::{normals_dependent, Witness};

pub const TANGENT_PAIR: &str = "transversality.tangent_pair";
pub const NORMALS: &str = "transversality.normals";
pub const REGION: &str = "region.nonempty_connected";
pub const NEIGHBORHOOD: &str = "region.neighborhood";
pub const UNUSED: &str = "region.unused_hypersurface";
pub const ISOMORPHIC: &str = "theorem.isomorphic";
pub const LEVELS: &str = "theorem.levels";
pub const PRECISION: &str = "precision";

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass(id: &str, detail: impl Into<String>, witness: Option<Witness>) -> Check {
        Check {
            id: id.into(),
            pass: true,
            detail: detail.into(),
            witness,
        }
    }

    fn fail(id: &str, detail: impl Into<String>, witness: Witness) -> Check {
        Check {
            id: id.into(),
            pass: false,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "pass": self.pass,
            "detail": self.detail,
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
    /// Some comparison could not be decided within the precision cap.
    pub precision_exhausted: bool,
}

impl ValidationReport {
    fn new() -> ValidationReport {
        ValidationReport {
            checks: Vec::new(),
            overall: true,
            precision_exhausted: false,
        }
    }

    fn push(&mut self, c: Check) {
        self.overall &= c.pass;
        self.checks.push(c);
    }

    fn extend(&mut self, other: ValidationReport) {
        self.precision_exhausted |= other.precision_exhausted;
        for c in other.checks {
            self.push(c);
        }
    }

    fn numeric(&mut self, id: &str, e: &NumericError) {
        if matches!(e, NumericError::PrecisionExhausted { .. }) {
            self.precision_exhausted = true;
        }
        self.push(Check::fail(id, e.to_string(), Witness::Message(format!("{PRECISION}: {e}"))));
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.failures().next().map(|c| format!("{}: {}", c.id, c.detail))
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "overall": self.overall,
            "precision_exhausted": self.precision_exhausted,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

fn numeric_of(e: ArrangementError) -> NumericError {
    match e {
        ArrangementError::Numeric(n) => n,
        other => NumericError::Parse(other.to_string()),
    }
}

fn ids(arr: &Arrangement, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| arr.constraints[i].id.clone()).collect()
}

/// A closure point with `x₁ = t` and the given in-plane values, or `None`
/// when some coordinate slice at `t` is empty or misses its value.
fn closure_point(
    arr: &Arrangement,
    t: &ExactValue,
    fixed: &[(usize, ExactValue)],
    on: &[usize],
) -> Result<Option<Vec<ExactValue>>, NumericError> {
    let mut point = vec![ExactValue::zero(); arr.ambient_dim];
    point[0] = t.clone();
    let mut known = on.to_vec();
    let mut coords: Vec<usize> = arr.constraints.iter().map(|c| c.coord).collect();
    coords.sort_unstable();
    coords.dedup();
    for m in coords {
        if let Some((_, v)) = fixed.iter().find(|(c, _)| *c == m) {
            point[m - 1] = v.clone();
            continue;
        }
        let s = slice(arr, m, t).map_err(numeric_of)?;
        let Some(iv) = s.components.first() else {
            return Ok(None);
        };
        if iv.is_point()? {
            known.extend(iv.lo.iter().chain(iv.hi.iter()).filter_map(|b| b.source.map(|s| s.constraint)));
        }
        point[m - 1] = representative(arr, m, t, iv)?;
    }
    let member = contains(arr, &point, &known).map_err(numeric_of)?;
    Ok(member.in_closure.then_some(point))
}

/// Tangency point of two same-plane circles, if they are tangent.
fn tangency_point(arr: &Arrangement, i: usize, j: usize) -> Result<Option<(Rational, ExactValue)>, NumericError> {
    let (c1, c2) = (&arr.constraints[i], &arr.constraints[j]);
    let dx = &c2.a - &c1.a;
    let dy = c2.b.sub(&c1.b);
    let d2 = ExactValue::Rational(&dx * &dx).add(&dy.square());
    let sum = &c1.radius + &c2.radius;
    let diff = &c1.radius - &c2.radius;
    let r = ExactValue::Rational;
    let scale = if d2.compare(&r(&sum * &sum))? == Ordering::Equal {
        &c1.radius / &sum
    } else if diff != Rational::from_integer(0.into()) && d2.compare(&r(&diff * &diff))? == Ordering::Equal {
        &c1.radius / &diff
    } else {
        return Ok(None);
    };
    let x1 = &c1.a + &scale * &dx;
    let xm = c1.b.add(&dy.mul(&r(scale)));
    Ok(Some((x1, xm)))
}

/// Normal independence over the closure.
pub fn transversality(arr: &Arrangement) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Err(e) = tangent_pairs(arr, &mut report) {
        report.numeric(TANGENT_PAIR, &e);
    }
    if let Err(e) = singular_normals(arr, &mut report) {
        report.numeric(NORMALS, &e);
    }
    report
}

fn tangent_pairs(arr: &Arrangement, report: &mut ValidationReport) -> Result<(), NumericError> {
    let n = arr.constraints.len();
    let mut found = false;
    for i in 0..n {
        for j in i + 1..n {
            let (c1, c2) = (&arr.constraints[i], &arr.constraints[j]);
            if c1.coord != c2.coord {
                continue;
            }
            if c1.a == c2.a && c1.radius == c2.radius && c1.b.compare(&c2.b)? == Ordering::Equal {
                found = true;
                report.push(Check::fail(
                    TANGENT_PAIR,
                    format!("{} and {} are the same circle", c1.id, c2.id),
                    Witness::Constraints(ids(arr, &[i, j])),
                ));
                continue;
            }
            let Some((x1, xm)) = tangency_point(arr, i, j)? else {
                continue;
            };
            let t = ExactValue::Rational(x1);
            if let Some(point) = closure_point(arr, &t, &[(c1.coord, xm)], &[i, j])? {
                found = true;
                report.push(Check::fail(
                    TANGENT_PAIR,
                    format!("{} and {} are tangent at a closure point", c1.id, c2.id),
                    Witness::Point {
                        point,
                        constraints: ids(arr, &[i, j]),
                    },
                ));
            }
        }
    }
    if !found {
        report.push(Check::pass(TANGENT_PAIR, "no same-plane tangency in the closure", None));
    }
    Ok(())
}

fn singular_normals(arr: &Arrangement, report: &mut ValidationReport) -> Result<(), NumericError> {
    let evs = crate::arrangement::events(arr).map_err(numeric_of)?;
    let mut found = false;
    for e in &evs {
        let pts = match singular_points_at(arr, e) {
            Ok(p) => p,
            Err(SweepError::Numeric(n)) => return Err(n),
            Err(other) => return Err(NumericError::Parse(other.to_string())),
        };
        // circles through one in-plane point
        let mut groups: Vec<(usize, ExactValue, Vec<usize>)> = Vec::new();
        for p in &pts {
            match groups.iter_mut().find(|(m, y, _)| *m == p.coord && *y == p.xm) {
                Some(g) => g.2.extend(p.constraints.iter().copied()),
                None => groups.push((p.coord, p.xm.clone(), p.constraints.clone())),
            }
        }
        for g in &mut groups {
            g.2.sort_unstable();
            g.2.dedup();
        }
        for (m, y, on) in &groups {
            if on.len() > 2 {
                found = true;
                let point = closure_point(arr, &e.t, &[(*m, y.clone())], on)?;
                report.push(Check::fail(
                    NORMALS,
                    format!("{} circles of coordinate {m} meet at x1 = {}", on.len(), e.t),
                    match point {
                        Some(point) => Witness::Point {
                            point,
                            constraints: ids(arr, on),
                        },
                        None => Witness::Constraints(ids(arr, on)),
                    },
                ));
            }
        }
        let mut coords: Vec<usize> = groups.iter().map(|g| g.0).collect();
        coords.sort_unstable();
        coords.dedup();
        if coords.len() >= 2 {
            // one singular point per plane combines into a closure point
            let picks: Vec<&(usize, ExactValue, Vec<usize>)> =
                coords.iter().take(2).map(|m| groups.iter().find(|g| g.0 == *m).unwrap()).collect();
            let fixed: Vec<(usize, ExactValue)> = picks.iter().map(|g| (g.0, g.1.clone())).collect();
            let on: Vec<usize> = picks.iter().flat_map(|g| g.2.iter().copied()).collect();
            found = true;
            let detail = format!(
                "singular points in coordinates {} and {} share x1 = {}",
                picks[0].0, picks[1].0, e.t
            );
            let witness = match closure_point(arr, &e.t, &fixed, &on)? {
                Some(point) => Witness::Point {
                    point,
                    constraints: ids(arr, &on),
                },
                None => Witness::Constraints(ids(arr, &on)),
            };
            report.push(Check::fail(NORMALS, detail, witness));
        }
    }
    if !found {
        report.push(Check::pass(NORMALS, "normals independent at every singular closure point", None));
    }
    Ok(())
}

/// True when constraint `idx` meets the closure. The set of x₁ where one
/// of its band ends lies in the closure is a union of closed intervals
/// ending at events, so events and gap samples decide it.
pub fn meets_closure(arr: &Arrangement, g: &PRGraph, idx: usize) -> Result<bool, NumericError> {
    let c = &arr.constraints[idx];
    let (left, right) = (ExactValue::Rational(c.left()), ExactValue::Rational(c.right()));
    let in_range = |t: &ExactValue| -> Result<bool, NumericError> {
        Ok(t.compare(&left)? != Ordering::Less && t.compare(&right)? != Ordering::Greater)
    };
    let hits = |t: &ExactValue, slices: &crate::sweep::LevelSlices, ctx: &SliceContext| -> Result<bool, NumericError> {
        if slices.count() == 0 || !in_range(t)? {
            return Ok(false);
        }
        let Some(pos) = slices.coords.iter().position(|&m| m == c.coord) else {
            return Ok(false);
        };
        let Some((lo, hi)) = band_ends(c, idx, t, ctx)? else {
            return Ok(false);
        };
        for iv in &slices.parts[pos] {
            if iv.contains_value(&lo)? || iv.contains_value(&hi)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    for (e, s) in g.events.iter().zip(&g.event_slices) {
        if hits(&e.t, s, &event_context(e))? {
            return Ok(true);
        }
    }
    let empty = SliceContext::default();
    for (t, s) in g.samples.iter().zip(&g.gap_slices) {
        if hits(&ExactValue::Rational(t.clone()), s, &empty)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sweep result for the region checks, recorded as a check.
fn region_sweep(arr: &Arrangement, report: &mut ValidationReport) -> Option<PRGraph> {
    match reeb(arr, SweepOptions::default()) {
        Ok(g) => {
            report.push(Check::pass(REGION, "region is nonempty, bounded and connected", None));
            Some(g)
        }
        Err(e) => {
            let witness = match &e {
                SweepError::DisconnectedRegion(parts) => Witness::Components(parts.clone()),
                SweepError::EmptyRegion => Witness::Message("EmptyRegion".into()),
                SweepError::UnboundedRegion => Witness::Message("UnboundedRegion".into()),
                other => Witness::Message(other.to_string()),
            };
            report.precision_exhausted |= e.is_precision_exhausted();
            report.push(Check::fail(REGION, e.to_string(), witness));
            None
        }
    }
}

fn region_checks(arr: &Arrangement) -> (ValidationReport, Option<PRGraph>) {
    let mut report = ValidationReport::new();
    let g = region_sweep(arr, &mut report);
    report.push(Check::pass(
        NEIGHBORHOOD,
        "full intersection of closed constraints; the neighborhood is the whole space",
        None,
    ));
    if let Some(g) = &g {
        let mut unused = Vec::new();
        let mut failed = None;
        for i in 0..arr.constraints.len() {
            match meets_closure(arr, g, i) {
                Ok(true) => {}
                Ok(false) => unused.push(i),
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        match failed {
            Some(e) => report.numeric(UNUSED, &e),
            None if unused.is_empty() => report.push(Check::pass(UNUSED, "every hypersurface meets the closure", None)),
            None => report.push(Check::fail(
                UNUSED,
                format!("unused hypersurface {}", ids(arr, &unused).join(", ")),
                Witness::Constraints(ids(arr, &unused)),
            )),
        }
    }
    report.extend(transversality(arr));
    (report, g)
}

/// Region conditions: nonempty, connected, every boundary piece used and
/// transversal.
pub fn ra_region(arr: &Arrangement) -> ValidationReport {
    region_checks(arr).0
}

/// Region checks, then the leveled isomorphism to the instance's target and
/// exact equality of the vertex levels with the prescribed ones.
pub fn verify_theorem(inst: &TheoremInstance, arr: &Arrangement) -> ValidationReport {
    match inst.target() {
        Ok(target) => verify_against(arr, &target),
        Err(e) => {
            let mut report = ValidationReport::new();
            report.push(Check::fail(ISOMORPHIC, e.to_string(), Witness::Message(e.to_string())));
            report
        }
    }
}

/// Region checks, leveled isomorphism to `target` and equality of the
/// vertex level sets.
pub fn verify_against(arr: &Arrangement, target: &LeveledDigraph) -> ValidationReport {
    let (mut report, g) = region_checks(arr);
    let Some(g) = g else {
        return report;
    };
    match leveled_isomorphic(&g.graph, target) {
        Ok(Some(iso)) => report.push(Check::pass(
            ISOMORPHIC,
            "leveled isomorphism to the target",
            Some(Witness::Mapping(iso.named_pairs(&g.graph, target))),
        )),
        Ok(None) => report.push(Check::fail(
            ISOMORPHIC,
            format!(
                "reeb digraph ({} vertices, {} edges) is not leveled-isomorphic to the target ({}, {})",
                g.graph.vertex_count(),
                g.graph.edge_count(),
                target.vertex_count(),
                target.edge_count()
            ),
            Witness::Counts {
                vertices: (g.graph.vertex_count(), target.vertex_count()),
                edges: (g.graph.edge_count(), target.edge_count()),
            },
        )),
        Err(e) => report.numeric(ISOMORPHIC, &e),
    }
    let levels = match target.level_set() {
        Ok(l) => l,
        Err(e) => {
            report.numeric(LEVELS, &e);
            return report;
        }
    };
    match level_difference(&g, &levels) {
        Ok((extra, missing)) if extra.is_empty() && missing.is_empty() => {
            report.push(Check::pass(LEVELS, "vertex levels equal the prescribed levels", None))
        }
        Ok((extra, missing)) => report.push(Check::fail(
            LEVELS,
            format!("{} unexpected and {} missing vertex levels", extra.len(), missing.len()),
            Witness::Levels { extra, missing },
        )),
        Err(e) => report.numeric(LEVELS, &e),
    }
    report
}

/// Vertex levels not among `targets`, and targets carrying no vertex.
pub fn level_difference(
    g: &PRGraph,
    targets: &[ExactValue],
) -> Result<(Vec<ExactValue>, Vec<ExactValue>), NumericError> {
    let have = g.graph.level_set()?;
    let mut extra = Vec::new();
    for v in &have {
        if !member(v, targets)? {
            extra.push(v.clone());
        }
    }
    let mut missing = Vec::new();
    for t in targets {
        if !member(t, &have)? {
            missing.push(t.clone());
        }
    }
    Ok((extra, missing))
}

fn member(v: &ExactValue, set: &[ExactValue]) -> Result<bool, NumericError> {
    for s in set {
        if v.compare(s)? == Ordering::Equal {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Re-establishes a failing check's witness from the arrangement alone.
/// `targets` is needed for level witnesses.
pub fn recheck(arr: &Arrangement, check: &Check, targets: &[ExactValue]) -> Result<bool, NumericError> {
    let Some(w) = &check.witness else {
        return Ok(false);
    };
    let index = |id: &String| arr.index_of(id);
    match (check.id.as_str(), w) {
        (TANGENT_PAIR | NORMALS, Witness::Point { point, constraints }) => {
            let on: Option<Vec<usize>> = constraints.iter().map(index).collect();
            let Some(on) = on else { return Ok(false) };
            let m = contains(arr, point, &[]).map_err(numeric_of)?;
            Ok(m.in_closure && on.iter().all(|i| m.on_boundary.contains(i)) && normals_dependent(arr, point, &on)?)
        }
        (UNUSED, Witness::Constraints(list)) => {
            let Ok(g) = reeb(arr, SweepOptions::default()) else {
                return Ok(false);
            };
            for id in list {
                let Some(i) = index(id) else { return Ok(false) };
                if meets_closure(arr, &g, i)? {
                    return Ok(false);
                }
            }
            Ok(!list.is_empty())
        }
        (LEVELS, Witness::Levels { extra, missing }) => {
            let Ok(g) = reeb(arr, SweepOptions::default()) else {
                return Ok(false);
            };
            let (e2, m2) = level_difference(&g, targets)?;
            Ok(!(extra.is_empty() && missing.is_empty()) && &e2 == extra && &m2 == missing)
        }
        (REGION, Witness::Components(parts)) => Ok(parts.len() > 1
            && matches!(reeb(arr, SweepOptions::default()), Err(SweepError::DisconnectedRegion(_)))),
        (REGION, Witness::Message(m)) if m == "EmptyRegion" => {
            Ok(matches!(reeb(arr, SweepOptions::default()), Err(SweepError::EmptyRegion)))
        }
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests;
