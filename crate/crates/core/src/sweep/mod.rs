//! Sweeping an arrangement along x₁ to build its leveled Reeb digraph.
//!
//! The closed slice of the region at a fixed x₁ is the product of the
//! per-coordinate slices, so its components are index vectors, one interval
//! per constrained coordinate. Components over an open gap between events
//! are matched to components at the event through the limits of their
//! endpoints, evaluated exactly at the event value.

mod singular;

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arrangement::{
    band_ends, events, slice_in_context, Arrangement, ArrangementError, Interval, SliceContext,
    SweepEvent,
};
use crate::digraph::{Digraph, DigraphError, LeveledDigraph, VertexKind};
use crate::numeric::{integer_above, integer_below, rational_between, ExactValue, NumericError, Rational};

pub use singular::{event_context, singular_points_at, SingularKind, SingularPoint};
pub(crate) use singular::representative;

/// Cap on region components over a single gap or at a single event.
pub const MAX_REGION_COMPONENTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("the region is empty")]
    EmptyRegion,
    #[error("the region is disconnected: {}", format_components(.0))]
    DisconnectedRegion(Vec<Vec<String>>),
    #[error("non-generic event: {0}")]
    NonGenericEvent(String),
    #[error("the region is unbounded in x1; pass allow_unbounded to sweep it")]
    UnboundedRegion,
    #[error("more than {MAX_REGION_COMPONENTS} region components at one level")]
    TooManyComponents,
    #[error("sweep invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Arrangement(ArrangementError),
    #[error(transparent)]
    Numeric(NumericError),
}

fn format_components(parts: &[Vec<String>]) -> String {
    parts
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

impl From<NumericError> for SweepError {
    fn from(e: NumericError) -> Self {
        SweepError::Numeric(e)
    }
}

impl From<ArrangementError> for SweepError {
    fn from(e: ArrangementError) -> Self {
        match e {
            ArrangementError::Numeric(n) => SweepError::Numeric(n),
            other => SweepError::Arrangement(other),
        }
    }
}

impl From<DigraphError> for SweepError {
    fn from(e: DigraphError) -> Self {
        match e {
            DigraphError::Numeric(n) => SweepError::Numeric(n),
            other => SweepError::Internal(other.to_string()),
        }
    }
}

impl SweepError {
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(self, SweepError::Numeric(NumericError::PrecisionExhausted { .. }))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub allow_unbounded: bool,
}

/// Per-coordinate slices at one x₁-value; coordinates without constraints
/// are omitted since their slice is always the whole line.
#[derive(Debug, Clone)]
pub struct LevelSlices {
    pub coords: Vec<usize>,
    pub parts: Vec<Vec<Interval>>,
}

impl LevelSlices {
    fn compute(arr: &Arrangement, coords: &[usize], t: &ExactValue, ctx: &SliceContext) -> Result<LevelSlices, SweepError> {
        let mut parts = Vec::with_capacity(coords.len());
        for &m in coords {
            parts.push(slice_in_context(arr, m, t, ctx)?.components);
        }
        let s = LevelSlices {
            coords: coords.to_vec(),
            parts,
        };
        let mut total: usize = 1;
        for p in &s.parts {
            total = total.saturating_mul(p.len());
        }
        if total > MAX_REGION_COMPONENTS {
            return Err(SweepError::TooManyComponents);
        }
        Ok(s)
    }

    /// Number of region components: the product of per-coordinate counts.
    pub fn count(&self) -> usize {
        self.parts.iter().map(Vec::len).product()
    }

    pub fn per_coord_counts(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Mixed-radix index vector of a flat component index.
    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.parts.len()];
        for (slot, p) in idx.iter_mut().zip(&self.parts).rev() {
            *slot = flat % p.len();
            flat /= p.len();
        }
        idx
    }

    pub fn encode(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.parts).fold(0, |acc, (&i, p)| acc * p.len() + i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub gap: usize,
    pub t: Rational,
    pub coord: usize,
    pub component: usize,
    pub lo: f64,
    pub hi: f64,
}

/// The Reeb digraph of an arrangement together with its sweep data.
#[derive(Debug, Clone)]
pub struct PRGraph {
    pub graph: LeveledDigraph,
    /// Singular points witnessing each vertex (empty for synthetic ends).
    pub witnesses: Vec<Vec<SingularPoint>>,
    pub events: Vec<SweepEvent>,
    /// Rational sample inside each gap; gap `g` lies just left of event `g`.
    pub samples: Vec<Rational>,
    pub gap_slices: Vec<LevelSlices>,
    pub event_slices: Vec<LevelSlices>,
}

impl PRGraph {
    pub fn gap_counts(&self) -> Vec<usize> {
        self.gap_slices.iter().map(LevelSlices::count).collect()
    }

    pub fn trace(&self) -> Vec<TraceRow> {
        let mut rows = Vec::new();
        for (g, s) in self.gap_slices.iter().enumerate() {
            for (m, parts) in s.coords.iter().zip(&s.parts) {
                for (i, iv) in parts.iter().enumerate() {
                    rows.push(TraceRow {
                        gap: g,
                        t: self.samples[g].clone(),
                        coord: *m,
                        component: i,
                        lo: iv.lo_f64(),
                        hi: iv.hi_f64(),
                    });
                }
            }
        }
        rows
    }

    /// Graph JSON with a `singular` witness list on every vertex.
    pub fn to_json(&self, arr: &Arrangement) -> Value {
        let mut v = self.graph.to_json();
        if let Some(list) = v.get_mut("vertices").and_then(Value::as_array_mut) {
            for (i, vert) in list.iter_mut().enumerate() {
                let w: Vec<Value> = self.witnesses[i].iter().map(|p| p.to_json(arr)).collect();
                vert["singular"] = json!(w);
            }
        }
        v
    }
}

fn gap_samples(events: &[SweepEvent]) -> Result<Vec<Rational>, SweepError> {
    let nongeneric = |e: NumericError, i: usize| match e {
        NumericError::PrecisionExhausted { .. } => SweepError::NonGenericEvent(format!(
            "events {} and {} cannot be separated",
            i,
            i + 1
        )),
        other => SweepError::Numeric(other),
    };
    let Some(first) = events.first() else {
        return Ok(vec![Rational::from_integer(0.into())]);
    };
    let mut out = vec![integer_below(&first.t)?];
    for i in 1..events.len() {
        out.push(rational_between(&events[i - 1].t, &events[i].t).map_err(|e| nongeneric(e, i - 1))?);
    }
    out.push(integer_above(&events[events.len() - 1].t)?);
    Ok(out)
}

fn limit_of(
    arr: &Arrangement,
    bound: &crate::arrangement::Bound,
    t: &ExactValue,
    ctx: &SliceContext,
) -> Result<ExactValue, SweepError> {
    let Some(src) = bound.source else {
        return Ok(bound.value.clone());
    };
    let c = &arr.constraints[src.constraint];
    match band_ends(c, src.constraint, t, ctx)? {
        Some((lo, hi)) => Ok(if src.upper { hi } else { lo }),
        None => Err(SweepError::Internal(format!(
            "endpoint of {} has no limit at {}",
            c.id, t
        ))),
    }
}

/// Image of every gap component in the event slice.
fn match_gap(
    arr: &Arrangement,
    gap: &LevelSlices,
    at: &LevelSlices,
    event: &SweepEvent,
    ctx: &SliceContext,
) -> Result<Vec<usize>, SweepError> {
    if gap.count() == 0 {
        return Ok(Vec::new());
    }
    let mut per_coord: Vec<Vec<usize>> = Vec::with_capacity(gap.parts.len());
    for (gp, ep) in gap.parts.iter().zip(&at.parts) {
        let mut images = Vec::with_capacity(gp.len());
        for iv in gp {
            let probe = match (&iv.lo, &iv.hi) {
                (Some(b), _) | (None, Some(b)) => Some(limit_of(arr, b, &event.t, ctx)?),
                (None, None) => None,
            };
            let found = match probe {
                None => (!ep.is_empty()).then_some(0),
                Some(v) => {
                    let mut hit = None;
                    for (j, e) in ep.iter().enumerate() {
                        if e.contains_value(&v)? {
                            hit = Some(j);
                            break;
                        }
                    }
                    hit
                }
            };
            images.push(found.ok_or_else(|| {
                SweepError::Internal(format!("gap interval {iv} has no limit component at {}", event.t))
            })?);
        }
        per_coord.push(images);
    }
    Ok((0..gap.count())
        .map(|flat| {
            let idx = gap.decode(flat);
            let img: Vec<usize> = idx.iter().zip(&per_coord).map(|(&i, imgs)| imgs[i]).collect();
            at.encode(&img)
        })
        .collect())
}

struct Assembly {
    ids: Vec<String>,
    levels: Vec<ExactValue>,
    witnesses: Vec<Vec<SingularPoint>>,
    edges: Vec<(usize, usize)>,
}

impl Assembly {
    fn add(&mut self, level: ExactValue, witnesses: Vec<SingularPoint>) -> usize {
        self.ids.push(format!("v{}", self.ids.len() + 1));
        self.levels.push(level);
        self.witnesses.push(witnesses);
        self.ids.len() - 1
    }
}

/// Sweeps `arr` and returns its Reeb digraph.
pub fn reeb(arr: &Arrangement, opts: SweepOptions) -> Result<PRGraph, SweepError> {
    let evs = events(arr).map_err(|e| match e {
        ArrangementError::Numeric(NumericError::PrecisionExhausted { .. }) => {
            SweepError::NonGenericEvent("two distinct event values compare equal within the precision cap".into())
        }
        other => other.into(),
    })?;
    let samples = gap_samples(&evs)?;
    let mut coords: Vec<usize> = arr.constraints.iter().map(|c| c.coord).collect();
    coords.sort_unstable();
    coords.dedup();

    let empty_ctx = SliceContext::default();
    let gap_slices = samples
        .iter()
        .map(|s| LevelSlices::compute(arr, &coords, &ExactValue::Rational(s.clone()), &empty_ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let contexts: Vec<SliceContext> = evs.iter().map(event_context).collect();
    let event_slices = evs
        .iter()
        .zip(&contexts)
        .map(|(e, ctx)| LevelSlices::compute(arr, &coords, &e.t, ctx))
        .collect::<Result<Vec<_>, _>>()?;

    let n = evs.len();
    let unbounded = gap_slices[0].count() > 0 || gap_slices[n].count() > 0;
    if unbounded && !opts.allow_unbounded {
        return Err(SweepError::UnboundedRegion);
    }
    if gap_slices.iter().all(|s| s.count() == 0) && event_slices.iter().all(|s| s.count() == 0) {
        return Err(SweepError::EmptyRegion);
    }

    // right_img[g]: image at event g of gap g's components (g < n)
    // left_img[g]: image at event g − 1 (g ≥ 1)
    let mut right_img: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut left_img: Vec<Vec<usize>> = vec![Vec::new()];
    for e in 0..n {
        right_img.push(match_gap(arr, &gap_slices[e], &event_slices[e], &evs[e], &contexts[e])?);
        left_img.push(match_gap(arr, &gap_slices[e + 1], &event_slices[e], &evs[e], &contexts[e])?);
    }

    let mut left_pre: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    let mut right_pre: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    for e in 0..n {
        let count = event_slices[e].count();
        let mut lp = vec![Vec::new(); count];
        for (c, &r) in right_img[e].iter().enumerate() {
            lp[r].push(c);
        }
        let mut rp = vec![Vec::new(); count];
        for (c, &r) in left_img[e + 1].iter().enumerate() {
            rp[r].push(c);
        }
        left_pre.push(lp);
        right_pre.push(rp);
    }

    let mut asm = Assembly {
        ids: Vec::new(),
        levels: Vec::new(),
        witnesses: Vec::new(),
        edges: Vec::new(),
    };

    let left_ends: Vec<usize> = (0..gap_slices[0].count())
        .map(|_| asm.add(ExactValue::Rational(samples[0].clone()), Vec::new()))
        .collect();

    let mut vertex_at: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(n);
    for e in 0..n {
        let slabs = singular::closure_slabs(arr, &evs[e], &event_slices[e])?;
        let mut here = BTreeMap::new();
        for r in 0..event_slices[e].count() {
            let idx = event_slices[e].decode(r);
            let wit: Vec<SingularPoint> = slabs
                .iter()
                .filter(|(pos, comp, _)| idx[*pos] == *comp)
                .map(|(_, _, p)| p.clone())
                .collect();
            if left_pre[e][r].len() != 1 || right_pre[e][r].len() != 1 || !wit.is_empty() {
                here.insert(r, asm.add(evs[e].t.clone(), wit));
            }
        }
        vertex_at.push(here);
    }

    let right_ends: Vec<usize> = (0..gap_slices[n].count())
        .map(|_| asm.add(ExactValue::Rational(samples[n].clone()), Vec::new()))
        .collect();

    for g in 0..=n {
        for c in 0..gap_slices[g].count() {
            let start = if g == 0 {
                left_ends[c]
            } else {
                match vertex_at[g - 1].get(&left_img[g][c]) {
                    Some(&v) => v,
                    None => continue,
                }
            };
            let (mut gg, mut cc) = (g, c);
            let end = loop {
                if gg == n {
                    break right_ends[cc];
                }
                let r = right_img[gg][cc];
                if let Some(&v) = vertex_at[gg].get(&r) {
                    break v;
                }
                cc = right_pre[gg][r][0];
                gg += 1;
            };
            asm.edges.push((start, end));
        }
    }

    let digraph = Digraph::new(asm.ids, asm.edges)?;
    let parts = digraph.components();
    if parts.len() > 1 {
        return Err(SweepError::DisconnectedRegion(
            parts
                .iter()
                .map(|p| p.iter().map(|&v| digraph.id(v).to_string()).collect())
                .collect(),
        ));
    }
    let kinds = (0..digraph.vertex_count())
        .map(|v| VertexKind::from_degrees(digraph.in_degree(v), digraph.out_degree(v)))
        .collect();
    let graph = LeveledDigraph::with_kinds(digraph, asm.levels, kinds)?;
    Ok(PRGraph {
        graph,
        witnesses: asm.witnesses,
        events: evs,
        samples,
        gap_slices,
        event_slices,
    })
}

/// Closed x₁-extent of the region; `None` ends are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Extent {
    pub lo: Option<ExactValue>,
    pub hi: Option<ExactValue>,
}

pub fn region_extent(arr: &Arrangement) -> Result<Extent, SweepError> {
    let g = reeb(arr, SweepOptions { allow_unbounded: true })?;
    let n = g.events.len();
    let nonempty: Vec<usize> = (0..n).filter(|&e| g.event_slices[e].count() > 0).collect();
    let lo = if g.gap_slices[0].count() > 0 {
        None
    } else {
        nonempty.first().map(|&e| g.events[e].t.clone())
    };
    let hi = if g.gap_slices[n].count() > 0 {
        None
    } else {
        nonempty.last().map(|&e| g.events[e].t.clone())
    };
    Ok(Extent { lo, hi })
}

#[cfg(test)]
mod tests;
