use super::*;
use crate::arrangement::{CircleConstraint, Side};
use crate::numeric::{int, rat};

fn r(x: Rational) -> ExactValue {
    ExactValue::Rational(x)
}

fn circle(id: &str, coord: usize, a: Rational, b: Rational, radius: Rational, side: Side) -> CircleConstraint {
    CircleConstraint::new(id, coord, a, r(b), radius, side)
}

fn lens(k: usize) -> Arrangement {
    Arrangement::new(
        k,
        vec![
            circle("up", 2, int(0), rat(3, 5), int(1), Side::Inside),
            circle("down", 2, int(0), rat(-3, 5), int(1), Side::Inside),
        ],
    )
    .unwrap()
}

fn kinds_by_level(g: &PRGraph) -> Vec<(f64, VertexKind)> {
    let mut out: Vec<(f64, VertexKind)> = (0..g.graph.vertex_count())
        .map(|v| (g.graph.levels[v].to_f64(), g.graph.kinds[v]))
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[test]
fn lens_is_a_path() {
    let g = reeb(&lens(2), SweepOptions::default()).unwrap();
    assert_eq!(g.graph.vertex_count(), 2);
    assert_eq!(g.graph.edge_count(), 1);
    let birth = g.graph.digraph.sources()[0];
    let death = g.graph.digraph.sinks()[0];
    assert_eq!(g.graph.levels[birth], r(rat(-4, 5)));
    assert_eq!(g.graph.levels[death], r(rat(4, 5)));
    assert_eq!(g.graph.kinds[birth], VertexKind::Birth);
    assert_eq!(g.graph.kinds[death], VertexKind::Death);
    assert_eq!(g.witnesses[birth].len(), 1);
    assert_eq!(g.witnesses[birth][0].kind, SingularKind::Corner);
    assert_eq!(g.witnesses[birth][0].xm, r(int(0)));
}

#[test]
fn lens_singular_points() {
    let arr = lens(2);
    let evs = events(&arr).unwrap();
    let corner = evs.iter().find(|e| e.t == r(rat(4, 5))).unwrap();
    let pts = singular_points_at(&arr, corner).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0].constraints, vec![0, 1]);
    // tangencies at ±1 lie outside the lens
    let tangency = evs.iter().find(|e| e.t == r(int(1))).unwrap();
    assert!(singular_points_at(&arr, tangency).unwrap().is_empty());
}

#[test]
fn outside_tangency_is_singular_when_unobstructed() {
    let arr = Arrangement::new(2, vec![circle("o", 2, int(1), int(0), int(1), Side::Outside)]).unwrap();
    let evs = events(&arr).unwrap();
    let pts = singular_points_at(&arr, &evs[0]).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!((pts[0].x1.clone(), pts[0].xm.clone()), (r(int(0)), r(int(0))));
}

#[test]
fn branch_from_outside_circle_in_second_coordinate() {
    // lens over [0, 2] in x₂ (3-4-5 scaled by 1/3), outside circle in x₃
    // tangent at x₁ = 1
    let arr = Arrangement::new(
        3,
        vec![
            circle("up", 2, int(1), rat(4, 3), rat(5, 3), Side::Inside),
            circle("down", 2, int(1), rat(-4, 3), rat(5, 3), Side::Inside),
            circle("o", 3, int(2), int(0), int(1), Side::Outside),
        ],
    )
    .unwrap();
    let g = reeb(&arr, SweepOptions::default()).unwrap();
    assert_eq!(
        kinds_by_level(&g),
        vec![
            (0.0, VertexKind::Birth),
            (1.0, VertexKind::Branch),
            (2.0, VertexKind::Death),
            (2.0, VertexKind::Death)
        ]
    );
    assert_eq!(g.graph.edge_count(), 3);
    let counts: Vec<usize> = g
        .samples
        .iter()
        .zip(g.gap_counts())
        .filter(|(s, _)| **s > int(0) && **s < int(2))
        .map(|(_, c)| c)
        .collect();
    assert_eq!(counts, vec![1, 2]);
}

#[test]
fn product_law_holds_at_samples() {
    let arr = Arrangement::new(
        4,
        vec![
            circle("up", 2, int(0), rat(4, 3), rat(5, 3), Side::Inside),
            circle("down", 2, int(0), rat(-4, 3), rat(5, 3), Side::Inside),
            circle("o3", 3, rat(1, 2), int(0), int(1), Side::Outside),
            circle("o4", 4, rat(-1, 2), int(0), int(1), Side::Outside),
        ],
    )
    .unwrap();
    let g = reeb(&arr, SweepOptions::default()).unwrap();
    for (s, sample) in g.gap_slices.iter().zip(&g.samples) {
        let product: usize = (2..=4)
            .map(|m| crate::arrangement::slice(&arr, m, &r(sample.clone())).unwrap().components.len())
            .product();
        assert_eq!(s.count(), product);
    }
    // two births split on x₃ and re-merge on x₄: one independent cycle
    assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (8, 8));
    assert_eq!(g.graph.digraph.betti1(), 1);
}

#[test]
fn disconnected_and_empty_regions() {
    let two = Arrangement::new(
        2,
        vec![
            circle("a", 2, int(0), int(0), int(1), Side::Inside),
            circle("b", 2, int(5), int(0), int(1), Side::Inside),
        ],
    )
    .unwrap();
    // two disjoint disks intersect to nothing
    assert_eq!(reeb(&two, SweepOptions::default()).unwrap_err(), SweepError::EmptyRegion);

    let apart = Arrangement::new(
        3,
        vec![
            circle("a", 2, int(0), int(0), int(2), Side::Inside),
            circle("hole", 3, int(0), int(0), int(3), Side::Outside),
        ],
    )
    .unwrap();
    match reeb(&apart, SweepOptions::default()) {
        Err(SweepError::DisconnectedRegion(parts)) => assert_eq!(parts.len(), 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unbounded_region_needs_flag() {
    let arr = Arrangement::new(2, vec![circle("o", 2, int(0), int(0), int(1), Side::Outside)]).unwrap();
    assert_eq!(reeb(&arr, SweepOptions::default()).unwrap_err(), SweepError::UnboundedRegion);
    let g = reeb(&arr, SweepOptions { allow_unbounded: true }).unwrap();
    assert_eq!(g.graph.vertex_count(), 4);
    assert_eq!(g.graph.edge_count(), 4);
    assert_eq!(g.graph.digraph.betti1(), 1);
    let ext = region_extent(&arr).unwrap();
    assert_eq!(ext, Extent { lo: None, hi: None });
}

#[test]
fn extent_of_lens() {
    let ext = region_extent(&lens(2)).unwrap();
    assert_eq!(ext.lo, Some(r(rat(-4, 5))));
    assert_eq!(ext.hi, Some(r(rat(4, 5))));
    let mut arr = lens(2);
    arr.constraints.push(circle("far", 2, int(9), int(0), int(1), Side::Outside));
    assert_eq!(region_extent(&arr).unwrap(), ext);
}
