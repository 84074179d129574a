use super::*;
use crate::arrangement::fixtures::{circle, lens};
use crate::arrangement::Side;
use crate::numeric::{int, rat};

fn failing<'a>(r: &'a ValidationReport, id: &str) -> Vec<&'a Check> {
    r.failures().filter(|c| c.id == id).collect()
}

#[test]
fn lens_is_transversal() {
    let r = transversality(&lens(2));
    assert!(r.overall, "{:?}", r.first_failure());
    assert!(ra_region(&lens(2)).overall);
}

#[test]
fn externally_tangent_pair_in_closure() {
    // (0,0,1) and (2,0,1) touch at (1,0); a wide inside circle keeps it in the closure
    let arr = Arrangement::new(
        2,
        vec![
            circle("big", 2, int(1), int(0), int(3), Side::Inside),
            circle("l", 2, int(0), int(0), int(1), Side::Outside),
            circle("r", 2, int(2), int(0), int(1), Side::Outside),
        ],
    )
    .unwrap();
    let r = transversality(&arr);
    let fails = failing(&r, TANGENT_PAIR);
    assert_eq!(fails.len(), 1);
    match &fails[0].witness {
        Some(Witness::Point { point, constraints }) => {
            assert_eq!(point[0], ExactValue::Rational(int(1)));
            assert_eq!(constraints, &vec!["l".to_string(), "r".to_string()]);
        }
        other => panic!("{other:?}"),
    }
    assert!(recheck(&arr, fails[0], &[]).unwrap());
}

#[test]
fn tangent_pair_outside_closure_passes() {
    // two inside disks touching at (1,0): the closure is that single point,
    // but a third inside disk keeps it away
    let arr = Arrangement::new(
        2,
        vec![
            circle("a", 2, int(0), int(0), int(1), Side::Inside),
            circle("b", 2, int(2), int(0), int(1), Side::Outside),
            circle("c", 2, int(-1), int(0), rat(3, 2), Side::Inside),
        ],
    )
    .unwrap();
    let r = transversality(&arr);
    assert!(failing(&r, TANGENT_PAIR).is_empty(), "{:?}", r.first_failure());
}

#[test]
fn shared_vertical_tangency() {
    // lens in x₂ over [0, 2]; two outside circles in x₃ and x₄ both
    // tangent at x₁ = 1 on their left
    let arr = Arrangement::new(
        4,
        vec![
            circle("up", 2, int(1), rat(4, 3), rat(5, 3), Side::Inside),
            circle("down", 2, int(1), rat(-4, 3), rat(5, 3), Side::Inside),
            circle("o3", 3, int(2), int(0), int(1), Side::Outside),
            circle("o4", 4, int(2), int(0), int(1), Side::Outside),
        ],
    )
    .unwrap();
    let r = transversality(&arr);
    let fails = failing(&r, NORMALS);
    assert_eq!(fails.len(), 1, "{r:?}");
    match &fails[0].witness {
        Some(Witness::Point { constraints, .. }) => assert_eq!(constraints, &vec!["o3".to_string(), "o4".to_string()]),
        other => panic!("{other:?}"),
    }
    assert!(recheck(&arr, fails[0], &[]).unwrap());
}

#[test]
fn unused_far_circle() {
    let mut arr = lens(2);
    arr.constraints.push(circle("far", 2, int(9), int(0), int(1), Side::Outside));
    let r = ra_region(&arr);
    let fails = failing(&r, UNUSED);
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0].witness, Some(Witness::Constraints(vec!["far".into()])));
    assert!(recheck(&arr, fails[0], &[]).unwrap());
}

#[test]
fn empty_region_reported() {
    let arr = Arrangement::new(
        2,
        vec![
            circle("a", 2, int(0), int(0), int(1), Side::Inside),
            circle("b", 2, int(5), int(0), int(1), Side::Inside),
        ],
    )
    .unwrap();
    let r = ra_region(&arr);
    let fails = failing(&r, REGION);
    assert_eq!(fails.len(), 1);
    assert!(recheck(&arr, fails[0], &[]).unwrap());
}
