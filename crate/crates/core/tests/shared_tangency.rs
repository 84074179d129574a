use circle_reeb::arrangement::{CircleConstraint, Side};
use circle_reeb::numeric::{rat, ExactValue};
use circle_reeb::synthesis::{synthesize, TheoremInstance};
use circle_reeb::validate::{recheck, verify_theorem, NORMALS};

// The middle blocker of an even family pinches the lens slice at its
// midpoint; a tangency in a fresh coordinate at the same level must be
// reported as dependent normals, not as a precision failure.
#[test]
fn tangency_shared_with_symmetric_pin_is_reported() {
    let levels = vec![rat(0, 1), rat(1, 1), rat(2, 1), rat(3, 1)];
    let inst = TheoremInstance::theorem1(vec![4, 2], levels.clone());
    let mut arr = synthesize(&inst).unwrap().arrangement;
    let r = rat(1, 3);
    arr.ambient_dim += 1;
    let k = arr.ambient_dim;
    arr.constraints
        .push(CircleConstraint::new("shared", k, &levels[1] + &r, ExactValue::zero(), r, Side::Outside));
    let report = verify_theorem(&inst, &arr);
    assert!(!report.precision_exhausted);
    let normals = report.find(NORMALS).unwrap();
    assert!(!normals.pass);
    assert_eq!(recheck(&arr, normals, &inst.level_values()), Ok(true));
}
