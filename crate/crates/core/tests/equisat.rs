//! Transformed systems derive `false` in the bounded model exactly when the
//! input does.

use hornpair_testkit::suites::equisat;
use hornpair_testkit::SystemShape;

#[test]
fn small_random_systems() {
    let n = equisat(0..1000, SystemShape::default());
    assert!((100..900).contains(&n), "{n} of 1000 inputs derive false");
}

#[test]
fn larger_random_systems() {
    let shape = SystemShape {
        preds: 4,
        max_arity: 3,
        max_clauses_per_pred: 4,
        ..SystemShape::default()
    };
    let n = equisat(10_000..10_300, shape);
    assert!((30..270).contains(&n), "{n} of 300 inputs derive false");
}

#[test]
fn deeper_bodies() {
    let shape = SystemShape {
        preds: 5,
        max_arity: 2,
        max_clauses_per_pred: 2,
        max_body: 3,
        max_const: 3,
    };
    let n = equisat(20_000..20_200, shape);
    assert!((20..180).contains(&n), "{n} of 200 inputs derive false");
}
