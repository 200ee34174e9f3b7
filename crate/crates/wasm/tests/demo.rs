use deformed_pb_wasm::demo::{deformed_curves, slack_sweep, tsallis_bound_curve};

#[test]
fn curves_are_mutually_inverse_where_defined() {
    let pts = deformed_curves(1.5, 0.1, 1.9, 50);
    assert_eq!(pts.len(), 150);
    for row in pts.chunks(3) {
        let (x, e) = (row[0], row[1]);
        let back = deformed_curves(1.5, e, e, 2)[2];
        assert!((back - x).abs() < 1e-10 * (1.0 + x.abs()));
    }
}

#[test]
fn curves_mark_undefined_values_with_nan() {
    let pts = deformed_curves(2.0, -1.5, 0.5, 3);
    assert!(pts[1].is_nan() && pts[2].is_nan());
    assert!(pts[4].is_finite() && pts[5].is_nan());
    assert!(pts[7].is_finite() && pts[8].is_finite());
}

#[test]
fn sweep_in_a_proven_clause_has_no_violations() {
    let s = slack_sweep("iii", 1.5, 2.0, 3, 200, 7).unwrap();
    assert_eq!(s.len(), 200);
    assert!(s.iter().all(|&v| v >= -1e-8));
}

#[test]
fn sweep_rejects_parameters_outside_the_clause() {
    assert!(slack_sweep("v", 2.5, 3.0, 3, 10, 7).is_err());
    assert!(slack_sweep("vi", 2.5, 3.0, 3, 10, 7).is_err());
    assert!(slack_sweep("iii", 1.5, 2.0, 0, 10, 7).is_err());
}

#[test]
fn bound_curve_stays_below_the_entropy() {
    let c = tsallis_bound_curve(0.7, 4, 11, 40).unwrap();
    let d = c[0];
    for pair in c[1..].chunks(2) {
        assert!(pair[0] <= 0.7 + 1e-12);
        assert!(pair[1] <= d + 1e-8 * (1.0 + d.abs()));
    }
}
