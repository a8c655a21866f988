//! Property tests for the gauge layer: positive homogeneity, the duality
//! inequality, Euler's relation, sandwich bounds, and round-trip polarity.

use std::sync::Arc;

use anisohardy::gauge::{check_identities, Gauge};
use anisohardy::linalg::{dot, norm};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn spd_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, 0.2, 0.1, 0.2, 1.0])
}

fn closed_form_gauges() -> Vec<Gauge> {
    vec![
        Gauge::euclidean(3).unwrap(),
        Gauge::ellipsoidal(3, spd_matrix()).unwrap(),
        Gauge::weighted_lq(3, 3.0, vec![1.0, 0.6, 1.4]).unwrap(),
        Gauge::weighted_lq(3, 1.5, vec![1.0, 1.0, 2.0]).unwrap(),
    ]
}

fn vector3() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0f64..3.0, 3)
        .prop_filter("stay away from the origin", |v| norm(v) > 1e-2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_is_positively_homogeneous(xi in vector3(), t in -40.0f64..40.0) {
        prop_assume!(t.abs() > 1e-6);
        for gauge in closed_form_gauges() {
            let scaled: Vec<f64> = xi.iter().map(|c| c * t).collect();
            let lhs = gauge.value(&scaled);
            let rhs = t.abs() * gauge.value(&xi);
            prop_assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.max(1e-12),
                "homogeneity violated for {}: {lhs} vs {rhs}",
                gauge.family()
            );
        }
    }

    #[test]
    fn duality_inequality_holds(xi in vector3(), x in vector3()) {
        for gauge in closed_form_gauges() {
            let polar = gauge.polar();
            let pairing = dot(&xi, &x).abs();
            let bound = gauge.value(&xi) * polar.value(&x);
            prop_assert!(
                pairing <= bound * (1.0 + 1e-10),
                "duality inequality violated for {}: {pairing} > {bound}",
                gauge.family()
            );
        }
    }

    #[test]
    fn euler_relation_holds(xi in vector3()) {
        for gauge in closed_form_gauges() {
            let grad = gauge.gradient(&xi).unwrap();
            let lhs = dot(&grad, &xi);
            let rhs = gauge.value(&xi);
            prop_assert!(
                (lhs - rhs).abs() <= 1e-9 * rhs.max(1e-9),
                "Euler relation violated for {}: {lhs} vs {rhs}",
                gauge.family()
            );
        }
    }

    #[test]
    fn sandwich_bounds_hold(xi in vector3()) {
        for gauge in closed_form_gauges() {
            let (alpha, beta) = gauge.sandwich();
            let e = norm(&xi);
            let h = gauge.value(&xi);
            prop_assert!(h >= alpha * e * (1.0 - 1e-12));
            prop_assert!(h <= beta * e * (1.0 + 1e-12));
        }
    }

    #[test]
    fn gradient_lies_on_polar_unit_sphere(xi in vector3()) {
        // The gradient of a gauge at any off-origin point has polar value one.
        for gauge in closed_form_gauges() {
            let polar = gauge.polar();
            let grad = gauge.gradient(&xi).unwrap();
            let pv = polar.value(&grad);
            prop_assert!(
                (pv - 1.0).abs() <= 1e-8,
                "gradient of {} is off the polar sphere: {pv}",
                gauge.family()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn numeric_round_trip_recovers_custom_gauge(x in vector3()) {
        // A custom gauge only exposes values, so its polar is numeric; taking
        // the polar twice must come back to the original values.
        let base = Gauge::weighted_lq(3, 2.5, vec![1.0, 0.8, 1.3]).unwrap();
        let inner = base.clone();
        let custom = Gauge::custom(
            3,
            Arc::new(move |xi: &[f64]| inner.value(xi)),
            base.sandwich().0,
            base.sandwich().1,
        )
        .unwrap();
        let double_polar = custom.polar().as_gauge().polar();
        let direct = custom.value(&x);
        let round_trip = double_polar.value(&x);
        prop_assert!(
            (direct - round_trip).abs() <= 1e-6 * direct.max(1e-6),
            "round trip drifted: {direct} vs {round_trip}"
        );
    }
}

#[test]
fn identity_report_is_clean_for_closed_form_gauges() {
    for gauge in closed_form_gauges() {
        let report = check_identities(&gauge, 200, 11).unwrap();
        assert!(
            report.max_violation() < 1e-8,
            "{} identities drifted to {:.3e}",
            gauge.family(),
            report.max_violation()
        );
    }
}
