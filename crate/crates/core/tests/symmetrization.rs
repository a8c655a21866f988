//! Radial rearrangement checks: the rearranged profile preserves p-mass
//! (verified against an independent tensor-product integral) and can only
//! lower the anisotropic gradient energy.

use anisohardy::corpus::standard_corpus;
use anisohardy::fields::{radial_energy, sphere_measure, symmetrize, Support};
use anisohardy::gauge::Gauge;
use anisohardy::hardy::box_integrate;
use anisohardy::quadrature::{angular_rule, composite_rule};
use anisohardy::wulff::{polar_integrate, PolarGrid};
use anisohardy::ScalarField;
use approx::assert_relative_eq;
use nalgebra::DMatrix;

fn cover_box(field: &dyn ScalarField, gauge: &Gauge) -> (Vec<f64>, Vec<f64>) {
    match field.support() {
        Support::Box { lo, hi } => (lo, hi),
        Support::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
        Support::Shell { outer, .. } => {
            // A polar ball of radius b fits inside the Euclidean ball of
            // radius b / alpha where alpha is the lower sandwich constant.
            let (alpha, _) = gauge.polar().sandwich();
            let half = outer / alpha;
            (vec![-half; field.dim()], vec![half; field.dim()])
        }
    }
}

fn test_gauges() -> Vec<Gauge> {
    vec![
        Gauge::ellipsoidal(2, DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0])).unwrap(),
        Gauge::weighted_lq(2, 3.0, vec![1.0, 1.4]).unwrap(),
    ]
}

#[test]
fn rearrangement_preserves_p_mass() {
    for gauge in test_gauges() {
        let polar = gauge.polar();
        let rule = angular_rule(2, 2048).unwrap();
        let grid = PolarGrid::new(&polar, &rule).unwrap();
        let omega = sphere_measure(&grid);
        let fields = standard_corpus(&polar).unwrap();
        for name in ["tilted-bump", "shifted-bump", "annular-bump"] {
            let field = fields
                .iter()
                .find(|f| f.name().starts_with(name))
                .expect("corpus field present")
                .clone();
            for p in [1.5, 2.0, 3.0] {
                let profile = symmetrize(field.clone(), &polar, &grid, p).unwrap();
                let (a, b) = profile.support();
                let radial = composite_rule(a, b, &profile.breakpoints(), 16).unwrap();
                let radial_mass =
                    omega * radial.integrate(|r| profile.value(r).powf(p) * r);
                let (lo, hi) = cover_box(field.as_ref(), &gauge);
                // Fractional powers of |u| kink along the coordinate zero
                // sets, so pin a panel edge there on each axis.
                let breaks: Vec<Vec<f64>> = (0..2)
                    .map(|axis| {
                        let mut b = field.axis_breakpoints(axis);
                        if lo[axis] < 0.0 && hi[axis] > 0.0 {
                            b.push(0.0);
                        }
                        b
                    })
                    .collect();
                let f = field.clone();
                let box_mass = box_integrate(&lo, &hi, &breaks, 40, &move |x: &[f64]| {
                    f.value(x).abs().powf(p)
                })
                .unwrap();
                assert_relative_eq!(radial_mass, box_mass, max_relative = 1e-6);
            }
        }
    }
}

#[test]
fn rearrangement_lowers_gradient_energy() {
    for gauge in test_gauges() {
        let polar = gauge.polar();
        let rule = angular_rule(2, 512).unwrap();
        let grid = PolarGrid::new(&polar, &rule).unwrap();
        let omega = sphere_measure(&grid);
        let fields = standard_corpus(&polar).unwrap();
        for name in ["tilted-bump", "shifted-bump", "bump", "annular-bump"] {
            let field = fields
                .iter()
                .find(|f| f.name().starts_with(name))
                .expect("corpus field present")
                .clone();
            for p in [1.5, 2.0, 3.0] {
                let profile = symmetrize(field.clone(), &polar, &grid, p).unwrap();
                let radial_side = radial_energy(&profile, p, 2, omega).unwrap();
                let (_, b) = field.support().shell_cover(&polar);
                let radial = composite_rule(0.0, b, &field.radial_breakpoints(), 16).unwrap();
                let f = field.clone();
                let g = gauge.clone();
                let full_side = polar_integrate(&grid, &radial, move |x: &[f64], _r: f64| {
                    let gu = f.gradient(x);
                    g.value(&gu).powf(p)
                });
                assert!(
                    radial_side <= full_side * (1.0 + 1e-8),
                    "{name} p={p}: rearranged energy {radial_side} exceeds full energy {full_side}"
                );
            }
        }
    }
}

#[test]
fn radial_fields_are_fixed_points_of_rearrangement() {
    let gauge = Gauge::weighted_lq(2, 3.0, vec![1.0, 1.4]).unwrap();
    let polar = gauge.polar();
    let rule = angular_rule(2, 256).unwrap();
    let grid = PolarGrid::new(&polar, &rule).unwrap();
    let fields = standard_corpus(&polar).unwrap();
    let field = fields
        .iter()
        .find(|f| f.name().starts_with("bump"))
        .expect("corpus field present")
        .clone();
    let profile = symmetrize(field.clone(), &polar, &grid, 2.0).unwrap();
    let (a, b) = profile.support();
    for k in 0..40 {
        let r = a + (b - a) * (k as f64 + 0.5) / 40.0;
        let mut x = vec![0.0; 2];
        grid.point_at(3, r, &mut x);
        let direct = field.value(&x).abs();
        let rearranged = profile.value(r);
        assert_relative_eq!(direct, rearranged, epsilon = 1e-9, max_relative = 1e-9);
    }
}
