use anisohardy::gauge::Gauge;
use anisohardy::hardy::{subcritical_quotient, EvalOptions};
use anisohardy::quadrature::angular_rule;
use anisohardy::sharpness::{interior_fractions, subcritical_sweep};
use anisohardy::wulff::{polar_integrate, PolarGrid};
use anisohardy::{corpus::cap_profile, fields::lift_radial};
use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::DMatrix;
use std::hint::black_box;

fn bench_gauge_eval(c: &mut Criterion) {
    let gauge = Gauge::weighted_lq(3, 3.0, vec![1.0, 2.0, 0.5]).unwrap();
    let polar = gauge.polar();
    let x = [0.4, -1.1, 0.7];
    c.bench_function("gauge_value_lq3", |b| {
        b.iter(|| black_box(gauge.value(black_box(&x))))
    });
    c.bench_function("polar_value_lq3", |b| {
        b.iter(|| black_box(polar.value(black_box(&x))))
    });
    let custom = Gauge::custom(
        2,
        std::sync::Arc::new(|x: &[f64]| {
            (x[0] * x[0] + x[1] * x[1] + 0.5 * x[0] * x[1]).sqrt()
        }),
        0.5,
        2.0,
    )
    .unwrap();
    let cp = custom.polar();
    let y = [0.8, -0.3];
    c.bench_function("numeric_polar_value", |b| {
        b.iter(|| black_box(cp.value(black_box(&y))))
    });
}

fn bench_polar_integrate(c: &mut Criterion) {
    let gauge = Gauge::ellipsoidal(3, DMatrix::from_row_slice(3, 3, &[
        2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5,
    ]))
    .unwrap();
    let polar = gauge.polar();
    let grid = PolarGrid::new(&polar, &angular_rule(3, 64).unwrap()).unwrap();
    let rule = anisohardy::quadrature::radial_rule(64, 0.1, 2.0).unwrap();
    c.bench_function("polar_integrate_3d", |b| {
        b.iter(|| black_box(polar_integrate(&grid, &rule, |x: &[f64], r| x[0] * x[0] + r)))
    });
}

fn bench_quotient(c: &mut Criterion) {
    let gauge = Gauge::euclidean(3).unwrap();
    let field = lift_radial(cap_profile(), gauge.polar());
    let opts = EvalOptions {
        angular_resolution: 32,
        ..EvalOptions::default()
    };
    c.bench_function("subcritical_quotient_cap", |b| {
        b.iter(|| black_box(subcritical_quotient(&gauge, &field, 2.0, &opts).unwrap()))
    });
}

fn bench_sweep(c: &mut Criterion) {
    c.bench_function("subcritical_sweep", |b| {
        b.iter(|| black_box(subcritical_sweep(3, 2.0, 1.0, &interior_fractions()).unwrap()))
    });
}

criterion_group!(
    kernels,
    bench_gauge_eval,
    bench_polar_integrate,
    bench_quotient,
    bench_sweep
);
criterion_main!(kernels);
