//! Standard corpus of test fields.
//!
//! Nine fields spanning the behaviors the inequality evaluators must
//! handle: Lipschitz cones, C2 bumps at several distances from the origin,
//! a non-radial tilted bump, windowed power and log-power singular
//! profiles, a windowed Gaussian, and two fields living in the upper
//! halfspace (a product slab and a shifted ball bump that also avoids the
//! origin). Radial fields are expressed through the polar gauge, so one
//! corpus call serves any gauge family.
//!
//! All fields are Lipschitz with piecewise-smooth structure, carry exact
//! gradients, and declare their kink radii so quadrature panels can align
//! with them.

use crate::fields::{lift_radial, FnField, RadialProfile, ScalarField, Support};
use crate::gauge::PolarGauge;

use crate::Result;
use std::sync::Arc;

/// Quintic smoothstep: 0 below 0, 1 above 1, C2 across both ends.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// Derivative of [`smoothstep`].
pub fn smoothstep_d(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        30.0 * t * t * (1.0 + t * (-2.0 + t))
    }
}

/// C2 plateau window: rises on `[a, b]`, equals 1 on `[b, c]`, falls on
/// `[c, d]`, vanishes outside `[a, d]`.
pub fn window(r: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if r <= a || r >= d {
        0.0
    } else if r < b {
        smoothstep((r - a) / (b - a))
    } else if r <= c {
        1.0
    } else {
        smoothstep((d - r) / (d - c))
    }
}

/// Derivative of [`window`] in `r`.
pub fn window_d(r: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if r <= a || r >= d || (b..=c).contains(&r) {
        0.0
    } else if r < b {
        smoothstep_d((r - a) / (b - a)) / (b - a)
    } else {
        -smoothstep_d((d - r) / (d - c)) / (d - c)
    }
}

fn windowed_profile(
    name: &str,
    edges: (f64, f64, f64, f64),
    core: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    core_d: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
) -> Result<RadialProfile> {
    let (a, b, c, d) = edges;
    let f = {
        let core = core.clone();
        // Evaluate the core factor only inside the window: outside it may
        // be undefined (negative logs, negative powers at r = 0).
        Arc::new(move |r: f64| {
            let w = window(r, a, b, c, d);
            if w == 0.0 {
                0.0
            } else {
                core(r) * w
            }
        })
    };
    let df = Arc::new(move |r: f64| {
        let w = window(r, a, b, c, d);
        if w == 0.0 && window_d(r, a, b, c, d) == 0.0 {
            return 0.0;
        }
        core_d(r) * w + core(r) * window_d(r, a, b, c, d)
    });
    RadialProfile::new(name, (a.max(0.0), d), vec![a, b, c, d], f, df)
}

/// The cone `max(1 - r, 0)`: Lipschitz, kink at `r = 1`, supported in the
/// unit Wulff ball. The equality witness for the first-order (p = 1)
/// attainment check.
pub fn cap_profile() -> RadialProfile {
    RadialProfile::new(
        "cap",
        (0.0, 1.0),
        vec![1.0],
        Arc::new(|r: f64| (1.0 - r).max(0.0)),
        Arc::new(|r: f64| if r < 1.0 { -1.0 } else { 0.0 }),
    )
    .expect("valid profile")
}

/// Builds the standard nine-field corpus for the given polar gauge.
pub fn standard_corpus(polar: &PolarGauge) -> Result<Vec<Arc<dyn ScalarField>>> {
    let dim = polar.dim();
    let mut fields: Vec<Arc<dyn ScalarField>> = Vec::with_capacity(9);

    fields.push(Arc::new(lift_radial(cap_profile(), polar.clone())));

    let bump = windowed_profile(
        "bump",
        (0.5, 0.75, 1.5, 2.0),
        Arc::new(|_| 1.0),
        Arc::new(|_| 0.0),
    )?;
    fields.push(Arc::new(lift_radial(bump, polar.clone())));

    let annular = windowed_profile(
        "annular-bump",
        (0.25, 0.3, 0.45, 0.5),
        Arc::new(|_| 1.0),
        Arc::new(|_| 0.0),
    )?;
    fields.push(Arc::new(lift_radial(annular, polar.clone())));

    let tpow = windowed_profile(
        "truncated-power",
        (1.0, 1.25, 1.75, 2.0),
        Arc::new(|r: f64| r.powf(-0.5)),
        Arc::new(|r: f64| -0.5 * r.powf(-1.5)),
    )?;
    fields.push(Arc::new(lift_radial(tpow, polar.clone())));

    let tlog = windowed_profile(
        "truncated-log-power",
        (0.02, 0.04, 0.3, 0.5),
        Arc::new(|r: f64| (1.0 / r).ln().powf(0.45)),
        Arc::new(|r: f64| -0.45 * (1.0 / r).ln().powf(-0.55) / r),
    )?;
    fields.push(Arc::new(lift_radial(tlog, polar.clone())));

    let gauss = windowed_profile(
        "gaussian",
        (-1.0, -0.5, 5.0, 6.0),
        Arc::new(|r: f64| (-r * r).exp()),
        Arc::new(|r: f64| -2.0 * r * (-r * r).exp()),
    )?;
    fields.push(Arc::new(lift_radial(gauss, polar.clone())));

    // Non-radial: x1 times a C1 taper of the polar radius.
    {
        let p = polar.clone();
        let pg = polar.clone();
        let f = Arc::new(move |x: &[f64]| {
            let t = (1.0 - p.value(x)).max(0.0);
            x[0] * t * t
        });
        let grad = Arc::new(move |x: &[f64]| {
            let r = pg.value(x);
            let t = (1.0 - r).max(0.0);
            let mut g = vec![0.0; x.len()];
            g[0] = t * t;
            if t > 0.0 && r > 0.0 {
                let gh = pg.gradient(x).expect("away from origin");
                for (gi, hi) in g.iter_mut().zip(&gh) {
                    *gi -= 2.0 * x[0] * t * hi;
                }
            }
            g
        });
        fields.push(Arc::new(FnField::new(
            dim,
            "tilted-bump",
            Support::Shell {
                inner: 0.0,
                outer: 1.0,
            },
            vec![1.0],
            f,
            grad,
        )));
    }

    // Product slab in the upper halfspace.
    {
        let zw = (0.5, 0.75, 1.25, 1.5);
        let lw = (-1.0, -0.75, 0.75, 1.0);
        let f = Arc::new(move |x: &[f64]| {
            let n = x.len();
            let mut v = window(x[n - 1], zw.0, zw.1, zw.2, zw.3);
            for &xi in &x[..n - 1] {
                v *= window(xi, lw.0, lw.1, lw.2, lw.3);
            }
            v
        });
        let grad = Arc::new(move |x: &[f64]| {
            let n = x.len();
            let mut vals = vec![0.0; n];
            let mut ders = vec![0.0; n];
            for (i, &xi) in x.iter().enumerate() {
                let (a, b, c, d) = if i == n - 1 { zw } else { lw };
                vals[i] = window(xi, a, b, c, d);
                ders[i] = window_d(xi, a, b, c, d);
            }
            (0..n)
                .map(|i| {
                    let mut g = ders[i];
                    for (j, &v) in vals.iter().enumerate() {
                        if j != i {
                            g *= v;
                        }
                    }
                    g
                })
                .collect()
        });
        let mut lo = vec![lw.0; dim];
        let mut hi = vec![lw.3; dim];
        lo[dim - 1] = zw.0;
        hi[dim - 1] = zw.3;
        let mut axis_breaks = vec![vec![lw.0, lw.1, lw.2, lw.3]; dim];
        axis_breaks[dim - 1] = vec![zw.0, zw.1, zw.2, zw.3];
        fields.push(Arc::new(
            FnField::new(
                dim,
                "halfspace-slab",
                Support::Box { lo, hi },
                vec![],
                f,
                grad,
            )
            .with_axis_breakpoints(axis_breaks),
        ));
    }

    // Smooth bump on a ball shifted up the last axis: supported both inside
    // the upper halfspace and away from the origin.
    {
        let radius = 0.6;
        let mut center = vec![0.0; dim];
        center[dim - 1] = 1.2;
        let c1 = center.clone();
        let c2 = center.clone();
        let f = Arc::new(move |x: &[f64]| {
            let s: f64 = x
                .iter()
                .zip(&c1)
                .map(|(&xi, &ci)| (xi - ci) * (xi - ci))
                .sum::<f64>()
                / (radius * radius);
            (1.0 - s).max(0.0).powi(3)
        });
        let grad = Arc::new(move |x: &[f64]| {
            let s: f64 = x
                .iter()
                .zip(&c2)
                .map(|(&xi, &ci)| (xi - ci) * (xi - ci))
                .sum::<f64>()
                / (radius * radius);
            let t = (1.0 - s).max(0.0);
            x.iter()
                .zip(&c2)
                .map(|(&xi, &ci)| -6.0 * t * t * (xi - ci) / (radius * radius))
                .collect()
        });
        fields.push(Arc::new(FnField::new(
            dim,
            "shifted-bump",
            Support::Ball { center, radius },
            vec![],
            f,
            grad,
        )));
    }

    Ok(fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::Gauge;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn window_is_continuous_and_matches_derivative() {
        let (a, b, c, d) = (0.5, 0.75, 1.5, 2.0);
        let h = 1e-6;
        for k in 0..200 {
            let r = 0.4 + 1.7 * k as f64 / 199.0;
            // Skip the kink radii themselves.
            if [a, b, c, d].iter().any(|&e| (r - e).abs() < 1e-3) {
                continue;
            }
            let fd = (window(r + h, a, b, c, d) - window(r - h, a, b, c, d)) / (2.0 * h);
            assert_abs_diff_eq!(window_d(r, a, b, c, d), fd, epsilon = 1e-8);
        }
        // C2: derivative vanishes at plateau edges.
        assert_eq!(window_d(b, a, b, c, d), 0.0);
        assert_eq!(window_d(c, a, b, c, d), 0.0);
    }

    #[test]
    fn corpus_has_nine_uniquely_named_fields() {
        let g = Gauge::euclidean(3).unwrap();
        let corpus = standard_corpus(&g.polar()).unwrap();
        assert_eq!(corpus.len(), 9);
        let mut names: Vec<&str> = corpus.iter().map(|f| f.name()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 9);
        for f in &corpus {
            assert_eq!(f.dim(), 3);
        }
    }

    #[test]
    fn corpus_gradients_match_finite_differences() {
        let g = Gauge::weighted_lq(2, 3.0, vec![1.0, 1.7]).unwrap();
        let polar = g.polar();
        let corpus = standard_corpus(&polar).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let h = 1e-6;
        for field in &corpus {
            let (lo, hi) = field.support().shell_cover(&polar);
            let mut checked = 0;
            let mut attempts = 0;
            while checked < 5 && attempts < 4000 {
                attempts += 1;
                let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.2..2.2)).collect();
                let r = polar.value(&x);
                if r < lo.max(1e-3) || r > hi {
                    continue;
                }
                // Stay away from kink radii where the gradient jumps.
                if field
                    .radial_breakpoints()
                    .iter()
                    .any(|&bp| (r - bp).abs() < 1e-2)
                {
                    continue;
                }
                if field.value(&x).abs() < 1e-8 {
                    continue;
                }
                let grad = field.gradient(&x);
                for i in 0..2 {
                    let mut xp = x.clone();
                    xp[i] += h;
                    let mut xm = x.clone();
                    xm[i] -= h;
                    let fd = (field.value(&xp) - field.value(&xm)) / (2.0 * h);
                    assert_abs_diff_eq!(grad[i], fd, epsilon = 2e-6);
                }
                checked += 1;
            }
            assert!(checked > 0, "no sample landed inside support for {}", field.name());
        }
    }

    #[test]
    fn fields_vanish_outside_declared_support() {
        let g = Gauge::euclidean(3).unwrap();
        let polar = g.polar();
        let corpus = standard_corpus(&polar).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for field in &corpus {
            let (lo, hi) = field.support().shell_cover(&polar);
            for _ in 0..200 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-8.0..8.0)).collect();
                let r = polar.value(&x);
                if r > lo * 0.999 && r < hi * 1.001 {
                    continue;
                }
                assert_eq!(field.value(&x), 0.0, "{} at {:?}", field.name(), x);
            }
        }
    }

    #[test]
    fn cap_profile_is_the_unit_cone() {
        let c = cap_profile();
        assert_relative_eq!(c.value(0.25), 0.75);
        assert_eq!(c.derivative(0.5), -1.0);
        assert_eq!(c.value(1.5), 0.0);
        assert_eq!(c.derivative(1.5), 0.0);
    }
}
