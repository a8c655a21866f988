//! Sharpness verification via near-extremal families.
//!
//! Each inequality's sharp constant is approached by a one-parameter family
//! of admissible fields indexed by a power `alpha`:
//!
//! * subcritical (`p < N`): `u(r) = r^{-alpha}` up to radius `delta`, then a
//!   linear taper `delta^{-alpha-1} (2 delta - r)` down to zero; admissible
//!   for `alpha < (N-p)/p`, with quotient tending to `|(N-p)/p|^p` as
//!   `alpha` increases to that limit,
//! * critical (`p = N`, ball of radius `R`): `v(r) = (log R/r)^alpha` up to
//!   `delta`, then the continuous taper
//!   `(log R/delta)^alpha (2 delta - r)/delta`; admissible for
//!   `alpha < (N-1)/N`,
//! * boundary distance on a halfspace (`p = 2`): `u = eta(x) d(x)^alpha`
//!   with a plateau cutoff `eta`; admissible for `alpha > 1/2`, approaching
//!   the limit from above.
//!
//! Near the admissible limit the core integrals concentrate over hundreds
//! of orders of magnitude in radius, far beyond what any fixed quadrature
//! can resolve, so the sweeps are semi-analytic: the power-law core is
//! integrated in closed form and only the taper annulus (and for the
//! halfspace the cutoff region) is integrated numerically. The closed-form
//! pieces are themselves cross-checked against deep substituted quadrature
//! in the tests.
//!
//! The quotient of a radial family is the same for every gauge (the angular
//! factor cancels), so the radial sweeps take only the dimension; the
//! halfspace sweep depends on the gauge through the face constant `H(e_N)`
//! and the flux direction `gradH(e_N)`.

use crate::corpus::{window, window_d};
use crate::error::Error;
use crate::fields::RadialProfile;
use crate::gauge::Gauge;
use crate::quadrature::composite_rule;
use crate::Result;
use std::sync::Arc;

/// One evaluated member of a near-extremal family.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Family parameter.
    pub alpha: f64,
    /// Inequality quotient of the field.
    pub quotient: f64,
    /// `quotient - sharp_constant` (positive for admissible fields).
    pub gap: f64,
}

/// A sweep of quotients approaching a sharp constant.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Which family was swept.
    pub family: &'static str,
    /// The constant being approached.
    pub sharp_constant: f64,
    /// The inadmissible limiting value of `alpha`.
    pub limit_alpha: f64,
    /// Points in sweep order (parameters approaching the limit).
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// True if every quotient stays above the sharp constant: the constant
    /// is a true lower bound and no member of the family attains it.
    pub fn all_above_sharp(&self) -> bool {
        self.points.iter().all(|p| p.gap > 0.0)
    }

    /// True if the gaps decrease strictly along the sweep.
    pub fn monotone_gaps(&self) -> bool {
        self.points.windows(2).all(|w| w[1].gap < w[0].gap)
    }

    /// Gap of the last (closest to the limit) point.
    pub fn final_gap(&self) -> f64 {
        self.points.last().map_or(f64::INFINITY, |p| p.gap.abs())
    }

    /// Least-squares fit of `gap = slope * |alpha - limit_alpha|` through
    /// the origin; returns the slope and the largest relative residual.
    /// A small residual certifies the linear vanishing rate, i.e. that the
    /// quotients extrapolate to exactly the sharp constant.
    pub fn fit(&self) -> (f64, f64) {
        let (mut sxy, mut sxx, mut gmax) = (0.0, 0.0, 0.0f64);
        for p in &self.points {
            let x = (p.alpha - self.limit_alpha).abs();
            sxy += x * p.gap;
            sxx += x * x;
            gmax = gmax.max(p.gap.abs());
        }
        if sxx == 0.0 || gmax == 0.0 {
            return (0.0, f64::INFINITY);
        }
        let slope = sxy / sxx;
        let resid = self
            .points
            .iter()
            .map(|p| (p.gap - slope * (p.alpha - self.limit_alpha).abs()).abs())
            .fold(0.0f64, f64::max)
            / gmax;
        (slope, resid)
    }
}

/// Default parameter fractions for families approaching the limit from
/// below (subcritical and critical): `alpha = fraction * limit`.
pub fn interior_fractions() -> Vec<f64> {
    vec![0.6, 0.8, 0.9, 0.98, 0.996]
}

/// Default fractions for the halfspace family, approaching from above.
pub fn boundary_fractions() -> Vec<f64> {
    vec![1.4, 1.2, 1.1, 1.02, 1.004]
}

fn check_fractions(fractions: &[f64], above: bool) -> Result<()> {
    if fractions.is_empty() {
        return Err(Error::InvalidParameters(
            "need at least one sweep fraction".into(),
        ));
    }
    for &f in fractions {
        let ok = if above {
            f > 1.0 && f < 2.0
        } else {
            f > 0.0 && f < 1.0
        };
        if !ok {
            return Err(Error::InvalidParameters(format!(
                "sweep fraction {f} outside the admissible side of the limit"
            )));
        }
    }
    Ok(())
}

fn integrate_1d(a: f64, b: f64, nodes: usize, f: impl FnMut(f64) -> f64) -> Result<f64> {
    Ok(composite_rule(a, b, &[], nodes)?.integrate(f))
}

/// The subcritical near-extremal profile: `r^{-alpha}` on `(0, delta]`,
/// linear taper on `[delta, 2 delta]`.
pub fn subcritical_profile(alpha: f64, delta: f64) -> Result<RadialProfile> {
    if !(alpha > 0.0 && delta > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "need positive alpha and delta, got {alpha}, {delta}"
        )));
    }
    let slope = delta.powf(-alpha - 1.0);
    let d2 = 2.0 * delta;
    RadialProfile::new(
        "subcritical-extremal",
        (0.0, d2),
        vec![delta],
        Arc::new(move |r: f64| {
            if r <= delta {
                r.powf(-alpha)
            } else if r < d2 {
                slope * (d2 - r)
            } else {
                0.0
            }
        }),
        Arc::new(move |r: f64| {
            if r <= 0.0 {
                0.0
            } else if r <= delta {
                -alpha * r.powf(-alpha - 1.0)
            } else if r < d2 {
                -slope
            } else {
                0.0
            }
        }),
    )
}

/// The critical near-extremal profile on the ball of radius `r_outer`:
/// `(log R/r)^alpha` on `(0, delta]`, taper
/// `(log R/delta)^alpha (2 delta - r)/delta` on `[delta, 2 delta]`.
pub fn critical_profile(alpha: f64, delta: f64, r_outer: f64) -> Result<RadialProfile> {
    if !(alpha > 0.0 && delta > 0.0 && 2.0 * delta < r_outer) {
        return Err(Error::InvalidParameters(format!(
            "need 0 < 2 delta < outer radius, got delta = {delta}, R = {r_outer}"
        )));
    }
    let ld = (r_outer / delta).ln();
    let cap = ld.powf(alpha);
    let d2 = 2.0 * delta;
    RadialProfile::new(
        "critical-extremal",
        (0.0, d2),
        vec![delta],
        Arc::new(move |r: f64| {
            if r <= 0.0 {
                0.0
            } else if r <= delta {
                (r_outer / r).ln().powf(alpha)
            } else if r < d2 {
                cap * (d2 - r) / delta
            } else {
                0.0
            }
        }),
        Arc::new(move |r: f64| {
            if r <= 0.0 {
                0.0
            } else if r <= delta {
                -alpha * (r_outer / r).ln().powf(alpha - 1.0) / r
            } else if r < d2 {
                -cap / delta
            } else {
                0.0
            }
        }),
    )
}

/// Sweeps the subcritical family toward `alpha = (N-p)/p`.
///
/// The quotient splits into a closed-form core
/// `P = delta^{N-p-alpha p} / (N-p-alpha p)` (numerator `alpha^p P`) plus
/// numerically integrated taper-annulus contributions.
pub fn subcritical_sweep(
    n: usize,
    p: f64,
    delta: f64,
    fractions: &[f64],
) -> Result<SweepResult> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "sweeps need dimension >= 2"));
    }
    let nf = n as f64;
    if !(p >= 1.0 && p < nf - 1e-9) {
        return Err(Error::InvalidParameters(format!(
            "subcritical sweep needs 1 <= p < N, got p = {p}, N = {n}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need positive delta, got {delta}"
        )));
    }
    check_fractions(fractions, false)?;
    let limit = (nf - p) / p;
    let sharp = limit.powf(p);
    let d2 = 2.0 * delta;
    let mut points = Vec::with_capacity(fractions.len());
    for &frac in fractions {
        let alpha = frac * limit;
        let t = nf - p - alpha * p;
        let core = delta.powf(t) / t;
        let slope = delta.powf(-alpha - 1.0);
        let num_ann = integrate_1d(delta, d2, 16, |r| {
            slope.powf(p) * r.powf(nf - 1.0)
        })?;
        let den_ann = integrate_1d(delta, d2, 16, |r| {
            (slope * (d2 - r)).powf(p) * r.powf(nf - 1.0 - p)
        })?;
        let quotient = (alpha.powf(p) * core + num_ann) / (core + den_ann);
        points.push(SweepPoint {
            alpha,
            quotient,
            gap: quotient - sharp,
        });
    }
    Ok(SweepResult {
        family: "subcritical-power",
        sharp_constant: sharp,
        limit_alpha: limit,
        points,
    })
}

/// Sweeps the critical family toward `alpha = (N-1)/N` on the ball of
/// radius `r_outer`.
///
/// Core in the variable `l = log(R/r)`:
/// `P = l_delta^{alpha N - N + 1} / (N - alpha N - 1)`, numerator
/// `alpha^N P`; the taper annulus is integrated numerically.
pub fn critical_sweep(
    n: usize,
    r_outer: f64,
    delta: f64,
    fractions: &[f64],
) -> Result<SweepResult> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "sweeps need dimension >= 2"));
    }
    let nf = n as f64;
    if !(delta > 0.0 && 2.0 * delta < r_outer && r_outer.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need 0 < 2 delta < R, got delta = {delta}, R = {r_outer}"
        )));
    }
    check_fractions(fractions, false)?;
    let limit = (nf - 1.0) / nf;
    let sharp = limit.powf(nf);
    let ld = (r_outer / delta).ln();
    let d2 = 2.0 * delta;
    let mut points = Vec::with_capacity(fractions.len());
    for &frac in fractions {
        let alpha = frac * limit;
        let s = nf - alpha * nf - 1.0;
        let core = ld.powf(alpha * nf - nf + 1.0) / s;
        let cap = ld.powf(alpha);
        let num_ann = integrate_1d(delta, d2, 20, |r| {
            (cap / delta).powf(nf) * r.powf(nf - 1.0)
        })?;
        let den_ann = integrate_1d(delta, d2, 20, |r| {
            let u = cap * (d2 - r) / delta;
            let lg = (r_outer / r).ln();
            u.powf(nf) * (r * lg).powf(-nf) * r.powf(nf - 1.0)
        })?;
        let quotient = (alpha.powf(nf) * core + num_ann) / (core + den_ann);
        points.push(SweepPoint {
            alpha,
            quotient,
            gap: quotient - sharp,
        });
    }
    Ok(SweepResult {
        family: "critical-log-power",
        sharp_constant: sharp,
        limit_alpha: limit,
        points,
    })
}

/// Lateral cutoff pieces of the halfspace family over one axis.
fn lat_window(t: f64, r: f64) -> f64 {
    window(t, -2.0 * r, -r, r, 2.0 * r)
}

fn lat_window_d(t: f64, r: f64) -> f64 {
    window_d(t, -2.0 * r, -r, r, 2.0 * r)
}

fn top_window(x: f64, r: f64) -> f64 {
    window(x, -4.0 * r, -3.0 * r, r, 2.0 * r)
}

fn top_window_d(x: f64, r: f64) -> f64 {
    window_d(x, -4.0 * r, -3.0 * r, r, 2.0 * r)
}

/// Sweeps the boundary-distance family `eta d^alpha` on the halfspace
/// `{x_N > 0}` toward `alpha = 1/2` (the exponent `p` is fixed at 2, whose
/// sharp constant is 1/4).
///
/// `extent` sets the cutoff geometry: `eta` is 1 on
/// `[-extent, extent]^{N-1} x (0, extent]` and vanishes outside the doubled
/// box. On the plateau `u = d^alpha` exactly and the integrals are closed
/// forms; the cutoff region is integrated numerically, with the
/// boundary-concentrating direction handled by exact power moments.
pub fn halfspace_sweep(gauge: &Gauge, extent: f64, fractions: &[f64]) -> Result<SweepResult> {
    let n = gauge.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(
            n,
            "halfspace sweeps cover dimensions 2-3",
        ));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need positive extent, got {extent}"
        )));
    }
    check_fractions(fractions, true)?;
    let nf = n as f64;
    let r = extent;
    let mut e_n = vec![0.0; n];
    e_n[n - 1] = 1.0;
    let c = gauge.value(&e_n);
    let v = gauge.gradient(&e_n)?;
    let sharp = 0.25;
    let limit = 0.5;

    // Lateral cutoff Lambda and its flux pairing A = grad Lambda . v_lat,
    // plus the side-region integrals of A^2, A*Lambda, Lambda^2.
    let nodes = 20;
    let (sa2, sal, sl2) = match n {
        2 => {
            let mut a2 = 0.0;
            let mut al = 0.0;
            let mut l2 = 0.0;
            for (lo, hi) in [(-2.0 * r, -r), (r, 2.0 * r)] {
                a2 += integrate_1d(lo, hi, nodes, |x| (lat_window_d(x, r) * v[0]).powi(2))?;
                al += integrate_1d(lo, hi, nodes, |x| {
                    lat_window_d(x, r) * v[0] * lat_window(x, r)
                })?;
                l2 += integrate_1d(lo, hi, nodes, |x| lat_window(x, r).powi(2))?;
            }
            (a2, al, l2)
        }
        _ => {
            // Frame region [-2R,2R]^2 minus the plateau square, as four
            // rectangles.
            let rects = [
                (-2.0 * r, -r, -2.0 * r, 2.0 * r),
                (r, 2.0 * r, -2.0 * r, 2.0 * r),
                (-r, r, -2.0 * r, -r),
                (-r, r, r, 2.0 * r),
            ];
            let mut a2 = 0.0;
            let mut al = 0.0;
            let mut l2 = 0.0;
            for (x_lo, x_hi, y_lo, y_hi) in rects {
                let rx = composite_rule(x_lo, x_hi, &[], nodes)?;
                let ry = composite_rule(y_lo, y_hi, &[], nodes)?;
                for (&x, &wx) in rx.nodes().iter().zip(rx.weights()) {
                    for (&y, &wy) in ry.nodes().iter().zip(ry.weights()) {
                        let lam = lat_window(x, r) * lat_window(y, r);
                        let a = v[0] * lat_window_d(x, r) * lat_window(y, r)
                            + v[1] * lat_window(x, r) * lat_window_d(y, r);
                        let w = wx * wy;
                        a2 += w * a * a;
                        al += w * a * lam;
                        l2 += w * lam * lam;
                    }
                }
            }
            (a2, al, l2)
        }
    };
    let plateau_measure = (2.0 * r).powf(nf - 1.0);

    // Exact moments int_0^R (x/c)^s dx of powers of the distance.
    let moment = |s: f64| c.powf(-s) * r.powf(s + 1.0) / (s + 1.0);

    let mut points = Vec::with_capacity(fractions.len());
    for &frac in fractions {
        let alpha = frac * limit;
        let core = plateau_measure * moment(2.0 * alpha - 2.0);
        let num_core = alpha * alpha * core;

        // Plateau lateral, x_N in [R, 2R]: 1-D in x_N.
        let num_top = plateau_measure
            * integrate_1d(r, 2.0 * r, nodes, |x| {
                let d = x / c;
                (c * top_window_d(x, r) * d.powf(alpha)
                    + alpha * top_window(x, r) * d.powf(alpha - 1.0))
                .powi(2)
            })?;
        let den_top = plateau_measure
            * integrate_1d(r, 2.0 * r, nodes, |x| {
                (top_window(x, r) * (x / c).powf(alpha - 1.0)).powi(2)
            })?;

        // Side lateral, x_N in (0, R]: the cutoff is constant in x_N there,
        // so the x_N powers integrate exactly.
        let num_side_low = sa2 * moment(2.0 * alpha)
            + 2.0 * alpha * sal * moment(2.0 * alpha - 1.0)
            + alpha * alpha * sl2 * moment(2.0 * alpha - 2.0);
        let den_side_low = sl2 * moment(2.0 * alpha - 2.0);

        // Side lateral, x_N in [R, 2R]: smooth, full product quadrature.
        let rule_xn = composite_rule(r, 2.0 * r, &[], nodes)?;
        let (mut num_side_high, mut den_side_high) = (0.0, 0.0);
        match n {
            2 => {
                for (lo, hi) in [(-2.0 * r, -r), (r, 2.0 * r)] {
                    let rx = composite_rule(lo, hi, &[], nodes)?;
                    for (&x, &wx) in rx.nodes().iter().zip(rx.weights()) {
                        let lam = lat_window(x, r);
                        let a = v[0] * lat_window_d(x, r);
                        for (&xn, &wn) in rule_xn.nodes().iter().zip(rule_xn.weights()) {
                            let d = xn / c;
                            let wt = top_window(xn, r);
                            let wtd = top_window_d(xn, r);
                            let pair = d.powf(alpha) * wt * a
                                + lam * (c * wtd * d.powf(alpha)
                                    + alpha * wt * d.powf(alpha - 1.0));
                            let w = wx * wn;
                            num_side_high += w * pair * pair;
                            den_side_high += w * (lam * wt * d.powf(alpha - 1.0)).powi(2);
                        }
                    }
                }
            }
            _ => {
                let rects = [
                    (-2.0 * r, -r, -2.0 * r, 2.0 * r),
                    (r, 2.0 * r, -2.0 * r, 2.0 * r),
                    (-r, r, -2.0 * r, -r),
                    (-r, r, r, 2.0 * r),
                ];
                for (x_lo, x_hi, y_lo, y_hi) in rects {
                    let rx = composite_rule(x_lo, x_hi, &[], nodes)?;
                    let ry = composite_rule(y_lo, y_hi, &[], nodes)?;
                    for (&x, &wx) in rx.nodes().iter().zip(rx.weights()) {
                        for (&y, &wy) in ry.nodes().iter().zip(ry.weights()) {
                            let lam = lat_window(x, r) * lat_window(y, r);
                            let a = v[0] * lat_window_d(x, r) * lat_window(y, r)
                                + v[1] * lat_window(x, r) * lat_window_d(y, r);
                            for (&xn, &wn) in
                                rule_xn.nodes().iter().zip(rule_xn.weights())
                            {
                                let d = xn / c;
                                let wt = top_window(xn, r);
                                let wtd = top_window_d(xn, r);
                                let pair = d.powf(alpha) * wt * a
                                    + lam * (c * wtd * d.powf(alpha)
                                        + alpha * wt * d.powf(alpha - 1.0));
                                let w = wx * wy * wn;
                                num_side_high += w * pair * pair;
                                den_side_high +=
                                    w * (lam * wt * d.powf(alpha - 1.0)).powi(2);
                            }
                        }
                    }
                }
            }
        }

        let num = num_core + num_top + num_side_low + num_side_high;
        let den = core + den_top + den_side_low + den_side_high;
        let quotient = num / den;
        points.push(SweepPoint {
            alpha,
            quotient,
            gap: quotient - sharp,
        });
    }
    Ok(SweepResult {
        family: "halfspace-distance",
        sharp_constant: sharp,
        limit_alpha: limit,
        points,
    })
}
