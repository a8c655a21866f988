//! Scalar test fields and radial profiles.
//!
//! Evaluators consume fields through the [`ScalarField`] trait: a value, a
//! gradient, a support descriptor used to pick integration domains, and the
//! radii where the field is merely piecewise smooth. Radial profiles
//! `U(r)` lift to anisotropic radial fields `u(x) = U(H0(x))` via
//! [`lift_radial`], with the chain-rule gradient `U'(H0) grad H0`.
//!
//! [`symmetrize`] maps a general field to the radial profile with the same
//! `L^p` mass on every anisotropic sphere `{H0 = r}`; the induced radial
//! energy never exceeds the anisotropic gradient energy of the original
//! field, which is what makes radial reductions legitimate. The
//! `*_radial_bound` functions check the pointwise decay estimates that
//! radial profiles with finite energy must satisfy.

use crate::error::Error;
use crate::gauge::PolarGauge;
use crate::linalg::{norm, pairwise_sum};
use crate::quadrature::composite_rule;
use crate::wulff::PolarGrid;
use crate::Result;
use std::sync::Arc;

/// Where a field's support lives.
#[derive(Debug, Clone)]
pub enum Support {
    /// Contained in the anisotropic shell `{inner <= H0(x) <= outer}`.
    Shell { inner: f64, outer: f64 },
    /// Contained in the Euclidean ball of given center and radius.
    Ball { center: Vec<f64>, radius: f64 },
    /// Contained in the axis-aligned box `[lo_i, hi_i]`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Support {
    /// Shell `{lo <= H0 <= hi}` guaranteed to contain the support, derived
    /// from the polar sandwich constants when the support is not already a
    /// shell.
    pub fn shell_cover(&self, polar: &PolarGauge) -> (f64, f64) {
        let (lo_c, hi_c) = polar.sandwich();
        match self {
            Support::Shell { inner, outer } => (*inner, *outer),
            Support::Ball { center, radius } => {
                let c = norm(center);
                let lo = lo_c * (c - radius).max(0.0);
                let hi = hi_c * (c + radius);
                (lo, hi)
            }
            Support::Box { lo, hi } => {
                let mut near2 = 0.0;
                let mut far2 = 0.0;
                for (&l, &h) in lo.iter().zip(hi) {
                    let nearest = l.max(0.0) + h.min(0.0);
                    near2 += nearest * nearest;
                    far2 += l.abs().max(h.abs()).powi(2);
                }
                (lo_c * near2.sqrt(), hi_c * far2.sqrt())
            }
        }
    }

    /// True if the support stays at positive distance from the origin.
    pub fn avoids_origin(&self, polar: &PolarGauge) -> bool {
        self.shell_cover(polar).0 > 0.0
    }
}

/// A scalar test function with an explicit gradient.
pub trait ScalarField: Send + Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;
    /// Field value.
    fn value(&self, x: &[f64]) -> f64;
    /// Gradient (defined almost everywhere; breakpoint sets are null).
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Support descriptor.
    fn support(&self) -> Support;
    /// Radii of `H0` where the field is only piecewise smooth.
    fn radial_breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
    /// Coordinate values where the field kinks along the given axis; used
    /// by box-domain integrators to align panel edges.
    fn axis_breakpoints(&self, axis: usize) -> Vec<f64> {
        let _ = axis;
        Vec::new()
    }
    /// Identifier for reports.
    fn name(&self) -> &str;

    /// Value at a point whose polar radius `H0(x) = r` is already known;
    /// radial fields override this to skip recomputing `H0`.
    fn value_at_radius(&self, x: &[f64], r: f64) -> f64 {
        let _ = r;
        self.value(x)
    }

    /// Gradient counterpart of [`Self::value_at_radius`].
    fn gradient_at_radius(&self, x: &[f64], r: f64) -> Vec<f64> {
        let _ = r;
        self.gradient(x)
    }
}

/// A field assembled from closures.
pub struct FnField {
    dim: usize,
    name: String,
    support: Support,
    breakpoints: Vec<f64>,
    axis_breaks: Vec<Vec<f64>>,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    grad: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
}

impl FnField {
    /// Wraps value and gradient closures.
    pub fn new(
        dim: usize,
        name: impl Into<String>,
        support: Support,
        breakpoints: Vec<f64>,
        f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        grad: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    ) -> FnField {
        FnField {
            dim,
            name: name.into(),
            support,
            breakpoints,
            axis_breaks: Vec::new(),
            f,
            grad,
        }
    }

    /// Attaches per-axis kink locations (one list per coordinate).
    pub fn with_axis_breakpoints(mut self, axis_breaks: Vec<Vec<f64>>) -> FnField {
        self.axis_breaks = axis_breaks;
        self
    }
}

impl ScalarField for FnField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }
    fn support(&self) -> Support {
        self.support.clone()
    }
    fn radial_breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
    fn axis_breakpoints(&self, axis: usize) -> Vec<f64> {
        self.axis_breaks.get(axis).cloned().unwrap_or_default()
    }
    fn name(&self) -> &str {
        &self.name
    }
}

/// A one-dimensional radial profile `U(r)` with derivative.
#[derive(Clone)]
pub struct RadialProfile {
    name: String,
    support: (f64, f64),
    breakpoints: Vec<f64>,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish()
    }
}

impl RadialProfile {
    /// Builds a profile from value and derivative closures; `support` is
    /// the radial interval outside which the profile vanishes.
    pub fn new(
        name: impl Into<String>,
        support: (f64, f64),
        breakpoints: Vec<f64>,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<RadialProfile> {
        if !(support.0 >= 0.0 && support.1 > support.0) {
            return Err(Error::InvalidInterval(format!(
                "radial support must satisfy 0 <= a < b, got {support:?}"
            )));
        }
        Ok(RadialProfile {
            name: name.into(),
            support,
            breakpoints,
            f,
            df,
        })
    }

    /// Profile value.
    pub fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    /// Profile derivative.
    pub fn derivative(&self, r: f64) -> f64 {
        (self.df)(r)
    }

    /// Radial support interval.
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Radii where the profile is only piecewise smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    /// Identifier for reports.
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// The anisotropic radial field `u(x) = U(H0(x))`.
pub struct LiftedRadialField {
    profile: RadialProfile,
    polar: PolarGauge,
    name: String,
}

/// Lifts a radial profile through the polar gauge.
pub fn lift_radial(profile: RadialProfile, polar: PolarGauge) -> LiftedRadialField {
    let name = format!("{}-lifted", profile.name());
    LiftedRadialField {
        profile,
        polar,
        name,
    }
}

impl LiftedRadialField {
    /// The underlying radial profile.
    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }
}

impl ScalarField for LiftedRadialField {
    fn dim(&self) -> usize {
        self.polar.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.profile.value(self.polar.value(x))
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = self.polar.value(x);
        let du = self.profile.derivative(r);
        if du == 0.0 {
            return vec![0.0; self.dim()];
        }
        let g = self
            .polar
            .gradient(x)
            .expect("gradient away from the origin");
        g.iter().map(|&gi| du * gi).collect()
    }
    fn support(&self) -> Support {
        Support::Shell {
            inner: self.profile.support.0,
            outer: self.profile.support.1,
        }
    }
    fn radial_breakpoints(&self) -> Vec<f64> {
        self.profile.breakpoints()
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn value_at_radius(&self, _x: &[f64], r: f64) -> f64 {
        self.profile.value(r)
    }
    fn gradient_at_radius(&self, x: &[f64], r: f64) -> Vec<f64> {
        let du = self.profile.derivative(r);
        if du == 0.0 {
            return vec![0.0; self.dim()];
        }
        let g = self
            .polar
            .gradient(x)
            .expect("gradient away from the origin");
        g.iter().map(|&gi| du * gi).collect()
    }
}

/// Radial rearrangement in the `L^p` sense over anisotropic spheres.
///
/// Returns the profile `Ub(r) = (int_S |u|^p dmu / int_S dmu)^{1/p}` where
/// `dmu = H0(theta)^{-N} dsigma` is the measure the polar substitution puts
/// on the sphere. For `p >= 2` the derivative differentiates under the
/// integral sign; for `p < 2` (where that integrand loses smoothness at
/// zeros of `u`) a central difference on `Ub` is used instead.
pub fn symmetrize(
    field: Arc<dyn ScalarField>,
    polar: &PolarGauge,
    grid: &PolarGrid,
    p: f64,
) -> Result<RadialProfile> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "exponent must be >= 1, got {p}"
        )));
    }
    if field.dim() != grid.dim() {
        return Err(Error::InvalidParameters(
            "field and grid dimensions differ".into(),
        ));
    }
    let (a, b) = field.support().shell_cover(polar);
    let dim = grid.dim();
    let n = dim as f64;
    let grid = Arc::new(grid.clone());
    let omega: f64 = {
        let vals: Vec<f64> = (0..grid.len())
            .map(|i| grid.weight(i) * grid.h0(i).powf(-n))
            .collect();
        pairwise_sum(&vals)
    };

    let mean_p = {
        let grid = grid.clone();
        let field = field.clone();
        move |r: f64| -> f64 {
            let mut x = vec![0.0; dim];
            let vals: Vec<f64> = (0..grid.len())
                .map(|i| {
                    grid.point_at(i, r, &mut x);
                    let u = field.value_at_radius(&x, r).abs();
                    grid.weight(i) * grid.h0(i).powf(-n) * u.powf(p)
                })
                .collect();
            pairwise_sum(&vals) / omega
        }
    };

    let value = {
        let mean_p = mean_p.clone();
        move |r: f64| -> f64 { mean_p(r).powf(1.0 / p) }
    };

    let deriv: Arc<dyn Fn(f64) -> f64 + Send + Sync> = if p >= 2.0 {
        let grid = grid.clone();
        let field = field.clone();
        let value = value.clone();
        Arc::new(move |r: f64| -> f64 {
            let ub = value(r);
            if ub <= 0.0 {
                return 0.0;
            }
            let mut x = vec![0.0; dim];
            let vals: Vec<f64> = (0..grid.len())
                .map(|i| {
                    grid.point_at(i, r, &mut x);
                    let u = field.value_at_radius(&x, r);
                    if u == 0.0 {
                        return 0.0;
                    }
                    let gu = field.gradient_at_radius(&x, r);
                    // Radial direction d x / d r at fixed theta.
                    let th = grid.dir(i);
                    let h0 = grid.h0(i);
                    let radial: f64 = gu.iter().zip(th).map(|(&g, &t)| g * t / h0).sum();
                    grid.weight(i) * h0.powf(-n) * u.abs().powf(p - 2.0) * u * radial
                })
                .collect();
            pairwise_sum(&vals) / omega * ub.powf(1.0 - p)
        })
    } else {
        let value = value.clone();
        let h = 1e-6 * (b - a).max(1.0);
        Arc::new(move |r: f64| -> f64 {
            let rp = r + h;
            let rm = (r - h).max(0.0);
            (value(rp) - value(rm)) / (rp - rm)
        })
    };

    RadialProfile::new(
        format!("{}-symmetrized", field.name()),
        (a, b.max(a + 1e-12)),
        field.radial_breakpoints(),
        Arc::new(value),
        deriv,
    )
}

/// Normalized sphere measure `omega = int_S H0^{-N} dsigma` of a grid.
pub fn sphere_measure(grid: &PolarGrid) -> f64 {
    let n = grid.dim() as f64;
    let vals: Vec<f64> = (0..grid.len())
        .map(|i| grid.weight(i) * grid.h0(i).powf(-n))
        .collect();
    pairwise_sum(&vals)
}

/// Radial energy `omega int |U'|^p r^{N-1} dr` over the profile support.
pub fn radial_energy(profile: &RadialProfile, p: f64, n: usize, omega: f64) -> Result<f64> {
    let (a, b) = profile.support();
    let rule = composite_rule(a, b, &profile.breakpoints(), 16)?;
    let nf = n as f64;
    Ok(omega * rule.integrate(|r| profile.derivative(r).abs().powf(p) * r.powf(nf - 1.0)))
}

/// Outcome of a pointwise radial bound scan.
#[derive(Debug, Clone)]
pub struct RadialBoundReport {
    /// Largest ratio `U(r) / bound(r)` over the scan grid; at most 1 when
    /// the bound holds.
    pub max_ratio: f64,
    /// Scanned `(r, profile value, bound value)` triples.
    pub rows: Vec<(f64, f64, f64)>,
}

fn partial_energy(profile: &RadialProfile, p: f64, nf: f64, from: f64, to: f64) -> Result<f64> {
    if to <= from {
        return Ok(0.0);
    }
    let rule = composite_rule(from, to, &profile.breakpoints(), 16)?;
    Ok(rule.integrate(|r| profile.derivative(r).abs().powf(p) * r.powf(nf - 1.0)))
}

/// Decay bound for finite-energy profiles with `1 < p < N`:
/// `U(r) <= ((p-1)/(N-p))^{(p-1)/p} (int_r^b |U'|^p s^{N-1} ds)^{1/p}
///  r^{-(N-p)/p}`.
pub fn subcritical_radial_bound(
    profile: &RadialProfile,
    p: f64,
    n: usize,
    r_grid: &[f64],
) -> Result<RadialBoundReport> {
    let nf = n as f64;
    if !(p > 1.0 && p < nf) {
        return Err(Error::InvalidParameters(format!(
            "need 1 < p < N for the subcritical bound, got p = {p}, N = {n}"
        )));
    }
    let c = ((p - 1.0) / (nf - p)).powf((p - 1.0) / p);
    let b = profile.support().1;
    let mut rows = Vec::with_capacity(r_grid.len());
    let mut max_ratio: f64 = 0.0;
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(Error::InvalidParameters("scan radii must be positive".into()));
        }
        let tail = partial_energy(profile, p, nf, r, b)?;
        let bound = c * tail.powf(1.0 / p) * r.powf(-(nf - p) / p);
        let val = profile.value(r).abs();
        if bound > 0.0 {
            max_ratio = max_ratio.max(val / bound);
        } else if val > 1e-300 {
            max_ratio = f64::INFINITY;
        }
        rows.push((r, val, bound));
    }
    Ok(RadialBoundReport { max_ratio, rows })
}

/// Decay bound at the critical exponent `p = N` on `(0, R)`:
/// `U(r) <= (int_r^R |U'|^N s^{N-1} ds)^{1/N} (log R/r)^{(N-1)/N}`,
/// with equality for `U = c log(R/r)`.
pub fn critical_radial_bound(
    profile: &RadialProfile,
    n: usize,
    r_outer: f64,
    r_grid: &[f64],
) -> Result<RadialBoundReport> {
    let nf = n as f64;
    if !(r_outer > 0.0) {
        return Err(Error::InvalidParameters("outer radius must be positive".into()));
    }
    let mut rows = Vec::with_capacity(r_grid.len());
    let mut max_ratio: f64 = 0.0;
    for &r in r_grid {
        if !(r > 0.0 && r < r_outer) {
            return Err(Error::InvalidParameters(format!(
                "scan radius {r} outside (0, {r_outer})"
            )));
        }
        let tail = partial_energy(profile, nf, nf, r, r_outer)?;
        let bound = tail.powf(1.0 / nf) * (r_outer / r).ln().powf((nf - 1.0) / nf);
        let val = profile.value(r).abs();
        if bound > 0.0 {
            max_ratio = max_ratio.max(val / bound);
        } else if val > 1e-300 {
            max_ratio = f64::INFINITY;
        }
        rows.push((r, val, bound));
    }
    Ok(RadialBoundReport { max_ratio, rows })
}
