//! Structure-preserving maps: anisotropic dilations, the scaling
//! symmetries of the inequalities, and the radial change of variables that
//! links the subcritical inequality in a higher dimension to the critical
//! inequality in a lower one.
//!
//! * The radial power map `T(y) = c H0(y)^a y` has Jacobian determinant
//!   `c^N (1+a) H0(y)^{aN}` and maps the unit Wulff ball onto the ball of
//!   radius `c`; its derivative acts as `c (1+a) H0^a` on the ray through
//!   `y` and as `c H0^a` on directions tangent to the Wulff sphere.
//! * `u -> lambda^{(N-p)/p} u(lambda x)` leaves the subcritical quotient
//!   unchanged; `u -> lambda^{-(N-1)/N} u((H0/R)^{lambda-1} x)` leaves the
//!   critical quotient on the ball of radius `R` unchanged.
//! * With `alpha = (m-N)/(N-1)` and `s(r) = R exp(-r^{-alpha})`, radial
//!   energies in dimension `m` at exponent `N` transform into critical-
//!   weight integrals in dimension `N`: the gradient sides differ by the
//!   factor `(area(S^{m-1})/area(S^{N-1})) alpha^{N-1}` and the weight
//!   sides by the same with `alpha^{-1}`, so quotients differ by exactly
//!   `alpha^N`. The same map intertwines the two scaling symmetries.

use crate::error::Error;
use crate::fields::{ScalarField, Support};
use crate::gauge::PolarGauge;
use crate::linalg::{dot, pairwise_sum};
use crate::quadrature::{composite_rule, graded_radial_rule, radial_rule, sphere_area, SingularEnd};
use crate::wulff::{wulff_constant_from_grid, PolarGrid};
use crate::Result;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// The anisotropic dilation `T(y) = c H0(y)^a y`.
#[derive(Debug, Clone, Copy)]
pub struct RadialPowerMap {
    /// Overall scale, positive.
    pub c: f64,
    /// Radial power offset, above -1.
    pub a: f64,
}

impl RadialPowerMap {
    /// Validates the parameters.
    pub fn new(c: f64, a: f64) -> Result<RadialPowerMap> {
        if !(c > 0.0 && c.is_finite() && a > -1.0 && a.is_finite()) {
            return Err(Error::DegenerateMap(format!(
                "radial power map needs c > 0 and a > -1, got c = {c}, a = {a}"
            )));
        }
        Ok(RadialPowerMap { c, a })
    }

    /// Image of `y`.
    pub fn apply(&self, polar: &PolarGauge, y: &[f64]) -> Result<Vec<f64>> {
        let h = polar.value(y);
        if h <= 1e-300 {
            return Err(Error::SingularPoint);
        }
        let s = self.c * h.powf(self.a);
        Ok(y.iter().map(|&yi| s * yi).collect())
    }

    /// Closed-form Jacobian determinant `c^N (1+a) H0(y)^{aN}`.
    pub fn jacobian_det(&self, polar: &PolarGauge, y: &[f64]) -> Result<f64> {
        let h = polar.value(y);
        if h <= 1e-300 {
            return Err(Error::SingularPoint);
        }
        let n = polar.dim() as f64;
        Ok(self.c.powf(n) * (1.0 + self.a) * h.powf(self.a * n))
    }

    /// Analytic derivative matrix
    /// `c H0^a I + c a H0^{a-1} y (grad H0)^T`.
    pub fn jacobian_matrix(&self, polar: &PolarGauge, y: &[f64]) -> Result<DMatrix<f64>> {
        let h = polar.value(y);
        if h <= 1e-300 {
            return Err(Error::SingularPoint);
        }
        let n = polar.dim();
        let g = polar.gradient(y)?;
        let s = self.c * h.powf(self.a);
        let t = self.c * self.a * h.powf(self.a - 1.0);
        let mut m = DMatrix::<f64>::identity(n, n) * s;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += t * y[i] * g[j];
            }
        }
        Ok(m)
    }

    /// Determinant of a centered finite-difference derivative of the map.
    pub fn jacobian_det_fd(&self, polar: &PolarGauge, y: &[f64], h: f64) -> Result<f64> {
        let n = polar.dim();
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut yp = y.to_vec();
        for j in 0..n {
            yp[j] = y[j] + h;
            let fp = self.apply(polar, &yp)?;
            yp[j] = y[j] - h;
            let fm = self.apply(polar, &yp)?;
            yp[j] = y[j];
            for i in 0..n {
                m[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Ok(m.determinant())
    }

    /// Residuals of the derivative's eigen-action: how far `DT y` is from
    /// `c (1+a) H0^a y` and `DT v` from `c H0^a v` for a direction `v`
    /// tangent to the Wulff sphere through `y` (sup norms).
    pub fn eigen_action_residuals(&self, polar: &PolarGauge, y: &[f64]) -> Result<(f64, f64)> {
        let h = polar.value(y);
        let m = self.jacobian_matrix(polar, y)?;
        let g = polar.gradient(y)?;
        let s = self.c * h.powf(self.a);
        let yv = DVector::from_column_slice(y);
        let radial = &m * &yv - &yv * (s * (1.0 + self.a));
        // A tangent direction: strip the gradient component from the most
        // orthogonal coordinate axis.
        let k = (0..y.len())
            .min_by(|&i, &j| g[i].abs().partial_cmp(&g[j].abs()).unwrap())
            .unwrap();
        let gg = dot(&g, &g);
        let mut v = vec![0.0; y.len()];
        v[k] = 1.0;
        for (vi, &gi) in v.iter_mut().zip(&g) {
            *vi -= g[k] * gi / gg;
        }
        let vv = DVector::from_column_slice(&v);
        let tangent = &m * &vv - &vv * s;
        Ok((radial.amax(), tangent.amax()))
    }
}

/// Both sides of the change-of-variables identity
/// `int_{W_1} |det DT| dy = volume(W_c) = kappa c^N`, evaluated on a
/// direction grid.
pub fn pushforward_volume_identity(
    grid: &PolarGrid,
    map: &RadialPowerMap,
    radial_nodes: usize,
) -> Result<(f64, f64)> {
    let n = grid.dim() as f64;
    let kappa = wulff_constant_from_grid(grid);
    // int_{W_1} H0^{aN} dy per direction: int_0^{1/h0} (r h0)^{aN} r^{N-1} dr.
    let s = map.a * n;
    let rule = graded_radial_rule(24, radial_nodes, 0.0, 1.0, 0.55, SingularEnd::Lower)?;
    let parts: Vec<f64> = (0..grid.len())
        .map(|i| {
            let h0 = grid.h0(i);
            let scale = 1.0 / h0;
            grid.weight(i)
                * rule.integrate(|t| {
                    let r = t * scale;
                    (r * h0).powf(s) * r.powf(n - 1.0) * scale
                })
        })
        .collect();
    let moment = pairwise_sum(&parts);
    let lhs = map.c.powf(n) * (1.0 + map.a) * moment;
    let rhs = kappa * map.c.powf(n);
    Ok((lhs, rhs))
}

/// `lambda^{(N-p)/p} u(lambda x)`: the symmetry of the subcritical
/// quotient.
pub fn subcritical_rescale(
    field: Arc<dyn ScalarField>,
    p: f64,
    lambda: f64,
) -> Result<Arc<dyn ScalarField>> {
    if !(lambda > 0.0 && lambda.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "need lambda > 0 and p >= 1, got lambda = {lambda}, p = {p}"
        )));
    }
    let n = field.dim() as f64;
    let amp = lambda.powf((n - p) / p);
    let name = format!("{}-scaled", field.name());
    Ok(Arc::new(ScaledField {
        inner: field,
        lambda,
        amp,
        name,
    }))
}

struct ScaledField {
    inner: Arc<dyn ScalarField>,
    lambda: f64,
    amp: f64,
    name: String,
}

impl ScalarField for ScaledField {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|&xi| self.lambda * xi).collect();
        self.amp * self.inner.value(&y)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = x.iter().map(|&xi| self.lambda * xi).collect();
        let mut g = self.inner.gradient(&y);
        for gi in &mut g {
            *gi *= self.amp * self.lambda;
        }
        g
    }

    fn support(&self) -> Support {
        let s = 1.0 / self.lambda;
        match self.inner.support() {
            Support::Shell { inner, outer } => Support::Shell {
                inner: inner * s,
                outer: outer * s,
            },
            Support::Ball { center, radius } => Support::Ball {
                center: center.iter().map(|c| c * s).collect(),
                radius: radius * s,
            },
            Support::Box { lo, hi } => Support::Box {
                lo: lo.iter().map(|v| v * s).collect(),
                hi: hi.iter().map(|v| v * s).collect(),
            },
        }
    }

    fn radial_breakpoints(&self) -> Vec<f64> {
        self.inner
            .radial_breakpoints()
            .iter()
            .map(|b| b / self.lambda)
            .collect()
    }

    fn axis_breakpoints(&self, axis: usize) -> Vec<f64> {
        self.inner
            .axis_breakpoints(axis)
            .iter()
            .map(|b| b / self.lambda)
            .collect()
    }

    fn name(&self) -> &str {
        &self.name
    }
}

/// `lambda^{-(N-1)/N} u((H0/R)^{lambda-1} x)`: the symmetry of the
/// critical quotient on the Wulff ball of radius `r_outer`.
pub fn critical_rescale(
    field: Arc<dyn ScalarField>,
    polar: &PolarGauge,
    lambda: f64,
    r_outer: f64,
) -> Result<Arc<dyn ScalarField>> {
    if !(lambda > 0.0 && lambda.is_finite() && r_outer > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "need lambda > 0 and a positive radius, got {lambda}, {r_outer}"
        )));
    }
    if polar.dim() != field.dim() {
        return Err(Error::InvalidParameters(
            "gauge and field dimensions differ".into(),
        ));
    }
    let n = field.dim() as f64;
    let amp = lambda.powf(-(n - 1.0) / n);
    let name = format!("{}-critically-scaled", field.name());
    Ok(Arc::new(CriticalScaledField {
        inner: field,
        polar: polar.clone(),
        lambda,
        r_outer,
        amp,
        name,
    }))
}

struct CriticalScaledField {
    inner: Arc<dyn ScalarField>,
    polar: PolarGauge,
    lambda: f64,
    r_outer: f64,
    amp: f64,
    name: String,
}

impl CriticalScaledField {
    fn warp(&self, r: f64) -> f64 {
        (r / self.r_outer).powf(self.lambda - 1.0)
    }

    /// Radius transform of the underlying support: `H0(g(x)) = R (r/R)^l`.
    fn radius_preimage(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            self.r_outer * (r / self.r_outer).powf(1.0 / self.lambda)
        }
    }
}

impl ScalarField for CriticalScaledField {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = self.polar.value(x);
        if r <= 1e-300 {
            return self.amp * self.inner.value(x);
        }
        let t = self.warp(r);
        let y: Vec<f64> = x.iter().map(|&xi| t * xi).collect();
        self.amp * self.inner.value(&y)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = self.polar.value(x);
        if r <= 1e-300 {
            return vec![0.0; x.len()];
        }
        let t = self.warp(r);
        let y: Vec<f64> = x.iter().map(|&xi| t * xi).collect();
        let gu = self.inner.gradient(&y);
        let gh = match self.polar.gradient(x) {
            Ok(g) => g,
            Err(_) => return vec![0.0; x.len()],
        };
        let xg = dot(x, &gu);
        let scale = (self.lambda - 1.0) / r;
        gu.iter()
            .zip(&gh)
            .map(|(&gj, &hj)| self.amp * t * (gj + scale * hj * xg))
            .collect()
    }

    fn support(&self) -> Support {
        let (a, b) = self.inner.support().shell_cover(&self.polar);
        Support::Shell {
            inner: self.radius_preimage(a),
            outer: self.radius_preimage(b.min(self.r_outer)),
        }
    }

    fn radial_breakpoints(&self) -> Vec<f64> {
        self.inner
            .radial_breakpoints()
            .iter()
            .map(|&b| self.radius_preimage(b))
            .collect()
    }

    fn name(&self) -> &str {
        &self.name
    }
}

/// The radial change of variables `s(r) = R exp(-r^{-alpha})` with
/// `alpha = (m-N)/(N-1)`, linking radial integrals in dimension `m` to
/// critically weighted ones in dimension `N`.
#[derive(Debug, Clone, Copy)]
pub struct BridgeMap {
    /// Higher (subcritical-side) dimension.
    pub m: usize,
    /// Lower (critical-side) dimension.
    pub n: usize,
    /// Ball radius on the critical side.
    pub r_outer: f64,
    /// Exponent `(m-N)/(N-1)`.
    pub alpha: f64,
}

impl BridgeMap {
    /// Validates `m > N >= 2` and a positive radius.
    pub fn new(m: usize, n: usize, r_outer: f64) -> Result<BridgeMap> {
        if n < 2 || m <= n {
            return Err(Error::InvalidParameters(format!(
                "bridge needs m > N >= 2, got m = {m}, N = {n}"
            )));
        }
        if !(r_outer > 0.0 && r_outer.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "need a positive radius, got {r_outer}"
            )));
        }
        Ok(BridgeMap {
            m,
            n,
            r_outer,
            alpha: (m as f64 - n as f64) / (n as f64 - 1.0),
        })
    }

    /// `s(r)`.
    pub fn s(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            self.r_outer * (-r.powf(-self.alpha)).exp()
        }
    }

    /// `s'(r)`.
    pub fn s_prime(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            self.s(r) * self.alpha * r.powf(-self.alpha - 1.0)
        }
    }

    /// Inverse map `r(s) = (log(R/s))^{-1/alpha}`.
    pub fn r_of_s(&self, s: f64) -> f64 {
        (self.r_outer / s).ln().powf(-1.0 / self.alpha)
    }
}

/// The two sides of the bridge identity evaluated on the test profile
/// `w(s) = s (1 - s/R)`.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    /// Map parameters.
    pub map: BridgeMap,
    /// Gradient integral in dimension `m` (direct quadrature).
    pub energy_m: f64,
    /// The same predicted from the dimension-`N` integral.
    pub energy_from_n: f64,
    /// Weight integral in dimension `m` (direct quadrature).
    pub weight_m: f64,
    /// The same predicted from the dimension-`N` integral.
    pub weight_from_n: f64,
    /// Quotients on the two sides; they differ by `alpha^N`.
    pub quotient_m: f64,
    /// Critical quotient of the profile in dimension `N`.
    pub quotient_n: f64,
    /// Largest relative mismatch of the two transported integrals.
    pub max_rel_err: f64,
}

/// Integrates over geometrically spaced panels of `[a, b]`.
fn geometric_integrate(
    a: f64,
    b: f64,
    per_panel: usize,
    f: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let panels = ((b / a).log10().abs() * 3.0).ceil() as usize + 1;
    let g = (b / a).powf(1.0 / panels as f64);
    let mut parts = Vec::with_capacity(panels);
    let mut lo = a;
    for k in 0..panels {
        let hi = if k + 1 == panels { b } else { lo * g };
        parts.push(radial_rule(per_panel, lo, hi)?.integrate(f));
        lo = hi;
    }
    Ok(pairwise_sum(&parts))
}

/// Checks the bridge identity for the test profile `w(s) = s(1 - s/R)`:
/// both transported integrals and the `alpha^N` quotient relation.
pub fn bridge_identity_check(m: usize, n: usize, r_outer: f64) -> Result<BridgeReport> {
    let map = BridgeMap::new(m, n, r_outer)?;
    let (alpha, rr) = (map.alpha, r_outer);
    let nf = n as f64;
    let mf = m as f64;
    let w = |s: f64| s * (1.0 - s / rr);
    let dw = |s: f64| 1.0 - 2.0 * s / rr;

    // Dimension-N side: gradient and critical-weight integrals on (0, R).
    // Graded toward 0; split at R/2 where |w'|^N loses smoothness.
    let lower = graded_radial_rule(40, 14, 0.0, rr / 2.0, 0.5, SingularEnd::Lower)?;
    let upper = composite_rule(rr / 2.0, rr, &[], 20)?;
    let mut j_num = 0.0;
    let mut j_den = 0.0;
    for rule in [&lower, &upper] {
        j_num += rule.integrate(|s| dw(s).abs().powf(nf) * s.powf(nf - 1.0));
        j_den += rule.integrate(|s| {
            let lg = (rr / s).ln();
            (w(s) / (s * lg)).abs().powf(nf) * s.powf(nf - 1.0)
        });
    }
    let omega_n = sphere_area(n);
    let omega_m = sphere_area(m);
    let j_num_full = omega_n * j_num;
    let j_den_full = omega_n * j_den;

    // Dimension-m side: u(r) = w(s(r)), integrated over the radii where
    // s' is representable, out to a tail cutoff sized so the neglected
    // power tail is far below the comparison tolerance.
    let r_lo = 700.0f64.powf(-1.0 / alpha);
    let decay = (mf - 1.0) / (nf - 1.0);
    let r_hi = 10f64.powf((13.0 / (decay - 1.0)).min(25.0));
    let f_num = |r: f64| {
        let sp = map.s_prime(r);
        if sp == 0.0 {
            return 0.0;
        }
        (dw(map.s(r)) * sp).abs().powf(nf) * r.powf(mf - 1.0)
    };
    let f_den = |r: f64| {
        let s = map.s(r);
        if s == 0.0 {
            return 0.0;
        }
        w(s).abs().powf(nf) * r.powf(mf - 1.0 - nf)
    };
    let i_num = omega_m * geometric_integrate(r_lo, r_hi, 16, &f_num)?;
    let i_den = omega_m * geometric_integrate(r_lo, r_hi, 16, &f_den)?;

    let energy_from_n = omega_m / omega_n * alpha.powf(nf - 1.0) * j_num_full;
    let weight_from_n = omega_m / omega_n * j_den_full / alpha;
    let e1 = (i_num - energy_from_n).abs() / energy_from_n.abs();
    let e2 = (i_den - weight_from_n).abs() / weight_from_n.abs();
    Ok(BridgeReport {
        map,
        energy_m: i_num,
        energy_from_n,
        weight_m: i_den,
        weight_from_n,
        quotient_m: i_num / i_den,
        quotient_n: j_num_full / j_den_full,
        max_rel_err: e1.max(e2),
    })
}

/// Largest pointwise mismatch of the intertwined scalings: applying the
/// critical rescale by `lambda` on the dimension-`N` side and pulling back
/// through `s(r)` must equal the subcritical rescale by
/// `mu = lambda^{-1/alpha}` of the pulled-back profile.
pub fn scaling_correspondence_check(
    m: usize,
    n: usize,
    r_outer: f64,
    lambda: f64,
    samples: usize,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need lambda > 0, got {lambda}"
        )));
    }
    let map = BridgeMap::new(m, n, r_outer)?;
    let (alpha, rr) = (map.alpha, r_outer);
    let nf = n as f64;
    let mf = m as f64;
    let w = |s: f64| s * (1.0 - s / rr);
    let mu = lambda.powf(-1.0 / alpha);
    let amp_crit = lambda.powf(-(nf - 1.0) / nf);
    let amp_sub = mu.powf((mf - nf) / nf);

    let r_lo = 700.0f64.powf(-1.0 / alpha) * 2.0;
    let r_hi = 1e6 / mu.max(1.0);
    let mut worst = 0.0f64;
    for k in 0..samples.max(2) {
        let t = k as f64 / (samples.max(2) - 1) as f64;
        let r = r_lo * (r_hi / r_lo).powf(t);
        let s = map.s(r);
        // Critical rescale of w, evaluated at s(r).
        let lhs = amp_crit * w(rr * (s / rr).powf(lambda));
        // Subcritical rescale of u = w(s(.)), evaluated at r.
        let rhs = amp_sub * w(map.s(mu * r));
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
