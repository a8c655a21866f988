//! Hardy-type inequality evaluators.
//!
//! Each evaluator computes the two sides of an inequality for a concrete
//! test field and returns the quotient (gradient side over weighted side)
//! together with the sharp constant it must dominate:
//!
//! * subcritical: `int H(grad u)^p dx / int |u|^p H0^{-p} dx`, sharp
//!   constant `|(N-p)/p|^p`; for `p > N` the field must avoid the origin,
//! * critical (`p = N`, Wulff ball of radius `R`): weight
//!   `(H0 log(R/H0))^{-N}`, sharp constant `((N-1)/N)^N`,
//! * geometric (convex domain, boundary distance `d`): numerator direction
//!   `|grad u . gradH(grad d)|^p`, weight `d^{-p}`, sharp `((p-1)/p)^p`,
//! * weighted (radial weight `H0^a` on the gradient side): sharp
//!   `|(N+a-p)/p|^p`, reducing to the subcritical case at `a = 0`,
//! * uncertainty (`p = 2`): `(N/2)^2 (int u^2)^2 <= int H(grad u)^2 *
//!   int H0^2 u^2`, with equality for Gaussians under the Euclidean gauge.
//!
//! Radial integration near the origin distinguishes three behaviors: smooth
//! integrands use breakpoint-aligned panels; integrable power singularities
//! use a log-substituted rule deep enough that the neglected mass is far
//! below the quadrature tolerance; the critical weight's logarithmic
//! singularity is integrated to the depth floating point permits, and the
//! truncation only ever removes positive mass from the weighted side, so
//! quotients are biased upward and inequality checks stay valid.
//!
//! All quotients carry a refinement-based relative error estimate
//! (`quad_err`): radial and angular resolutions are doubled independently
//! and the shifts are added.

use crate::distance::{Domain, DomainShape};
use crate::error::Error;
use crate::fields::{ScalarField, Support};
use crate::gauge::Gauge;
use crate::linalg::{dot, pairwise_sum};
use crate::quadrature::{
    angular_rule, angular_rule_mc, composite_rule, log_graded_rule, AngularRule, RadialRule,
};
use crate::wulff::{polar_integrate, PolarGrid};
use crate::Result;
use rayon::prelude::*;

/// Resolution knobs shared by the evaluators.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Angular resolution seed; 0 picks a per-dimension default
    /// (256 / 128 / 96 for dimensions 2 / 3 / 4).
    pub angular_resolution: usize,
    /// Gauss-Legendre nodes per radial panel.
    pub nodes_per_panel: usize,
    /// Gauss-Legendre nodes per axis panel in box integration.
    pub box_nodes_per_panel: usize,
    /// Monte Carlo directions for dimensions above 4.
    pub mc_samples: usize,
    /// Seed for the Monte Carlo angular rule.
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            angular_resolution: 0,
            nodes_per_panel: 12,
            box_nodes_per_panel: 8,
            mc_samples: 30_000,
            seed: 7,
        }
    }
}

impl EvalOptions {
    /// Builds the angular rule for `dim` under these options.
    pub fn angular(&self, dim: usize) -> Result<AngularRule> {
        if dim <= 4 {
            let res = if self.angular_resolution > 0 {
                self.angular_resolution
            } else {
                match dim {
                    2 => 256,
                    3 => 128,
                    _ => 96,
                }
            };
            angular_rule(dim, res)
        } else {
            angular_rule_mc(dim, self.mc_samples, self.seed)
        }
    }
}

/// Quotient of the two sides of an inequality, with the constant it must
/// dominate and an error estimate.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    /// Gradient-side integral.
    pub numerator: f64,
    /// Weighted-side integral.
    pub denominator: f64,
    /// `numerator / denominator`.
    pub quotient: f64,
    /// Sharp constant of the inequality.
    pub sharp_constant: f64,
    /// Relative quadrature error estimate on the quotient.
    pub quad_err: f64,
}

/// Sharp constant `|(N-p)/p|^p` of the subcritical inequality.
pub fn subcritical_sharp(n: usize, p: f64) -> f64 {
    ((n as f64 - p) / p).abs().powf(p)
}

/// Sharp constant `((N-1)/N)^N` of the critical inequality.
pub fn critical_sharp(n: usize) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) / nf).powf(nf)
}

/// Sharp constant `((p-1)/p)^p` of the boundary-distance inequality.
pub fn geometric_sharp(p: f64) -> f64 {
    ((p - 1.0) / p).powf(p)
}

/// Sharp constant `|(N+a-p)/p|^p` of the power-weighted inequality.
pub fn weighted_sharp(n: usize, p: f64, a: f64) -> f64 {
    ((n as f64 + a - p) / p).abs().powf(p)
}

/// Sharp constant `(N/2)^2` of the uncertainty inequality.
pub fn uncertainty_sharp(n: usize) -> f64 {
    (n as f64 / 2.0).powi(2)
}

/// Behavior of the radial integrand at the origin.
enum OriginBehavior {
    /// Support starts at positive radius.
    Detached,
    /// Integrable power `r^sigma`, `sigma > -1`.
    Power(f64),
    /// `r^{-1} (log R/r)^{-k}` up to smooth factors.
    LogPower,
}

/// Assembles the radial rules for a shell `(a, b)` with the given origin
/// behavior. `max_neg_power` bounds the most negative power of `r` any
/// integrand factor can reach, so log-substituted depths never overflow.
fn radial_rules(
    a: f64,
    b: f64,
    breaks: &[f64],
    origin: OriginBehavior,
    max_neg_power: f64,
    per_panel: usize,
) -> Result<Vec<RadialRule>> {
    let detached = a > 1e-14 * b;
    if detached {
        return Ok(vec![composite_rule(a, b, breaks, per_panel)?]);
    }
    let t_cap = 620.0 / max_neg_power.max(1.0);
    // Split at the first breakpoint so the deep rule sees a smooth core,
    // and cap the graded region at a quarter of the support: the graded
    // panels widen geometrically, so letting the outermost one span most of
    // the support would under-resolve any O(1)-scale structure there.
    let c = breaks
        .iter()
        .copied()
        .filter(|&x| x > 1e-300 && x < b)
        .fold(b, f64::min)
        .min(0.25 * b);
    let t_max = match origin {
        OriginBehavior::Detached => {
            return Ok(vec![composite_rule(0.0, b, breaks, per_panel)?]);
        }
        OriginBehavior::Power(sigma) => {
            if sigma <= -1.0 {
                return Err(Error::Inadmissible(format!(
                    "radial integrand exponent {sigma} is not integrable at the origin"
                )));
            }
            // Grade to the full overflow-safe depth (the field itself may
            // add a singular factor the weight exponent alone does not
            // predict), but keep node radii above 1e-100 so field factors
            // as steep as r^{-3} stay representable. Any admissible
            // integrand leaves at most ~(1e-100)^{sigma_eff + 1} of its
            // mass below that radius, and dropping it only shrinks both
            // sides of a quotient by matching slivers.
            t_cap.min(c.ln() + 230.2585).max(30.0)
        }
        OriginBehavior::LogPower => t_cap,
    };
    let panels = ((t_max / 2.5).ceil() as usize).max(10);
    let mut rules = vec![log_graded_rule(c, t_max, panels, per_panel)?];
    if c < b * (1.0 - 1e-14) {
        rules.push(composite_rule(c, b, breaks, per_panel)?);
    }
    Ok(rules)
}

fn integrate_rules(
    grid: &PolarGrid,
    rules: &[RadialRule],
    f: &(dyn Fn(&[f64], f64) -> f64 + Sync),
) -> f64 {
    let parts: Vec<f64> = rules
        .iter()
        .map(|rule| polar_integrate(grid, rule, f))
        .collect();
    pairwise_sum(&parts)
}

/// Numerator, denominator, and refinement error estimate for a pair of
/// shell integrands.
fn quotient_parts(
    polar: &crate::gauge::PolarGauge,
    angular: &AngularRule,
    rules: &[RadialRule],
    f_num: &(dyn Fn(&[f64], f64) -> f64 + Sync),
    f_den: &(dyn Fn(&[f64], f64) -> f64 + Sync),
) -> Result<(f64, f64, f64)> {
    let grid = PolarGrid::new(polar, angular)?;
    let num = integrate_rules(&grid, rules, f_num);
    let den = integrate_rules(&grid, rules, f_den);
    if den.abs() <= 1e-14 * num.abs().max(1.0) {
        return Err(Error::ZeroDenominator);
    }
    let q = num / den;

    let fine_rules: Vec<RadialRule> = rules.iter().map(|r| r.refine()).collect();
    let num_r = integrate_rules(&grid, &fine_rules, f_num);
    let den_r = integrate_rules(&grid, &fine_rules, f_den);
    let q_r = num_r / den_r;

    let grid_a = PolarGrid::new(polar, &angular.refine())?;
    let num_a = integrate_rules(&grid_a, rules, f_num);
    let den_a = integrate_rules(&grid_a, rules, f_den);
    let q_a = num_a / den_a;

    let err = ((q_r - q).abs() + (q_a - q).abs()) / q.abs().max(1e-300);
    Ok((num, den, err))
}

fn check_dims(gauge: &Gauge, field: &dyn ScalarField) -> Result<()> {
    if gauge.dim() != field.dim() {
        return Err(Error::InvalidParameters(format!(
            "gauge dimension {} != field dimension {}",
            gauge.dim(),
            field.dim()
        )));
    }
    Ok(())
}

/// Subcritical quotient `int H(grad u)^p / int |u|^p H0^{-p}` over the
/// whole space.
///
/// Admissible for `p >= 1`, `p != N`; fields whose support touches the
/// origin additionally need `p < N`.
pub fn subcritical_quotient(
    gauge: &Gauge,
    field: &dyn ScalarField,
    p: f64,
    opts: &EvalOptions,
) -> Result<QuotientResult> {
    check_dims(gauge, field)?;
    let n = gauge.dim();
    let nf = n as f64;
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "need p >= 1, got {p}"
        )));
    }
    if (p - nf).abs() < 1e-9 {
        return Err(Error::InvalidParameters(
            "p equals the dimension; use the critical evaluator".into(),
        ));
    }
    let polar = gauge.polar();
    let (a, b) = field.support().shell_cover(&polar);
    let touches_origin = a <= 1e-14 * b;
    if touches_origin && p > nf {
        return Err(Error::Inadmissible(format!(
            "p = {p} above dimension {n} requires support away from the origin"
        )));
    }
    let sigma = nf - 1.0 - p;
    // Even when the weight exponent alone would be harmless, the field can
    // contribute its own singular factor (for example a lifted r^{-alpha}
    // profile), so an origin-touching support always gets the graded rule.
    let origin = if touches_origin {
        OriginBehavior::Power(sigma)
    } else {
        OriginBehavior::Detached
    };
    let breaks = field.radial_breakpoints();
    let rules = radial_rules(a, b, &breaks, origin, p, opts.nodes_per_panel)?;
    let angular = opts.angular(n)?;

    let f_num = |x: &[f64], r: f64| {
        let g = field.gradient_at_radius(x, r);
        gauge.value(&g).powf(p)
    };
    let f_den = |x: &[f64], r: f64| {
        let u = field.value_at_radius(x, r).abs();
        if u == 0.0 {
            0.0
        } else {
            u.powf(p) * r.powf(-p)
        }
    };
    let (num, den, err) = quotient_parts(&polar, &angular, &rules, &f_num, &f_den)?;
    Ok(QuotientResult {
        numerator: num,
        denominator: den,
        quotient: num / den,
        sharp_constant: subcritical_sharp(n, p),
        quad_err: err,
    })
}

/// Critical quotient at `p = N` on the Wulff ball of radius `r_outer`,
/// with weight `(H0 log(R/H0))^{-N}`.
pub fn critical_quotient(
    gauge: &Gauge,
    field: &dyn ScalarField,
    r_outer: f64,
    opts: &EvalOptions,
) -> Result<QuotientResult> {
    check_dims(gauge, field)?;
    let n = gauge.dim();
    let nf = n as f64;
    if !(r_outer.is_finite() && r_outer > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "outer radius must be positive, got {r_outer}"
        )));
    }
    let polar = gauge.polar();
    let (a, b) = field.support().shell_cover(&polar);
    if b >= r_outer * (1.0 - 1e-9) {
        return Err(Error::Inadmissible(format!(
            "support reaches radius {b}, not strictly inside the ball of radius {r_outer}"
        )));
    }
    let origin = if a <= 1e-14 * b {
        OriginBehavior::LogPower
    } else {
        OriginBehavior::Detached
    };
    let breaks = field.radial_breakpoints();
    let rules = radial_rules(a, b, &breaks, origin, nf, opts.nodes_per_panel)?;
    let angular = opts.angular(n)?;

    let f_num = |x: &[f64], r: f64| {
        let g = field.gradient_at_radius(x, r);
        gauge.value(&g).powf(nf)
    };
    let f_den = |x: &[f64], r: f64| {
        let u = field.value_at_radius(x, r).abs();
        if u == 0.0 {
            0.0
        } else {
            let lg = (r_outer / r).ln();
            u.powf(nf) * (r * lg).powf(-nf)
        }
    };
    let (num, den, err) = quotient_parts(&polar, &angular, &rules, &f_num, &f_den)?;
    Ok(QuotientResult {
        numerator: num,
        denominator: den,
        quotient: num / den,
        sharp_constant: critical_sharp(n),
        quad_err: err,
    })
}

/// Power-weighted quotient
/// `int H(grad u)^p H0^a / int |u|^p H0^{a-p}`.
pub fn weighted_quotient(
    gauge: &Gauge,
    field: &dyn ScalarField,
    p: f64,
    a_exp: f64,
    opts: &EvalOptions,
) -> Result<QuotientResult> {
    check_dims(gauge, field)?;
    let n = gauge.dim();
    let nf = n as f64;
    if !(p.is_finite() && p >= 1.0 && a_exp.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need finite weight exponent and p >= 1, got p = {p}, a = {a_exp}"
        )));
    }
    if (nf + a_exp - p).abs() < 1e-9 {
        return Err(Error::InvalidParameters(format!(
            "weight exponent {a_exp} makes the inequality degenerate (N + a = p)"
        )));
    }
    let polar = gauge.polar();
    let (a, b) = field.support().shell_cover(&polar);
    let touches_origin = a <= 1e-14 * b;
    let sigma_den = nf - 1.0 + a_exp - p;
    let sigma_num = nf - 1.0 + a_exp;
    if touches_origin && (sigma_den <= -1.0 || sigma_num <= -1.0) {
        return Err(Error::Inadmissible(format!(
            "weight exponent {a_exp} requires support away from the origin at p = {p}, N = {n}"
        )));
    }
    let sigma = sigma_den.min(sigma_num);
    // As in the subcritical evaluator: lifted fields may be singular at the
    // origin even when the weight exponents are tame, so grade regardless.
    let origin = if touches_origin {
        OriginBehavior::Power(sigma)
    } else {
        OriginBehavior::Detached
    };
    let breaks = field.radial_breakpoints();
    let max_neg = (p - a_exp).max(-a_exp).max(1.0);
    let rules = radial_rules(a, b, &breaks, origin, max_neg, opts.nodes_per_panel)?;
    let angular = opts.angular(n)?;

    let f_num = |x: &[f64], r: f64| {
        let g = field.gradient_at_radius(x, r);
        let h = gauge.value(&g);
        if h == 0.0 {
            0.0
        } else {
            h.powf(p) * r.powf(a_exp)
        }
    };
    let f_den = |x: &[f64], r: f64| {
        let u = field.value_at_radius(x, r).abs();
        if u == 0.0 {
            0.0
        } else {
            u.powf(p) * r.powf(a_exp - p)
        }
    };
    let (num, den, err) = quotient_parts(&polar, &angular, &rules, &f_num, &f_den)?;
    Ok(QuotientResult {
        numerator: num,
        denominator: den,
        quotient: num / den,
        sharp_constant: weighted_sharp(n, p, a_exp),
        quad_err: err,
    })
}

/// The three integrals of the uncertainty inequality and their combined
/// ratio `(energy * moment) / ((N/2)^2 mass^2)`, which is at least 1.
#[derive(Debug, Clone)]
pub struct UncertaintyResult {
    /// `int u^2`.
    pub mass: f64,
    /// `int H(grad u)^2`.
    pub energy: f64,
    /// `int H0(x)^2 u^2`.
    pub moment: f64,
    /// `energy * moment / ((N/2)^2 mass^2)`.
    pub ratio: f64,
    /// Relative error estimate on the ratio.
    pub quad_err: f64,
}

/// Evaluates the uncertainty inequality (`p = 2`) for a field.
pub fn uncertainty_product(
    gauge: &Gauge,
    field: &dyn ScalarField,
    opts: &EvalOptions,
) -> Result<UncertaintyResult> {
    check_dims(gauge, field)?;
    let n = gauge.dim();
    let polar = gauge.polar();
    let (a, b) = field.support().shell_cover(&polar);
    let breaks = field.radial_breakpoints();
    let rules = radial_rules(
        a,
        b,
        &breaks,
        if a <= 1e-14 * b {
            // Grade toward the origin so singular lifted fields are still
            // integrated correctly; for smooth fields the extra panels near
            // zero carry negligible weight.
            OriginBehavior::Power((n as f64) - 1.0)
        } else {
            OriginBehavior::Detached
        },
        2.0,
        opts.nodes_per_panel,
    )?;
    let angular = opts.angular(n)?;

    let f_mass = |x: &[f64], r: f64| field.value_at_radius(x, r).powi(2);
    let f_energy = |x: &[f64], r: f64| {
        let g = field.gradient_at_radius(x, r);
        gauge.value(&g).powi(2)
    };
    let f_moment = |x: &[f64], r: f64| (r * field.value_at_radius(x, r)).powi(2);

    let eval = |grid: &PolarGrid, rules: &[RadialRule]| -> Result<(f64, f64, f64, f64)> {
        let mass = integrate_rules(grid, rules, &f_mass);
        let energy = integrate_rules(grid, rules, &f_energy);
        let moment = integrate_rules(grid, rules, &f_moment);
        if mass <= 1e-14 * energy.max(1.0) {
            return Err(Error::ZeroDenominator);
        }
        let ratio = energy * moment / (uncertainty_sharp(n) * mass * mass);
        Ok((mass, energy, moment, ratio))
    };

    let grid = PolarGrid::new(&polar, &angular)?;
    let (mass, energy, moment, ratio) = eval(&grid, &rules)?;
    let fine_rules: Vec<RadialRule> = rules.iter().map(|r| r.refine()).collect();
    let (.., ratio_r) = eval(&grid, &fine_rules)?;
    let grid_a = PolarGrid::new(&polar, &angular.refine())?;
    let (.., ratio_a) = eval(&grid_a, &rules)?;
    let quad_err = ((ratio_r - ratio).abs() + (ratio_a - ratio).abs()) / ratio.abs().max(1e-300);
    Ok(UncertaintyResult {
        mass,
        energy,
        moment,
        ratio,
        quad_err,
    })
}

/// Tensor-product integration over a box, with panel edges at per-axis
/// breakpoints. Supports dimensions 2 and 3.
pub fn box_integrate(
    lo: &[f64],
    hi: &[f64],
    axis_breaks: &[Vec<f64>],
    per_panel: usize,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<f64> {
    let dim = lo.len();
    if hi.len() != dim {
        return Err(Error::InvalidParameters("box bounds mismatch".into()));
    }
    let empty = Vec::new();
    let rules: Vec<RadialRule> = (0..dim)
        .map(|i| {
            let breaks = axis_breaks.get(i).unwrap_or(&empty);
            composite_rule(lo[i], hi[i], breaks, per_panel)
        })
        .collect::<Result<_>>()?;
    match dim {
        2 => {
            let (r0, r1) = (&rules[0], &rules[1]);
            let rows: Vec<f64> = r0
                .nodes()
                .par_iter()
                .zip(r0.weights().par_iter())
                .map(|(&x0, &w0)| {
                    let vals: Vec<f64> = r1
                        .nodes()
                        .iter()
                        .zip(r1.weights())
                        .map(|(&x1, &w1)| w1 * f(&[x0, x1]))
                        .collect();
                    w0 * pairwise_sum(&vals)
                })
                .collect();
            Ok(pairwise_sum(&rows))
        }
        3 => {
            let (r0, r1, r2) = (&rules[0], &rules[1], &rules[2]);
            let rows: Vec<f64> = r0
                .nodes()
                .par_iter()
                .zip(r0.weights().par_iter())
                .map(|(&x0, &w0)| {
                    let mut vals =
                        Vec::with_capacity(r1.nodes().len() * r2.nodes().len());
                    for (&x1, &w1) in r1.nodes().iter().zip(r1.weights()) {
                        for (&x2, &w2) in r2.nodes().iter().zip(r2.weights()) {
                            vals.push(w1 * w2 * f(&[x0, x1, x2]));
                        }
                    }
                    w0 * pairwise_sum(&vals)
                })
                .collect();
            Ok(pairwise_sum(&rows))
        }
        _ => Err(Error::UnsupportedDimension(
            dim,
            "box integration covers dimensions 2-3",
        )),
    }
}

fn support_box(field: &dyn ScalarField, polar: &crate::gauge::PolarGauge) -> (Vec<f64>, Vec<f64>) {
    match field.support() {
        Support::Box { lo, hi } => (lo, hi),
        Support::Ball { center, radius } => {
            let lo = center.iter().map(|c| c - radius).collect();
            let hi = center.iter().map(|c| c + radius).collect();
            (lo, hi)
        }
        Support::Shell { outer, .. } => {
            let dim = field.dim();
            let s = outer / polar.sandwich().0;
            (vec![-s; dim], vec![s; dim])
        }
    }
}

/// Boundary-distance quotient
/// `int |grad u . gradH(grad d)|^p / int |u|^p d^{-p}` over a convex
/// domain strictly containing the support of `u`.
pub fn geometric_quotient(
    domain: &Domain,
    field: &dyn ScalarField,
    p: f64,
    opts: &EvalOptions,
) -> Result<QuotientResult> {
    if domain.dim() != field.dim() {
        return Err(Error::InvalidParameters(
            "domain and field dimensions differ".into(),
        ));
    }
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidParameters(format!("need p > 1, got {p}")));
    }
    let dim = domain.dim();
    let gauge = domain.gauge();
    let (lo, hi) = support_box(field, domain.polar());
    // The domain is convex, so containing all box corners contains the box.
    let corners = 1usize << dim;
    for mask in 0..corners {
        let corner: Vec<f64> = (0..dim)
            .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
            .collect();
        if domain.distance(&corner) <= 0.0 {
            return Err(Error::Inadmissible(format!(
                "support corner {corner:?} is not strictly inside the domain"
            )));
        }
    }
    let axis_breaks: Vec<Vec<f64>> = (0..dim).map(|i| field.axis_breakpoints(i)).collect();

    // For halfspaces the flux direction gradH(grad d) is a single constant
    // vector; otherwise evaluate it pointwise.
    let const_dir: Option<Vec<f64>> = match domain.shape() {
        DomainShape::Halfspace { normal, .. } => Some(gauge.gradient(normal)?),
        _ => None,
    };
    let f_num = |x: &[f64]| -> f64 {
        let g = field.gradient(x);
        let d = match &const_dir {
            Some(v) => dot(&g, v),
            None => {
                let gd = match domain.distance_gradient(x) {
                    Ok(gd) => gd,
                    Err(_) => return 0.0,
                };
                match gauge.gradient(&gd) {
                    Ok(v) => dot(&g, &v),
                    Err(_) => 0.0,
                }
            }
        };
        d.abs().powf(p)
    };
    let f_den = |x: &[f64]| -> f64 {
        let u = field.value(x).abs();
        if u == 0.0 {
            0.0
        } else {
            u.powf(p) * domain.distance(x).powf(-p)
        }
    };
    let num = box_integrate(&lo, &hi, &axis_breaks, opts.box_nodes_per_panel, &f_num)?;
    let den = box_integrate(&lo, &hi, &axis_breaks, opts.box_nodes_per_panel, &f_den)?;
    if den.abs() <= 1e-14 * num.abs().max(1.0) {
        return Err(Error::ZeroDenominator);
    }
    let num_f = box_integrate(&lo, &hi, &axis_breaks, 2 * opts.box_nodes_per_panel, &f_num)?;
    let den_f = box_integrate(&lo, &hi, &axis_breaks, 2 * opts.box_nodes_per_panel, &f_den)?;
    let q = num / den;
    let err = (num_f / den_f - q).abs() / q.abs().max(1e-300);
    Ok(QuotientResult {
        numerator: num,
        denominator: den,
        quotient: q,
        sharp_constant: geometric_sharp(p),
        quad_err: err,
    })
}

/// Rayleigh quotient `int_D H(grad u)^p / int_D |u|^p` over a bounded
/// domain (Wulff ball or cube); the field should vanish on the boundary.
pub fn rayleigh_quotient(
    domain: &Domain,
    field: &dyn ScalarField,
    p: f64,
    opts: &EvalOptions,
) -> Result<(f64, f64)> {
    if domain.dim() != field.dim() {
        return Err(Error::InvalidParameters(
            "domain and field dimensions differ".into(),
        ));
    }
    let gauge = domain.gauge();
    match domain.shape() {
        DomainShape::WulffBall { radius } => {
            let polar = domain.polar();
            let (_, b) = field.support().shell_cover(polar);
            let outer = radius.min(b);
            let breaks = field.radial_breakpoints();
            let rules = vec![composite_rule(0.0, outer, &breaks, opts.nodes_per_panel)?];
            let angular = opts.angular(domain.dim())?;
            let f_num = |x: &[f64], r: f64| {
                let g = field.gradient_at_radius(x, r);
                gauge.value(&g).powf(p)
            };
            let f_den = |x: &[f64], r: f64| field.value_at_radius(x, r).abs().powf(p);
            let (num, den, err) = quotient_parts(polar, &angular, &rules, &f_num, &f_den)?;
            Ok((num / den, err))
        }
        DomainShape::Cube { lo, hi } => {
            let axis_breaks: Vec<Vec<f64>> =
                (0..domain.dim()).map(|i| field.axis_breakpoints(i)).collect();
            let f_num = |x: &[f64]| {
                let g = field.gradient(x);
                gauge.value(&g).powf(p)
            };
            let f_den = |x: &[f64]| field.value(x).abs().powf(p);
            let num = box_integrate(lo, hi, &axis_breaks, opts.box_nodes_per_panel, &f_num)?;
            let den = box_integrate(lo, hi, &axis_breaks, opts.box_nodes_per_panel, &f_den)?;
            if den.abs() <= 1e-14 * num.abs().max(1.0) {
                return Err(Error::ZeroDenominator);
            }
            let num_f =
                box_integrate(lo, hi, &axis_breaks, 2 * opts.box_nodes_per_panel, &f_num)?;
            let den_f =
                box_integrate(lo, hi, &axis_breaks, 2 * opts.box_nodes_per_panel, &f_den)?;
            let q = num / den;
            Ok((q, (num_f / den_f - q).abs() / q.abs().max(1e-300)))
        }
        _ => Err(Error::InvalidParameters(
            "Rayleigh quotients need a bounded ball or cube domain".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cap_profile, standard_corpus};
    use crate::distance::{Domain, DomainShape};
    use crate::fields::{lift_radial, RadialProfile};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use std::sync::Arc;

    fn quick_opts() -> EvalOptions {
        EvalOptions {
            angular_resolution: 48,
            nodes_per_panel: 10,
            box_nodes_per_panel: 6,
            ..EvalOptions::default()
        }
    }

    #[test]
    fn cap_subcritical_quotient_is_exactly_one_at_p2_n3() {
        // num = omega/3 and den = omega/3 for the unit cone in R^3, p = 2.
        for gauge in [
            Gauge::euclidean(3).unwrap(),
            Gauge::ellipsoidal(
                3,
                DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5]),
            )
            .unwrap(),
        ] {
            let field = lift_radial(cap_profile(), gauge.polar());
            let r = subcritical_quotient(&gauge, &field, 2.0, &quick_opts()).unwrap();
            assert_relative_eq!(r.quotient, 1.0, max_relative = 1e-10);
            assert!(r.quotient >= r.sharp_constant);
            assert!(r.quad_err < 1e-9, "quad_err {}", r.quad_err);
        }
    }

    #[test]
    fn cap_attains_sharp_constant_at_p1() {
        // For nonnegative radially decreasing fields the p = 1 quotient
        // equals N - 1 exactly.
        for n in [2usize, 3] {
            let gauge = Gauge::euclidean(n).unwrap();
            let field = lift_radial(cap_profile(), gauge.polar());
            let r = subcritical_quotient(&gauge, &field, 1.0, &quick_opts()).unwrap();
            assert_relative_eq!(r.quotient, n as f64 - 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn origin_supported_fields_reject_large_p() {
        let gauge = Gauge::euclidean(2).unwrap();
        let field = lift_radial(cap_profile(), gauge.polar());
        assert!(matches!(
            subcritical_quotient(&gauge, &field, 4.0, &quick_opts()),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn weighted_reduces_to_subcritical_at_zero_exponent() {
        let gauge = Gauge::weighted_lq(3, 3.0, vec![1.0, 2.0, 0.5]).unwrap();
        let field = lift_radial(cap_profile(), gauge.polar());
        let sub = subcritical_quotient(&gauge, &field, 2.0, &quick_opts()).unwrap();
        let wt = weighted_quotient(&gauge, &field, 2.0, 0.0, &quick_opts()).unwrap();
        assert_relative_eq!(sub.quotient, wt.quotient, max_relative = 1e-12);
        assert_relative_eq!(sub.sharp_constant, wt.sharp_constant, epsilon = 1e-15);
    }

    #[test]
    fn weighted_quotient_dominates_its_constant() {
        let gauge = Gauge::euclidean(2).unwrap();
        let field = lift_radial(cap_profile(), gauge.polar());
        for a_exp in [0.5, 1.5] {
            let r = weighted_quotient(&gauge, &field, 2.0, a_exp, &quick_opts()).unwrap();
            assert!(
                r.quotient >= r.sharp_constant - 1e-9,
                "a = {a_exp}: {} < {}",
                r.quotient,
                r.sharp_constant
            );
        }
    }

    #[test]
    fn critical_quotient_dominates_its_constant_on_corpus() {
        let gauge = Gauge::euclidean(2).unwrap();
        let polar = gauge.polar();
        for field in standard_corpus(&polar).unwrap() {
            let (_, b) = field.support().shell_cover(&polar);
            let r_outer = 2.0 * b;
            match critical_quotient(&gauge, field.as_ref(), r_outer, &quick_opts()) {
                Ok(r) => assert!(
                    r.quotient >= r.sharp_constant - 1e-6,
                    "{}: {} < {}",
                    field.name(),
                    r.quotient,
                    r.sharp_constant
                ),
                Err(Error::Inadmissible(_)) => {}
                Err(e) => panic!("{}: {e}", field.name()),
            }
        }
    }

    #[test]
    fn geometric_quotient_on_halfspace_fields() {
        let gauge = Gauge::euclidean(2).unwrap();
        let polar = gauge.polar();
        let domain = Domain::new(
            DomainShape::Halfspace {
                normal: vec![0.0, 1.0],
                offset: 0.0,
            },
            gauge.clone(),
        )
        .unwrap();
        let mut tested = 0;
        for field in standard_corpus(&polar).unwrap() {
            match geometric_quotient(&domain, field.as_ref(), 2.0, &quick_opts()) {
                Ok(r) => {
                    tested += 1;
                    assert!(
                        r.quotient >= r.sharp_constant - 1e-9,
                        "{}: {} < {}",
                        field.name(),
                        r.quotient,
                        r.sharp_constant
                    );
                }
                Err(Error::Inadmissible(_)) => {}
                Err(e) => panic!("{}: {e}", field.name()),
            }
        }
        assert_eq!(tested, 2, "slab and shifted bump should be admissible");
    }

    #[test]
    fn uncertainty_ratio_is_one_for_gaussian() {
        let gauge = Gauge::euclidean(2).unwrap();
        let prof = RadialProfile::new(
            "gauss",
            (0.0, 8.0),
            vec![],
            Arc::new(|r: f64| (-r * r).exp()),
            Arc::new(|r: f64| -2.0 * r * (-r * r).exp()),
        )
        .unwrap();
        let field = lift_radial(prof, gauge.polar());
        // The graded origin rule needs a few more nodes per panel than the
        // quick settings to push this closed-form case below 1e-9.
        let opts = EvalOptions {
            angular_resolution: 48,
            nodes_per_panel: 16,
            ..EvalOptions::default()
        };
        let r = uncertainty_product(&gauge, &field, &opts).unwrap();
        assert_relative_eq!(r.ratio, 1.0, max_relative = 1e-9);
        assert_relative_eq!(r.mass, std::f64::consts::PI / 2.0, max_relative = 1e-9);
        assert_relative_eq!(r.energy, std::f64::consts::PI, max_relative = 1e-9);
        assert_relative_eq!(r.moment, std::f64::consts::PI / 4.0, max_relative = 1e-9);
    }

    #[test]
    fn disc_rayleigh_quotient_is_six() {
        let gauge = Gauge::euclidean(2).unwrap();
        let prof = RadialProfile::new(
            "paraboloid",
            (0.0, 1.0),
            vec![],
            Arc::new(|r: f64| (1.0 - r * r).max(0.0)),
            Arc::new(|r: f64| if r < 1.0 { -2.0 * r } else { 0.0 }),
        )
        .unwrap();
        let field = lift_radial(prof, gauge.polar());
        let domain = Domain::new(DomainShape::WulffBall { radius: 1.0 }, gauge).unwrap();
        let (q, err) = rayleigh_quotient(&domain, &field, 2.0, &quick_opts()).unwrap();
        assert_relative_eq!(q, 6.0, max_relative = 1e-9);
        assert!(err < 1e-8);
    }

    #[test]
    fn zero_fields_are_rejected() {
        let gauge = Gauge::euclidean(2).unwrap();
        let field = crate::fields::FnField::new(
            2,
            "null",
            Support::Shell {
                inner: 0.5,
                outer: 1.0,
            },
            vec![],
            Arc::new(|_: &[f64]| 0.0),
            Arc::new(|x: &[f64]| vec![0.0; x.len()]),
        );
        assert!(matches!(
            subcritical_quotient(&gauge, &field, 1.5, &quick_opts()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn box_integrate_matches_products() {
        // int over [0,1]x[0,2] of x y^2 = (1/2)(8/3).
        let got = box_integrate(
            &[0.0, 0.0],
            &[1.0, 2.0],
            &[vec![], vec![1.0]],
            8,
            &|x: &[f64]| x[0] * x[1] * x[1],
        )
        .unwrap();
        assert_relative_eq!(got, 4.0 / 3.0, max_relative = 1e-13);
        let got3 = box_integrate(
            &[0.0, 0.0, 0.0],
            &[1.0, 1.0, 1.0],
            &[],
            6,
            &|x: &[f64]| x[0] + x[1] + x[2],
        )
        .unwrap();
        assert_relative_eq!(got3, 1.5, max_relative = 1e-13);
    }
}
