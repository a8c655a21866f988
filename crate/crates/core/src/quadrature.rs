//! Radial and angular quadrature rules.
//!
//! The integrands of interest are products of smooth factors with endpoint
//! singularities of power type (`r^gamma`, `gamma > -1`) or logarithmic type
//! (`r^{-1} (log b/r)^s`, `s < -1`). Three radial rule families cover them:
//!
//! * plain Gauss-Legendre panels for smooth integrands,
//! * geometrically graded panels accumulating toward a singular endpoint,
//!   which resolve power singularities (the residual mass below the innermost
//!   panel scales like `width^{gamma+1}`),
//! * log-substituted rules (`r = b e^{-t}`, uniform panels in `t`), which
//!   push the innermost node to `b e^{-t_max}` and are the right tool when a
//!   power singularity concentrates mass many decades below the outer scale.
//!
//! Logarithmic-class integrands concentrate mass at radii below the smallest
//! positive double (for example half the mass of `r^{-1}(log 1/r)^{-1.02}`
//! sits below `r = 1e-300`), so no rule whose nodes are radii can integrate
//! them. [`LogSingularRule`] therefore integrates such integrands presented
//! in the variable `l = log(b/r)`; see its documentation.
//!
//! All node and weight arrays are deterministic functions of the requested
//! parameters, and every rule can `refine` itself for error estimation.

use crate::error::Error;
use crate::linalg::pairwise_sum;
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Endpoint behavior a radial rule is built to absorb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    /// The integrand extends continuously to the endpoint.
    None,
    /// An integrable power singularity `(r - endpoint)^gamma`, `gamma > -1`.
    IntegrablePower,
    /// A logarithmic singularity `r^{-1} (log b/r)^s`, `s < -1`, at zero.
    IntegrableLogPower,
}

/// Which endpoint of the interval the grading accumulates toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Lower,
    Upper,
}

#[derive(Debug, Clone)]
enum Recipe {
    Plain {
        n: usize,
    },
    Graded {
        panels: usize,
        per_panel: usize,
        rho: f64,
        end: SingularEnd,
    },
    LogGraded {
        t_max: f64,
        panels: usize,
        per_panel: usize,
    },
    Composite {
        breaks: Vec<f64>,
        per_panel: usize,
    },
}

/// A one-dimensional rule with nodes strictly inside `(a, b)`.
#[derive(Debug, Clone)]
pub struct RadialRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    a: f64,
    b: f64,
    lower_class: SingularityClass,
    upper_class: SingularityClass,
    recipe: Recipe,
}

impl RadialRule {
    /// Nodes in ascending order, all strictly inside `(a, b)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`Self::nodes`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Interval endpoints.
    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Declared admissible singularity class at each endpoint.
    pub fn classes(&self) -> (SingularityClass, SingularityClass) {
        (self.lower_class, self.upper_class)
    }

    /// Integrates `f` over `(a, b)` by pairwise summation of the weighted
    /// node values.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let vals: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&vals)
    }

    /// Returns the same rule with twice the nodes per panel.
    pub fn refine(&self) -> RadialRule {
        match &self.recipe {
            Recipe::Plain { n } => radial_rule(2 * n, self.a, self.b).expect("valid refinement"),
            Recipe::Graded {
                panels,
                per_panel,
                rho,
                end,
            } => graded_radial_rule(*panels, 2 * per_panel, self.a, self.b, *rho, *end)
                .expect("valid refinement"),
            Recipe::LogGraded {
                t_max,
                panels,
                per_panel,
            } => log_graded_rule(self.b, *t_max, *panels, 2 * per_panel).expect("valid refinement"),
            Recipe::Composite { breaks, per_panel } => {
                composite_rule(self.a, self.b, breaks, 2 * per_panel).expect("valid refinement")
            }
        }
    }

    /// Integrates `f` and reports `|refined - base|` as the error estimate.
    pub fn integrate_with_error(&self, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
        let base = self.integrate(&mut f);
        let fine = self.refine().integrate(&mut f);
        (fine, (fine - base).abs())
    }
}

/// Gauss-Legendre nodes and weights on `(-1, 1)`.
///
/// Newton iteration on the Legendre recurrence; converges to machine
/// precision in a handful of steps from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p0, p1 walk the three-term recurrence up to degree n.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval(format!(
            "need finite a < b, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// Single-panel Gauss-Legendre rule on `(a, b)`; exact for polynomials of
/// degree `2n - 1`.
pub fn radial_rule(n: usize, a: f64, b: f64) -> Result<RadialRule> {
    check_interval(a, b)?;
    if n == 0 {
        return Err(Error::InvalidParameters("rule order must be >= 1".into()));
    }
    let (t, wt) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes: Vec<f64> = t.iter().map(|&x| mid + half * x).collect();
    let weights: Vec<f64> = wt.iter().map(|&w| half * w).collect();
    Ok(RadialRule {
        nodes,
        weights,
        a,
        b,
        lower_class: SingularityClass::None,
        upper_class: SingularityClass::None,
        recipe: Recipe::Plain { n },
    })
}

fn panels_to_rule(
    edges: &[f64],
    per_panel: usize,
    a: f64,
    b: f64,
    lower_class: SingularityClass,
    upper_class: SingularityClass,
    recipe: Recipe,
) -> RadialRule {
    let (t, wt) = gauss_legendre(per_panel);
    let mut nodes = Vec::with_capacity(per_panel * (edges.len() - 1));
    let mut weights = Vec::with_capacity(per_panel * (edges.len() - 1));
    for win in edges.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (x, w) in t.iter().zip(&wt) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    RadialRule {
        nodes,
        weights,
        a,
        b,
        lower_class,
        upper_class,
        recipe,
    }
}

/// Geometrically graded composite rule on `(a, b)`.
///
/// Panel edges accumulate toward the singular end with ratio `rho` in
/// `(0, 1)`; each panel carries a `per_panel`-point Gauss-Legendre rule. The
/// innermost panel has width `(b - a) rho^(panels-1)`, so the rule resolves
/// integrable power singularities to the accuracy of that residual mass.
pub fn graded_radial_rule(
    panels: usize,
    per_panel: usize,
    a: f64,
    b: f64,
    rho: f64,
    end: SingularEnd,
) -> Result<RadialRule> {
    check_interval(a, b)?;
    if panels < 2 {
        return Err(Error::InvalidParameters(
            "graded rule needs at least 2 panels".into(),
        ));
    }
    if !(0.0 < rho && rho < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "grading ratio must lie in (0, 1), got {rho}"
        )));
    }
    let width = b - a;
    let mut edges = Vec::with_capacity(panels + 1);
    match end {
        SingularEnd::Lower => {
            edges.push(a);
            for k in (0..panels).rev() {
                edges.push(a + width * rho.powi(k as i32));
            }
            *edges.last_mut().expect("nonempty") = b;
        }
        SingularEnd::Upper => {
            edges.push(a);
            for k in 1..panels {
                edges.push(b - width * rho.powi(k as i32));
            }
            edges.push(b);
        }
    }
    // The requested depth can outrun the spacing of representable numbers
    // near a nonzero endpoint: panel edges round onto it and then even the
    // extreme Gauss nodes (which clear the edge by only ~2.8/per^2 of the
    // panel width) collapse onto the singularity. Drop panels too thin for
    // their nodes to stay strictly inside. Grading toward zero is exempt:
    // spacing there is absolute, not relative.
    let clearance = 4e-16 * (per_panel * per_panel) as f64;
    let lower_floor = a.abs() * clearance;
    let upper_floor = b.abs() * clearance;
    edges.retain(|&e| (e == a || e - a >= lower_floor) && (e == b || b - e >= upper_floor));
    edges.dedup();
    let (lower_class, upper_class) = match end {
        SingularEnd::Lower => (SingularityClass::IntegrablePower, SingularityClass::None),
        SingularEnd::Upper => (SingularityClass::None, SingularityClass::IntegrablePower),
    };
    Ok(panels_to_rule(
        &edges,
        per_panel,
        a,
        b,
        lower_class,
        upper_class,
        Recipe::Graded {
            panels,
            per_panel,
            rho,
            end,
        },
    ))
}

/// Log-substituted rule on `(b e^{-t_max}, b)`, effectively `(0, b]`.
///
/// Nodes are `r = b e^{-t}` with `t` on uniform Gauss-Legendre panels over
/// `(0, t_max)`. For a power integrand `r^gamma` the neglected mass is
/// `(e^{-t_max})^{gamma+1}` relative, so `t_max` trades depth for nothing
/// else; keep `t_max` small enough that `r^gamma` stays inside f64 range for
/// the exponents actually integrated.
pub fn log_graded_rule(b: f64, t_max: f64, panels: usize, per_panel: usize) -> Result<RadialRule> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidInterval(format!(
            "outer endpoint must be positive, got {b}"
        )));
    }
    if !(t_max > 0.0 && t_max < 700.0) {
        return Err(Error::InvalidParameters(format!(
            "t_max must lie in (0, 700) so radii stay representable, got {t_max}"
        )));
    }
    if panels < 2 {
        return Err(Error::InvalidParameters(
            "log rule needs at least 2 panels".into(),
        ));
    }
    let (t, wt) = gauss_legendre(per_panel);
    let dt = t_max / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    // Walk t from t_max down so radii come out ascending.
    for p in (0..panels).rev() {
        let lo = p as f64 * dt;
        let mid = lo + 0.5 * dt;
        let half = 0.5 * dt;
        for (x, w) in t.iter().rev().zip(wt.iter().rev()) {
            let tv = mid + half * x;
            let r = b * (-tv).exp();
            nodes.push(r);
            // dr = -r dt, so the weight in r is (panel weight in t) * r.
            weights.push(half * w * r);
        }
    }
    Ok(RadialRule {
        a: b * (-t_max).exp(),
        b,
        nodes,
        weights,
        lower_class: SingularityClass::IntegrablePower,
        upper_class: SingularityClass::None,
        recipe: Recipe::LogGraded {
            t_max,
            panels,
            per_panel,
        },
    })
}

/// Composite Gauss-Legendre rule with panel edges at the supplied interior
/// breakpoints (plus a uniform subdivision of long gaps).
///
/// Use for piecewise-smooth integrands whose kink locations are known, such
/// as corpus fields with compact plateau-and-taper structure.
pub fn composite_rule(a: f64, b: f64, breakpoints: &[f64], per_panel: usize) -> Result<RadialRule> {
    check_interval(a, b)?;
    let mut edges: Vec<f64> = vec![a, b];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.sort_by(|p, q| p.partial_cmp(q).expect("finite edges"));
    edges.dedup_by(|p, q| (*p - *q).abs() < 1e-14 * (b - a));
    // Split panels longer than a tenth of the interval to keep per-panel
    // polynomial approximation honest.
    let max_len = 0.1 * (b - a);
    let mut refined = Vec::with_capacity(edges.len() * 2);
    for win in edges.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        refined.push(lo);
        let pieces = ((hi - lo) / max_len).ceil() as usize;
        for k in 1..pieces {
            refined.push(lo + (hi - lo) * k as f64 / pieces as f64);
        }
    }
    refined.push(b);
    Ok(panels_to_rule(
        &refined,
        per_panel,
        a,
        b,
        SingularityClass::None,
        SingularityClass::None,
        Recipe::Composite {
            breaks: breakpoints.to_vec(),
            per_panel,
        },
    ))
}

/// Rule for logarithmic-class singular integrands on `(0, b)`.
///
/// Integrates `f(r) = phi(log(b/r)) / r`, supplied through `phi`, as
/// `int_0^inf phi(l) dl`. The half-line is mapped by `l = 1/u - 1` onto
/// `u in (0, 1)` and graded geometrically toward `u = 0`, which resolves the
/// slow power tails `phi(l) ~ l^s`, `s < -1`, down to a relative residual of
/// `u_min^{-s-1}`. Nodes in `r` would be meaningless here: for `s` close to
/// `-1` most of the integral lives at radii below the smallest positive
/// double.
#[derive(Debug, Clone)]
pub struct LogSingularRule {
    ell_nodes: Vec<f64>,
    u_nodes: Vec<f64>,
    weights: Vec<f64>,
    b: f64,
    u_min: f64,
    rho: f64,
    per_panel: usize,
}

impl LogSingularRule {
    /// Builds the rule; `u_min` bounds the grading depth (`>= 1e-290`).
    pub fn new(b: f64, u_min: f64, rho: f64, per_panel: usize) -> Result<LogSingularRule> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidInterval(format!(
                "outer endpoint must be positive, got {b}"
            )));
        }
        if !(1e-290..0.5).contains(&u_min) {
            return Err(Error::InvalidParameters(format!(
                "u_min must lie in [1e-290, 0.5), got {u_min}"
            )));
        }
        if !(0.0 < rho && rho < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "grading ratio must lie in (0, 1), got {rho}"
            )));
        }
        let panels = ((u_min.ln() / rho.ln()).ceil() as usize).max(2);
        let (t, wt) = gauss_legendre(per_panel);
        let mut ell_nodes = Vec::with_capacity(panels * per_panel);
        let mut u_nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        let mut hi = 1.0;
        for _ in 0..panels {
            let lo = (hi * rho).max(u_min);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (x, w) in t.iter().zip(&wt) {
                let u = mid + half * x;
                ell_nodes.push(1.0 / u - 1.0);
                u_nodes.push(u);
                // The substitution factor dl = du/u^2 reaches ~1e580 at the
                // deepest panels, so it cannot be folded into the stored
                // weight; integrate_phi applies it as two 1/u factors.
                weights.push(half * w);
            }
            hi = lo;
            if hi <= u_min {
                break;
            }
        }
        Ok(LogSingularRule {
            ell_nodes,
            u_nodes,
            weights,
            b,
            u_min,
            rho,
            per_panel,
        })
    }

    /// Outer endpoint `b` of the underlying radial interval.
    pub fn outer(&self) -> f64 {
        self.b
    }

    /// Nodes in the variable `l = log(b/r)`.
    pub fn ell_nodes(&self) -> &[f64] {
        &self.ell_nodes
    }

    /// Integrates `int_0^b phi(log(b/r)) dr/r = int_0^inf phi(l) dl`.
    ///
    /// The grouping `(phi/u) * (w/u)` keeps every intermediate
    /// representable: `w/u` is of order the panel's relative width, and
    /// `phi(l)/u ~ phi(l) * l` stays bounded whenever `phi` decays fast
    /// enough to be integrable.
    pub fn integrate_phi(&self, mut phi: impl FnMut(f64) -> f64) -> f64 {
        let vals: Vec<f64> = self
            .ell_nodes
            .iter()
            .zip(&self.u_nodes)
            .zip(&self.weights)
            .map(|((&l, &u), &w)| {
                let v = phi(l);
                if v == 0.0 {
                    0.0
                } else {
                    let inv = 1.0 / u;
                    (v * inv) * (w * inv)
                }
            })
            .collect();
        pairwise_sum(&vals)
    }

    /// Same rule with twice the nodes per panel.
    pub fn refine(&self) -> LogSingularRule {
        LogSingularRule::new(self.b, self.u_min, self.rho, 2 * self.per_panel)
            .expect("valid refinement")
    }
}

/// Surface area of the Euclidean unit sphere `S^{n-1}` in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 1);
    // A_1 = 2 (two points), A_2 = 2 pi, A_n = 2 pi A_{n-2} / (n - 2).
    match n {
        1 => 2.0,
        2 => std::f64::consts::TAU,
        _ => std::f64::consts::TAU * sphere_area(n - 2) / (n - 2) as f64,
    }
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

/// Quadrature over the Euclidean unit sphere `S^{dim-1}`.
///
/// Directions are unit vectors; weights sum to the sphere area. Product
/// rules cover `dim` 2 to 4; higher dimensions use the seeded Monte Carlo
/// constructor.
#[derive(Debug, Clone)]
pub struct AngularRule {
    dirs: Vec<f64>,
    weights: Vec<f64>,
    dim: usize,
    resolution: usize,
    mc_seed: Option<u64>,
}

impl AngularRule {
    /// Number of directions.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when the rule is empty (never for constructed rules).
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `i`-th unit direction.
    pub fn dir(&self, i: usize) -> &[f64] {
        &self.dirs[i * self.dim..(i + 1) * self.dim]
    }

    /// Weight of the `i`-th direction.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Sum of all weights (the sphere area for exact rules).
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Integrates `f` over the sphere by pairwise summation.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let vals: Vec<f64> = (0..self.len())
            .map(|i| self.weights[i] * f(self.dir(i)))
            .collect();
        pairwise_sum(&vals)
    }

    /// Product rule with doubled resolution (Monte Carlo rules double the
    /// sample count deterministically, keeping the same seed).
    pub fn refine(&self) -> AngularRule {
        match self.mc_seed {
            Some(seed) => {
                angular_rule_mc(self.dim, 2 * self.resolution, seed).expect("valid refinement")
            }
            None => angular_rule(self.dim, 2 * self.resolution).expect("valid refinement"),
        }
    }
}

/// Product rule on `S^{dim-1}`.
///
/// `resolution` seeds all factors: `dim == 2` uses `resolution` midpoint
/// angles; `dim == 3` uses `resolution/2` Gauss-Legendre nodes in the polar
/// cosine times `resolution` azimuthal midpoints; `dim == 4` uses
/// `resolution/4` nodes in each polar angle and `resolution/2` azimuthal
/// midpoints. Higher dimensions have no product rule here; use
/// [`angular_rule_mc`].
pub fn angular_rule(dim: usize, resolution: usize) -> Result<AngularRule> {
    if resolution < 4 {
        return Err(Error::InvalidParameters(
            "angular resolution must be at least 4".into(),
        ));
    }
    match dim {
        2 => {
            let m = resolution;
            let mut dirs = Vec::with_capacity(2 * m);
            let mut weights = Vec::with_capacity(m);
            let w = std::f64::consts::TAU / m as f64;
            for j in 0..m {
                let th = std::f64::consts::TAU * (j as f64 + 0.5) / m as f64;
                dirs.push(th.cos());
                dirs.push(th.sin());
                weights.push(w);
            }
            Ok(AngularRule {
                dirs,
                weights,
                dim,
                resolution,
                mc_seed: None,
            })
        }
        3 => {
            let n_pol = (resolution / 2).max(4);
            let n_az = resolution;
            let (cz, wz) = gauss_legendre(n_pol);
            let waz = std::f64::consts::TAU / n_az as f64;
            let mut dirs = Vec::with_capacity(3 * n_pol * n_az);
            let mut weights = Vec::with_capacity(n_pol * n_az);
            for (c, wp) in cz.iter().zip(&wz) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..n_az {
                    let ph = std::f64::consts::TAU * (j as f64 + 0.5) / n_az as f64;
                    dirs.push(s * ph.cos());
                    dirs.push(s * ph.sin());
                    dirs.push(*c);
                    weights.push(wp * waz);
                }
            }
            Ok(AngularRule {
                dirs,
                weights,
                dim,
                resolution,
                mc_seed: None,
            })
        }
        4 => {
            // Coordinates (sin t1 sin t2 cos p, sin t1 sin t2 sin p,
            // sin t1 cos t2, cos t1); measure sin^2(t1) sin(t2) dt1 dt2 dp.
            // The t1 integrand is trigonometric rather than polynomial, so
            // keep enough nodes for machine accuracy even at the lowest
            // resolutions.
            let n1 = (resolution / 4).max(16);
            let n2 = (resolution / 4).max(4);
            let n3 = (resolution / 2).max(4);
            let (x1, w1) = gauss_legendre(n1);
            let (c2, w2) = gauss_legendre(n2);
            let w3 = std::f64::consts::TAU / n3 as f64;
            let mut dirs = Vec::with_capacity(4 * n1 * n2 * n3);
            let mut weights = Vec::with_capacity(n1 * n2 * n3);
            for (t, wa) in x1.iter().zip(&w1) {
                // Map Gauss-Legendre nodes on (-1,1) to t1 in (0, pi).
                let t1 = 0.5 * std::f64::consts::PI * (t + 1.0);
                let (s1, c1) = t1.sin_cos();
                let jac1 = 0.5 * std::f64::consts::PI * s1 * s1;
                for (c, wb) in c2.iter().zip(&w2) {
                    let s2 = (1.0 - c * c).max(0.0).sqrt();
                    for j in 0..n3 {
                        let ph = std::f64::consts::TAU * (j as f64 + 0.5) / n3 as f64;
                        dirs.push(s1 * s2 * ph.cos());
                        dirs.push(s1 * s2 * ph.sin());
                        dirs.push(s1 * c);
                        dirs.push(c1);
                        weights.push(wa * jac1 * wb * w3);
                    }
                }
            }
            Ok(AngularRule {
                dirs,
                weights,
                dim,
                resolution,
                mc_seed: None,
            })
        }
        _ => Err(Error::UnsupportedDimension(
            dim,
            "product angular rules cover dimensions 2-4; use angular_rule_mc",
        )),
    }
}

/// Seeded Monte Carlo rule on `S^{dim-1}` for dimensions above 4.
///
/// Directions are normalized Gaussian samples from a counter-seeded ChaCha
/// stream; equal weights sum to the sphere area. Identical `(dim, samples,
/// seed)` reproduce identical rules.
pub fn angular_rule_mc(dim: usize, samples: usize, seed: u64) -> Result<AngularRule> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim, "need dim >= 2"));
    }
    if samples == 0 {
        return Err(Error::InvalidParameters("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs = Vec::with_capacity(dim * samples);
    let weights = vec![sphere_area(dim) / samples as f64; samples];
    let mut v = vec![0.0; dim];
    for _ in 0..samples {
        loop {
            let mut norm2 = 0.0;
            for x in v.iter_mut() {
                *x = gaussian(&mut rng);
                norm2 += *x * *x;
            }
            if norm2 > 1e-12 {
                let inv = norm2.sqrt().recip();
                dirs.extend(v.iter().map(|x| x * inv));
                break;
            }
        }
    }
    Ok(AngularRule {
        dirs,
        weights,
        dim,
        resolution: samples,
        mc_seed: Some(seed),
    })
}

/// One standard Gaussian draw via Box-Muller.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}
