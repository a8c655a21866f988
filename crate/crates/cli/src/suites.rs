//! The verification suites behind `anisohardy run`.
//!
//! Each suite turns one family of checks into [`CheckRow`]s with pinned
//! tolerances; rows are emitted in a fixed order so a run is reproducible
//! byte for byte.

use std::sync::Arc;

use anisohardy::corpus::standard_corpus;
use anisohardy::distance::{
    eigenvalue_lower_bound, superharmonicity_spot_check, Domain, DomainShape,
};
use anisohardy::fields::{lift_radial, RadialProfile, ScalarField};
use anisohardy::gauge::{check_identities, convexity_spot_check, Gauge, PolarGauge};
use anisohardy::hardy::{
    critical_quotient, geometric_quotient, rayleigh_quotient, subcritical_quotient,
    uncertainty_product, weighted_quotient, EvalOptions, QuotientResult,
};
use anisohardy::sharpness::{critical_sweep, halfspace_sweep, subcritical_sweep, SweepResult};
use anisohardy::transform::{
    bridge_identity_check, critical_rescale, pushforward_volume_identity,
    scaling_correspondence_check, subcritical_rescale, RadialPowerMap,
};
use anisohardy::wulff::{wulff_constant_from_grid, wulff_volume_mc, PolarGrid};
use anisohardy::{CheckRow, Error, ExperimentReport, Provenance};
use anyhow::Result;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, SUITE_ORDER};

/// Everything a suite needs, built once per run.
pub struct SuiteContext {
    pub cfg: ExperimentConfig,
    pub gauge: Gauge,
    pub polar: PolarGauge,
    pub domain: Domain,
    pub opts: EvalOptions,
}

impl SuiteContext {
    /// Builds gauge, polar, domain, and evaluation options from a config.
    pub fn new(cfg: ExperimentConfig) -> Result<SuiteContext> {
        let gauge = cfg.build_gauge()?;
        let polar = gauge.polar();
        let domain = cfg.build_domain()?;
        let opts = cfg.eval_options();
        Ok(SuiteContext {
            cfg,
            gauge,
            polar,
            domain,
            opts,
        })
    }
}

/// Runs the selected suite (or all of them, in fixed order).
pub fn run_selected(ctx: &SuiteContext) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(ctx.cfg.hash(), ctx.cfg.seed);
    for name in SUITE_ORDER {
        if ctx.cfg.suite != "all" && ctx.cfg.suite != name {
            continue;
        }
        for row in run_suite(name, ctx)? {
            report.push(row);
        }
    }
    Ok(report)
}

fn run_suite(name: &str, ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    match name {
        "identities" => identities_suite(ctx),
        "subcritical" => subcritical_suite(ctx),
        "critical" => critical_suite(ctx),
        "geometric" => geometric_suite(ctx),
        "weighted" => weighted_suite(ctx),
        "uncertainty" => uncertainty_suite(ctx),
        "sharpness" => sharpness_suite(ctx),
        "transform" => transform_suite(ctx),
        other => unreachable!("suite {other} passed config validation"),
    }
}

/// Name, key parameters, and a one-line description per suite, for `list`.
pub fn catalog() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        (
            "identities",
            "gauge, seed",
            "Gauge-polar duality identities (Euler relations, homogeneity, gradient \
             inversion, unit levels, two-form bound) plus a strong-convexity spot check \
             on reference gauges and the configured one.",
        ),
        (
            "subcritical",
            "gauge, params.p_grid, params.resolution",
            "Whole-space Hardy quotients of the field corpus against the sharp constant \
             |(N-p)/p|^p, including the cone equality witness at p = 1.",
        ),
        (
            "critical",
            "gauge, params.critical_radius, params.resolution",
            "Borderline quotients at p = N with the logarithmic weight on a Wulff ball, \
             against ((N-1)/N)^N.",
        ),
        (
            "geometric",
            "gauge, domain, params.p_grid, params.resolution",
            "Boundary-distance quotients on the configured convex domain against \
             ((p-1)/p)^p, plus distance-function structure: the ball closed form, the \
             eikonal property, superharmonicity of the distance, and the eigenvalue \
             lower bound against a test function.",
        ),
        (
            "weighted",
            "gauge, params.weight_exponents, params.p_grid, params.resolution",
            "Power-weighted quotients against |(N+a-p)/p|^p, with a consistency check \
             that a = 0 reproduces the unweighted quotient through an independent path.",
        ),
        (
            "uncertainty",
            "gauge, params.resolution",
            "The product-form uncertainty inequality (energy times second moment over \
             squared mass) with its Gaussian equality witness.",
        ),
        (
            "sharpness",
            "gauge, params.interior_fractions, params.boundary_fractions",
            "Near-extremal families driving the subcritical, critical, and halfspace \
             quotients down toward their sharp constants; checks positivity, strict gap \
             decay, and closeness of the final member.",
        ),
        (
            "transform",
            "gauge, params.lambda_grid, params.resolution, seed",
            "Anisotropic dilations (Jacobian vs finite differences, volume pushforward \
             with a Monte Carlo cross-check), scaling invariance of the quotients, and \
             the radial bridge between dimensions with its quotient ratio and scaling \
             correspondence.",
        ),
    ]
}

/// Distinguishes "this combination does not apply" from a real failure.
fn skippable(err: &Error) -> bool {
    matches!(err, Error::Inadmissible(_) | Error::ZeroDenominator)
}

fn quotient_or_skip(
    res: anisohardy::Result<QuotientResult>,
) -> Result<Option<QuotientResult>> {
    match res {
        Ok(r) => Ok(Some(r)),
        Err(e) if skippable(&e) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn find_field<'a>(
    corpus: &'a [Arc<dyn ScalarField>],
    prefix: &str,
) -> Result<&'a Arc<dyn ScalarField>> {
    corpus
        .iter()
        .find(|f| f.name().starts_with(prefix))
        .ok_or_else(|| anyhow::anyhow!("corpus is missing the {prefix} field"))
}

/// Reference gauges exercised by the identities suite, plus the configured
/// gauge under a separate tag.
fn identity_gauges(ctx: &SuiteContext) -> Result<Vec<(&'static str, Gauge)>> {
    let dim = ctx.cfg.dimension;
    let mut diag = vec![1.0; dim];
    diag[0] = 4.0;
    Ok(vec![
        ("euclidean", Gauge::euclidean(dim)?),
        (
            "ellipsoidal",
            Gauge::ellipsoidal(dim, DMatrix::from_diagonal(&DVector::from_vec(diag)))?,
        ),
        ("power-3", Gauge::weighted_lq(dim, 3.0, vec![1.0; dim])?),
        ("configured", ctx.gauge.clone()),
    ])
}

fn identities_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (tag, gauge) in identity_gauges(ctx)? {
        let report = check_identities(&gauge, 1000, ctx.cfg.seed)?;
        for (label, violation) in &report.rows {
            rows.push(CheckRow::upper_bound(
                "identities",
                format!("{tag}/{label}"),
                *violation,
                0.0,
                Provenance::Exact,
                1e-8,
                0.0,
            ));
        }
        let min_eig = convexity_spot_check(&gauge, 400, ctx.cfg.seed)?;
        rows.push(CheckRow::lower_bound(
            "identities",
            format!("{tag}/strong-convexity"),
            min_eig,
            0.0,
            Provenance::Exact,
            1e-8,
            0.0,
        ));
    }
    Ok(rows)
}

fn subcritical_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let corpus = standard_corpus(&ctx.polar)?;
    let nf = ctx.cfg.dimension as f64;
    let mut rows = Vec::new();
    for &p in &ctx.cfg.params.p_grid {
        if (p - nf).abs() < 1e-9 {
            continue;
        }
        for field in &corpus {
            if let Some(r) =
                quotient_or_skip(subcritical_quotient(&ctx.gauge, field.as_ref(), p, &ctx.opts))?
            {
                rows.push(CheckRow::lower_bound(
                    "subcritical",
                    format!("p={p}/{}", field.name()),
                    r.quotient,
                    r.sharp_constant,
                    Provenance::ClosedForm,
                    1e-6,
                    r.quad_err,
                ));
            }
        }
    }
    if ctx.cfg.params.p_grid.iter().any(|&p| (p - 1.0).abs() < 1e-12) {
        // The cone attains the p = 1 constant exactly; radial fields make
        // the angular factor cancel, so a light angular rule suffices.
        let cap = find_field(&corpus, "cap")?;
        let fine = EvalOptions {
            angular_resolution: 16,
            nodes_per_panel: 16,
            ..ctx.opts.clone()
        };
        let r = subcritical_quotient(&ctx.gauge, cap.as_ref(), 1.0, &fine)?;
        rows.push(CheckRow::relative(
            "subcritical",
            "p=1/cap-lifted/equality-witness",
            r.quotient,
            nf - 1.0,
            Provenance::ClosedForm,
            1e-8,
            r.quad_err,
        ));
    }
    Ok(rows)
}

fn critical_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let corpus = standard_corpus(&ctx.polar)?;
    let rr = ctx.cfg.params.critical_radius;
    let mut rows = Vec::new();
    for field in &corpus {
        if let Some(r) =
            quotient_or_skip(critical_quotient(&ctx.gauge, field.as_ref(), rr, &ctx.opts))?
        {
            rows.push(CheckRow::lower_bound(
                "critical",
                format!("R={rr}/{}", field.name()),
                r.quotient,
                r.sharp_constant,
                Provenance::ClosedForm,
                1e-6,
                r.quad_err,
            ));
        }
    }
    Ok(rows)
}

/// Rejection-samples interior points that keep clear of the boundary and
/// of the ridge where the distance gradient jumps.
fn sample_interior(domain: &Domain, count: usize, seed: u64, margin: f64) -> Vec<Vec<f64>> {
    let dim = domain.dim();
    let span: f64 = match domain.shape() {
        DomainShape::Halfspace { offset, .. } => offset.abs() + 2.0,
        DomainShape::WulffBall { radius } => 1.5 * radius / domain.polar().sandwich().0,
        DomainShape::Cube { lo, hi } => lo
            .iter()
            .chain(hi)
            .map(|v| v.abs())
            .fold(0.0f64, f64::max),
        _ => 2.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while pts.len() < count && attempts < count * 1000 {
        attempts += 1;
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-span..span)).collect();
        if domain.distance(&x) < margin || domain.ridge_gap(&x) < margin {
            continue;
        }
        pts.push(x);
    }
    pts
}

/// The three model shapes over the configured gauge.
fn model_domains(ctx: &SuiteContext) -> Result<Vec<(&'static str, Domain)>> {
    let dim = ctx.cfg.dimension;
    let mut normal = vec![0.0; dim];
    normal[dim - 1] = 1.0;
    Ok(vec![
        (
            "halfspace",
            Domain::new(
                DomainShape::Halfspace {
                    normal,
                    offset: 0.0,
                },
                ctx.gauge.clone(),
            )?,
        ),
        (
            "wulff-ball",
            Domain::new(DomainShape::WulffBall { radius: 1.0 }, ctx.gauge.clone())?,
        ),
        (
            "cube",
            Domain::new(
                DomainShape::Cube {
                    lo: vec![-1.0; dim],
                    hi: vec![1.0; dim],
                },
                ctx.gauge.clone(),
            )?,
        ),
    ])
}

fn geometric_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let corpus = standard_corpus(&ctx.polar)?;
    let mut rows = Vec::new();

    // Quotients on the configured domain; fields whose support is not
    // strictly inside are skipped.
    for &p in &ctx.cfg.params.p_grid {
        if p <= 1.0 + 1e-12 {
            continue;
        }
        for field in &corpus {
            if let Some(r) =
                quotient_or_skip(geometric_quotient(&ctx.domain, field.as_ref(), p, &ctx.opts))?
            {
                rows.push(CheckRow::lower_bound(
                    "geometric",
                    format!("p={p}/{}", field.name()),
                    r.quotient,
                    r.sharp_constant,
                    Provenance::ClosedForm,
                    1e-6,
                    r.quad_err,
                ));
            }
        }
    }

    let shapes = model_domains(ctx)?;

    // On the ball the distance has a closed form: radius minus the polar.
    let ball = &shapes[1].1;
    let mut worst = 0.0f64;
    for x in sample_interior(ball, 200, ctx.cfg.seed, 1e-3) {
        let closed = 1.0 - ctx.polar.value(&x);
        worst = worst.max((ball.distance(&x) - closed).abs());
    }
    rows.push(CheckRow::upper_bound(
        "geometric",
        "wulff-ball/distance-closed-form",
        worst,
        0.0,
        Provenance::Exact,
        1e-9,
        0.0,
    ));

    // The distance solves the anisotropic eikonal equation off the ridge.
    for (label, dom) in &shapes {
        let mut worst = 0.0f64;
        for x in sample_interior(dom, 60, ctx.cfg.seed + 1, 1e-2) {
            worst = worst.max(dom.eikonal_residual(&x, 1e-5)?);
        }
        rows.push(CheckRow::upper_bound(
            "geometric",
            format!("{label}/eikonal-residual"),
            worst,
            0.0,
            Provenance::Exact,
            1e-6,
            0.0,
        ));
    }

    // Distributional superharmonicity: the flux divergence of the distance
    // is nonpositive, up to finite-difference noise.
    for (label, dom) in &shapes {
        for p in [2.0, 3.0] {
            let min_val = superharmonicity_spot_check(dom, p, 40, ctx.cfg.seed + 2, 1e-3)?;
            rows.push(CheckRow::lower_bound(
                "geometric",
                format!("{label}/superharmonic/p={p}"),
                min_val,
                0.0,
                Provenance::Oracle,
                1e-4,
                0.0,
            ));
        }
    }

    // The in-radius eigenvalue bound must sit below the Rayleigh quotient
    // of any admissible test function; use the parabolic dome.
    let inr = ball.inradius()?;
    let bound = eigenvalue_lower_bound(2.0, inr)?;
    let dome = RadialProfile::new(
        "dome",
        (0.0, 1.0),
        vec![1.0],
        Arc::new(|r: f64| (1.0 - r * r).max(0.0)),
        Arc::new(|r: f64| if r < 1.0 { -2.0 * r } else { 0.0 }),
    )?;
    let lifted = lift_radial(dome, ctx.polar.clone());
    let (rayleigh, qerr) = rayleigh_quotient(ball, &lifted, 2.0, &ctx.opts)?;
    rows.push(CheckRow::upper_bound(
        "geometric",
        "wulff-ball/eigenvalue-bound-vs-rayleigh",
        bound,
        rayleigh,
        Provenance::ClosedForm,
        0.0,
        qerr,
    ));

    Ok(rows)
}

fn weighted_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let corpus = standard_corpus(&ctx.polar)?;
    let nf = ctx.cfg.dimension as f64;
    let mut rows = Vec::new();
    for &a in &ctx.cfg.params.weight_exponents {
        for &p in &ctx.cfg.params.p_grid {
            if (nf + a - p).abs() < 1e-9 {
                continue;
            }
            for field in &corpus {
                if let Some(r) = quotient_or_skip(weighted_quotient(
                    &ctx.gauge,
                    field.as_ref(),
                    p,
                    a,
                    &ctx.opts,
                ))? {
                    rows.push(CheckRow::lower_bound(
                        "weighted",
                        format!("a={a}/p={p}/{}", field.name()),
                        r.quotient,
                        r.sharp_constant,
                        Provenance::ClosedForm,
                        1e-6,
                        r.quad_err,
                    ));
                }
            }
        }
    }

    // Zero weight exponent must reproduce the unweighted quotient even
    // though the two evaluators build their integrands separately.
    if let Some(&p0) = ctx.cfg.params.p_grid.iter().find(|&&p| (p - nf).abs() > 1e-9) {
        let field = find_field(&corpus, "annular-bump")?;
        let w = weighted_quotient(&ctx.gauge, field.as_ref(), p0, 0.0, &ctx.opts)?;
        let s = subcritical_quotient(&ctx.gauge, field.as_ref(), p0, &ctx.opts)?;
        rows.push(CheckRow::relative(
            "weighted",
            format!("a=0/p={p0}/unweighted-consistency"),
            w.quotient,
            s.quotient,
            Provenance::Oracle,
            1e-10,
            w.quad_err.max(s.quad_err),
        ));
    }
    Ok(rows)
}

fn uncertainty_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let corpus = standard_corpus(&ctx.polar)?;
    let mut rows = Vec::new();
    for field in &corpus {
        match uncertainty_product(&ctx.gauge, field.as_ref(), &ctx.opts) {
            Ok(u) => rows.push(CheckRow::lower_bound(
                "uncertainty",
                field.name().to_string(),
                u.ratio,
                1.0,
                Provenance::ClosedForm,
                1e-6,
                u.quad_err,
            )),
            Err(e) if skippable(&e) => {}
            Err(e) => return Err(e.into()),
        }
    }
    // The Gaussian attains the bound in every dimension and for every
    // gauge; evaluate it at higher resolution and demand near-equality.
    let gauss = find_field(&corpus, "gaussian")?;
    let fine = EvalOptions {
        angular_resolution: 48,
        nodes_per_panel: 16,
        ..ctx.opts.clone()
    };
    let u = uncertainty_product(&ctx.gauge, gauss.as_ref(), &fine)?;
    rows.push(CheckRow::absolute(
        "uncertainty",
        "gaussian-lifted/equality-witness",
        u.ratio,
        1.0,
        Provenance::ClosedForm,
        1e-3,
        u.quad_err,
    ));
    Ok(rows)
}

/// One sweep with its display label and the tolerance on the final member.
pub struct NamedSweep {
    pub label: &'static str,
    pub final_tolerance: f64,
    pub result: SweepResult,
}

/// The three sweep families evaluated under the configured fractions.
///
/// The subcritical and critical families are gauge-independent (fixed at
/// dimensions 3 and 2 so their sharp constants are both 1/4); the halfspace
/// family uses the configured gauge where supported.
pub fn sharpness_sweeps(ctx: &SuiteContext) -> Result<Vec<NamedSweep>> {
    let interior = &ctx.cfg.params.interior_fractions;
    let boundary = &ctx.cfg.params.boundary_fractions;
    let sub = subcritical_sweep(3, 2.0, 1.0, interior)?;
    let crit = critical_sweep(2, 1.0, 0.25, interior)?;
    let half_gauge = if (2..=3).contains(&ctx.cfg.dimension) {
        ctx.gauge.clone()
    } else {
        Gauge::euclidean(2)?
    };
    let half = halfspace_sweep(&half_gauge, 1.0, boundary)?;
    Ok(vec![
        NamedSweep {
            label: "subcritical-power",
            final_tolerance: 0.02,
            result: sub,
        },
        NamedSweep {
            label: "critical-log-power",
            final_tolerance: 0.03,
            result: crit,
        },
        NamedSweep {
            label: "halfspace-distance",
            final_tolerance: 0.03,
            result: half,
        },
    ])
}

fn sharpness_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for sweep in sharpness_sweeps(ctx)? {
        let res = &sweep.result;
        for pt in &res.points {
            rows.push(CheckRow::lower_bound(
                "sharpness",
                format!("{}/alpha={:.6}", sweep.label, pt.alpha),
                pt.quotient,
                res.sharp_constant,
                Provenance::ClosedForm,
                0.0,
                0.0,
            ));
        }
        rows.push(CheckRow::absolute(
            "sharpness",
            format!("{}/gaps-strictly-shrinking", sweep.label),
            if res.monotone_gaps() { 1.0 } else { 0.0 },
            1.0,
            Provenance::Exact,
            0.0,
            0.0,
        ));
        let last = res
            .points
            .last()
            .map(|p| p.quotient)
            .unwrap_or(f64::INFINITY);
        rows.push(CheckRow::absolute(
            "sharpness",
            format!("{}/final-quotient", sweep.label),
            last,
            res.sharp_constant,
            Provenance::ClosedForm,
            sweep.final_tolerance,
            0.0,
        ));
    }
    Ok(rows)
}

fn transform_suite(ctx: &SuiteContext) -> Result<Vec<CheckRow>> {
    let dim = ctx.cfg.dimension;
    let corpus = standard_corpus(&ctx.polar)?;
    let mut rows = Vec::new();

    // Jacobian determinant of the dilation against finite differences, and
    // the exact action of its derivative on radial/tangential directions.
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed.wrapping_add(17));
    let mut worst_fd = 0.0f64;
    let mut worst_action = 0.0f64;
    let mut drawn = 0usize;
    while drawn < 100 {
        let c = rng.gen_range(0.4..2.4);
        let a = rng.gen_range(-0.9..3.0);
        let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let r = ctx.polar.value(&y);
        if !(0.4..3.0).contains(&r) {
            continue;
        }
        drawn += 1;
        let map = RadialPowerMap::new(c, a)?;
        let det = map.jacobian_det(&ctx.polar, &y)?;
        let fd = map.jacobian_det_fd(&ctx.polar, &y, 1e-5)?;
        worst_fd = worst_fd.max((det - fd).abs() / det.abs());
        let (rad, tan) = map.eigen_action_residuals(&ctx.polar, &y)?;
        worst_action = worst_action.max(rad).max(tan);
    }
    rows.push(CheckRow::upper_bound(
        "transform",
        "dilation/jacobian-vs-finite-difference",
        worst_fd,
        0.0,
        Provenance::Oracle,
        1e-6,
        0.0,
    ));
    rows.push(CheckRow::upper_bound(
        "transform",
        "dilation/derivative-action-residual",
        worst_action,
        0.0,
        Provenance::Exact,
        1e-8,
        0.0,
    ));

    // Pushing the unit Wulff ball forward through the dilation: the
    // change-of-variables integral against the scaled volume (same grid on
    // both sides, so angular error cancels), then a Monte Carlo volume.
    let grid = PolarGrid::new(&ctx.polar, &ctx.opts.angular(dim)?)?;
    let map = RadialPowerMap::new(1.3, 0.7)?;
    let (lhs, rhs) = pushforward_volume_identity(&grid, &map, 24)?;
    rows.push(CheckRow::relative(
        "transform",
        "dilation/pushforward-volume",
        lhs,
        rhs,
        Provenance::ClosedForm,
        1e-8,
        0.0,
    ));
    let kappa = wulff_constant_from_grid(&grid);
    let mc = wulff_volume_mc(&ctx.polar, 1.3, ctx.cfg.params.mc_samples, ctx.cfg.seed)?;
    let mc_tol = if ctx.cfg.params.mc_samples >= 200_000 {
        0.01
    } else {
        0.03
    };
    rows.push(CheckRow::relative(
        "transform",
        "dilation/pushforward-volume-mc",
        mc,
        kappa * 1.3f64.powi(dim as i32),
        Provenance::Oracle,
        mc_tol,
        0.0,
    ));

    // Scaling invariance of the quotients on a detached corpus field.
    let base_field = find_field(&corpus, "annular-bump")?.clone();
    let p_inv = 1.5;
    let base_sub = subcritical_quotient(&ctx.gauge, base_field.as_ref(), p_inv, &ctx.opts)?;
    for &lambda in &ctx.cfg.params.lambda_grid {
        let scaled = subcritical_rescale(base_field.clone(), p_inv, lambda)?;
        let r = subcritical_quotient(&ctx.gauge, scaled.as_ref(), p_inv, &ctx.opts)?;
        rows.push(CheckRow::relative(
            "transform",
            format!("scaling/subcritical/lambda={lambda}"),
            r.quotient,
            base_sub.quotient,
            Provenance::Exact,
            1e-6,
            r.quad_err.max(base_sub.quad_err),
        ));
    }
    let base_crit = critical_quotient(&ctx.gauge, base_field.as_ref(), 1.0, &ctx.opts)?;
    for &lambda in &ctx.cfg.params.lambda_grid {
        let scaled = critical_rescale(base_field.clone(), &ctx.polar, lambda, 1.0)?;
        let r = critical_quotient(&ctx.gauge, scaled.as_ref(), 1.0, &ctx.opts)?;
        rows.push(CheckRow::relative(
            "transform",
            format!("scaling/critical/lambda={lambda}"),
            r.quotient,
            base_crit.quotient,
            Provenance::Exact,
            1e-6,
            r.quad_err.max(base_crit.quad_err),
        ));
    }

    // The radial bridge between a subcritical problem in dimension m and
    // the critical problem in dimension n.
    for (m, n) in [(3usize, 2usize), (4, 2), (4, 3), (5, 3)] {
        let rep = bridge_identity_check(m, n, 1.0)?;
        rows.push(CheckRow::upper_bound(
            "transform",
            format!("bridge/{m}d-to-{n}d/transport-mismatch"),
            rep.max_rel_err,
            0.0,
            Provenance::Oracle,
            1e-6,
            0.0,
        ));
        rows.push(CheckRow::relative(
            "transform",
            format!("bridge/{m}d-to-{n}d/quotient-ratio"),
            rep.quotient_m,
            rep.map.alpha.powi(n as i32) * rep.quotient_n,
            Provenance::ClosedForm,
            1e-6,
            0.0,
        ));
        for lambda in [0.7, 1.6] {
            let worst = scaling_correspondence_check(m, n, 1.0, lambda, 40)?;
            rows.push(CheckRow::upper_bound(
                "transform",
                format!("bridge/{m}d-to-{n}d/scaling-correspondence/lambda={lambda}"),
                worst,
                0.0,
                Provenance::Exact,
                1e-10,
                0.0,
            ));
        }
    }

    Ok(rows)
}
