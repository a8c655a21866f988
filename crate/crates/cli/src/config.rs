//! Configuration loading, validation, and hashing for experiment runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anisohardy::distance::{Domain, DomainShape};
use anisohardy::gauge::Gauge;
use anisohardy::hardy::EvalOptions;
use anisohardy::sharpness;
use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Raw on-disk form; every field optional except the gauge.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    suite: Option<String>,
    seed: Option<u64>,
    gauge: RawGauge,
    domain: Option<RawDomain>,
    params: Option<RawParams>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGauge {
    family: String,
    dimension: usize,
    q: Option<f64>,
    weights: Option<Vec<f64>>,
    matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    kind: String,
    radius: Option<f64>,
    normal: Option<Vec<f64>>,
    offset: Option<f64>,
    lo: Option<Vec<f64>>,
    hi: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    p_grid: Option<Vec<f64>>,
    critical_radius: Option<f64>,
    weight_exponents: Option<Vec<f64>>,
    lambda_grid: Option<Vec<f64>>,
    interior_fractions: Option<Vec<f64>>,
    boundary_fractions: Option<Vec<f64>>,
    resolution: Option<RawResolution>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResolution {
    angular: Option<usize>,
    nodes_per_panel: Option<usize>,
    box_nodes_per_panel: Option<usize>,
    mc_samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

/// Gauge families constructible from configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeSpec {
    Euclidean,
    Ellipsoidal { matrix: Vec<Vec<f64>> },
    WeightedPower { q: f64, weights: Vec<f64> },
}

/// Domain shapes constructible from configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Halfspace { normal: Vec<f64>, offset: f64 },
    WulffBall { radius: f64 },
    Cube { lo: Vec<f64>, hi: Vec<f64> },
}

/// Numerical parameters after defaulting and validation.
#[derive(Debug, Clone)]
pub struct Params {
    pub p_grid: Vec<f64>,
    pub critical_radius: f64,
    pub weight_exponents: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub interior_fractions: Vec<f64>,
    pub boundary_fractions: Vec<f64>,
    pub angular: usize,
    pub nodes_per_panel: usize,
    pub box_nodes_per_panel: usize,
    pub mc_samples: usize,
}

/// A fully validated experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub suite: String,
    pub seed: u64,
    pub dimension: usize,
    pub gauge: GaugeSpec,
    pub domain: DomainSpec,
    pub params: Params,
    pub out_dir: PathBuf,
}

/// Suites in their fixed execution order.
pub const SUITE_ORDER: [&str; 8] = [
    "identities",
    "subcritical",
    "critical",
    "geometric",
    "weighted",
    "uncertainty",
    "sharpness",
    "transform",
];

fn known_suite(name: &str) -> bool {
    name == "all" || SUITE_ORDER.contains(&name)
}

impl ExperimentConfig {
    /// Loads and validates a configuration file.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::from_toml_str(&text)
    }

    /// Parses and validates a configuration document.
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let raw: RawConfig = toml::from_str(text).context("config parse error")?;
        let suite = raw.suite.unwrap_or_else(|| "all".to_string());
        if !known_suite(&suite) {
            bail!(
                "unknown suite {suite:?}; expected one of all, {}",
                SUITE_ORDER.join(", ")
            );
        }
        let dim = raw.gauge.dimension;
        if !(2..=4).contains(&dim) {
            bail!("gauge.dimension must be 2, 3, or 4, got {dim}");
        }

        let gauge = validate_gauge(&raw.gauge)?;
        let domain = validate_domain(raw.domain.as_ref(), dim)?;
        let params = validate_params(raw.params.as_ref(), dim)?;
        let out_dir = raw
            .output
            .and_then(|o| o.dir)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"));

        Ok(ExperimentConfig {
            suite,
            seed: raw.seed.unwrap_or(7),
            dimension: dim,
            gauge,
            domain,
            params,
            out_dir,
        })
    }

    /// Applies command-line overrides (flags win over file values).
    pub fn apply_overrides(
        &mut self,
        suite: Option<&str>,
        out: Option<&Path>,
        seed: Option<u64>,
    ) -> Result<()> {
        if let Some(s) = suite {
            if !known_suite(s) {
                bail!(
                    "unknown suite {s:?}; expected one of all, {}",
                    SUITE_ORDER.join(", ")
                );
            }
            self.suite = s.to_string();
        }
        if let Some(dir) = out {
            self.out_dir = dir.to_path_buf();
        }
        if let Some(k) = seed {
            self.seed = k;
        }
        Ok(())
    }

    /// Builds the configured gauge.
    pub fn build_gauge(&self) -> Result<Gauge> {
        let g = match &self.gauge {
            GaugeSpec::Euclidean => Gauge::euclidean(self.dimension)?,
            GaugeSpec::Ellipsoidal { matrix } => {
                let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
                Gauge::ellipsoidal(
                    self.dimension,
                    DMatrix::from_row_slice(self.dimension, self.dimension, &flat),
                )?
            }
            GaugeSpec::WeightedPower { q, weights } => {
                Gauge::weighted_lq(self.dimension, *q, weights.clone())?
            }
        };
        Ok(g)
    }

    /// Builds the configured domain over the configured gauge.
    pub fn build_domain(&self) -> Result<Domain> {
        let gauge = self.build_gauge()?;
        let shape = match &self.domain {
            DomainSpec::Halfspace { normal, offset } => DomainShape::Halfspace {
                normal: normal.clone(),
                offset: *offset,
            },
            DomainSpec::WulffBall { radius } => DomainShape::WulffBall { radius: *radius },
            DomainSpec::Cube { lo, hi } => DomainShape::Cube {
                lo: lo.clone(),
                hi: hi.clone(),
            },
        };
        Ok(Domain::new(shape, gauge)?)
    }

    /// Evaluator options derived from the resolution parameters.
    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            angular_resolution: self.params.angular,
            nodes_per_panel: self.params.nodes_per_panel,
            box_nodes_per_panel: self.params.box_nodes_per_panel,
            mc_samples: self.params.mc_samples,
            seed: self.seed,
        }
    }

    /// Hash of every semantically meaningful field (output paths excluded).
    pub fn hash(&self) -> String {
        let mut canon = String::new();
        let _ = write!(canon, "suite={};seed={};dim={};", self.suite, self.seed, self.dimension);
        match &self.gauge {
            GaugeSpec::Euclidean => canon.push_str("gauge=euclidean;"),
            GaugeSpec::Ellipsoidal { matrix } => {
                canon.push_str("gauge=ellipsoidal;matrix=");
                for row in matrix {
                    for v in row {
                        let _ = write!(canon, "{v:.17e},");
                    }
                }
                canon.push(';');
            }
            GaugeSpec::WeightedPower { q, weights } => {
                let _ = write!(canon, "gauge=weighted-power;q={q:.17e};weights=");
                for v in weights {
                    let _ = write!(canon, "{v:.17e},");
                }
                canon.push(';');
            }
        }
        match &self.domain {
            DomainSpec::Halfspace { normal, offset } => {
                let _ = write!(canon, "domain=halfspace;offset={offset:.17e};normal=");
                for v in normal {
                    let _ = write!(canon, "{v:.17e},");
                }
                canon.push(';');
            }
            DomainSpec::WulffBall { radius } => {
                let _ = write!(canon, "domain=wulff-ball;radius={radius:.17e};");
            }
            DomainSpec::Cube { lo, hi } => {
                canon.push_str("domain=cube;bounds=");
                for v in lo.iter().chain(hi) {
                    let _ = write!(canon, "{v:.17e},");
                }
                canon.push(';');
            }
        }
        let p = &self.params;
        for (label, list) in [
            ("p_grid", &p.p_grid),
            ("weight_exponents", &p.weight_exponents),
            ("lambda_grid", &p.lambda_grid),
            ("interior_fractions", &p.interior_fractions),
            ("boundary_fractions", &p.boundary_fractions),
        ] {
            let _ = write!(canon, "{label}=");
            for v in list {
                let _ = write!(canon, "{v:.17e},");
            }
            canon.push(';');
        }
        let _ = write!(
            canon,
            "critical_radius={:.17e};angular={};nodes={};box_nodes={};mc={};",
            p.critical_radius, p.angular, p.nodes_per_panel, p.box_nodes_per_panel, p.mc_samples
        );
        let digest = Sha256::digest(canon.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}

fn validate_gauge(raw: &RawGauge) -> Result<GaugeSpec> {
    let dim = raw.dimension;
    match raw.family.as_str() {
        "euclidean" => Ok(GaugeSpec::Euclidean),
        "ellipsoidal" => {
            let matrix = raw
                .matrix
                .clone()
                .context("gauge.matrix is required for the ellipsoidal family")?;
            if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
                bail!("gauge.matrix must be {dim}x{dim}");
            }
            let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
            let m = DMatrix::from_row_slice(dim, dim, &flat);
            if (&m - m.transpose()).amax() > 1e-12 {
                bail!("gauge.matrix must be symmetric");
            }
            if m.clone().cholesky().is_none() {
                bail!("gauge.matrix must be positive definite");
            }
            Ok(GaugeSpec::Ellipsoidal { matrix })
        }
        "weighted-power" => {
            let q = raw
                .q
                .context("gauge.q is required for the weighted-power family")?;
            if !(q.is_finite() && q > 1.0) {
                bail!("gauge.q must be finite and > 1, got {q}");
            }
            let weights = raw.weights.clone().unwrap_or_else(|| vec![1.0; dim]);
            if weights.len() != dim {
                bail!("gauge.weights must have {dim} entries");
            }
            if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
                bail!("gauge.weights must all be positive");
            }
            Ok(GaugeSpec::WeightedPower { q, weights })
        }
        other => bail!(
            "unknown gauge.family {other:?}; expected euclidean, ellipsoidal, or weighted-power"
        ),
    }
}

fn validate_domain(raw: Option<&RawDomain>, dim: usize) -> Result<DomainSpec> {
    let Some(raw) = raw else {
        let mut normal = vec![0.0; dim];
        normal[dim - 1] = 1.0;
        return Ok(DomainSpec::Halfspace {
            normal,
            offset: 0.0,
        });
    };
    match raw.kind.as_str() {
        "halfspace" => {
            let normal = raw.normal.clone().unwrap_or_else(|| {
                let mut n = vec![0.0; dim];
                n[dim - 1] = 1.0;
                n
            });
            if normal.len() != dim {
                bail!("domain.normal must have {dim} entries");
            }
            if normal.iter().all(|&v| v == 0.0) {
                bail!("domain.normal must be nonzero");
            }
            Ok(DomainSpec::Halfspace {
                normal,
                offset: raw.offset.unwrap_or(0.0),
            })
        }
        "wulff-ball" => {
            let radius = raw.radius.unwrap_or(1.0);
            if !(radius.is_finite() && radius > 0.0) {
                bail!("domain.radius must be positive, got {radius}");
            }
            Ok(DomainSpec::WulffBall { radius })
        }
        "cube" => {
            let lo = raw.lo.clone().unwrap_or_else(|| vec![-1.0; dim]);
            let hi = raw.hi.clone().unwrap_or_else(|| vec![1.0; dim]);
            if lo.len() != dim || hi.len() != dim {
                bail!("domain.lo and domain.hi must have {dim} entries");
            }
            if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
                bail!("domain.lo must be strictly below domain.hi in every axis");
            }
            Ok(DomainSpec::Cube { lo, hi })
        }
        other => bail!(
            "unknown domain.kind {other:?}; expected halfspace, wulff-ball, or cube"
        ),
    }
}

fn validate_params(raw: Option<&RawParams>, _dim: usize) -> Result<Params> {
    let mut p = Params {
        p_grid: vec![1.0, 1.5, 2.0, 4.0],
        critical_radius: 8.0,
        weight_exponents: vec![-0.3, 0.0, 1.0],
        lambda_grid: vec![0.25, 0.5, 2.0, 4.0],
        interior_fractions: sharpness::interior_fractions(),
        boundary_fractions: sharpness::boundary_fractions(),
        angular: 0,
        nodes_per_panel: 12,
        box_nodes_per_panel: 8,
        mc_samples: 30_000,
    };
    let Some(raw) = raw else {
        return Ok(p);
    };
    if let Some(g) = &raw.p_grid {
        if g.is_empty() || g.iter().any(|&v| !(v.is_finite() && v >= 1.0)) {
            bail!("params.p_grid entries must all be finite and >= 1");
        }
        p.p_grid = g.clone();
    }
    if let Some(r) = raw.critical_radius {
        // The corpus extends to polar radius 6; the critical weight needs
        // strictly larger outer radius.
        if !(r.is_finite() && r > 6.0) {
            bail!(
                "params.critical_radius must exceed the corpus support radius 6, got {r}"
            );
        }
        p.critical_radius = r;
    }
    // Degenerate pairs with N + a = p are skipped at run time, like p = N
    // in the unweighted suite, so they are not rejected here.
    if let Some(w) = &raw.weight_exponents {
        if w.iter().any(|a| !a.is_finite()) {
            bail!("params.weight_exponents must be finite");
        }
        p.weight_exponents = w.clone();
    }
    if let Some(l) = &raw.lambda_grid {
        if l.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            bail!("params.lambda_grid entries must all be positive");
        }
        p.lambda_grid = l.clone();
    }
    if let Some(f) = &raw.interior_fractions {
        if f.iter().any(|&v| !(0.0 < v && v < 1.0)) {
            bail!("params.interior_fractions must lie strictly between 0 and 1");
        }
        p.interior_fractions = f.clone();
    }
    if let Some(f) = &raw.boundary_fractions {
        if f.iter().any(|&v| !(v.is_finite() && v > 1.0)) {
            bail!("params.boundary_fractions must lie strictly above 1");
        }
        p.boundary_fractions = f.clone();
    }
    if let Some(res) = &raw.resolution {
        if let Some(a) = res.angular {
            if a != 0 && a < 4 {
                bail!("params.resolution.angular must be 0 (automatic) or at least 4");
            }
            p.angular = a;
        }
        if let Some(nn) = res.nodes_per_panel {
            if !(2..=64).contains(&nn) {
                bail!("params.resolution.nodes_per_panel must be between 2 and 64");
            }
            p.nodes_per_panel = nn;
        }
        if let Some(nn) = res.box_nodes_per_panel {
            if !(2..=64).contains(&nn) {
                bail!("params.resolution.box_nodes_per_panel must be between 2 and 64");
            }
            p.box_nodes_per_panel = nn;
        }
        if let Some(mc) = res.mc_samples {
            if mc < 100 {
                bail!("params.resolution.mc_samples must be at least 100");
            }
            p.mc_samples = mc;
        }
    }
    Ok(p)
}
