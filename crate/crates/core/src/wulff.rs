//! Integration over anisotropic (Wulff) balls `{H0(x) <= R}`.
//!
//! The substitution `x = r theta / H0(theta)` maps `(0, R) x S^{N-1}` onto
//! the ball minus the origin and turns `H0(x)` into exactly `r`, so radial
//! weights and singular profiles evaluate without cancellation:
//!
//! `int_{W_R} f dx = int_S int_0^R f(r theta / H0(theta)) r^{N-1}
//!  H0(theta)^{-N} dr dsigma(theta)`.
//!
//! [`PolarGrid`] caches the polar values `H0(theta)` over an angular rule;
//! [`polar_integrate`] combines it with any radial rule. Summation is
//! pairwise and direction order is fixed, so results are bit-identical
//! across runs and thread counts.

use crate::gauge::PolarGauge;
use crate::linalg::pairwise_sum;
use crate::quadrature::{AngularRule, RadialRule};
use crate::Result;
use crate::error::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Angular rule with cached polar values `H0(theta)`.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    dim: usize,
    dirs: Vec<f64>,
    h0: Vec<f64>,
    weights: Vec<f64>,
}

impl PolarGrid {
    /// Evaluates `H0` on every direction of `rule`.
    pub fn new(polar: &PolarGauge, rule: &AngularRule) -> Result<PolarGrid> {
        if polar.dim() != rule.dim() {
            return Err(Error::InvalidParameters(format!(
                "polar gauge dimension {} != angular rule dimension {}",
                polar.dim(),
                rule.dim()
            )));
        }
        let count = rule.len();
        let dim = rule.dim();
        let mut dirs = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        for i in 0..count {
            dirs.extend_from_slice(rule.dir(i));
            weights.push(rule.weight(i));
        }
        // The numeric polar is costly; parallelize large grids. Order is
        // preserved, so the cached values are independent of thread count.
        let h0: Vec<f64> = if count >= 512 {
            (0..count)
                .into_par_iter()
                .map(|i| polar.value(&dirs[i * dim..(i + 1) * dim]))
                .collect()
        } else {
            (0..count)
                .map(|i| polar.value(&dirs[i * dim..(i + 1) * dim]))
                .collect()
        };
        if h0.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidParameters(
                "polar gauge must be positive on the sphere".into(),
            ));
        }
        Ok(PolarGrid {
            dim,
            dirs,
            h0,
            weights,
        })
    }

    /// Number of directions.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when empty (never for constructed grids).
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

    /// Cached `H0` of the `i`-th direction.
    pub fn h0(&self, i: usize) -> f64 {
        self.h0[i]
    }

    /// Angular weight of the `i`-th direction.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Writes the spatial point with polar radius `r` along direction `i`
    /// into `buf`; at this point `H0` equals `r` up to rounding.
    pub fn point_at(&self, i: usize, r: f64, buf: &mut [f64]) {
        let th = self.dir(i);
        let s = r / self.h0[i];
        for (b, t) in buf.iter_mut().zip(th) {
            *b = s * t;
        }
    }
}

/// Volume of the unit Wulff ball `{H0 <= 1}`, i.e.
/// `(1/N) int_S H0(theta)^{-N} dsigma`.
pub fn wulff_constant(polar: &PolarGauge, rule: &AngularRule) -> Result<f64> {
    let grid = PolarGrid::new(polar, rule)?;
    Ok(wulff_constant_from_grid(&grid))
}

/// [`wulff_constant`] from a prebuilt grid.
pub fn wulff_constant_from_grid(grid: &PolarGrid) -> f64 {
    let n = grid.dim() as f64;
    let vals: Vec<f64> = (0..grid.len())
        .map(|i| grid.weight(i) * grid.h0(i).powf(-n))
        .collect();
    pairwise_sum(&vals) / n
}

/// Anisotropic area normalization: `N` times the unit Wulff ball volume
/// (for the Euclidean gauge this is the sphere area).
pub fn wulff_area_constant(polar: &PolarGauge, rule: &AngularRule) -> Result<f64> {
    Ok(wulff_constant(polar, rule)? * polar.dim() as f64)
}

/// Integrates `f` over the shell `{a <= H0(x) <= b}` fixed by the radial
/// rule's interval.
///
/// `f` receives the spatial point and its polar radius `r = H0(x)` (exact
/// by construction). Directions run in parallel; per-direction results are
/// collected in rule order and pairwise-summed, so the value does not
/// depend on the thread count.
pub fn polar_integrate(
    grid: &PolarGrid,
    radial: &RadialRule,
    f: impl Fn(&[f64], f64) -> f64 + Sync,
) -> f64 {
    let dim = grid.dim();
    let n = dim as f64;
    let per_dir: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let mut x = vec![0.0; dim];
            let jac_dir = grid.weight(i) * grid.h0(i).powf(-n);
            let vals: Vec<f64> = radial
                .nodes()
                .iter()
                .zip(radial.weights())
                .map(|(&r, &wr)| {
                    grid.point_at(i, r, &mut x);
                    wr * r.powf(n - 1.0) * f(&x, r)
                })
                .collect();
            jac_dir * pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&per_dir)
}

/// [`polar_integrate`] with a refinement-based error estimate.
///
/// Returns the base value together with `|radial-refined - base| +
/// |angular-refined - base|`, each refinement doubling its resolution.
pub fn polar_integrate_with_error(
    polar: &PolarGauge,
    rule: &AngularRule,
    radial: &RadialRule,
    f: impl Fn(&[f64], f64) -> f64 + Sync,
) -> Result<(f64, f64)> {
    let grid = PolarGrid::new(polar, rule)?;
    let base = polar_integrate(&grid, radial, &f);
    let fine_r = polar_integrate(&grid, &radial.refine(), &f);
    let grid_fine = PolarGrid::new(polar, &rule.refine())?;
    let fine_a = polar_integrate(&grid_fine, radial, &f);
    Ok((base, (fine_r - base).abs() + (fine_a - base).abs()))
}

/// Monte Carlo volume of `{H0 <= r}` by rejection from the bounding box,
/// deterministic in the seed.
pub fn wulff_volume_mc(polar: &PolarGauge, r: f64, samples: usize, seed: u64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "radius must be positive, got {r}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParameters("need at least one sample".into()));
    }
    let dim = polar.dim();
    // H0(x) >= c |x| with c the lower sandwich constant of the polar, so
    // the ball sits inside the cube of half-side r / c.
    let half = r / polar_lower_bound(polar);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut x = vec![0.0; dim];
    for _ in 0..samples {
        for xi in x.iter_mut() {
            *xi = rng.gen_range(-half..half);
        }
        if polar.value(&x) <= r {
            hits += 1;
        }
    }
    let box_vol = (2.0 * half).powi(dim as i32);
    Ok(box_vol * hits as f64 / samples as f64)
}

/// Lower sandwich constant of the polar: `H0(x) >= c |x|`.
fn polar_lower_bound(polar: &PolarGauge) -> f64 {
    polar.sandwich().0
}
