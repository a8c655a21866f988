//! Gauges (positively homogeneous convex norms) and their polars.
//!
//! A gauge `H` here is an even, 1-homogeneous function on `R^N`, positive
//! and twice differentiable away from the origin, with `H^2` strongly
//! convex. Its polar `H0(x) = sup_{xi != 0} (xi . x) / H(xi)` is again such
//! a gauge, and the pair satisfies a family of exact first- and second-order
//! identities (Euler relations, gradient duality, homogeneity of the
//! derivatives) that [`check_identities`] measures pointwise.
//!
//! Three families carry closed-form values, gradients, Hessians, and duals:
//! Euclidean, ellipsoidal (`sqrt(xi' A xi)` with `A` symmetric positive
//! definite, dual matrix `A^{-1}`), and weighted l^q
//! (`(sum_i a_i |xi_i|^q)^{1/q}` with `q` in `(1, inf)`, dual exponent
//! `q' = q/(q-1)` and dual weights `a_i^{-q'/q}`). A fourth family accepts
//! an arbitrary closure; its polar is computed by constrained maximization
//! (projected ascent with a tangent-space Newton polish), and its
//! derivatives by finite differences.
//!
//! Evaluation is scale-safe: inputs are normalized by their sup norm before
//! the kernel runs, so values at radii near 1e-300 do not underflow inside
//! power sums.

use crate::error::Error;
use crate::linalg::{add_scaled, dot, norm, norm_inf, normalize, scale};
use crate::Result;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Signature for user-supplied gauge kernels.
pub type GaugeFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kernel {
    Euclidean,
    Ellipsoidal {
        a: DMatrix<f64>,
        a_inv: DMatrix<f64>,
        lam_min: f64,
        lam_max: f64,
    },
    WeightedLq {
        q: f64,
        weights: Vec<f64>,
    },
    Custom {
        f: GaugeFn,
        alpha: f64,
        beta: f64,
    },
}

/// An even, 1-homogeneous convex gauge on `R^N`.
#[derive(Clone)]
pub struct Gauge {
    dim: usize,
    kernel: Kernel,
}

impl std::fmt::Debug for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gauge")
            .field("dim", &self.dim)
            .field("family", &self.family())
            .finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(
            dim,
            "gauges are defined for dimension >= 2",
        ));
    }
    Ok(())
}

impl Gauge {
    /// The Euclidean norm.
    pub fn euclidean(dim: usize) -> Result<Gauge> {
        check_dim(dim)?;
        Ok(Gauge {
            dim,
            kernel: Kernel::Euclidean,
        })
    }

    /// The ellipsoidal gauge `sqrt(xi' A xi)`; `a` must be symmetric
    /// positive definite.
    pub fn ellipsoidal(dim: usize, a: DMatrix<f64>) -> Result<Gauge> {
        check_dim(dim)?;
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::InvalidParameters(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                a.nrows(),
                a.ncols()
            )));
        }
        let scale = a.amax();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameters(
                "matrix entries must be finite and not all zero".into(),
            ));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidParameters(format!(
                "matrix is not symmetric (asymmetry {asym:.3e})"
            )));
        }
        let sym = 0.5 * (&a + a.transpose());
        let eig = sym.clone().symmetric_eigen();
        let lam_min = eig.eigenvalues.min();
        let lam_max = eig.eigenvalues.max();
        if lam_min <= 1e-12 * scale {
            return Err(Error::InvalidParameters(format!(
                "matrix is not positive definite (smallest eigenvalue {lam_min:.3e})"
            )));
        }
        let a_inv = sym
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidParameters("matrix is not positive definite".into()))?
            .inverse();
        Ok(Gauge {
            dim,
            kernel: Kernel::Ellipsoidal {
                a: sym,
                a_inv,
                lam_min,
                lam_max,
            },
        })
    }

    /// The weighted l^q gauge `(sum_i a_i |xi_i|^q)^{1/q}`, `q` in
    /// `(1, inf)`, all weights positive.
    pub fn weighted_lq(dim: usize, q: f64, weights: Vec<f64>) -> Result<Gauge> {
        check_dim(dim)?;
        if !(q.is_finite() && q > 1.0) {
            return Err(Error::InvalidParameters(format!(
                "exponent must be finite and > 1, got {q}"
            )));
        }
        if weights.len() != dim {
            return Err(Error::InvalidParameters(format!(
                "{} weights for dimension {dim}",
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidParameters(
                "all weights must be finite and positive".into(),
            ));
        }
        Ok(Gauge {
            dim,
            kernel: Kernel::WeightedLq { q, weights },
        })
    }

    /// A gauge given by an arbitrary 1-homogeneous even closure, together
    /// with Euclidean sandwich constants `alpha |xi| <= f(xi) <= beta |xi|`.
    ///
    /// Derivatives use finite differences and the polar is computed
    /// numerically, so expect a few digits less accuracy than the
    /// closed-form families.
    pub fn custom(dim: usize, f: GaugeFn, alpha: f64, beta: f64) -> Result<Gauge> {
        check_dim(dim)?;
        if !(alpha.is_finite() && beta.is_finite() && 0.0 < alpha && alpha <= beta) {
            return Err(Error::InvalidParameters(format!(
                "sandwich constants must satisfy 0 < alpha <= beta, got ({alpha}, {beta})"
            )));
        }
        // Cheap sanity probes: positivity, scaling, evenness on one ray.
        let mut e1 = vec![0.0; dim];
        e1[0] = 1.0;
        let v1 = f(&e1);
        let e2: Vec<f64> = e1.iter().map(|x| 2.0 * x).collect();
        let v2 = f(&e2);
        let en: Vec<f64> = e1.iter().map(|x| -x).collect();
        let vn = f(&en);
        if !(v1.is_finite() && v1 > 0.0) {
            return Err(Error::InvalidParameters(
                "kernel must be positive on unit vectors".into(),
            ));
        }
        if (v2 / v1 - 2.0).abs() > 1e-6 || (vn / v1 - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameters(
                "kernel fails 1-homogeneity or evenness probes".into(),
            ));
        }
        Ok(Gauge {
            dim,
            kernel: Kernel::Custom { f, alpha, beta },
        })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Family label for reports.
    pub fn family(&self) -> &'static str {
        match &self.kernel {
            Kernel::Euclidean => "euclidean",
            Kernel::Ellipsoidal { .. } => "ellipsoidal",
            Kernel::WeightedLq { .. } => "weighted-lq",
            Kernel::Custom { .. } => "custom",
        }
    }

    /// Euclidean sandwich constants `(alpha, beta)` with
    /// `alpha |xi| <= H(xi) <= beta |xi|`.
    pub fn sandwich(&self) -> (f64, f64) {
        match &self.kernel {
            Kernel::Euclidean => (1.0, 1.0),
            Kernel::Ellipsoidal {
                lam_min, lam_max, ..
            } => (lam_min.sqrt(), lam_max.sqrt()),
            Kernel::WeightedLq { q, weights } => {
                let n = self.dim as f64;
                let wmin = weights.iter().copied().fold(f64::INFINITY, f64::min);
                let wmax = weights.iter().copied().fold(0.0f64, f64::max);
                let cross = n.powf(1.0 / q - 0.5);
                if *q >= 2.0 {
                    (wmin.powf(1.0 / q) * cross, wmax.powf(1.0 / q))
                } else {
                    (wmin.powf(1.0 / q), wmax.powf(1.0 / q) * cross)
                }
            }
            Kernel::Custom { alpha, beta, .. } => (*alpha, *beta),
        }
    }

    fn kernel_value(&self, u: &[f64]) -> f64 {
        match &self.kernel {
            Kernel::Euclidean => norm(u),
            Kernel::Ellipsoidal { a, .. } => {
                let v = DVector::from_column_slice(u);
                (v.dot(&(a * &v))).max(0.0).sqrt()
            }
            Kernel::WeightedLq { q, weights } => {
                let mut s = 0.0;
                for (x, w) in u.iter().zip(weights) {
                    s += w * x.abs().powf(*q);
                }
                s.powf(1.0 / q)
            }
            Kernel::Custom { f, .. } => f(u),
        }
    }

    /// Gauge value; zero exactly at the origin.
    pub fn value(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        let s = norm_inf(xi);
        if s == 0.0 {
            return 0.0;
        }
        let u = scale(xi, 1.0 / s);
        s * self.kernel_value(&u)
    }

    /// Gradient of the gauge; errors at the origin.
    ///
    /// The gradient is 0-homogeneous, so it is evaluated on the sup-norm
    /// rescaled input. Weighted l^q gradients are continuous off the origin
    /// for every admissible `q`.
    pub fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(xi.len(), self.dim);
        let s = norm_inf(xi);
        if s == 0.0 {
            return Err(Error::SingularPoint);
        }
        let u = scale(xi, 1.0 / s);
        match &self.kernel {
            Kernel::Euclidean => {
                let n = norm(&u);
                Ok(scale(&u, 1.0 / n))
            }
            Kernel::Ellipsoidal { a, .. } => {
                let v = DVector::from_column_slice(&u);
                let av = a * &v;
                let h = (v.dot(&av)).max(0.0).sqrt();
                Ok(av.iter().map(|x| x / h).collect())
            }
            Kernel::WeightedLq { q, weights } => {
                let h = self.kernel_value(&u);
                let hq1 = h.powf(1.0 - q);
                Ok(u
                    .iter()
                    .zip(weights)
                    .map(|(&x, &w)| w * signed_power(x, q - 1.0) * hq1)
                    .collect())
            }
            Kernel::Custom { f, .. } => {
                let h = 1e-6;
                let mut g = vec![0.0; self.dim];
                let mut uu = u.clone();
                for i in 0..self.dim {
                    let x0 = uu[i];
                    uu[i] = x0 + h;
                    let fp = f(&uu);
                    uu[i] = x0 - h;
                    let fm = f(&uu);
                    uu[i] = x0;
                    g[i] = (fp - fm) / (2.0 * h);
                }
                Ok(g)
            }
        }
    }

    /// Hessian of the gauge; errors at the origin.
    ///
    /// The Hessian is `(-1)`-homogeneous. For weighted l^q with `q < 2` it
    /// blows up on the coordinate hyperplanes; points within `1e-9` of one
    /// (after rescaling) are rejected.
    pub fn hessian(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        debug_assert_eq!(xi.len(), self.dim);
        let s = norm_inf(xi);
        if s == 0.0 {
            return Err(Error::SingularPoint);
        }
        let u = scale(xi, 1.0 / s);
        let n = self.dim;
        let mut h = match &self.kernel {
            Kernel::Euclidean => {
                let r = norm(&u);
                let mut m = DMatrix::identity(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] -= u[i] * u[j] / (r * r);
                    }
                }
                m / r
            }
            Kernel::Ellipsoidal { a, .. } => {
                let v = DVector::from_column_slice(&u);
                let av = a * &v;
                let hv = (v.dot(&av)).max(0.0).sqrt();
                let mut m = a / hv;
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] -= av[i] * av[j] / (hv * hv * hv);
                    }
                }
                m
            }
            Kernel::WeightedLq { q, weights } => {
                if *q < 2.0 && u.iter().any(|x| x.abs() < 1e-9) {
                    return Err(Error::SingularPoint);
                }
                let hv = self.kernel_value(&u);
                let h1q = hv.powf(1.0 - q);
                let h12q = hv.powf(1.0 - 2.0 * q);
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut v = -weights[i]
                            * weights[j]
                            * signed_power(u[i], q - 1.0)
                            * signed_power(u[j], q - 1.0)
                            * h12q;
                        if i == j {
                            v += weights[i] * u[i].abs().powf(q - 2.0) * h1q;
                        }
                        m[(i, j)] = (q - 1.0) * v;
                    }
                }
                m
            }
            Kernel::Custom { f, .. } => {
                let step = 2e-4;
                let mut m = DMatrix::zeros(n, n);
                let mut uu = u.clone();
                let f00 = f(&uu);
                for i in 0..n {
                    for j in i..n {
                        let (xi0, xj0) = (uu[i], uu[j]);
                        let v = if i == j {
                            uu[i] = xi0 + step;
                            let fp = f(&uu);
                            uu[i] = xi0 - step;
                            let fm = f(&uu);
                            uu[i] = xi0;
                            (fp - 2.0 * f00 + fm) / (step * step)
                        } else {
                            uu[i] = xi0 + step;
                            uu[j] = xj0 + step;
                            let fpp = f(&uu);
                            uu[j] = xj0 - step;
                            let fpm = f(&uu);
                            uu[i] = xi0 - step;
                            let fmm = f(&uu);
                            uu[j] = xj0 + step;
                            let fmp = f(&uu);
                            uu[i] = xi0;
                            uu[j] = xj0;
                            (fpp - fpm - fmp + fmm) / (4.0 * step * step)
                        };
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                m
            }
        };
        h /= s;
        Ok(h)
    }

    /// The polar gauge `H0(x) = sup (xi . x) / H(xi)`.
    pub fn polar(&self) -> PolarGauge {
        match &self.kernel {
            Kernel::Euclidean => PolarGauge {
                inner: PolarInner::Closed(Gauge {
                    dim: self.dim,
                    kernel: Kernel::Euclidean,
                }),
            },
            Kernel::Ellipsoidal {
                a,
                a_inv,
                lam_min,
                lam_max,
            } => PolarGauge {
                inner: PolarInner::Closed(Gauge {
                    dim: self.dim,
                    kernel: Kernel::Ellipsoidal {
                        a: a_inv.clone(),
                        a_inv: a.clone(),
                        lam_min: 1.0 / lam_max,
                        lam_max: 1.0 / lam_min,
                    },
                }),
            },
            Kernel::WeightedLq { q, weights } => {
                let qd = q / (q - 1.0);
                let wd: Vec<f64> = weights.iter().map(|w| w.powf(-qd / q)).collect();
                PolarGauge {
                    inner: PolarInner::Closed(Gauge {
                        dim: self.dim,
                        kernel: Kernel::WeightedLq {
                            q: qd,
                            weights: wd,
                        },
                    }),
                }
            }
            Kernel::Custom { .. } => PolarGauge {
                inner: PolarInner::Numeric(Box::new(self.clone())),
            },
        }
    }
}

/// `|t|^{p} sgn(t)`, continuous for `p > 0`.
fn signed_power(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.abs().powf(p) * t.signum()
    }
}

#[derive(Clone)]
enum PolarInner {
    Closed(Gauge),
    Numeric(Box<Gauge>),
}

/// The polar (dual) of a [`Gauge`].
///
/// For the closed-form families this wraps the dual family; for custom
/// gauges the value is the constrained maximum `sup_{|u|=1} (u . x) / H(u)`
/// computed by projected ascent plus a tangent-space Newton polish, and the
/// gradient follows from the envelope relation `grad H0(x) = u* / H(u*)` at
/// the maximizer.
#[derive(Clone)]
pub struct PolarGauge {
    inner: PolarInner,
}

impl std::fmt::Debug for PolarGauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolarGauge")
            .field("dim", &self.dim())
            .field("route", &match self.inner {
                PolarInner::Closed(_) => "closed-form",
                PolarInner::Numeric(_) => "numeric",
            })
            .finish()
    }
}

impl PolarGauge {
    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match &self.inner {
            PolarInner::Closed(g) => g.dim,
            PolarInner::Numeric(g) => g.dim,
        }
    }

    /// Euclidean sandwich constants for the polar.
    pub fn sandwich(&self) -> (f64, f64) {
        match &self.inner {
            PolarInner::Closed(g) => g.sandwich(),
            PolarInner::Numeric(g) => {
                let (a, b) = g.sandwich();
                (1.0 / b, 1.0 / a)
            }
        }
    }

    /// Polar value; zero exactly at the origin.
    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.inner {
            PolarInner::Closed(g) => g.value(x),
            PolarInner::Numeric(g) => {
                if norm_inf(x) == 0.0 {
                    0.0
                } else {
                    numeric_polar(g, x).0
                }
            }
        }
    }

    /// Gradient of the polar; errors at the origin.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.inner {
            PolarInner::Closed(g) => g.gradient(x),
            PolarInner::Numeric(g) => {
                if norm_inf(x) == 0.0 {
                    return Err(Error::SingularPoint);
                }
                let (_, u) = numeric_polar(g, x);
                let h = g.value(&u);
                Ok(scale(&u, 1.0 / h))
            }
        }
    }

    /// Hessian of the polar; finite differences on the numeric route.
    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        match &self.inner {
            PolarInner::Closed(g) => g.hessian(x),
            PolarInner::Numeric(_) => {
                let n = self.dim();
                let s = norm_inf(x);
                if s == 0.0 {
                    return Err(Error::SingularPoint);
                }
                let h = 1e-5 * s;
                let mut m = DMatrix::zeros(n, n);
                let mut xx = x.to_vec();
                for j in 0..n {
                    let x0 = xx[j];
                    xx[j] = x0 + h;
                    let gp = self.gradient(&xx)?;
                    xx[j] = x0 - h;
                    let gm = self.gradient(&xx)?;
                    xx[j] = x0;
                    for i in 0..n {
                        m[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
                    }
                }
                let sym = 0.5 * (&m + m.transpose());
                Ok(sym)
            }
        }
    }

    /// The polar reinterpreted as a plain gauge (enables taking the polar
    /// of a polar, integrating over its unit ball, and other reuse).
    pub fn as_gauge(&self) -> Gauge {
        match &self.inner {
            PolarInner::Closed(g) => g.clone(),
            PolarInner::Numeric(base) => {
                let base = base.clone();
                let (a, b) = base.sandwich();
                let dim = base.dim;
                let f: GaugeFn = Arc::new(move |x: &[f64]| {
                    if norm_inf(x) == 0.0 {
                        0.0
                    } else {
                        numeric_polar(&base, x).0
                    }
                });
                Gauge::custom(dim, f, 1.0 / b, 1.0 / a).expect("valid derived gauge")
            }
        }
    }
}

/// Maximizes `(u . x) / H(u)` over the unit sphere; returns the value and
/// the maximizer.
fn numeric_polar(base: &Gauge, x: &[f64]) -> (f64, Vec<f64>) {
    let n = base.dim;
    let mut u = x.to_vec();
    normalize(&mut u);
    let xnorm = norm(x);
    let g = |u: &[f64]| dot(u, x) / base.value(u);

    let mut g_best = g(&u);
    // Projected gradient ascent with backtracking.
    for _ in 0..300 {
        let h = base.value(&u);
        let gh = match base.gradient(&u) {
            Ok(v) => v,
            Err(_) => break,
        };
        let ux = dot(&u, x);
        let grad: Vec<f64> = x
            .iter()
            .zip(&gh)
            .map(|(&xi, &gi)| xi / h - ux * gi / (h * h))
            .collect();
        let radial = dot(&grad, &u);
        let tang: Vec<f64> = grad.iter().zip(&u).map(|(&g, &ui)| g - radial * ui).collect();
        let tn = norm(&tang);
        if tn < 1e-13 * xnorm {
            break;
        }
        let mut step = 1.0 / xnorm.max(1e-300);
        let mut improved = false;
        for _ in 0..60 {
            let mut cand = add_scaled(&u, step, &tang);
            normalize(&mut cand);
            let gc = g(&cand);
            if gc > g_best {
                u = cand;
                g_best = gc;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }

    // Newton polish in the tangent space: solve for a critical point of the
    // retracted objective. Quadratic convergence takes the ascent estimate
    // to machine precision in a few steps.
    for _ in 0..6 {
        let h = base.value(&u);
        let (gh, hh) = match (base.gradient(&u), base.hessian(&u)) {
            (Ok(g), Ok(m)) => (g, m),
            _ => break,
        };
        let ux = dot(&u, x);
        let grad: Vec<f64> = x
            .iter()
            .zip(&gh)
            .map(|(&xi, &gi)| xi / h - ux * gi / (h * h))
            .collect();
        // Hessian of (u.x)/H(u).
        let mut hg = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                hg[(i, j)] = -(x[i] * gh[j] + gh[i] * x[j]) / (h * h)
                    - ux * hh[(i, j)] / (h * h)
                    + 2.0 * ux * gh[i] * gh[j] / (h * h * h);
            }
        }
        let q = tangent_basis(&u);
        let mut m = DMatrix::zeros(n - 1, n - 1);
        let radial = dot(&grad, &u);
        for a in 0..n - 1 {
            for b in 0..n - 1 {
                let mut v = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        v += q[a][i] * hg[(i, j)] * q[b][j];
                    }
                }
                if a == b {
                    v -= radial;
                }
                m[(a, b)] = v;
            }
        }
        let rhs = DVector::from_iterator(n - 1, q.iter().map(|qa| -dot(qa, &grad)));
        let w = match m.lu().solve(&rhs) {
            Some(w) => w,
            None => break,
        };
        let mut cand = u.clone();
        for (a, qa) in q.iter().enumerate() {
            for i in 0..n {
                cand[i] += w[a] * qa[i];
            }
        }
        normalize(&mut cand);
        let gc = g(&cand);
        let wn = w.amax();
        if gc.is_finite() && gc >= g_best - 1e-12 * g_best.abs() {
            u = cand;
            g_best = g(&u);
        }
        if wn < 1e-14 {
            break;
        }
    }
    (g_best, u)
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `u`.
fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    // Skip the coordinate most aligned with u to keep Gram-Schmidt stable.
    let skip = u
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != skip) {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        let r = dot(&v, u);
        for (vk, uk) in v.iter_mut().zip(u) {
            *vk -= r * uk;
        }
        for b in &basis {
            let r = dot(&v, b);
            for (vk, bk) in v.iter_mut().zip(b) {
                *vk -= r * bk;
            }
        }
        normalize(&mut v);
        basis.push(v);
    }
    basis
}

/// Worst pointwise violation of each gauge-polar identity over a sample.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// `(identity label, worst relative violation)` pairs.
    pub rows: Vec<(String, f64)>,
}

impl IdentityReport {
    /// Largest violation across all identities.
    pub fn max_violation(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Deterministic sample points in the annulus `0.2 <= |x|_inf <= 1`, spread
/// over several decades of scale.
pub(crate) fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if norm_inf(&v) < 0.2 {
            continue;
        }
        let exp: i32 = rng.gen_range(-2..3);
        pts.push(scale(&v, 10f64.powi(exp)));
    }
    pts
}

/// Measures the first- and second-order gauge-polar identities at `samples`
/// deterministic points and returns the worst relative violation of each.
///
/// The identities covered: the Euler relation for `H` and `H0`; homogeneity
/// of degree 0 for both gradients and degree -1 for both Hessians (at
/// scalings `t` in `{-3, -0.5, 0.25, 2, 1000}`); the unit-level relations
/// `H(grad H0(x)) = 1` and `H0(grad H(xi)) = 1`; the gradient inversion
/// relations `H0(x) gradH(gradH0(x)) = x` and `H(xi) gradH0(gradH(xi)) =
/// xi`; the two-form bound `|xi . x| <= H(xi) H0(x)`; and the Euclidean
/// sandwich.
pub fn check_identities(gauge: &Gauge, samples: usize, seed: u64) -> Result<IdentityReport> {
    let n = gauge.dim();
    let polar = gauge.polar();
    let (alpha, beta) = gauge.sandwich();
    let pts = sample_points(n, samples, seed);
    let scalings = [-3.0, -0.5, 0.25, 2.0, 1000.0];

    let mut euler_h: f64 = 0.0;
    let mut euler_h0: f64 = 0.0;
    let mut grad_homog: f64 = 0.0;
    let mut grad0_homog: f64 = 0.0;
    let mut hess_homog: f64 = 0.0;
    let mut hess0_homog: f64 = 0.0;
    let mut unit_level: f64 = 0.0;
    let mut unit_level_dual: f64 = 0.0;
    let mut inversion: f64 = 0.0;
    let mut inversion_dual: f64 = 0.0;
    let mut two_form: f64 = 0.0;
    let mut sandwich: f64 = 0.0;

    for pair in pts.chunks_exact(2) {
        let (xi, x) = (&pair[0], &pair[1]);
        let h = gauge.value(xi);
        let h0 = polar.value(x);
        let gh = gauge.gradient(xi)?;
        let gh0 = polar.gradient(x)?;

        euler_h = euler_h.max((dot(&gh, xi) - h).abs() / h);
        euler_h0 = euler_h0.max((dot(&gh0, x) - h0).abs() / h0);

        let hess = gauge.hessian(xi)?;
        let hess0 = polar.hessian(x)?;
        let hess_scale = hess.amax().max(1e-300);
        let hess0_scale = hess0.amax().max(1e-300);
        for &t in &scalings {
            let xit = scale(xi, t);
            let xt = scale(x, t);
            let ght = gauge.gradient(&xit)?;
            let gh0t = polar.gradient(&xt)?;
            let sign = t.signum();
            let gref = norm_inf(&gh).max(1e-300);
            let g0ref = norm_inf(&gh0).max(1e-300);
            for i in 0..n {
                grad_homog = grad_homog.max((ght[i] - sign * gh[i]).abs() / gref);
                grad0_homog = grad0_homog.max((gh0t[i] - sign * gh0[i]).abs() / g0ref);
            }
            let hesst = gauge.hessian(&xit)?;
            let hess0t = polar.hessian(&xt)?;
            for i in 0..n {
                for j in 0..n {
                    hess_homog = hess_homog
                        .max((hesst[(i, j)] - hess[(i, j)] / t.abs()).abs() * t.abs() / hess_scale);
                    hess0_homog = hess0_homog.max(
                        (hess0t[(i, j)] - hess0[(i, j)] / t.abs()).abs() * t.abs() / hess0_scale,
                    );
                }
            }
        }

        unit_level = unit_level.max((gauge.value(&gh0) - 1.0).abs());
        unit_level_dual = unit_level_dual.max((polar.value(&gh) - 1.0).abs());

        let ghh0 = gauge.gradient(&gh0)?;
        let xref = norm_inf(x);
        for i in 0..n {
            inversion = inversion.max((h0 * ghh0[i] - x[i]).abs() / xref);
        }
        let gh0h = polar.gradient(&gh)?;
        let xiref = norm_inf(xi);
        for i in 0..n {
            inversion_dual = inversion_dual.max((h * gh0h[i] - xi[i]).abs() / xiref);
        }

        two_form = two_form.max((dot(xi, x).abs() - h * h0).max(0.0) / (h * h0));
        let e = norm(xi);
        sandwich = sandwich
            .max((alpha * e - h).max(0.0) / h)
            .max((h - beta * e).max(0.0) / h);
    }

    Ok(IdentityReport {
        rows: vec![
            ("euler".into(), euler_h),
            ("euler-polar".into(), euler_h0),
            ("gradient-homogeneity".into(), grad_homog),
            ("gradient-homogeneity-polar".into(), grad0_homog),
            ("hessian-homogeneity".into(), hess_homog),
            ("hessian-homogeneity-polar".into(), hess0_homog),
            ("unit-level".into(), unit_level),
            ("unit-level-polar".into(), unit_level_dual),
            ("gradient-inversion".into(), inversion),
            ("gradient-inversion-polar".into(), inversion_dual),
            ("two-form-bound".into(), two_form),
            ("euclidean-sandwich".into(), sandwich),
        ],
    })
}

/// Smallest eigenvalue of `hess(H^2)/2 = gradH gradH' + H hessH` over a
/// deterministic sample; positive values certify strong convexity there.
pub fn convexity_spot_check(gauge: &Gauge, samples: usize, seed: u64) -> Result<f64> {
    let n = gauge.dim();
    let mut min_eig = f64::INFINITY;
    for x in sample_points(n, samples, seed) {
        let h = gauge.value(&x);
        let g = gauge.gradient(&x)?;
        let hess = match gauge.hessian(&x) {
            Ok(m) => m,
            // Weighted l^q with q < 2 is singular on hyperplanes; the
            // sampler almost never lands there, but skip if it does.
            Err(Error::SingularPoint) => continue,
            Err(e) => return Err(e),
        };
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = g[i] * g[j] + h * hess[(i, j)];
            }
        }
        let eig = m.symmetric_eigen();
        min_eig = min_eig.min(eig.eigenvalues.min());
    }
    Ok(min_eig)
}
