//! Small dense-vector helpers shared across the crate.
//!
//! Dimensions are tiny (2 to 5), so plain slices beat matrix types for the
//! hot loops; `nalgebra` is reserved for factorizations and eigensolves.

/// Dot product of two equal-length slices.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Max-norm.
#[inline]
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `a - b` as a new vector.
#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b` as a new vector.
#[inline]
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// `s * a` as a new vector.
#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| s * x).collect()
}

/// Normalizes `a` to unit Euclidean length in place; returns the old norm.
#[inline]
pub fn normalize(a: &mut [f64]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Sums `xs` by pairwise (tree) reduction.
///
/// The reduction tree depends only on the length, so the result is bitwise
/// reproducible for a fixed input regardless of how the values were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_sequential_on_smooth_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let seq: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - seq).abs() < 1e-10);
    }

    #[test]
    fn pairwise_is_deterministic() {
        let xs: Vec<f64> = (0..4097).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum(&xs);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn vector_helpers() {
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, -1.0, 0.5];
        assert_eq!(dot(&a, &b), 4.0 - 2.0 + 1.5);
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert_eq!(norm_inf(&b), 4.0);
        assert_eq!(sub(&a, &b), vec![-3.0, 3.0, 2.5]);
        assert_eq!(add_scaled(&a, 2.0, &b), vec![9.0, 0.0, 4.0]);
        let mut u = [0.0, 5.0];
        assert_eq!(normalize(&mut u), 5.0);
        assert_eq!(u, [0.0, 1.0]);
    }
}
