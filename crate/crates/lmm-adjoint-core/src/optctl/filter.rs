use alloc::vec::Vec;

use crate::relax::Boundary;

/// Three-point smoother `(u_{i−1} + 2u_i + u_{i+1})/4`.
///
/// Periodic arrays wrap; clamped arrays replicate the end values. Being a
/// convex combination of shifts, it never increases total variation.
pub fn tv_filter(values: &[f64], boundary: Boundary) -> Vec<f64> {
    let n = values.len();
    if n < 2 {
        return values.to_vec();
    }
    (0..n)
        .map(|i| {
            let (left, right) = match boundary {
                Boundary::Periodic => (values[(i + n - 1) % n], values[(i + 1) % n]),
                Boundary::Clamp => (values[i.saturating_sub(1)], values[(i + 1).min(n - 1)]),
            };
            0.25 * (left + 2.0 * values[i] + right)
        })
        .collect()
}

/// `Σ_i |u_{i+1} − u_i|`, including the wrap-around jump for periodic data.
pub fn total_variation(values: &[f64], boundary: Boundary) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    match boundary {
        Boundary::Periodic => inner + (values[0] - values[n - 1]).abs(),
        Boundary::Clamp => inner,
    }
}
