//! Inverse-distance interpolation of nodal fields from scattered nodes.

use crate::geometry::Vec3;

/// IDW estimate at `point` from the `k` nearest nodes (power 2). A node
/// coinciding with `point` returns its own value.
pub fn idw(positions: &[Vec3], values: &[f64], point: &Vec3, k: usize) -> f64 {
    let mut near: Vec<(f64, usize)> = positions
        .iter()
        .enumerate()
        .map(|(i, x)| ((x - point).norm_squared(), i))
        .collect();
    let k = k.clamp(1, near.len().max(1));
    if near.len() > k {
        near.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0));
        near.truncate(k);
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &(d2, i) in &near {
        if d2 < 1e-24 {
            return values[i];
        }
        num += values[i] / d2;
        den += 1.0 / d2;
    }
    num / den
}

/// Samples `values` at `n` equally spaced points from `a` to `b`.
pub fn interpolate_line(positions: &[Vec3], values: &[f64], a: &Vec3, b: &Vec3, n: usize, k: usize) -> Vec<(Vec3, f64)> {
    (0..n)
        .map(|s| {
            let t = if n > 1 { s as f64 / (n - 1) as f64 } else { 0.0 };
            let x = a + (b - a) * t;
            (x, idw(positions, values, &x, k))
        })
        .collect()
}
