//! Summation with a fixed order (bit-reproducible) or a rayon reduction.

use nalgebra::Vector3;
use rayon::prelude::*;

/// How reductions over elements are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Sequential, index-ordered; reruns are bit-identical.
    #[default]
    Ordered,
    /// Parallel tree reduction; faster on large networks, last-bit nondeterministic.
    Parallel,
}

pub fn sum_vec3<F>(mode: Summation, n: usize, term: F) -> Vector3<f64>
where
    F: Fn(usize) -> Vector3<f64> + Sync + Send,
{
    match mode {
        Summation::Ordered => (0..n).fold(Vector3::zeros(), |acc, i| acc + term(i)),
        Summation::Parallel => (0..n)
            .into_par_iter()
            .map(term)
            .reduce(Vector3::zeros, |a, b| a + b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| Vector3::new(i as f64, 1.0 / (i + 1) as f64, -(i as f64).sqrt());
        let a = sum_vec3(Summation::Ordered, 1000, f);
        let b = sum_vec3(Summation::Parallel, 1000, f);
        assert!((a - b).norm() <= 1e-12 * a.norm());
        assert_eq!(a, sum_vec3(Summation::Ordered, 1000, f));
    }
}
