//! Random sequential addition of Voronoi nuclei in a periodic cell.

use std::collections::HashMap;

use super::Vec3;
use crate::error::{Error, Result};
use crate::numerics::RandomStream;

#[derive(Debug, Clone, Copy)]
pub struct NucleiOptions {
    /// Consecutive rejected candidates after which placement stops.
    pub max_consecutive_rejections: usize,
    /// Accept a single nucleus (otherwise fewer than two is an error).
    pub allow_single: bool,
}

impl Default for NucleiOptions {
    fn default() -> Self {
        NucleiOptions {
            max_consecutive_rejections: 10_000,
            allow_single: false,
        }
    }
}

type Bin = [i64; 3];

struct Grid {
    bins: [i64; 3],
    width: [f64; 3],
    map: HashMap<Bin, Vec<usize>>,
}

impl Grid {
    fn new(cell: &[f64; 3], n_dim: usize, l_min: f64) -> Self {
        let mut bins = [1i64; 3];
        let mut width = [1.0; 3];
        for i in 0..n_dim {
            bins[i] = ((cell[i] / l_min).floor() as i64).max(1);
            width[i] = cell[i] / bins[i] as f64;
        }
        Grid {
            bins,
            width,
            map: HashMap::new(),
        }
    }

    fn bin_of(&self, x: &Vec3, n_dim: usize) -> Bin {
        let mut b = [0i64; 3];
        for i in 0..n_dim {
            b[i] = ((x[i] / self.width[i]).floor() as i64).clamp(0, self.bins[i] - 1);
        }
        b
    }

    /// Bins whose contents may lie within one bin width of `b`.
    fn neighbours(&self, b: Bin, n_dim: usize) -> Vec<Bin> {
        let range = |i: usize| -> Vec<i64> {
            if i >= n_dim {
                return vec![0];
            }
            if self.bins[i] < 3 {
                return (0..self.bins[i]).collect();
            }
            (-1..=1).map(|d| (b[i] + d).rem_euclid(self.bins[i])).collect()
        };
        let mut out = Vec::new();
        for &x in &range(0) {
            for &y in &range(1) {
                for &z in &range(2) {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }
}

/// Places nuclei uniformly at random in `[0, L)^n` with a periodic minimum
/// spacing `l_min`, stopping after `max_consecutive_rejections` misses in a row.
pub fn generate_periodic_nuclei(
    cell: &[f64; 3],
    n_dim: usize,
    l_min: f64,
    stream: &mut RandomStream,
    options: &NucleiOptions,
) -> Result<Vec<Vec3>> {
    if !(n_dim == 2 || n_dim == 3) {
        return Err(Error::InvalidParameter(format!("n_dim must be 2 or 3, got {n_dim}")));
    }
    if !(l_min > 0.0) || cell[..n_dim].iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter(
            "cell lengths and l_min must be positive".into(),
        ));
    }
    let mut grid = Grid::new(cell, n_dim, l_min);
    let mut points: Vec<Vec3> = Vec::new();
    let mut misses = 0;
    let l2 = l_min * l_min;
    while misses < options.max_consecutive_rejections {
        let mut x = Vec3::zeros();
        for i in 0..n_dim {
            x[i] = stream.uniform() * cell[i];
        }
        let b = grid.bin_of(&x, n_dim);
        let clash = grid.neighbours(b, n_dim).iter().any(|nb| {
            grid.map.get(nb).is_some_and(|ids| {
                ids.iter()
                    .any(|&j| super::periodic_delta(&x, &points[j], cell, n_dim).norm_squared() < l2)
            })
        });
        if clash {
            misses += 1;
        } else {
            misses = 0;
            grid.map.entry(b).or_default().push(points.len());
            points.push(x);
        }
    }
    if points.len() < 2 && !options.allow_single {
        return Err(Error::DegenerateCell {
            placed: points.len(),
        });
    }
    Ok(points)
}
