#![allow(dead_code)]

use discrete_homog::geometry::{build_voronoi_dual, generate_periodic_nuclei, DualNetwork, NucleiOptions, PLANE_THICKNESS};
use discrete_homog::numerics::RandomStream;

/// Periodic Voronoi RVE of edge `size` with uniform λ₀.
pub fn voronoi(seed: u64, size: f64, n_dim: usize, l_min: f64, lambda0: f64) -> DualNetwork {
    let mut cell = [PLANE_THICKNESS; 3];
    for c in cell.iter_mut().take(n_dim) {
        *c = size;
    }
    let mut s = RandomStream::new(seed);
    let nuclei = generate_periodic_nuclei(&cell, n_dim, l_min, &mut s, &NucleiOptions::default()).unwrap();
    build_voronoi_dual(&nuclei, &cell, n_dim, lambda0).unwrap()
}

pub fn lambdas(net: &DualNetwork) -> Vec<f64> {
    net.elements.iter().map(|e| e.lambda0).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
