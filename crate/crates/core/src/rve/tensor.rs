//! Pre-computed RVE response for permeabilities of the form λ₀ κ_r(p).

use super::{assemble_pinned, RveSolution, RveSolverSettings};
use crate::error::{Error, Result};
use crate::geometry::{DualNetwork, Mat3, Vec3};

/// Λ and the unit-gradient solutions it was collected from.
#[derive(Debug, Clone)]
pub struct EffectiveTensor {
    /// Symmetrized tensor; rows/columns beyond `n_dim` are zero.
    pub lambda: Mat3,
    pub n_dim: usize,
    /// Solution for a = î, i < n_dim.
    pub unit_solutions: Vec<RveSolution>,
    /// ‖Λ − Λᵀ‖/‖Λ‖ before symmetrization.
    pub asymmetry: f64,
}

impl EffectiveTensor {
    /// Isotropic tensor λ 𝟙 without stored fields (Voronoi networks with
    /// uniform λ₀, where the fluctuation field vanishes).
    pub fn isotropic(lambda: f64, n_dim: usize) -> Self {
        let mut m = Mat3::zeros();
        for i in 0..n_dim {
            m[(i, i)] = lambda;
        }
        EffectiveTensor {
            lambda: m,
            n_dim,
            unit_solutions: Vec::new(),
            asymmetry: 0.0,
        }
    }

    pub fn quadratic(&self, a: &Vec3, b: &Vec3) -> f64 {
        a.dot(&(self.lambda * b))
    }
}

/// Applies the unit gradients î and collects Λ column i = −f_i, using
/// `lambda0` per element and the given pinned node.
pub fn effective_tensor(
    network: &DualNetwork,
    lambda0: &[f64],
    pinned_node: usize,
    settings: &RveSolverSettings,
) -> Result<EffectiveTensor> {
    let system = assemble_pinned(network, lambda0, pinned_node, settings)?;
    let n_dim = network.n_dim;
    let mut raw = Mat3::zeros();
    let mut unit_solutions = Vec::with_capacity(n_dim);
    for i in 0..n_dim {
        let mut a = Vec3::zeros();
        a[i] = 1.0;
        let sol = system.solve_eigen_gradient(&a)?;
        for r in 0..n_dim {
            raw[(r, i)] = -sol.f[r];
        }
        unit_solutions.push(sol);
    }
    let norm = raw.norm();
    let asymmetry = if norm > 0.0 {
        (raw - raw.transpose()).norm() / norm
    } else {
        0.0
    };
    if asymmetry > 1e-6 {
        return Err(Error::AsymmetricTensor { asymmetry });
    }
    Ok(EffectiveTensor {
        lambda: (raw + raw.transpose()) * 0.5,
        n_dim,
        unit_solutions,
        asymmetry,
    })
}

/// f = −κ_r Λ a.
pub fn fast_response(tensor: &EffectiveTensor, kappa_r: f64, a: &Vec3) -> Vec3 {
    -(tensor.lambda * a) * kappa_r
}

/// Fields reconstructed by superposition of the unit solutions: p¹ and g⁰ are
/// linear in `a`, j⁰ additionally carries κ_r.
pub fn fast_fields(tensor: &EffectiveTensor, kappa_r: f64, a: &Vec3) -> Option<RveSolution> {
    let first = tensor.unit_solutions.first()?;
    let mut p1 = vec![0.0; first.p1.len()];
    let mut g0 = vec![0.0; first.g0.len()];
    let mut j0 = vec![0.0; first.j0.len()];
    for (i, sol) in tensor.unit_solutions.iter().enumerate() {
        for (x, y) in p1.iter_mut().zip(&sol.p1) {
            *x += a[i] * y;
        }
        for (x, y) in g0.iter_mut().zip(&sol.g0) {
            *x += a[i] * y;
        }
        for (x, y) in j0.iter_mut().zip(&sol.j0) {
            *x += kappa_r * a[i] * y;
        }
    }
    Some(RveSolution {
        p1,
        g0,
        j0,
        f: fast_response(tensor, kappa_r, a),
    })
}
