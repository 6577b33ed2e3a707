//! Periodic RVE problem under an eigen-gradient load, macroscopic flux and
//! the pre-computed effective conductivity tensor.

mod tensor;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::geometry::{DualNetwork, Vec3};
use crate::numerics::reduce::sum_vec3;
use crate::numerics::{solve_spd, RandomStream, SparseSymmetric, Summation, Triplets};

pub use tensor::{effective_tensor, fast_fields, fast_response, EffectiveTensor};

#[derive(Debug, Clone, Copy)]
pub struct RveSolverSettings {
    /// Relative residual for conjugate gradients.
    pub tol: f64,
    /// Iteration cap as a multiple of the number of unknowns.
    pub max_iter_factor: usize,
    /// Systems with fewer unknowns are factorized densely.
    pub dense_below: usize,
    pub summation: Summation,
}

impl Default for RveSolverSettings {
    fn default() -> Self {
        RveSolverSettings {
            tol: 1e-12,
            max_iter_factor: 50,
            dense_below: 500,
            summation: Summation::Ordered,
        }
    }
}

enum Factor {
    Dense(Cholesky<f64, Dyn>),
    Iterative(SparseSymmetric),
    /// Single-node network: nothing to solve.
    Empty,
}

/// Assembled RVE operator with one pinned node.
pub struct RveSystem<'a> {
    pub network: &'a DualNetwork,
    /// λ per element.
    pub lambda: Vec<f64>,
    /// Conductance λ S★/h per element.
    pub conductance: Vec<f64>,
    pub pinned_node: usize,
    /// Operator before pinning.
    pub matrix: SparseSymmetric,
    factor: Factor,
    settings: RveSolverSettings,
}

/// Fluctuation field and element quantities for one macroscopic gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct RveSolution {
    /// ηp¹ per node, zero weighted mean (Pa).
    pub p1: Vec<f64>,
    /// g⁰ per element (Pa/m).
    pub g0: Vec<f64>,
    /// j⁰ per element (kg/m²/s).
    pub j0: Vec<f64>,
    /// Macroscopic flux f.
    pub f: Vec3,
}

/// Assembles the RVE operator, pinning a node drawn from `stream`.
pub fn assemble<'a>(
    network: &'a DualNetwork,
    lambda: &[f64],
    stream: &mut RandomStream,
    settings: &RveSolverSettings,
) -> Result<RveSystem<'a>> {
    let pin = stream.index(network.nodes.len().max(1));
    assemble_pinned(network, lambda, pin, settings)
}

/// Assembles the RVE operator with `pinned_node` fixed to zero.
pub fn assemble_pinned<'a>(
    network: &'a DualNetwork,
    lambda: &[f64],
    pinned_node: usize,
    settings: &RveSolverSettings,
) -> Result<RveSystem<'a>> {
    if !network.periodic {
        return Err(Error::InvalidParameter("RVE network must be periodic".into()));
    }
    if lambda.len() != network.elements.len() {
        return Err(Error::InvalidParameter(format!(
            "{} permeabilities for {} elements",
            lambda.len(),
            network.elements.len()
        )));
    }
    let n = network.nodes.len();
    if pinned_node >= n {
        return Err(Error::InvalidParameter(format!("pinned node {pinned_node} out of range")));
    }
    let components = network.components();
    if components.len() > 1 {
        return Err(Error::SingularRve { components });
    }
    let conductance: Vec<f64> = network
        .elements
        .iter()
        .zip(lambda)
        .map(|(e, l)| l * e.shape_factor())
        .collect();
    let mut t = Triplets::with_capacity(n, 4 * network.elements.len() + n);
    for i in 0..n {
        t.add(i, i, 0.0);
    }
    for (e, &k) in network.elements.iter().zip(&conductance) {
        if e.node_p == e.node_q {
            continue;
        }
        t.add(e.node_p, e.node_p, k);
        t.add(e.node_q, e.node_q, k);
        t.add(e.node_p, e.node_q, -k);
        t.add(e.node_q, e.node_p, -k);
    }
    let matrix = SparseSymmetric::new(t.to_csr(true), 1e-12)?;
    let reduced = matrix.without_row_col(pinned_node);
    let factor = if n == 1 {
        Factor::Empty
    } else if reduced.dim() < settings.dense_below {
        let dense: DMatrix<f64> = reduced.csr().to_dense();
        Factor::Dense(Cholesky::new(dense).ok_or_else(|| {
            Error::InvalidParameter("RVE operator is not positive definite".into())
        })?)
    } else {
        Factor::Iterative(reduced)
    };
    Ok(RveSystem {
        network,
        lambda: lambda.to_vec(),
        conductance,
        pinned_node,
        matrix,
        factor,
        settings: *settings,
    })
}

impl RveSystem<'_> {
    /// Load vector Σ λ S★ (a·e_out) per node.
    pub fn load(&self, a: &Vec3) -> Vec<f64> {
        let mut b = vec![0.0; self.network.nodes.len()];
        for (e, l) in self.network.elements.iter().zip(&self.lambda) {
            let v = l * e.projected_area * a.dot(&e.direction);
            b[e.node_p] += v;
            b[e.node_q] -= v;
        }
        b
    }

    fn solve_reduced(&self, b: &[f64]) -> Result<Vec<f64>> {
        let k = self.pinned_node;
        let reduced: Vec<f64> = b
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, &v)| v)
            .collect();
        let x = match &self.factor {
            Factor::Empty => Vec::new(),
            Factor::Dense(chol) => chol.solve(&DVector::from_vec(reduced)).as_slice().to_vec(),
            Factor::Iterative(m) => {
                let cap = self.settings.max_iter_factor * m.dim();
                solve_spd(m, &reduced, self.settings.tol, cap)?
            }
        };
        let mut full = Vec::with_capacity(b.len());
        full.extend_from_slice(&x[..k]);
        full.push(0.0);
        full.extend_from_slice(&x[k..]);
        Ok(full)
    }

    /// Solves for the fluctuation field under macroscopic gradient `a`.
    pub fn solve_eigen_gradient(&self, a: &Vec3) -> Result<RveSolution> {
        if !a.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite macroscopic gradient".into()));
        }
        let mut p1 = self.solve_reduced(&self.load(a))?;
        let net = self.network;
        let mean = net
            .nodes
            .iter()
            .zip(&p1)
            .map(|(n, p)| n.volume * p)
            .sum::<f64>()
            / net.cell_volume();
        for p in &mut p1 {
            *p -= mean;
        }
        let mut g0 = Vec::with_capacity(net.elements.len());
        let mut j0 = Vec::with_capacity(net.elements.len());
        for (e, l) in net.elements.iter().zip(&self.lambda) {
            let g = (p1[e.node_q] - p1[e.node_p]) / e.length + a.dot(&e.direction);
            g0.push(g);
            j0.push(-l * g);
        }
        let f = macro_flux(net, &j0, self.settings.summation);
        Ok(RveSolution { p1, g0, j0, f })
    }
}

/// f = (1/V₀) Σ_e h S★ j⁰ e_λ.
pub fn macro_flux(network: &DualNetwork, j0: &[f64], mode: Summation) -> Vec3 {
    let els = &network.elements;
    sum_vec3(mode, els.len(), |k| {
        let e = &els[k];
        e.direction * (e.length * e.projected_area * j0[k])
    }) / network.cell_volume()
}

/// Worst per-node ratio |Σ S★ j⁰| / Σ S★ |j⁰| (zero for a balanced field).
pub fn flux_imbalance(network: &DualNetwork, j0: &[f64]) -> f64 {
    let n = network.nodes.len();
    let mut net_flux = vec![0.0; n];
    let mut gross = vec![0.0; n];
    for (e, j) in network.elements.iter().zip(j0) {
        let v = e.projected_area * j;
        net_flux[e.node_p] += v;
        net_flux[e.node_q] -= v;
        gross[e.node_p] += v.abs();
        gross[e.node_q] += v.abs();
    }
    net_flux
        .iter()
        .zip(&gross)
        .map(|(s, g)| if *g > 0.0 { s.abs() / g } else { 0.0 })
        .fold(0.0, f64::max)
}

/// (1/V₀) Σ (S★/h) λ (Δp¹ + a·x_PQ)², the dissipation of a solved RVE.
pub fn dissipation(network: &DualNetwork, lambda: &[f64], a: &Vec3, p1: &[f64]) -> f64 {
    network
        .elements
        .iter()
        .zip(lambda)
        .map(|(e, l)| {
            let d = p1[e.node_q] - p1[e.node_p] + a.dot(&e.contact_vector());
            e.shape_factor() * l * d * d
        })
        .sum::<f64>()
        / network.cell_volume()
}
