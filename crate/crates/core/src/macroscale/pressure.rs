//! Macroscale pressure balance c ṗ + ∇·f = q with the flux supplied by an RVE.

use super::mesh::{GaussPoint, MacroMesh};
use crate::constitutive::{CapacitySource, PermeabilityModel};
use crate::error::Result;
use crate::geometry::{DualNetwork, Mat3, Vec3};
use crate::numerics::{Evaluation, NonlinearSystem, StepContext, Triplets};
use crate::rve::{assemble_pinned, EffectiveTensor, RveSolverSettings};

/// Live RVE solved at every integration point.
#[derive(Debug, Clone)]
pub struct SlowRve {
    pub network: DualNetwork,
    /// λ₀ per element.
    pub lambda0: Vec<f64>,
    pub pinned_node: usize,
    pub settings: RveSolverSettings,
}

impl SlowRve {
    /// Flux columns ∂f/∂a at pressure `p` (column i is the flux for a = î).
    pub fn flux_matrix(&self, model: &PermeabilityModel, p: f64) -> Result<Mat3> {
        let kr = model.relative(p);
        let lambda: Vec<f64> = self.lambda0.iter().map(|l| l * kr).collect();
        let system = assemble_pinned(&self.network, &lambda, self.pinned_node, &self.settings)?;
        let mut m = Mat3::zeros();
        for i in 0..self.network.n_dim.min(2) {
            let mut a = Vec3::zeros();
            a[i] = 1.0;
            let sol = system.solve_eigen_gradient(&a)?;
            m.set_column(i, &sol.f);
        }
        Ok(m)
    }
}

/// Source of the macroscopic flux.
#[derive(Debug, Clone)]
pub enum MacroResponse {
    /// f = −κ_r(p) Λ ∇p from a pre-computed tensor.
    Fast(EffectiveTensor),
    /// f from a fresh RVE solve with λ = λ₀ κ_r(p).
    Slow(SlowRve),
}

/// Flux and its derivatives at one integration point.
#[derive(Debug, Clone, Copy)]
pub struct PointResponse {
    pub flux: [f64; 2],
    /// ∂f/∂∇p.
    pub d_grad: [[f64; 2]; 2],
    /// ∂f/∂p.
    pub d_p: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct PressureProblem {
    pub mesh: MacroMesh,
    pub permeability: PermeabilityModel,
    pub storage: CapacitySource,
    pub response: MacroResponse,
}

impl PressureProblem {
    pub fn new(
        mesh: MacroMesh,
        permeability: PermeabilityModel,
        storage: CapacitySource,
        response: MacroResponse,
    ) -> Self {
        PressureProblem {
            mesh,
            permeability,
            storage,
            response,
        }
    }

    /// Flux response at pressure `p` and gradient `grad`.
    pub fn point_response(&self, p: f64, grad: [f64; 2]) -> Result<PointResponse> {
        let a = Vec3::new(grad[0], grad[1], 0.0);
        match &self.response {
            MacroResponse::Fast(t) => {
                let kr = self.permeability.relative(p);
                let dkr = self.permeability.relative_derivative(p);
                let la = t.lambda * a;
                let mut d_grad = [[0.0; 2]; 2];
                for r in 0..2 {
                    for c in 0..2 {
                        d_grad[r][c] = -kr * t.lambda[(r, c)];
                    }
                }
                Ok(PointResponse {
                    flux: [-kr * la.x, -kr * la.y],
                    d_grad,
                    d_p: [-dkr * la.x, -dkr * la.y],
                })
            }
            MacroResponse::Slow(rve) => {
                let m = rve.flux_matrix(&self.permeability, p)?;
                let f = m * a;
                let d_p = if self.permeability.is_linear() {
                    [0.0, 0.0]
                } else {
                    let h = 1e-4 * p.abs().max(1e2);
                    let fp = rve.flux_matrix(&self.permeability, p + h)? * a;
                    let fm = rve.flux_matrix(&self.permeability, p - h)? * a;
                    [(fp.x - fm.x) / (2.0 * h), (fp.y - fm.y) / (2.0 * h)]
                };
                Ok(PointResponse {
                    flux: [f.x, f.y],
                    d_grad: [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
                    d_p,
                })
            }
        }
    }

    fn point_values(&self, g: &GaussPoint, u: &[f64]) -> (f64, [f64; 2]) {
        let conn = &self.mesh.elements[g.element];
        let mut p = 0.0;
        let mut grad = [0.0; 2];
        for k in 0..4 {
            let v = u[conn[k]];
            p += g.shape[k] * v;
            grad[0] += g.grad[k][0] * v;
            grad[1] += g.grad[k][1] * v;
        }
        (p, grad)
    }

    /// Flux at every integration point.
    pub fn gauss_fluxes(&self, u: &[f64]) -> Result<Vec<[f64; 2]>> {
        self.mesh
            .gauss_points
            .iter()
            .map(|g| {
                let (p, grad) = self.point_values(g, u);
                Ok(self.point_response(p, grad)?.flux)
            })
            .collect()
    }
}

impl NonlinearSystem for PressureProblem {
    fn n_dofs(&self) -> usize {
        self.mesh.nodes.len()
    }

    fn evaluate(&self, u: &[f64], ctx: &StepContext, mut jacobian: Option<&mut Triplets>) -> Result<Evaluation> {
        let n = self.n_dofs();
        let mut r = vec![0.0; n];
        let mut abs = vec![0.0; n];
        for g in &self.mesh.gauss_points {
            let conn = self.mesh.elements[g.element];
            let (p, grad) = self.point_values(g, u);
            let resp = self.point_response(p, grad)?;
            let q = self.storage.source(p);
            let storage = ctx.dt.map(|dt| {
                let pn: f64 = (0..4).map(|k| g.shape[k] * ctx.previous[conn[k]]).sum();
                (self.storage.capacity(p), (p - pn) / dt, 1.0 / dt, (p.abs() + pn.abs()) / dt)
            });
            // flux magnitude before cancellation between nodal values
            let mut mag_grad = [0.0; 2];
            for k in 0..4 {
                for a in 0..2 {
                    mag_grad[a] += (g.grad[k][a] * u[conn[k]]).abs();
                }
            }
            let mag_flux = [
                resp.d_grad[0][0].abs() * mag_grad[0] + resp.d_grad[0][1].abs() * mag_grad[1],
                resp.d_grad[1][0].abs() * mag_grad[0] + resp.d_grad[1][1].abs() * mag_grad[1],
            ];
            for i in 0..4 {
                let ni = g.shape[i];
                let gi = g.grad[i];
                let diffusive = -(gi[0] * resp.flux[0] + gi[1] * resp.flux[1]) * g.weight;
                let source = -ni * q * g.weight;
                let mut contrib = diffusive + source;
                abs[conn[i]] += (gi[0].abs() * mag_flux[0] + gi[1].abs() * mag_flux[1]) * g.weight + source.abs();
                if let Some((c, rate, _, mag)) = storage {
                    contrib += ni * c * rate * g.weight;
                    abs[conn[i]] += ni * c * mag * g.weight;
                }
                r[conn[i]] += contrib;
                if let Some(jac) = jacobian.as_deref_mut() {
                    for j in 0..4 {
                        let nj = g.shape[j];
                        let gj = g.grad[j];
                        // ∂f/∂u_j = (∂f/∂∇p) ∇N_j + (∂f/∂p) N_j
                        let df = [
                            resp.d_grad[0][0] * gj[0] + resp.d_grad[0][1] * gj[1] + resp.d_p[0] * nj,
                            resp.d_grad[1][0] * gj[0] + resp.d_grad[1][1] * gj[1] + resp.d_p[1] * nj,
                        ];
                        let mut v = -(gi[0] * df[0] + gi[1] * df[1]) * g.weight;
                        if let Some((c, _, inv_dt, _)) = storage {
                            v += ni * c * nj * inv_dt * g.weight;
                        }
                        jac.add(conn[i], conn[j], v);
                    }
                }
            }
        }
        let scale = vec![abs.iter().map(|v| v * v).sum::<f64>().sqrt()];
        Ok(Evaluation { residual: r, scale })
    }
}
