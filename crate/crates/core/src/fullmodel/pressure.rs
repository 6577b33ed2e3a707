//! Discrete pressure balance W c ṗ + Σ S★ j = W q on a non-periodic network.

use crate::constitutive::{CapacitySource, PermeabilityModel};
use crate::error::{Error, Result};
use crate::geometry::DualNetwork;
use crate::numerics::{Evaluation, NonlinearSystem, StepContext, Triplets};

#[derive(Debug, Clone)]
pub struct DiscretePressure {
    pub network: DualNetwork,
    pub permeability: PermeabilityModel,
    pub storage: CapacitySource,
}

impl DiscretePressure {
    pub fn new(network: DualNetwork, permeability: PermeabilityModel, storage: CapacitySource) -> Result<Self> {
        if network.periodic {
            return Err(Error::InvalidParameter("full model network must not be periodic".into()));
        }
        Ok(DiscretePressure {
            network,
            permeability,
            storage,
        })
    }

    /// Element flux j = −λ(p̄) (p_Q − p_P)/h (kg/m²/s).
    pub fn element_fluxes(&self, u: &[f64]) -> Vec<f64> {
        self.network
            .elements
            .iter()
            .map(|e| {
                let pm = 0.5 * (u[e.node_p] + u[e.node_q]);
                -self.permeability.lambda(e.lambda0, pm) * (u[e.node_q] - u[e.node_p]) / e.length
            })
            .collect()
    }
}

impl NonlinearSystem for DiscretePressure {
    fn n_dofs(&self) -> usize {
        self.network.nodes.len()
    }

    fn evaluate(&self, u: &[f64], ctx: &StepContext, mut jacobian: Option<&mut Triplets>) -> Result<Evaluation> {
        let n = self.n_dofs();
        let mut r = vec![0.0; n];
        let mut abs = vec![0.0; n];
        for (i, node) in self.network.nodes.iter().enumerate() {
            let q = -node.volume * self.storage.source(u[i]);
            r[i] += q;
            abs[i] += q.abs();
            if let Some(dt) = ctx.dt {
                let c = node.volume * self.storage.capacity(u[i]);
                let s = c * (u[i] - ctx.previous[i]) / dt;
                r[i] += s;
                abs[i] += c * (u[i].abs() + ctx.previous[i].abs()) / dt;
                if let Some(jac) = jacobian.as_deref_mut() {
                    jac.add(i, i, c / dt);
                }
            }
        }
        for e in &self.network.elements {
            let (p, q) = (e.node_p, e.node_q);
            let pm = 0.5 * (u[p] + u[q]);
            let sf = e.lambda0 * e.shape_factor();
            let k = sf * self.permeability.relative(pm);
            let d = u[p] - u[q];
            // S★ j leaving P
            let out = k * d;
            r[p] += out;
            r[q] -= out;
            let mag = k * (u[p].abs() + u[q].abs());
            abs[p] += mag;
            abs[q] += mag;
            if let Some(jac) = jacobian.as_deref_mut() {
                let dk = 0.5 * sf * self.permeability.relative_derivative(pm) * d;
                jac.add(p, p, k + dk);
                jac.add(p, q, -k + dk);
                jac.add(q, p, -k - dk);
                jac.add(q, q, k - dk);
            }
        }
        let scale = vec![abs.iter().map(|v| v * v).sum::<f64>().sqrt()];
        Ok(Evaluation { residual: r, scale })
    }
}
