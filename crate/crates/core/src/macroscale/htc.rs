//! Coupled humidity/temperature problem with hydration at the integration points.
//!
//! Degrees of freedom are interleaved per node: `2 i` is H, `2 i + 1` is T.

use super::mesh::MacroMesh;
use crate::constitutive::{htc_local, htc_moisture_permeability, HtcParams, HtcState};
use crate::error::Result;
use crate::numerics::{Evaluation, NonlinearSystem, StepContext, Triplets};

#[derive(Debug, Clone)]
pub struct HtcProblem {
    pub mesh: MacroMesh,
    pub params: HtcParams,
    /// Normalized conductivity Λ/λ₀ of the RVE (2×2).
    pub tensor: [[f64; 2]; 2],
    /// Committed reaction degrees per integration point.
    pub states: Vec<HtcState>,
}

impl HtcProblem {
    pub fn new(mesh: MacroMesh, params: HtcParams, tensor: [[f64; 2]; 2]) -> Self {
        let states = vec![HtcState::default(); mesh.gauss_points.len()];
        HtcProblem {
            mesh,
            params,
            tensor,
            states,
        }
    }

    /// Uniform initial state `[H, T]` per node.
    pub fn initial(&self, h: f64, t: f64) -> Vec<f64> {
        (0..self.mesh.nodes.len()).flat_map(|_| [h, t]).collect()
    }

    /// Mean reaction degree of cement over the volume.
    pub fn mean_alpha_c(&self) -> f64 {
        let v = self.mesh.volume();
        self.mesh
            .gauss_points
            .iter()
            .zip(&self.states)
            .map(|(g, s)| g.weight * s.alpha_c)
            .sum::<f64>()
            / v
    }

    fn lg_abs(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let t = &self.tensor;
        a[0].abs() * (t[0][0].abs() * b[0] + t[0][1].abs() * b[1])
            + a[1].abs() * (t[1][0].abs() * b[0] + t[1][1].abs() * b[1])
    }

    fn lg(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let t = &self.tensor;
        a[0] * (t[0][0] * b[0] + t[0][1] * b[1]) + a[1] * (t[1][0] * b[0] + t[1][1] * b[1])
    }
}

impl NonlinearSystem for HtcProblem {
    fn n_dofs(&self) -> usize {
        2 * self.mesh.nodes.len()
    }

    fn n_fields(&self) -> usize {
        2
    }

    fn field_of(&self, dof: usize) -> usize {
        dof % 2
    }

    fn evaluate(&self, u: &[f64], ctx: &StepContext, mut jacobian: Option<&mut Triplets>) -> Result<Evaluation> {
        let p = &self.params;
        let n = self.n_dofs();
        let mut r = vec![0.0; n];
        let mut abs = vec![0.0; n];
        let heat_cap = p.heat_capacity();
        // element block, local dof 2k + field
        let mut ke = [[0.0; 8]; 8];
        let flush = |conn: [usize; 4], ke: &mut [[f64; 8]; 8], jac: &mut Option<&mut Triplets>| {
            if let Some(jac) = jac.as_deref_mut() {
                for (a, row) in ke.iter_mut().enumerate() {
                    for (b, v) in row.iter_mut().enumerate() {
                        jac.add(2 * conn[a / 2] + a % 2, 2 * conn[b / 2] + b % 2, *v);
                        *v = 0.0;
                    }
                }
            }
        };
        let gps = &self.mesh.gauss_points;
        for (gi, g) in gps.iter().enumerate() {
            let conn = self.mesh.elements[g.element];
            let (mut h, mut t, mut hn, mut tn) = (0.0, 0.0, 0.0, 0.0);
            let mut gh = [0.0; 2];
            let mut gt = [0.0; 2];
            for k in 0..4 {
                let (vh, vt) = (u[2 * conn[k]], u[2 * conn[k] + 1]);
                h += g.shape[k] * vh;
                t += g.shape[k] * vt;
                hn += g.shape[k] * ctx.previous[2 * conn[k]];
                tn += g.shape[k] * ctx.previous[2 * conn[k] + 1];
                for a in 0..2 {
                    gh[a] += g.grad[k][a] * vh;
                    gt[a] += g.grad[k][a] * vt;
                }
            }
            let (mut mag_h, mut mag_t) = ([0.0; 2], [0.0; 2]);
            for k in 0..4 {
                for a in 0..2 {
                    mag_h[a] += (g.grad[k][a] * u[2 * conn[k]]).abs();
                    mag_t[a] += (g.grad[k][a] * u[2 * conn[k] + 1]).abs();
                }
            }
            let local = htc_local(h, t, &self.states[gi], ctx.dt, p);
            let (d, d_h, d_t) = htc_moisture_permeability(h, t, p);
            let inv_dt = ctx.dt.map_or(0.0, |dt| 1.0 / dt);
            let (rate_h, rate_t) = ((h - hn) * inv_dt, (t - tn) * inv_dt);

            // pointwise terms multiplying N_i
            let sh = local.capacity * rate_h + local.q_h;
            let sh_h = local.capacity * inv_dt + local.capacity_dh * rate_h + local.q_h_dh;
            let sh_t = local.capacity_dt * rate_h + local.q_h_dt;
            let st = heat_cap * rate_t - local.q_t;
            let st_h = -local.q_t_dh;
            let st_t = heat_cap * inv_dt - local.q_t_dt;

            for i in 0..4 {
                let ni = g.shape[i];
                let gri = g.grad[i];
                let dh_flux = d * self.lg(gri, gh) * g.weight;
                let dt_flux = p.kappa * self.lg(gri, gt) * g.weight;
                let (rh, rt) = (2 * conn[i], 2 * conn[i] + 1);
                r[rh] += ni * sh * g.weight + dh_flux;
                r[rt] += ni * st * g.weight + dt_flux;
                abs[rh] += ni * (local.capacity * (h.abs() + hn.abs()) * inv_dt + local.q_h.abs()) * g.weight
                    + d * self.lg_abs(gri, mag_h) * g.weight;
                abs[rt] += ni * (heat_cap * (t.abs() + tn.abs()) * inv_dt + local.q_t.abs()) * g.weight
                    + p.kappa * self.lg_abs(gri, mag_t) * g.weight;
                if jacobian.is_some() {
                    let gihh = self.lg(gri, gh);
                    for j in 0..4 {
                        let nj = g.shape[j];
                        let kij = self.lg(gri, g.grad[j]);
                        ke[2 * i][2 * j] += (ni * sh_h * nj + d * kij + d_h * nj * gihh) * g.weight;
                        ke[2 * i][2 * j + 1] += (ni * sh_t * nj + d_t * nj * gihh) * g.weight;
                        ke[2 * i + 1][2 * j] += ni * st_h * nj * g.weight;
                        ke[2 * i + 1][2 * j + 1] += (ni * st_t * nj + p.kappa * kij) * g.weight;
                    }
                }
            }
            if gps.get(gi + 1).is_none_or(|next| next.element != g.element) {
                flush(conn, &mut ke, &mut jacobian);
            }
        }
        let mut scale = vec![0.0; 2];
        for (i, a) in abs.iter().enumerate() {
            scale[i % 2] += a * a;
        }
        Ok(Evaluation {
            residual: r,
            scale: scale.into_iter().map(f64::sqrt).collect(),
        })
    }

    fn commit(&mut self, u: &[f64], ctx: &StepContext) {
        for (gi, g) in self.mesh.gauss_points.iter().enumerate() {
            let conn = self.mesh.elements[g.element];
            let h: f64 = (0..4).map(|k| g.shape[k] * u[2 * conn[k]]).sum();
            let t: f64 = (0..4).map(|k| g.shape[k] * u[2 * conn[k] + 1]).sum();
            self.states[gi] = htc_local(h, t, &self.states[gi], ctx.dt, &self.params).state;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_matches_finite_differences() {
        let mesh = MacroMesh::structured(&[0.0, 0.1, 0.2], &[0.0, 0.1], 1.0).unwrap();
        let mut pb = HtcProblem::new(mesh, HtcParams::default(), [[1.0, 0.1], [0.1, 0.8]]);
        for s in &mut pb.states {
            s.alpha_c = 0.3;
        }
        let prev = pb.initial(0.98, 295.0);
        let u: Vec<f64> = prev
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 0 { v - 0.01 * (i as f64 / 7.0) } else { v + 0.3 * (i as f64).sin() })
            .collect();
        let ctx = StepContext { time: 0.0, dt: Some(1800.0), previous: &prev };
        let mut jac = Triplets::new(u.len());
        pb.evaluate(&u, &ctx, Some(&mut jac)).unwrap();
        let dense = jac.to_csr(true).to_dense();
        for j in 0..u.len() {
            let h = if j % 2 == 0 { 1e-6 } else { 1e-4 };
            let mut up = u.clone();
            up[j] += h;
            let mut um = u.clone();
            um[j] -= h;
            let rp = pb.evaluate(&up, &ctx, None).unwrap().residual;
            let rm = pb.evaluate(&um, &ctx, None).unwrap().residual;
            for i in 0..u.len() {
                let fd = (rp[i] - rm[i]) / (2.0 * h);
                let an = dense[(i, j)];
                let row_max = (0..u.len()).map(|c| dense[(i, c)].abs()).fold(0.0, f64::max);
                assert!((fd - an).abs() <= 1e-5 * row_max, "({i},{j}) {fd} vs {an}");
            }
        }
    }
}
