//! Discrete humidity/temperature balances with hydration at the nodes.
//!
//! Degrees of freedom are interleaved per node: `2 i` is H, `2 i + 1` is T.

use crate::constitutive::{htc_local, htc_moisture_permeability, HtcParams, HtcState};
use crate::error::{Error, Result};
use crate::geometry::DualNetwork;
use crate::numerics::{Evaluation, NonlinearSystem, StepContext, Triplets};

#[derive(Debug, Clone)]
pub struct DiscreteHtc {
    pub network: DualNetwork,
    pub params: HtcParams,
    /// S★/h × λ₀/λ_ref per element.
    weights: Vec<f64>,
    /// Committed reaction degrees per node.
    pub states: Vec<HtcState>,
}

impl DiscreteHtc {
    /// Element conductances scale with λ₀/`lambda_ref`, so a uniform network
    /// reproduces D_H and κ exactly.
    pub fn new(network: DualNetwork, params: HtcParams, lambda_ref: f64) -> Result<Self> {
        if network.periodic || !(lambda_ref > 0.0) {
            return Err(Error::InvalidParameter(
                "HTC full model needs a non-periodic network and positive reference λ₀".into(),
            ));
        }
        let weights = network
            .elements
            .iter()
            .map(|e| e.shape_factor() * e.lambda0 / lambda_ref)
            .collect();
        let states = vec![HtcState::default(); network.nodes.len()];
        Ok(DiscreteHtc {
            network,
            params,
            weights,
            states,
        })
    }

    pub fn initial(&self, h: f64, t: f64) -> Vec<f64> {
        (0..self.network.nodes.len()).flat_map(|_| [h, t]).collect()
    }

    pub fn mean_alpha_c(&self) -> f64 {
        let v = self.network.total_volume();
        self.network
            .nodes
            .iter()
            .zip(&self.states)
            .map(|(n, s)| n.volume * s.alpha_c)
            .sum::<f64>()
            / v
    }
}

impl NonlinearSystem for DiscreteHtc {
    fn n_dofs(&self) -> usize {
        2 * self.network.nodes.len()
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
        let inv_dt = ctx.dt.map_or(0.0, |dt| 1.0 / dt);
        for (i, node) in self.network.nodes.iter().enumerate() {
            let (ih, it) = (2 * i, 2 * i + 1);
            let (h, t) = (u[ih], u[it]);
            let w = node.volume;
            let l = htc_local(h, t, &self.states[i], ctx.dt, p);
            let rate_h = (h - ctx.previous[ih]) * inv_dt;
            let rate_t = (t - ctx.previous[it]) * inv_dt;
            r[ih] += w * (l.capacity * rate_h + l.q_h);
            r[it] += w * (heat_cap * rate_t - l.q_t);
            abs[ih] += w * (l.capacity * (h.abs() + ctx.previous[ih].abs()) * inv_dt + l.q_h.abs());
            abs[it] += w * (heat_cap * (t.abs() + ctx.previous[it].abs()) * inv_dt + l.q_t.abs());
            if let Some(jac) = jacobian.as_deref_mut() {
                jac.add(ih, ih, w * (l.capacity * inv_dt + l.capacity_dh * rate_h + l.q_h_dh));
                jac.add(ih, it, w * (l.capacity_dt * rate_h + l.q_h_dt));
                jac.add(it, ih, -w * l.q_t_dh);
                jac.add(it, it, w * (heat_cap * inv_dt - l.q_t_dt));
            }
        }
        for (e, &k) in self.network.elements.iter().zip(&self.weights) {
            let (a, b) = (e.node_p, e.node_q);
            let hm = 0.5 * (u[2 * a] + u[2 * b]);
            let tm = 0.5 * (u[2 * a + 1] + u[2 * b + 1]);
            let (d, d_h, d_t) = htc_moisture_permeability(hm, tm, p);
            let dh = u[2 * a] - u[2 * b];
            let dtemp = u[2 * a + 1] - u[2 * b + 1];
            let out_h = k * d * dh;
            let out_t = k * p.kappa * dtemp;
            r[2 * a] += out_h;
            r[2 * b] -= out_h;
            r[2 * a + 1] += out_t;
            r[2 * b + 1] -= out_t;
            let mag_h = k * d * (u[2 * a].abs() + u[2 * b].abs());
            let mag_t = k * p.kappa * (u[2 * a + 1].abs() + u[2 * b + 1].abs());
            for idx in [2 * a, 2 * b] {
                abs[idx] += mag_h;
            }
            for idx in [2 * a + 1, 2 * b + 1] {
                abs[idx] += mag_t;
            }
            if let Some(jac) = jacobian.as_deref_mut() {
                let (kh, kt) = (k * d, k * p.kappa);
                let mh = 0.5 * k * d_h * dh;
                let mt = 0.5 * k * d_t * dh;
                let (ha, hb, ta, tb) = (2 * a, 2 * b, 2 * a + 1, 2 * b + 1);
                jac.add(ha, ha, kh + mh);
                jac.add(ha, hb, -kh + mh);
                jac.add(hb, ha, -kh - mh);
                jac.add(hb, hb, kh - mh);
                jac.add(ha, ta, mt);
                jac.add(ha, tb, mt);
                jac.add(hb, ta, -mt);
                jac.add(hb, tb, -mt);
                jac.add(ta, ta, kt);
                jac.add(ta, tb, -kt);
                jac.add(tb, ta, -kt);
                jac.add(tb, tb, kt);
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
        for i in 0..self.states.len() {
            self.states[i] = htc_local(u[2 * i], u[2 * i + 1], &self.states[i], ctx.dt, &self.params).state;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_skewed_lattice, tile_full_domain};

    #[test]
    fn jacobian_matches_finite_differences() {
        let rve = build_skewed_lattice(&[0.05, 0.05], &[2, 2], 0.0, 1.0).unwrap();
        let dom = tile_full_domain(&rve, &[2, 1]).unwrap();
        let mut pb = DiscreteHtc::new(dom.network, HtcParams::default(), 1.0).unwrap();
        for s in &mut pb.states {
            s.alpha_c = 0.25;
        }
        let prev = pb.initial(0.97, 294.0);
        let u: Vec<f64> = prev
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 0 { v - 0.02 * (i as f64).cos().abs() } else { v + (i as f64).sin() })
            .collect();
        let ctx = StepContext { time: 0.0, dt: Some(3600.0), previous: &prev };
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
                let row_max = (0..u.len()).map(|c| dense[(i, c)].abs()).fold(0.0, f64::max);
                assert!((fd - dense[(i, j)]).abs() <= 1e-5 * row_max, "({i},{j}) {fd} vs {}", dense[(i, j)]);
            }
        }
    }
}
