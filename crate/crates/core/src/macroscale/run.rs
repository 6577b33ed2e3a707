//! Load stepping shared by the macroscale and full discrete solvers.

use super::bc::{constraints_at, DirichletBC};
use crate::error::{Error, Result};
use crate::numerics::{advance, NewtonSettings, NonlinearSystem};

/// kg/s to g/day.
pub const KG_PER_S_TO_G_PER_DAY: f64 = 1000.0 * 86_400.0;

/// Outcome of one load step.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub step: usize,
    /// Time at the end of the step (s).
    pub time: f64,
    /// Linear solves, summed over substeps.
    pub iterations: usize,
    pub substeps: usize,
    /// Net supply through each Dirichlet set (Σ residual over its dofs), in
    /// the order of the conditions.
    pub reactions: Vec<f64>,
}

/// Time levels `t0, t0 + dt₁, …` from `(dt, count)` segments.
pub fn time_levels(t0: f64, segments: &[(f64, usize)]) -> Vec<f64> {
    let mut out = vec![t0];
    for &(dt, n) in segments {
        let start = *out.last().unwrap();
        for k in 1..=n {
            out.push(start + dt * k as f64);
        }
    }
    out
}

/// Steps `u` through `times[1..]`. Steady runs solve a sequence of steady
/// states under the time-dependent conditions (a load path). `observer` sees
/// every accepted step together with the committed system.
pub fn run_steps<S, O>(
    system: &mut S,
    u: &mut Vec<f64>,
    times: &[f64],
    transient: bool,
    bcs: &[DirichletBC],
    settings: &NewtonSettings,
    mut observer: O,
) -> Result<Vec<StepRecord>>
where
    S: NonlinearSystem + ?Sized,
    O: FnMut(&StepRecord, &[f64], &S),
{
    let constraints = |t: f64| constraints_at(bcs, t);
    let mut records = Vec::with_capacity(times.len().saturating_sub(1));
    for (k, w) in times.windows(2).enumerate() {
        let report = advance(system, u, w[0], w[1], transient, &constraints, settings).map_err(|halvings| {
            Error::NewtonFailed {
                step: k + 1,
                time: w[1],
                halvings,
            }
        })?;
        let reactions = bcs
            .iter()
            .map(|bc| bc.dofs.iter().map(|&d| report.residual[d]).sum())
            .collect();
        let rec = StepRecord {
            step: k + 1,
            time: w[1],
            iterations: report.iterations,
            substeps: report.substeps,
            reactions,
        };
        observer(&rec, u, system);
        records.push(rec);
    }
    Ok(records)
}
