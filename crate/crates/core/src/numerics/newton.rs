//! Newton driver and Backward Euler stepping shared by the macroscale and
//! full discrete solvers.

use super::banded::{band_ordering, BandedLu};
use super::sparse::CsrMatrix;
use super::sparse::Triplets;
use crate::error::{Error, Result};

/// Time level being solved for.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    /// Time at the end of the step (s).
    pub time: f64,
    /// Step length; `None` drops the transient term (steady state).
    pub dt: Option<f64>,
    /// Converged state at the start of the step.
    pub previous: &'a [f64],
}

/// Residual with a per-field magnitude used for the absolute stopping floor.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub residual: Vec<f64>,
    /// Per field: norm of the absolute values of all assembled contributions.
    pub scale: Vec<f64>,
}

/// A discretized balance problem `R(u) = 0`.
pub trait NonlinearSystem {
    fn n_dofs(&self) -> usize;

    fn n_fields(&self) -> usize {
        1
    }

    fn field_of(&self, _dof: usize) -> usize {
        0
    }

    /// Residual at `u`; fills `jacobian` with ∂R/∂u when given.
    fn evaluate(
        &self,
        u: &[f64],
        ctx: &StepContext,
        jacobian: Option<&mut Triplets>,
    ) -> Result<Evaluation>;

    /// Accepts `u` as the converged state of the step (updates internal variables).
    fn commit(&mut self, _u: &[f64], _ctx: &StepContext) {}
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Absolute floor relative to the per-field contribution scale.
    pub abs_tol: f64,
    pub max_halvings: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            tol: 1e-8,
            max_iter: 25,
            abs_tol: 1e-12,
            max_halvings: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    /// Number of linear solves performed.
    pub iterations: usize,
    pub residual_history: Vec<Vec<f64>>,
    /// Residual at the converged state (Dirichlet rows hold reactions).
    pub residual: Vec<f64>,
}

fn field_norms<S: NonlinearSystem + ?Sized>(
    system: &S,
    r: &[f64],
    fixed: &[bool],
) -> Vec<f64> {
    let mut sq = vec![0.0; system.n_fields()];
    for (i, v) in r.iter().enumerate() {
        if !fixed[i] {
            sq[system.field_of(i)] += v * v;
        }
    }
    sq.into_iter().map(f64::sqrt).collect()
}

/// Solves one step with full Newton; `constraints` are Dirichlet `(dof, value)` pairs.
pub fn newton_solve<S: NonlinearSystem + ?Sized>(
    system: &S,
    u: &mut [f64],
    ctx: &StepContext,
    constraints: &[(usize, f64)],
    settings: &NewtonSettings,
) -> Result<NewtonOutcome> {
    let n = system.n_dofs();
    let mut fixed = vec![false; n];
    for &(dof, value) in constraints {
        fixed[dof] = true;
        u[dof] = value;
    }
    let mut history = Vec::new();
    let mut r0: Option<Vec<f64>> = None;
    let mut jac = Triplets::new(n);
    let mut ordering: Option<(CsrMatrix, Vec<usize>)> = None;
    for it in 0..=settings.max_iter {
        jac.clear();
        let eval = system.evaluate(u, ctx, Some(&mut jac))?;
        if eval.residual.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged("residual".into()));
        }
        let norms = field_norms(system, &eval.residual, &fixed);
        let reference = r0.get_or_insert_with(|| norms.clone()).clone();
        history.push(norms.clone());
        let converged = norms.iter().enumerate().all(|(f, &r)| {
            r <= settings.tol * reference[f] || r <= settings.abs_tol * eval.scale[f]
        });
        if converged {
            return Ok(NewtonOutcome {
                iterations: it,
                residual_history: history,
                residual: eval.residual,
            });
        }
        if it == settings.max_iter {
            break;
        }
        let mut reduced = Triplets::with_capacity(n, jac.len() + n);
        for &(i, j, v) in jac.entries() {
            if !fixed[i] && !fixed[j] {
                reduced.add(i, j, v);
            }
        }
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            if fixed[i] {
                reduced.add(i, i, 1.0);
            } else {
                rhs[i] = -eval.residual[i];
            }
        }
        let a = reduced.to_csr(true);
        let perm = match &ordering {
            Some((pattern, perm)) if pattern.same_pattern(&a) => perm.clone(),
            _ => band_ordering(&a),
        };
        let lu = BandedLu::factor_ordered(&a, perm.clone())?;
        ordering = Some((a, perm));
        let du = lu.solve(&rhs);
        for i in 0..n {
            u[i] += du[i];
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged("state".into()));
        }
    }
    Err(Error::NotConverged {
        iterations: settings.max_iter,
        residual: history.last().map(|h| h.iter().cloned().fold(0.0, f64::max)).unwrap_or(0.0),
        tolerance: settings.tol,
        history: history.iter().map(|h| h.iter().cloned().fold(0.0, f64::max)).collect(),
    })
}

/// Summary of one accepted macro step (possibly split into substeps).
#[derive(Debug, Clone)]
pub struct StepReport {
    pub iterations: usize,
    pub substeps: usize,
    /// Residual at the end of the last substep.
    pub residual: Vec<f64>,
}

/// Advances `u` from `t0` to `t1`. Transient steps use Backward Euler with
/// `dt = t1 - t0`; steady steps drop the storage term. A failed Newton solve
/// halves the step, up to `settings.max_halvings` times.
pub fn advance<S, F>(
    system: &mut S,
    u: &mut Vec<f64>,
    t0: f64,
    t1: f64,
    transient: bool,
    constraints: &F,
    settings: &NewtonSettings,
) -> std::result::Result<StepReport, usize>
where
    S: NonlinearSystem + ?Sized,
    F: Fn(f64) -> Vec<(usize, f64)>,
{
    advance_level(system, u, t0, t1, transient, constraints, settings, 0)
}

#[allow(clippy::too_many_arguments)]
fn advance_level<S, F>(
    system: &mut S,
    u: &mut Vec<f64>,
    t0: f64,
    t1: f64,
    transient: bool,
    constraints: &F,
    settings: &NewtonSettings,
    depth: usize,
) -> std::result::Result<StepReport, usize>
where
    S: NonlinearSystem + ?Sized,
    F: Fn(f64) -> Vec<(usize, f64)>,
{
    let previous = u.clone();
    let ctx = StepContext {
        time: t1,
        dt: transient.then_some(t1 - t0),
        previous: &previous,
    };
    match newton_solve(&*system, u, &ctx, &constraints(t1), settings) {
        Ok(outcome) => {
            system.commit(u, &ctx);
            Ok(StepReport {
                iterations: outcome.iterations,
                substeps: 1,
                residual: outcome.residual,
            })
        }
        Err(err) => {
            if depth >= settings.max_halvings {
                log::warn!("step {t0}..{t1} failed after {depth} halvings: {err}");
                return Err(depth);
            }
            log::debug!("halving step {t0}..{t1}: {err}");
            u.copy_from_slice(&previous);
            let mid = 0.5 * (t0 + t1);
            let a = advance_level(system, u, t0, mid, transient, constraints, settings, depth + 1)?;
            let b = advance_level(system, u, mid, t1, transient, constraints, settings, depth + 1)?;
            Ok(StepReport {
                iterations: a.iterations + b.iterations,
                substeps: a.substeps + b.substeps,
                residual: b.residual,
            })
        }
    }
}
