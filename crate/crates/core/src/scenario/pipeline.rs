//! Geometry → material → RVE → macro/full pipelines driven by a [`Scenario`].

use std::time::Instant;

use super::config::{BcConfig, BoundarySelection, FieldId, LatticeKind, MaterialKind, ResponsePath, Scenario, TimeMode};
use crate::constitutive::randomize_lambda0;
use crate::error::{Error, Result};
use crate::fullmodel::{idw, DiscreteHtc, DiscretePressure};
use crate::geometry::{
    build_skewed_lattice, build_voronoi_dual, generate_periodic_nuclei, read_network, tile_full_domain,
    BoundaryRule, DualNetwork, NucleiOptions, Side, TiledDomain, Vec3, PLANE_THICKNESS,
};
use crate::macroscale::{
    run_steps, time_levels, DirichletBC, HtcProblem, MacroMesh, MacroResponse, PressureProblem, SlowRve,
    StepRecord, TimeFunction, KG_PER_S_TO_G_PER_DAY,
};
use crate::numerics::{NewtonSettings, NonlinearSystem, RandomStream, Summation};
use crate::rve::{effective_tensor, EffectiveTensor, RveSolverSettings};

/// Generated RVE, the stream it consumed, and the node pinned for its solves.
pub struct RveBuild {
    pub network: DualNetwork,
    pub stream: RandomStream,
    pub pinned_node: usize,
}

pub fn solver_settings(s: &Scenario) -> RveSolverSettings {
    RveSolverSettings {
        summation: if s.solver.deterministic {
            Summation::Ordered
        } else {
            Summation::Parallel
        },
        ..Default::default()
    }
}

pub fn newton_settings(s: &Scenario) -> NewtonSettings {
    NewtonSettings {
        tol: s.solver.newton_tol,
        max_iter: s.solver.max_iter,
        max_halvings: s.solver.max_halvings,
        ..Default::default()
    }
}

/// Builds (or reads) the RVE and applies the λ₀ randomization.
pub fn build_rve(s: &Scenario) -> Result<RveBuild> {
    let g = &s.geometry;
    let n_dim = s.n_dim();
    let lambda0 = s.material.lambda0();
    let mut stream = RandomStream::new(s.random.seed);
    let mut cell = [PLANE_THICKNESS; 3];
    cell[..n_dim].copy_from_slice(&g.rve_size);
    let mut network = if let Some(path) = &g.lattice_file {
        read_network(path)?
    } else {
        match g.kind {
            LatticeKind::Voronoi => {
                let nuclei = generate_periodic_nuclei(&cell, n_dim, g.l_min, &mut stream, &NucleiOptions::default())?;
                build_voronoi_dual(&nuclei, &cell, n_dim, lambda0)?
            }
            LatticeKind::Skewed => build_skewed_lattice(&g.rve_size, &g.divisions, g.skew_deg, lambda0)?,
        }
    };
    if s.random.cov > 0.0 {
        randomize_lambda0(&mut network, lambda0, s.random.cov, &mut stream)?;
    }
    let pinned_node = stream.index(network.nodes.len().max(1));
    Ok(RveBuild {
        network,
        stream,
        pinned_node,
    })
}

pub fn rve_tensor(s: &Scenario, rve: &RveBuild) -> Result<EffectiveTensor> {
    let lam: Vec<f64> = rve.network.elements.iter().map(|e| e.lambda0).collect();
    effective_tensor(&rve.network, &lam, rve.pinned_node, &solver_settings(s))
}

/// Invariant report of a generated RVE.
#[derive(Debug, Clone)]
pub struct RveSummary {
    pub nodes: usize,
    pub elements: usize,
    /// |Σ W − V₀| / V₀.
    pub volume_error: f64,
    /// max over nodes of |Σ S e_out| / Σ S.
    pub surface_residual: f64,
    /// ‖Σ h S e⊗e − V₀ 𝟙‖ / V₀ over the in-plane block, when o ∥ e.
    pub fabric_error: Option<f64>,
}

/// Validates `net` and measures its geometric identities.
pub fn summarize_rve(net: &DualNetwork) -> Result<RveSummary> {
    net.validate()?;
    let v0 = net.cell_volume();
    let surface_residual = net
        .surface_balance()
        .iter()
        .map(|b| if b.total_area > 0.0 { b.residual / b.total_area } else { 0.0 })
        .fold(0.0, f64::max);
    let fabric_error = net.normals_parallel().then(|| {
        let f = net.fabric_tensor();
        let mut err: f64 = 0.0;
        for i in 0..net.n_dim {
            for j in 0..net.n_dim {
                let target = if i == j { v0 } else { 0.0 };
                err = err.max((f[(i, j)] - target).abs());
            }
        }
        err / v0
    });
    Ok(RveSummary {
        nodes: net.nodes.len(),
        elements: net.elements.len(),
        volume_error: (net.total_volume() - v0).abs() / v0,
        surface_residual,
        fabric_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Macro,
    Full,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Macro => "macro",
            ModelKind::Full => "full",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfileRecord {
    pub name: String,
    pub step: usize,
    pub time: f64,
    /// `[arc length, field values…]`.
    pub rows: Vec<Vec<f64>>,
}

/// Everything recorded during one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub model: ModelKind,
    pub field_names: Vec<&'static str>,
    pub bc_names: Vec<String>,
    pub bc_fields: Vec<FieldId>,
    pub steps: Vec<StepRecord>,
    /// Per point: rows `[time, field values…, α_c (HTC)]`, starting at the initial state.
    pub points: Vec<(String, Vec<Vec<f64>>)>,
    pub profiles: Vec<ProfileRecord>,
    /// `(step, time, state)` for requested VTK steps.
    pub snapshots: Vec<(usize, f64, Vec<f64>)>,
    pub final_state: Vec<f64>,
    pub mean_alpha_c: Option<f64>,
    pub elapsed: f64,
    pub dofs: usize,
    pub tensor: Option<EffectiveTensor>,
}

impl RunOutput {
    /// Reaction of a set converted to report units (g/day for p and H, W for T).
    pub fn reaction_report(&self, bc: usize, record: &StepRecord) -> f64 {
        match self.bc_fields[bc] {
            FieldId::T => record.reactions[bc],
            _ => record.reactions[bc] * KG_PER_S_TO_G_PER_DAY,
        }
    }

    pub fn bc_index(&self, name: &str) -> Option<usize> {
        self.bc_names.iter().position(|n| n == name)
    }

    /// History `(time, reported reaction)` of a named set.
    pub fn flux_history(&self, name: &str) -> Vec<(f64, f64)> {
        let Some(i) = self.bc_index(name) else {
            return Vec::new();
        };
        self.steps.iter().map(|r| (r.time, self.reaction_report(i, r))).collect()
    }

    pub fn final_flux(&self, name: &str) -> Option<f64> {
        self.flux_history(name).last().map(|v| v.1)
    }

    pub fn total_iterations(&self) -> usize {
        self.steps.iter().map(|r| r.iterations).sum()
    }
}

fn field_index(f: FieldId) -> usize {
    match f {
        FieldId::P | FieldId::H => 0,
        FieldId::T => 1,
    }
}

fn time_function(bc: &BcConfig, horizon: f64) -> Result<TimeFunction> {
    match &bc.cosine {
        Some(c) => TimeFunction::negative_cosine(c.min, c.max, c.period, c.phase, horizon),
        None => TimeFunction::new(bc.values.iter().map(|v| (v[0], v[1])).collect()),
    }
}

fn build_bcs<F: Fn(Side) -> Vec<usize>>(s: &Scenario, n_fields: usize, horizon: f64, nodes: F) -> Result<Vec<DirichletBC>> {
    s.bcs
        .iter()
        .map(|bc| {
            let mut set: Vec<usize> = bc.sides.iter().flat_map(|side| nodes(side.side())).collect();
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::Config(format!("bc '{}' selects no nodes", bc.name)));
            }
            Ok(DirichletBC::on_nodes(
                &bc.name,
                &set,
                n_fields,
                field_index(bc.field),
                time_function(bc, horizon)?,
            ))
        })
        .collect()
}

fn initial_state(s: &Scenario, n_nodes: usize) -> Vec<f64> {
    if s.is_htc() {
        (0..n_nodes).flat_map(|_| [s.initial.h, s.initial.t]).collect()
    } else {
        vec![s.initial.p; n_nodes]
    }
}

fn field_names(s: &Scenario) -> Vec<&'static str> {
    if s.is_htc() {
        vec!["H", "T"]
    } else {
        vec!["p"]
    }
}

/// Samples `[field values…, α_c]` at a point.
type Sampler<'a, S> = dyn Fn(&S, &[f64], [f64; 2]) -> Vec<f64> + 'a;

struct Recorder<'a> {
    s: &'a Scenario,
    n_steps: usize,
    points: Vec<(String, Vec<Vec<f64>>)>,
    profiles: Vec<ProfileRecord>,
    snapshots: Vec<(usize, f64, Vec<f64>)>,
}

impl Recorder<'_> {
    fn record<S>(&mut self, step: usize, time: f64, system: &S, u: &[f64], sample: &Sampler<S>) {
        let s = self.s;
        for (cfg, (_, rows)) in s.outputs.points.iter().zip(self.points.iter_mut()) {
            let mut row = vec![time];
            row.extend(sample(system, u, cfg.at));
            rows.push(row);
        }
        for p in &s.outputs.profiles {
            let wanted = if p.steps.is_empty() {
                step == self.n_steps
            } else {
                p.steps.contains(&step)
            };
            if !wanted {
                continue;
            }
            let len = ((p.to[0] - p.from[0]).powi(2) + (p.to[1] - p.from[1]).powi(2)).sqrt();
            let n_fields = if s.is_htc() { 2 } else { 1 };
            let rows = (0..p.samples)
                .map(|k| {
                    let t = if p.samples > 1 { k as f64 / (p.samples - 1) as f64 } else { 0.0 };
                    let x = [p.from[0] + t * (p.to[0] - p.from[0]), p.from[1] + t * (p.to[1] - p.from[1])];
                    let mut row = vec![t * len];
                    row.extend(sample(system, u, x).into_iter().take(n_fields));
                    row
                })
                .collect();
            self.profiles.push(ProfileRecord {
                name: p.name.clone(),
                step,
                time,
                rows,
            });
        }
        if s.outputs.vtk_steps.contains(&step) {
            self.snapshots.push((step, time, u.to_vec()));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn drive<S: NonlinearSystem>(
    s: &Scenario,
    model: ModelKind,
    system: &mut S,
    mut u: Vec<f64>,
    bcs: Vec<DirichletBC>,
    sample: &Sampler<S>,
    alpha: &dyn Fn(&S) -> Option<f64>,
    tensor: Option<EffectiveTensor>,
    started: Instant,
) -> Result<RunOutput> {
    let times = time_levels(s.time.start, &s.time.segments);
    let transient = s.time.mode == TimeMode::Transient;
    let mut rec = Recorder {
        s,
        n_steps: times.len() - 1,
        points: s.outputs.points.iter().map(|p| (p.label.clone(), Vec::new())).collect(),
        profiles: Vec::new(),
        snapshots: Vec::new(),
    };
    rec.record(0, times[0], system, &u, sample);
    let steps = run_steps(system, &mut u, &times, transient, &bcs, &newton_settings(s), |r, state, sys| {
        log::debug!("{} step {} t={:e} iterations {}", model.label(), r.step, r.time, r.iterations);
        rec.record(r.step, r.time, sys, state, sample);
    })?;
    Ok(RunOutput {
        model,
        field_names: field_names(s),
        bc_names: bcs.iter().map(|b| b.name.clone()).collect(),
        bc_fields: s.bcs.iter().map(|b| b.field).collect(),
        steps,
        points: rec.points,
        profiles: rec.profiles,
        snapshots: rec.snapshots,
        dofs: u.len(),
        final_state: u,
        mean_alpha_c: alpha(system),
        elapsed: started.elapsed().as_secs_f64(),
        tensor,
    })
}

fn horizon(s: &Scenario) -> f64 {
    *time_levels(s.time.start, &s.time.segments).last().unwrap()
}

/// Macro mesh of the scenario, starting at the origin.
pub fn macro_mesh(s: &Scenario) -> Result<MacroMesh> {
    let m = s
        .macro_mesh
        .as_ref()
        .ok_or_else(|| Error::Config("scenario has no [macro_mesh]".into()))?;
    MacroMesh::structured(
        &MacroMesh::lines_from_widths(0.0, &m.x_widths),
        &MacroMesh::lines_from_widths(0.0, &m.y_widths),
        m.thickness,
    )
}

/// Homogenized run: RVE → Λ → FE solve.
pub fn run_macro(s: &Scenario) -> Result<RunOutput> {
    let started = Instant::now();
    if s.n_dim() != 2 {
        return Err(Error::Config("the macroscale solver is two-dimensional".into()));
    }
    let rve = build_rve(s)?;
    let tensor = rve_tensor(s, &rve)?;
    let mesh = macro_mesh(s)?;
    let extent = [
        mesh.nodes.iter().map(|x| x[0]).fold(f64::MIN, f64::max),
        mesh.nodes.iter().map(|x| x[1]).fold(f64::MIN, f64::max),
    ];
    let n_fields = if s.is_htc() { 2 } else { 1 };
    let side_nodes = |side: Side| {
        let plane = if side.is_max() { extent[side.axis()] } else { 0.0 };
        mesh.nodes_on(side.axis(), plane, 1e-9 * extent[side.axis()])
    };
    let bcs = build_bcs(s, n_fields, horizon(s), side_nodes)?;
    let u0 = initial_state(s, mesh.nodes.len());
    if s.is_htc() {
        let l = tensor.lambda / s.material.lambda0();
        let mut pb = HtcProblem::new(mesh, s.material.htc, [[l[(0, 0)], l[(0, 1)]], [l[(1, 0)], l[(1, 1)]]]);
        let sample = |pb: &HtcProblem, u: &[f64], x: [f64; 2]| {
            let h = pb.mesh.interpolate(u, 2, 0, x).unwrap_or(f64::NAN);
            let t = pb.mesh.interpolate(u, 2, 1, x).unwrap_or(f64::NAN);
            let g = (0..pb.mesh.gauss_points.len())
                .min_by(|&a, &b| {
                    let d = |i: usize| {
                        let p = pb.mesh.gauss_points[i].position;
                        (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)
                    };
                    d(a).total_cmp(&d(b))
                })
                .unwrap_or(0);
            vec![h, t, pb.states[g].alpha_c]
        };
        drive(s, ModelKind::Macro, &mut pb, u0, bcs, &sample, &|pb| Some(pb.mean_alpha_c()), Some(tensor), started)
    } else {
        let response = match s.macro_mesh.as_ref().map(|m| m.response).unwrap_or_default() {
            ResponsePath::Fast => MacroResponse::Fast(tensor.clone()),
            ResponsePath::Slow => MacroResponse::Slow(SlowRve {
                lambda0: rve.network.elements.iter().map(|e| e.lambda0).collect(),
                network: rve.network.clone(),
                pinned_node: rve.pinned_node,
                settings: solver_settings(s),
            }),
        };
        let mut pb = PressureProblem::new(mesh, s.material.permeability()?, s.material.storage(), response);
        let sample = |pb: &PressureProblem, u: &[f64], x: [f64; 2]| vec![pb.mesh.interpolate(u, 1, 0, x).unwrap_or(f64::NAN)];
        drive(s, ModelKind::Macro, &mut pb, u0, bcs, &sample, &|_| None, Some(tensor), started)
    }
}

/// Tiled full-model domain of the scenario.
pub fn full_domain(s: &Scenario, rve: &RveBuild) -> Result<TiledDomain> {
    tile_full_domain(&rve.network, &s.repetitions()?)
}

fn boundary_rule(s: &Scenario) -> BoundaryRule {
    match s.geometry.boundary {
        BoundarySelection::Cut => BoundaryRule::CutElements,
        BoundarySelection::Within(d) => BoundaryRule::WithinDistance(d),
    }
}

/// Fully resolved discrete run on the tiled RVE.
pub fn run_full(s: &Scenario) -> Result<RunOutput> {
    let started = Instant::now();
    let rve = build_rve(s)?;
    let dom = full_domain(s, &rve)?;
    let n_fields = if s.is_htc() { 2 } else { 1 };
    let rule = boundary_rule(s);
    let bcs = build_bcs(s, n_fields, horizon(s), |side| dom.boundary_nodes(side, rule))?;
    let u0 = initial_state(s, dom.network.nodes.len());
    let positions: Vec<Vec3> = dom.network.nodes.iter().map(|n| n.position).collect();
    let at = |x: [f64; 2]| Vec3::new(x[0], x[1], if s.n_dim() == 3 { 0.5 * dom.extent[2] } else { 0.0 });
    if s.material.kind == MaterialKind::Htc {
        let mut pb = DiscreteHtc::new(dom.network.clone(), s.material.htc, s.material.lambda0())?;
        let sample = |pb: &DiscreteHtc, u: &[f64], x: [f64; 2]| {
            let h: Vec<f64> = u.iter().step_by(2).copied().collect();
            let t: Vec<f64> = u.iter().skip(1).step_by(2).copied().collect();
            let a: Vec<f64> = pb.states.iter().map(|s| s.alpha_c).collect();
            let p = at(x);
            vec![idw(&positions, &h, &p, 4), idw(&positions, &t, &p, 4), idw(&positions, &a, &p, 4)]
        };
        drive(s, ModelKind::Full, &mut pb, u0, bcs, &sample, &|pb| Some(pb.mean_alpha_c()), None, started)
    } else {
        let mut pb = DiscretePressure::new(dom.network.clone(), s.material.permeability()?, s.material.storage())?;
        let sample = |_: &DiscretePressure, u: &[f64], x: [f64; 2]| vec![idw(&positions, u, &at(x), 4)];
        drive(s, ModelKind::Full, &mut pb, u0, bcs, &sample, &|_| None, None, started)
    }
}
