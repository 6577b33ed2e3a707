mod common;

use common::{lambdas, rel, voronoi};
use discrete_homog::constitutive::{randomize_lambda0, CapacitySource, HtcParams, PermeabilityModel};
use discrete_homog::fullmodel::{idw, DiscretePressure};
use discrete_homog::geometry::{build_skewed_lattice, tile_full_domain, BoundaryRule, Side, Vec3};
use discrete_homog::macroscale::{run_steps, time_levels, DirichletBC, MacroMesh, MacroResponse, PressureProblem, TimeFunction};
use discrete_homog::numerics::{newton_solve, NewtonSettings, NonlinearSystem, RandomStream, StepContext};
use discrete_homog::rve::EffectiveTensor;
use discrete_homog::scenario::verify::{coarse, with_slow_response};
use discrete_homog::scenario::{bundled_scenario, run_full, run_macro};

fn isotropic(mesh: MacroMesh, lambda0: f64) -> PressureProblem {
    PressureProblem::new(
        mesh,
        PermeabilityModel::linear(lambda0),
        CapacitySource::concrete(),
        MacroResponse::Fast(EffectiveTensor::isotropic(lambda0, 2)),
    )
}

/// Nodal max error of the steady solution for the harmonic field sin(πx) sinh(πy).
fn harmonic_error(n: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let exact = |x: &[f64; 2]| (pi * x[0]).sin() * (pi * x[1]).sinh() / pi.sinh();
    let lines: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let pb = isotropic(MacroMesh::structured(&lines, &lines, 1.0).unwrap(), 1.0);
    let cons: Vec<(usize, f64)> = pb
        .mesh
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, x)| x.iter().any(|&c| c.abs() < 1e-12 || (c - 1.0).abs() < 1e-12))
        .map(|(i, x)| (i, exact(x)))
        .collect();
    let mut u = vec![0.0; pb.n_dofs()];
    let prev = u.clone();
    let ctx = StepContext { time: 0.0, dt: None, previous: &prev };
    newton_solve(&pb, &mut u, &ctx, &cons, &Default::default()).unwrap();
    pb.mesh.nodes.iter().zip(&u).map(|(x, v)| (v - exact(x)).abs()).fold(0.0, f64::max)
}

#[test]
fn bilinear_elements_converge_at_second_order() {
    let e: Vec<f64> = [4, 8, 16, 32].iter().map(|&n| harmonic_error(n)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.8, "{e:?}");
    }
}

/// Centre value of a 1D transient strip (diffusivity 1) after 0.1 s.
fn strip_centre(dt: f64) -> f64 {
    let xs = MacroMesh::lines_from_widths(0.0, &[0.05; 20]);
    let mut pb = isotropic(MacroMesh::structured(&xs, &[0.0, 0.05], 1.0).unwrap(), 1.64e-5);
    let left = pb.mesh.nodes_on(0, 0.0, 1e-9);
    let right = pb.mesh.nodes_on(0, 1.0, 1e-9);
    let bcs = [
        DirichletBC::on_nodes("left", &left, 1, 0, TimeFunction::constant(1.0)),
        DirichletBC::on_nodes("right", &right, 1, 0, TimeFunction::constant(0.0)),
    ];
    let mut u = vec![0.0; pb.n_dofs()];
    let n = (0.1 / dt).round() as usize;
    let times = time_levels(0.0, &[(dt, n)]);
    run_steps(&mut pb, &mut u, &times, true, &bcs, &Default::default(), |_, _, _| {}).unwrap();
    let mid = pb.mesh.nearest_node([0.5, 0.0]);
    u[mid]
}

#[test]
fn backward_euler_is_first_order_in_time() {
    let reference = strip_centre(1e-5);
    let e: Vec<f64> = [0.01, 0.005, 0.0025].iter().map(|&dt| (strip_centre(dt) - reference).abs()).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((0.85..1.15).contains(&order), "{e:?}");
    }
}

fn random_prism(seed: u64) -> (DiscretePressure, Vec<usize>, Vec<usize>) {
    let mut rve = voronoi(seed, 0.1, 2, 0.01, 5.618e-12);
    randomize_lambda0(&mut rve, 5.618e-12, 0.3, &mut RandomStream::new(seed + 1)).unwrap();
    let dom = tile_full_domain(&rve, &[4, 1]).unwrap();
    let left = dom.boundary_nodes(Side::XMin, BoundaryRule::CutElements);
    let right = dom.boundary_nodes(Side::XMax, BoundaryRule::CutElements);
    let pb = DiscretePressure::new(dom.network, PermeabilityModel::linear(5.618e-12), CapacitySource::concrete()).unwrap();
    (pb, left, right)
}

#[test]
fn discrete_transient_respects_maximum_principle_and_balance() {
    let (mut pb, left, right) = random_prism(3);
    let bcs = [
        DirichletBC::on_nodes("left", &left, 1, 0, TimeFunction::constant(0.0)),
        DirichletBC::on_nodes("right", &right, 1, 0, TimeFunction::new(vec![(0.0, 0.0), (1e5, 1e6)]).unwrap()),
    ];
    let volumes: Vec<f64> = pb.network.nodes.iter().map(|n| n.volume).collect();
    let mut u = vec![0.0; pb.n_dofs()];
    let mut prev = u.clone();
    let times = time_levels(0.0, &[(2e4, 15)]);
    let mut worst_balance: f64 = 0.0;
    let mut dt_prev = 0.0;
    run_steps(&mut pb, &mut u, &times, true, &bcs, &Default::default(), |rec, state, _| {
        let top = 1e6f64.min(rec.time / 1e5 * 1e6);
        for &v in state {
            assert!(v >= -1e-6 && v <= top + 1e-6, "{v} outside [0, {top}] at t = {}", rec.time);
        }
        let dt = rec.time - dt_prev;
        dt_prev = rec.time;
        // net supply through both ends equals the change of stored mass
        let stored: f64 = volumes.iter().zip(state.iter().zip(&prev)).map(|(w, (a, b))| w * 1.64e-5 * (a - b) / dt).sum();
        let supply: f64 = rec.reactions.iter().sum();
        worst_balance = worst_balance.max((supply - stored).abs() / rec.reactions[1].abs());
        prev = state.to_vec();
    })
    .unwrap();
    assert!(worst_balance < 1e-7, "{worst_balance}");
}

#[test]
fn discrete_steady_state_conserves_mass() {
    let (mut pb, left, right) = random_prism(5);
    pb.permeability = PermeabilityModel::concrete();
    let bcs = [
        DirichletBC::on_nodes("left", &left, 1, 0, TimeFunction::constant(0.0)),
        DirichletBC::on_nodes("right", &right, 1, 0, TimeFunction::new(vec![(0.0, 0.0), (10.0, 1e6)]).unwrap()),
    ];
    let mut u = vec![0.0; pb.n_dofs()];
    let times = time_levels(0.0, &[(1.0, 10)]);
    // the imbalance equals the summed interior residual, so it is bounded by the Newton tolerance
    let tight = NewtonSettings { tol: 1e-13, ..Default::default() };
    let recs = run_steps(&mut pb, &mut u, &times, false, &bcs, &tight, |_, _, _| {}).unwrap();
    for r in &recs {
        assert!(r.reactions[1] > 0.0 && r.reactions[0] < 0.0);
        assert!((r.reactions[0] + r.reactions[1]).abs() <= 1e-8 * r.reactions[1], "{:?}", r);
    }
}

#[test]
fn slow_and_fast_paths_agree() {
    let s = coarse(bundled_scenario("prism_nonlinear").unwrap());
    let fast = run_macro(&s).unwrap();
    let slow = run_macro(&with_slow_response(s)).unwrap();
    for (a, b) in fast.flux_history("right").iter().zip(slow.flux_history("right")) {
        assert!(rel(b.1, a.1) < 1e-9, "{} vs {}", a.1, b.1);
    }
}

#[test]
fn sealed_block_heats_by_released_hydration_energy() {
    let s = bundled_scenario("adiabatic_block").unwrap();
    let p = HtcParams::default();
    for out in [run_macro(&s).unwrap(), run_full(&s).unwrap()] {
        let rows = &out.points[0].1;
        for r in rows {
            let released = p.c * p.q_c_inf * r[3] / p.heat_capacity();
            assert!((r[2] - 293.15 - released).abs() < 1e-6 * p.adiabatic_rise(), "{r:?}");
        }
        let last = rows.last().unwrap();
        assert!(last[3] > 0.9 * p.alpha_c_inf && last[3] <= p.alpha_c_inf);
    }
}

#[test]
fn inverse_distance_weighting_is_exact_at_symmetric_points() {
    let net = build_skewed_lattice(&[1.0, 1.0], &[10, 10], 0.0, 1.0).unwrap();
    let pos: Vec<Vec3> = net.nodes.iter().map(|n| n.position).collect();
    let vals: Vec<f64> = pos.iter().map(|x| 3.0 * x.x - 2.0 * x.y + 0.5).collect();
    // centre of four lattice nodes: the weights are equal and the linear field averages out
    let c = Vec3::new(0.5, 0.5, 0.0);
    assert!((idw(&pos, &vals, &c, 4) - (3.0 * 0.5 - 2.0 * 0.5 + 0.5)).abs() < 1e-14);
    for x in &pos {
        let v = 3.0 * x.x - 2.0 * x.y + 0.5;
        assert_eq!(idw(&pos, &vals, x, 4), v);
    }
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v = idw(&pos, &vals, &Vec3::new(0.37, 0.81, 0.0), 6);
    assert!(v >= lo && v <= hi);
}

#[test]
fn macro_interpolation_reproduces_bilinear_fields() {
    let mesh = MacroMesh::structured(&[0.0, 0.2, 0.5, 1.0], &[0.0, 0.3, 0.7], 1.0).unwrap();
    let u: Vec<f64> = mesh.nodes.iter().map(|x| 1.0 + 2.0 * x[0] - x[1] + 4.0 * x[0] * x[1]).collect();
    for p in [[0.1, 0.1], [0.33, 0.6], [0.99, 0.01]] {
        let v = mesh.interpolate(&u, 1, 0, p).unwrap();
        assert!((v - (1.0 + 2.0 * p[0] - p[1] + 4.0 * p[0] * p[1])).abs() < 1e-13);
    }
    assert!(lambdas(&build_skewed_lattice(&[1.0, 1.0], &[2, 2], 0.0, 2.0).unwrap()).iter().all(|&l| l == 2.0));
}
