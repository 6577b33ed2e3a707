mod common;

use common::{lambdas, voronoi};
use discrete_homog::constitutive::randomize_lambda0;
use discrete_homog::geometry::{build_skewed_lattice, build_voronoi_dual, generate_periodic_nuclei, NucleiOptions, Vec3};
use discrete_homog::numerics::RandomStream;
use discrete_homog::rve::{assemble_pinned, dissipation, effective_tensor, flux_imbalance, fast_fields};
use discrete_homog::scenario::{rve_ensemble, summarize, summarize_rve, EnsembleSpec};
use proptest::prelude::*;

#[test]
fn uniform_voronoi_fluctuation_vanishes() {
    let mut s = RandomStream::new(11);
    for seed in 0..5 {
        let net = voronoi(seed, 0.1, 2, 0.01, 3.0);
        let sys = assemble_pinned(&net, &lambdas(&net), 0, &Default::default()).unwrap();
        let a = Vec3::new(s.uniform() - 0.5, s.uniform() - 0.5, 0.0) * 1e4;
        let sol = sys.solve_eigen_gradient(&a).unwrap();
        let p1 = sol.p1.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(p1 <= 1e-10 * a.norm() * 0.1, "{p1}");
        assert!((sol.f + a * 3.0).norm() <= 1e-9 * 3.0 * a.norm());
    }
}

#[test]
fn dissipation_equals_tensor_quadratic_form() {
    let mut net = voronoi(3, 0.1, 2, 0.01, 1.0);
    randomize_lambda0(&mut net, 1.0, 0.4, &mut RandomStream::new(5)).unwrap();
    let lam = lambdas(&net);
    let t = effective_tensor(&net, &lam, 0, &Default::default()).unwrap();
    let sys = assemble_pinned(&net, &lam, 0, &Default::default()).unwrap();
    for a in [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.3, -2.0, 0.0), Vec3::new(-1.1, 0.7, 0.0)] {
        let sol = sys.solve_eigen_gradient(&a).unwrap();
        let energy = dissipation(&net, &lam, &a, &sol.p1);
        assert!((energy - t.quadratic(&a, &a)).abs() <= 1e-10 * energy);
        // −a·f is the same quantity seen from the flux
        assert!((energy + a.dot(&sol.f)).abs() <= 1e-10 * energy);
        assert!(flux_imbalance(&net, &sol.j0) < 1e-10);
    }
}

#[test]
fn tensor_is_symmetric_and_below_voigt_bound() {
    let mut net = voronoi(8, 0.15, 2, 0.01, 1.0);
    randomize_lambda0(&mut net, 1.0, 0.5, &mut RandomStream::new(2)).unwrap();
    let lam = lambdas(&net);
    let t = effective_tensor(&net, &lam, 3, &Default::default()).unwrap();
    assert!(t.asymmetry < 1e-10, "{}", t.asymmetry);
    // zero fluctuation is admissible, so its dissipation bounds a·Λa from above
    for a in [Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)] {
        let voigt = dissipation(&net, &lam, &a, &vec![0.0; net.nodes.len()]);
        assert!(t.quadratic(&a, &a) <= voigt * (1.0 + 1e-12));
        assert!(t.quadratic(&a, &a) > 0.0);
    }
}

#[test]
fn series_chain_gives_harmonic_mean() {
    let n = 12;
    let mut net = build_skewed_lattice(&[1.2, 0.1], &[n, 1], 0.0, 1.0).unwrap();
    randomize_lambda0(&mut net, 1.0, 0.6, &mut RandomStream::new(17)).unwrap();
    let lam = lambdas(&net);
    let t = effective_tensor(&net, &lam, 0, &Default::default()).unwrap();
    let along_x: Vec<f64> = net
        .elements
        .iter()
        .zip(&lam)
        .filter(|(e, _)| e.direction.x.abs() > 0.5)
        .map(|(_, l)| *l)
        .collect();
    assert_eq!(along_x.len(), n);
    let harmonic = n as f64 / along_x.iter().map(|l| 1.0 / l).sum::<f64>();
    assert!((t.lambda[(0, 0)] - harmonic).abs() <= 1e-12 * harmonic);
}

#[test]
fn superposition_reproduces_direct_solves() {
    let mut net = voronoi(21, 0.1, 2, 0.01, 1.0);
    randomize_lambda0(&mut net, 1.0, 0.3, &mut RandomStream::new(1)).unwrap();
    let lam = lambdas(&net);
    let t = effective_tensor(&net, &lam, 0, &Default::default()).unwrap();
    let sys = assemble_pinned(&net, &lam, 0, &Default::default()).unwrap();
    let mut s = RandomStream::new(4);
    for _ in 0..20 {
        let a = Vec3::new(s.uniform() - 0.5, s.uniform() - 0.5, 0.0) * 2e6;
        let direct = sys.solve_eigen_gradient(&a).unwrap();
        let fast = fast_fields(&t, 1.0, &a).unwrap();
        assert!((fast.f - direct.f).norm() <= 1e-10 * direct.f.norm());
        let scale = direct.p1.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (x, y) in fast.p1.iter().zip(&direct.p1) {
            assert!((x - y).abs() <= 1e-10 * scale);
        }
    }
}

#[test]
fn lognormal_draws_match_requested_moments() {
    let (mean, cov) = (5.618e-12, 0.2);
    let mut s = RandomStream::new(99);
    let n = 200_000;
    let x: Vec<f64> = (0..n).map(|_| s.lognormal(mean, cov)).collect();
    let m = x.iter().sum::<f64>() / n as f64;
    let sd = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    assert!((m / mean - 1.0).abs() < 3e-3);
    assert!((sd / m / cov - 1.0).abs() < 1e-2);
    // E[1/λ] = (1 + cov²)/mean, so the harmonic mean is mean/(1 + cov²) = 0.9615 mean
    let harmonic = n as f64 / x.iter().map(|v| 1.0 / v).sum::<f64>();
    assert!((harmonic / mean - 1.0 / 1.04).abs() < 3e-3);
}

#[test]
fn three_dimensional_cube_respects_packing_bound() {
    let net = voronoi(1, 0.05, 3, 0.01, 1.0);
    // spheres of diameter l_min around each nucleus cannot fill more than 0.7405 of the cube
    let sphere = std::f64::consts::PI / 6.0 * 1e-6;
    let cap = 0.7405 * 0.05f64.powi(3) / sphere;
    assert!((net.nodes.len() as f64) < cap, "{} nuclei, cap {cap:.0}", net.nodes.len());
    let s = summarize_rve(&net).unwrap();
    assert!(s.volume_error < 1e-9 && s.surface_residual < 1e-9);
}

#[test]
#[ignore = "random sequential addition at l_min = 10 mm saturates near 90 nodes in a 50 mm cube"]
fn three_dimensional_cube_has_about_500_dofs() {
    let net = voronoi(1, 0.05, 3, 0.01, 1.0);
    let n = net.nodes.len() as f64;
    assert!((250.0..=750.0).contains(&n), "{n} nodes");
}

#[test]
fn study_spread_shrinks_with_rve_size() {
    let spec = EnsembleSpec {
        sizes: vec![0.05, 0.1, 0.15],
        structures: 12,
        variants: 2,
        n_dim: 2,
        l_min: 0.01,
        lambda0: 1.0,
        cov: 0.2,
        seed: 7,
        settings: Default::default(),
    };
    let rows = summarize(&rve_ensemble(&spec).unwrap(), 2);
    assert_eq!(rows.len(), 3);
    for w in rows.windows(2) {
        assert!(w[1].std_diagonal < w[0].std_diagonal, "{rows:?}");
        assert!(w[1].mean_nodes > w[0].mean_nodes);
    }
}

fn shifted(seed: u64, shift: [f64; 2]) -> (discrete_homog::geometry::DualNetwork, discrete_homog::geometry::DualNetwork) {
    let cell = [0.08, 0.08, 1.0];
    let nuclei = generate_periodic_nuclei(&cell, 2, 0.01, &mut RandomStream::new(seed), &NucleiOptions::default()).unwrap();
    let moved: Vec<Vec3> = nuclei
        .iter()
        .map(|p| Vec3::new((p.x + shift[0]).rem_euclid(cell[0]), (p.y + shift[1]).rem_euclid(cell[1]), p.z))
        .collect();
    (
        build_voronoi_dual(&nuclei, &cell, 2, 1.0).unwrap(),
        build_voronoi_dual(&moved, &cell, 2, 1.0).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identities_hold_on_random_networks(seed in 0u64..1_000_000, size in 0.04f64..0.12) {
        let net = voronoi(seed, size, 2, 0.01, 1.0);
        let s = summarize_rve(&net).unwrap();
        prop_assert!(s.volume_error < 1e-9);
        prop_assert!(s.surface_residual < 1e-9);
        prop_assert!(s.fabric_error.unwrap() < 1e-9);
    }

    #[test]
    fn tensor_is_invariant_under_periodic_translation(seed in 0u64..1_000_000, dx in 0.0f64..0.08, dy in 0.0f64..0.08) {
        let (a, b) = shifted(seed, [dx, dy]);
        prop_assert_eq!(a.nodes.len(), b.nodes.len());
        prop_assert_eq!(a.elements.len(), b.elements.len());
        // λ₀ is a periodic field of the facet position that travels with the nuclei
        let tau = std::f64::consts::TAU / 0.08;
        let field = |x: f64, y: f64| 1.0 + 0.6 * (tau * x).sin() * (tau * y).cos() + 0.3 * (2.0 * tau * y).sin();
        let la: Vec<f64> = a.elements.iter().map(|e| field(e.centroid.x, e.centroid.y)).collect();
        let lb: Vec<f64> = b.elements.iter().map(|e| field(e.centroid.x - dx, e.centroid.y - dy)).collect();
        let ta = effective_tensor(&a, &la, 0, &Default::default()).unwrap();
        let tb = effective_tensor(&b, &lb, 0, &Default::default()).unwrap();
        prop_assert!((ta.lambda - tb.lambda).norm() <= 1e-9 * ta.lambda.norm(), "{} vs {}", ta.lambda, tb.lambda);
    }

    #[test]
    fn pinned_node_does_not_change_flux(seed in 0u64..1_000_000, pin in 0usize..1000, ax in -1.0f64..1.0, ay in -1.0f64..1.0) {
        let mut net = voronoi(seed, 0.1, 2, 0.01, 1.0);
        randomize_lambda0(&mut net, 1.0, 0.3, &mut RandomStream::new(seed)).unwrap();
        let lam = lambdas(&net);
        let a = Vec3::new(ax, ay, 0.0);
        prop_assume!(a.norm() > 1e-3);
        let f0 = assemble_pinned(&net, &lam, 0, &Default::default()).unwrap().solve_eigen_gradient(&a).unwrap().f;
        let k = pin % net.nodes.len();
        let f1 = assemble_pinned(&net, &lam, k, &Default::default()).unwrap().solve_eigen_gradient(&a).unwrap().f;
        prop_assert!((f0 - f1).norm() <= 1e-10 * f0.norm());
    }
}
