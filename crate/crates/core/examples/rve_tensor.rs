//! Effective conductivity tensor of a randomized RVE and the fast
//! (pre-computed) macroscopic response under van Genuchten permeability.

use discrete_homog::constitutive::PermeabilityModel;
use discrete_homog::geometry::Vec3;
use discrete_homog::rve::fast_response;
use discrete_homog::scenario::{build_rve, bundled_scenario, rve_tensor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = bundled_scenario("prism_linear_random")?;
    let rve = build_rve(&s)?;
    let t = rve_tensor(&s, &rve)?;
    let l0 = s.material.lambda0();
    println!("{} nodes, pinned node {}", rve.network.nodes.len(), rve.pinned_node);
    println!("Lambda / lambda0 =");
    for i in 0..2 {
        println!("  [{:8.5} {:8.5}]", t.lambda[(i, 0)] / l0, t.lambda[(i, 1)] / l0);
    }

    let law = PermeabilityModel::concrete();
    let grad = Vec3::new(1e6 / 1.2, 0.0, 0.0);
    for p in [0.0, 2.5e5, 5e5, 1e6] {
        let f = fast_response(&t, law.relative(p), &grad);
        println!("p = {p:8.0} Pa: kappa_r {:.4}, flux ({:.4e}, {:.4e}) kg/m2/s", law.relative(p), f.x, f.y);
    }
    Ok(())
}
