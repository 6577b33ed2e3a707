//! Transient van Genuchten flow: 200 ramp steps to 1 MPa then 200 holding
//! steps, compared with the steady solution.

use discrete_homog::scenario::{bundled_scenario, run_macro};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steady = run_macro(&bundled_scenario("prism_nonlinear")?)?;
    let target = steady.final_flux("right").unwrap();
    let s = bundled_scenario("prism_transient")?;
    let out = run_macro(&s)?;
    for (t, q) in out.flux_history("right").iter().step_by(25) {
        println!("t = {:5.1} d: inflow {q:8.3} g/day ({:+.2} % of steady)", t / 86400.0, 100.0 * (q / target - 1.0));
    }
    let last = out.final_flux("right").unwrap();
    println!("final {last:.3} g/day, steady {target:.3} g/day");
    Ok(())
}
