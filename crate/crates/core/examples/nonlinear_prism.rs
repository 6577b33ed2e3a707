//! van Genuchten load path to 1 MPa: total flux per step and the centre-line
//! pressure profile of the adaptive and coarse macro meshes against the full
//! model.

use discrete_homog::scenario::verify::{coarse, profile_period_rms, profile_rms};
use discrete_homog::scenario::{bundled_scenario, run_full, run_macro};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = bundled_scenario("prism_nonlinear")?;
    let full = run_full(&s)?;
    let adaptive = run_macro(&s)?;
    let coarse = run_macro(&coarse(s.clone()))?;
    println!("{:>6} {:>12} {:>12}", "step", "full", "adaptive");
    for (f, a) in full.flux_history("right").iter().zip(adaptive.flux_history("right")).step_by(5) {
        println!("{:>6.0} {:>12.3} {:>12.3}", f.0, f.1, a.1);
    }
    let period = s.geometry.rve_size[0];
    for step in [10, 25, 50] {
        let raw = (profile_rms(&adaptive, &full, "center", step).unwrap(), profile_rms(&coarse, &full, "center", step).unwrap());
        let avg = (
            profile_period_rms(&adaptive, &full, "center", step, period).unwrap(),
            profile_period_rms(&coarse, &full, "center", step, period).unwrap(),
        );
        println!(
            "step {step}: profile error adaptive {:.0} Pa ({:.0} period-averaged), coarse {:.0} Pa ({:.0})",
            raw.0, avg.0, raw.1, avg.1
        );
    }
    Ok(())
}
