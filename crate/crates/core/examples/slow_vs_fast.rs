//! The macro flux from unit RVE solves at every integration point (slow
//! path) against the pre-computed tensor (fast path).

use discrete_homog::scenario::verify::with_slow_response;
use discrete_homog::scenario::{bundled_scenario, run_macro};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = bundled_scenario("prism_nonlinear")?;
    let fast = run_macro(&s)?;
    let slow = run_macro(&with_slow_response(s))?;
    let (a, b) = (fast.final_flux("right").unwrap(), slow.final_flux("right").unwrap());
    println!("fast {a:.9} g/day in {:.3} s", fast.elapsed);
    println!("slow {b:.9} g/day in {:.3} s", slow.elapsed);
    println!("relative difference {:.1e}", (a - b).abs() / a);
    Ok(())
}
