//! Runs the paired full/homogenized suites.
//!
//! cargo run --release --example verify -- [linear|nonlinear|transient|htc]...

use discrete_homog::scenario::{run_suite, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut suites = std::env::args().skip(1).map(|a| a.parse::<Suite>()).collect::<Result<Vec<_>, _>>()?;
    if suites.is_empty() {
        suites = Suite::ALL.to_vec();
    }
    let mut all_passed = true;
    for suite in suites {
        let report = run_suite(suite)?;
        println!("{report}");
        for (label, run) in &report.runs {
            println!("  {label}: {} dofs, {} iterations, {:.2} s", run.dofs, run.total_iterations(), run.elapsed);
        }
        all_passed &= report.passed();
    }
    if !all_passed {
        std::process::exit(1);
    }
    Ok(())
}
