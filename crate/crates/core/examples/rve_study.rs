//! RVE size study: mean and scatter of the normalized tensor entries over
//! internal structures and lognormal λ₀ variants.

use discrete_homog::scenario::{bundled_scenario, rve_ensemble, summarize, EnsembleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = bundled_scenario("rve_study")?;
    let mut spec = EnsembleSpec::from_scenario(&s)?;
    // smaller than the bundled 10 x 10 for a quick run
    spec.structures = 5;
    spec.variants = 5;
    let samples = rve_ensemble(&spec)?;
    println!("{:>8} {:>8} {:>10} {:>10} {:>10}", "size", "nodes", "diag", "std", "|off|");
    for r in summarize(&samples, spec.n_dim) {
        println!(
            "{:>8.3} {:>8.0} {:>10.4} {:>10.4} {:>10.4}",
            r.size, r.mean_nodes, r.mean_diagonal, r.std_diagonal, r.mean_abs_off_diagonal
        );
    }
    Ok(())
}
