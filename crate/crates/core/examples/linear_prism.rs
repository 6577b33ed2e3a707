//! Linear steady flow through the 1.2 m prism: homogenized vs fully
//! resolved, uniform and randomized λ₀.

use discrete_homog::scenario::{bundled_scenario, run_full, run_macro, write_run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["prism_linear", "prism_linear_random"] {
        let s = bundled_scenario(name)?;
        let m = run_macro(&s)?;
        let f = run_full(&s)?;
        let (qm, qf) = (m.final_flux("right").unwrap(), f.final_flux("right").unwrap());
        println!(
            "{name}: homogenized {qm:.2} g/day ({} dofs), full {qf:.2} g/day ({} dofs), difference {:.2} %",
            m.dofs,
            f.dofs,
            100.0 * (qm - qf) / qf
        );
        let dir = std::env::temp_dir().join(name);
        write_run(&dir, &s, &m, None)?;
        println!("  outputs in {}", dir.display());
    }
    Ok(())
}
