//! Hygro-thermo-chemical curing of a small block: temperature and humidity
//! at its centre, homogenized vs full lattice.

use discrete_homog::scenario::verify::peak;
use discrete_homog::scenario::{bundled_scenario, run_full, run_macro, write_run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = bundled_scenario("small_dam")?;
    let m = run_macro(&s)?;
    let f = run_full(&s)?;
    for (label, out) in [("homogenized", &m), ("full", &f)] {
        let rows = &out.points[0].1;
        let (t, v) = peak(rows, 2);
        let end = rows.last().unwrap();
        println!(
            "{label:>12}: peak {:.2} K above initial at {:.0} h, final H {:.4}, alpha_c {:.4}, {:.2} s",
            v - s.initial.t,
            t / 3600.0,
            end[1],
            end[3],
            out.elapsed
        );
    }
    println!("speed-up {:.1}x", f.elapsed / m.elapsed);
    let dir = std::env::temp_dir().join("small_dam");
    let files = write_run(&dir, &s, &m, None)?;
    println!("{} files in {}", files.len(), dir.display());
    Ok(())
}
