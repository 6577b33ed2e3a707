//! Periodic Voronoi RVE: nuclei placement, dual network, invariant checks
//! and the lattice text format.

use discrete_homog::geometry::{build_voronoi_dual, export_network, generate_periodic_nuclei, import_network, NucleiOptions};
use discrete_homog::numerics::RandomStream;
use discrete_homog::scenario::summarize_rve;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    for (cell, n_dim) in [([0.15, 0.15, 1.0], 2), ([0.05, 0.05, 0.05], 3)] {
        let mut stream = RandomStream::new(seed);
        let nuclei = generate_periodic_nuclei(&cell, n_dim, 0.01, &mut stream, &NucleiOptions::default())?;
        let net = build_voronoi_dual(&nuclei, &cell, n_dim, 1.0)?;
        let s = summarize_rve(&net)?;
        println!(
            "{n_dim}D cell {:?}: {} nodes, {} elements, volume error {:.1e}, surface residual {:.1e}, fabric error {:.1e}",
            &cell[..n_dim],
            s.nodes,
            s.elements,
            s.volume_error,
            s.surface_residual,
            s.fabric_error.unwrap_or(f64::NAN)
        );
        let text = export_network(&net);
        assert_eq!(export_network(&import_network(&text)?), text);
        println!("  lattice file: {} lines", text.lines().count());
    }
    Ok(())
}
