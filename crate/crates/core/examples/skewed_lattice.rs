//! Facets tilted against the contact direction: S★ = S cos θ and the
//! effective conductivity drops by the same factor.

use discrete_homog::geometry::build_skewed_lattice;
use discrete_homog::rve::effective_tensor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for deg in [0.0, 25.84, 45.0, 60.0] {
        let net = build_skewed_lattice(&[0.15, 0.15], &[6, 6], deg, 1.0)?;
        let lam: Vec<f64> = net.elements.iter().map(|e| e.lambda0).collect();
        let t = effective_tensor(&net, &lam, 0, &Default::default())?;
        println!(
            "skew {deg:5.2} deg: Lambda_xx {:.4}, Lambda_yy {:.4}, cos {:.4}",
            t.lambda[(0, 0)],
            t.lambda[(1, 1)],
            f64::to_radians(deg).cos()
        );
    }
    Ok(())
}
