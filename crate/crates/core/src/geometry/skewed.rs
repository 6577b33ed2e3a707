//! Structured periodic lattice whose facet normals are tilted away from the
//! contact directions, so that S★ < S.

use super::{ConduitElement, DualNetwork, LatticeNode, Vec3, PLANE_THICKNESS};
use crate::error::{Error, Result};

/// Regular lattice with `divisions[i]` nodes along axis `i` of the cell.
///
/// Every facet normal is rotated by `skew_deg` from its contact direction
/// towards the next axis, with the rotation sign alternating node by node.
pub fn build_skewed_lattice(
    cell: &[f64],
    divisions: &[usize],
    skew_deg: f64,
    lambda0: f64,
) -> Result<DualNetwork> {
    let n_dim = cell.len();
    if !(n_dim == 2 || n_dim == 3) || divisions.len() != n_dim {
        return Err(Error::InvalidParameter(
            "cell and divisions must both have 2 or 3 entries".into(),
        ));
    }
    if divisions.contains(&0) || cell.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter("empty lattice".into()));
    }
    if !(0.0..90.0).contains(&skew_deg) {
        return Err(Error::InvalidParameter(format!(
            "skew angle must lie in [0, 90) degrees, got {skew_deg}"
        )));
    }
    let theta = skew_deg.to_radians();
    let mut full = [PLANE_THICKNESS; 3];
    let mut div = [1usize; 3];
    let mut step = [PLANE_THICKNESS; 3];
    for i in 0..n_dim {
        full[i] = cell[i];
        div[i] = divisions[i];
        step[i] = cell[i] / divisions[i] as f64;
    }
    let index = |i: [usize; 3]| (i[2] * div[1] + i[1]) * div[0] + i[0];
    let volume = step.iter().product::<f64>();

    let mut nodes = Vec::with_capacity(div.iter().product());
    for k in 0..div[2] {
        for j in 0..div[1] {
            for i in 0..div[0] {
                let mut x = Vec3::zeros();
                for (a, &c) in [i, j, k].iter().enumerate().take(n_dim) {
                    x[a] = (c as f64 + 0.5) * step[a];
                }
                nodes.push(LatticeNode {
                    id: index([i, j, k]),
                    position: x,
                    volume,
                });
            }
        }
    }

    let mut elements = Vec::new();
    for node in 0..nodes.len() {
        let c = [node % div[0], (node / div[0]) % div[1], node / (div[0] * div[1])];
        let sign = if (c[0] + c[1] + c[2]) % 2 == 0 { 1.0 } else { -1.0 };
        for axis in 0..n_dim {
            let mut q = c;
            let mut shift = [0i32; 3];
            q[axis] += 1;
            if q[axis] == div[axis] {
                q[axis] = 0;
                shift[axis] = 1;
            }
            let mut e = Vec3::zeros();
            e[axis] = 1.0;
            let mut t = Vec3::zeros();
            t[(axis + 1) % n_dim] = 1.0;
            let o = e * theta.cos() + t * (sign * theta.sin());
            let area = (0..3).filter(|&a| a != axis).map(|a| step[a]).product::<f64>();
            elements.push(ConduitElement {
                node_p: node,
                node_q: index(q),
                length: step[axis],
                direction: e,
                normal: o,
                area,
                projected_area: o.dot(&e).abs() * area,
                centroid: nodes[node].position + e * (0.5 * step[axis]),
                image_shift: shift,
                lambda0,
            });
        }
    }
    Ok(DualNetwork {
        nodes,
        elements,
        cell: full,
        n_dim,
        periodic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projected_area_follows_cosine() {
        for (deg, ratio) in [(0.0, 1.0), (60.0, 0.5)] {
            let net = build_skewed_lattice(&[1.0, 1.0], &[4, 4], deg, 1.0).unwrap();
            net.validate().unwrap();
            for e in &net.elements {
                assert!((e.projected_area / e.area - ratio).abs() < 1e-15);
            }
        }
        let net = build_skewed_lattice(&[1.0, 1.0], &[3, 3], 25.84, 1.0).unwrap();
        assert!((net.elements[0].projected_area / net.elements[0].area - 0.9).abs() < 1e-4);
    }

    #[test]
    fn three_dimensional_lattice_is_valid() {
        let net = build_skewed_lattice(&[0.3, 0.2, 0.1], &[3, 2, 1], 30.0, 1.0).unwrap();
        net.validate().unwrap();
        assert_eq!(net.nodes.len(), 6);
        assert_eq!(net.elements.len(), 18);
        assert!(!net.normals_parallel());
    }

    #[test]
    fn rejects_right_angle() {
        assert!(build_skewed_lattice(&[1.0, 1.0], &[2, 2], 90.0, 1.0).is_err());
    }
}
