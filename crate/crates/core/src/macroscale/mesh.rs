//! Bilinear quadrilateral meshes with 2×2 Gauss integration.

use crate::error::{Error, Result};

const GAUSS: f64 = 0.577_350_269_189_625_8;
const CORNERS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

/// Precomputed data of one integration point.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPoint {
    pub element: usize,
    pub shape: [f64; 4],
    /// ∂N/∂x, ∂N/∂y per element node.
    pub grad: [[f64; 2]; 4],
    /// Weight × det J × thickness (m³).
    pub weight: f64,
    pub position: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct MacroMesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise node ids.
    pub elements: Vec<[usize; 4]>,
    /// Out-of-plane thickness (m).
    pub thickness: f64,
    pub gauss_points: Vec<GaussPoint>,
}

pub(crate) fn shape(xi: f64, eta: f64) -> ([f64; 4], [[f64; 2]; 4]) {
    let mut n = [0.0; 4];
    let mut d = [[0.0; 2]; 4];
    for (k, &(a, b)) in CORNERS.iter().enumerate() {
        n[k] = 0.25 * (1.0 + a * xi) * (1.0 + b * eta);
        d[k] = [0.25 * a * (1.0 + b * eta), 0.25 * b * (1.0 + a * xi)];
    }
    (n, d)
}

impl MacroMesh {
    pub fn new(nodes: Vec<[f64; 2]>, elements: Vec<[usize; 4]>, thickness: f64) -> Result<Self> {
        if !(thickness > 0.0) {
            return Err(Error::InvalidParameter("mesh thickness must be positive".into()));
        }
        let mut gauss_points = Vec::with_capacity(4 * elements.len());
        for (e, conn) in elements.iter().enumerate() {
            if conn.iter().any(|&i| i >= nodes.len()) {
                return Err(Error::InvalidParameter(format!("element {e} refers to a missing node")));
            }
            for &(a, b) in &CORNERS {
                let (xi, eta) = (a * GAUSS, b * GAUSS);
                let (n, d) = shape(xi, eta);
                let mut jac = [[0.0; 2]; 2];
                let mut pos = [0.0; 2];
                for k in 0..4 {
                    let x = nodes[conn[k]];
                    for r in 0..2 {
                        pos[r] += n[k] * x[r];
                        for c in 0..2 {
                            jac[r][c] += d[k][c] * x[r];
                        }
                    }
                }
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if !(det > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "element {e} has non-positive Jacobian determinant {det:e}"
                    )));
                }
                // J = ∂x/∂ξ, so ∇N = J⁻ᵀ ∂N/∂ξ
                let inv = [
                    [jac[1][1] / det, -jac[0][1] / det],
                    [-jac[1][0] / det, jac[0][0] / det],
                ];
                let mut grad = [[0.0; 2]; 4];
                for k in 0..4 {
                    grad[k][0] = d[k][0] * inv[0][0] + d[k][1] * inv[1][0];
                    grad[k][1] = d[k][0] * inv[0][1] + d[k][1] * inv[1][1];
                }
                gauss_points.push(GaussPoint {
                    element: e,
                    shape: n,
                    grad,
                    weight: det * thickness,
                    position: pos,
                });
            }
        }
        Ok(MacroMesh {
            nodes,
            elements,
            thickness,
            gauss_points,
        })
    }

    /// Tensor-product mesh on the given coordinate lines.
    pub fn structured(xs: &[f64], ys: &[f64], thickness: f64) -> Result<Self> {
        if xs.len() < 2 || ys.len() < 2 || xs.windows(2).chain(ys.windows(2)).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "mesh lines must be strictly increasing with at least two entries".into(),
            ));
        }
        let nx = xs.len();
        let mut nodes = Vec::with_capacity(nx * ys.len());
        for &y in ys {
            for &x in xs {
                nodes.push([x, y]);
            }
        }
        let mut elements = Vec::new();
        for j in 0..ys.len() - 1 {
            for i in 0..nx - 1 {
                let n0 = j * nx + i;
                elements.push([n0, n0 + 1, n0 + nx + 1, n0 + nx]);
            }
        }
        Self::new(nodes, elements, thickness)
    }

    /// Coordinate lines from a start coordinate and successive widths.
    pub fn lines_from_widths(start: f64, widths: &[f64]) -> Vec<f64> {
        let mut out = vec![start];
        for w in widths {
            out.push(out.last().unwrap() + w);
        }
        out
    }

    /// Nodes with coordinate `axis` equal to `value` within `tol`.
    pub fn nodes_on(&self, axis: usize, value: f64, tol: f64) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| (self.nodes[i][axis] - value).abs() <= tol)
            .collect()
    }

    pub fn nearest_node(&self, p: [f64; 2]) -> usize {
        (0..self.nodes.len())
            .min_by(|&a, &b| {
                let da = (self.nodes[a][0] - p[0]).powi(2) + (self.nodes[a][1] - p[1]).powi(2);
                let db = (self.nodes[b][0] - p[0]).powi(2) + (self.nodes[b][1] - p[1]).powi(2);
                da.total_cmp(&db)
            })
            .unwrap_or(0)
    }

    /// Element containing `p` and the local coordinates there.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [f64; 2])> {
        for (e, conn) in self.elements.iter().enumerate() {
            let (mut xi, mut eta) = (0.0, 0.0);
            for _ in 0..20 {
                let (n, d) = shape(xi, eta);
                let mut r = [-p[0], -p[1]];
                let mut jac = [[0.0; 2]; 2];
                for k in 0..4 {
                    let x = self.nodes[conn[k]];
                    for a in 0..2 {
                        r[a] += n[k] * x[a];
                        jac[a][0] += d[k][0] * x[a];
                        jac[a][1] += d[k][1] * x[a];
                    }
                }
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                let dxi = (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
                let deta = (-jac[1][0] * r[0] + jac[0][0] * r[1]) / det;
                xi -= dxi;
                eta -= deta;
                if dxi.abs() + deta.abs() < 1e-13 {
                    break;
                }
            }
            if xi.abs() <= 1.0 + 1e-9 && eta.abs() <= 1.0 + 1e-9 {
                return Some((e, [xi, eta]));
            }
        }
        None
    }

    /// Interpolates a nodal field (stride `n_fields`, component `field`) at `p`.
    pub fn interpolate(&self, u: &[f64], n_fields: usize, field: usize, p: [f64; 2]) -> Option<f64> {
        let (e, [xi, eta]) = self.locate(p)?;
        let (n, _) = shape(xi, eta);
        Some(
            self.elements[e]
                .iter()
                .zip(n)
                .map(|(&i, ni)| ni * u[i * n_fields + field])
                .sum(),
        )
    }

    pub fn volume(&self) -> f64 {
        self.gauss_points.iter().map(|g| g.weight).sum()
    }
}
