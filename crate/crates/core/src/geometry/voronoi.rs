//! Periodic Voronoi tessellation and its dual network.
//!
//! Each cell is built independently by clipping a box around its nucleus with
//! the bisector planes of the nearest periodic images, nearest first, until no
//! remaining image can reach the cell.

use super::clip2d::Polygon;
use super::clip3d::Polyhedron;
use super::{ConduitElement, DualNetwork, LatticeNode, Vec3};
use crate::error::{Error, Result};

/// Facets smaller than this fraction of L² are treated as degenerate.
const FACET_AREA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    node: usize,
    shift: [i32; 3],
    offset: Vec3,
    dist: f64,
}

fn candidates(nuclei: &[Vec3], p: usize, cell: &[f64; 3], n_dim: usize) -> Vec<Candidate> {
    let l_max = cell[..n_dim].iter().cloned().fold(0.0, f64::max);
    let reach = 2.0 * (n_dim as f64).sqrt() * l_max;
    let range = |i: usize| if i < n_dim { -2..=2 } else { 0..=0 };
    let mut out = Vec::new();
    for (j, xj) in nuclei.iter().enumerate() {
        for sx in range(0) {
            for sy in range(1) {
                for sz in range(2) {
                    let shift = [sx, sy, sz];
                    if j == p && shift == [0, 0, 0] {
                        continue;
                    }
                    let offset = xj - nuclei[p]
                        + Vec3::new(
                            sx as f64 * cell[0],
                            sy as f64 * cell[1],
                            sz as f64 * cell[2],
                        );
                    let dist = offset.norm();
                    if dist < reach {
                        out.push(Candidate {
                            node: j,
                            shift,
                            offset,
                            dist,
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.dist.total_cmp(&b.dist));
    out
}

/// Facet of cell `p` shared with image `(j, shift)`, described from P's side.
struct Facet {
    candidate: usize,
    area: f64,
    centroid: Vec3,
}

fn cell_2d(cands: &[Candidate], cell: &[f64; 3], eps: f64) -> Result<(f64, Vec<Facet>)> {
    let mut poly = Polygon::rectangle([cell[0], cell[1]]);
    let mut radius = poly.radius();
    for (k, c) in cands.iter().enumerate() {
        if c.dist >= 2.0 * radius {
            break;
        }
        poly.clip(&(c.offset / c.dist), 0.5 * c.dist, k, eps);
        radius = poly.radius();
    }
    if poly.tags.iter().any(|t| t.is_none()) {
        return Err(Error::Tessellation("cell not closed by bisectors".into()));
    }
    let facets = poly
        .edges()
        .map(|(tag, len, mid)| Facet {
            candidate: tag.unwrap(),
            area: len * super::PLANE_THICKNESS,
            centroid: mid,
        })
        .collect();
    Ok((poly.area() * super::PLANE_THICKNESS, facets))
}

fn cell_3d(cands: &[Candidate], cell: &[f64; 3], eps: f64) -> Result<(f64, Vec<Facet>)> {
    let mut poly = Polyhedron::cuboid([cell[0], cell[1], cell[2]]);
    let mut radius = poly.radius();
    for (k, c) in cands.iter().enumerate() {
        if c.dist >= 2.0 * radius {
            break;
        }
        poly.clip(&(c.offset / c.dist), 0.5 * c.dist, k, eps);
        radius = poly.radius();
    }
    if poly.faces.iter().any(|f| f.tag.is_none()) {
        return Err(Error::Tessellation("cell not closed by bisectors".into()));
    }
    let facets = poly
        .faces
        .iter()
        .map(|f| {
            let (area, centroid) = f.area_centroid();
            Facet {
                candidate: f.tag.unwrap(),
                area,
                centroid,
            }
        })
        .collect();
    Ok((poly.volume(), facets))
}

fn shift_positive(s: [i32; 3]) -> bool {
    s.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

/// Builds the dual network of the periodic Voronoi tessellation of `nuclei`
/// (positions in `[0, L)`), assigning `lambda0` to every element.
pub fn build_voronoi_dual(
    nuclei: &[Vec3],
    cell: &[f64; 3],
    n_dim: usize,
    lambda0: f64,
) -> Result<DualNetwork> {
    if nuclei.is_empty() {
        return Err(Error::DegenerateCell { placed: 0 });
    }
    let mut cell = *cell;
    if n_dim == 2 {
        cell[2] = super::PLANE_THICKNESS;
    }
    let l_max = cell[..n_dim].iter().cloned().fold(0.0, f64::max);
    let eps = 1e-12 * l_max;
    let area_tol = FACET_AREA_TOL * l_max * l_max;

    let cells: Vec<Result<(f64, Vec<Facet>, Vec<Candidate>)>> = (0..nuclei.len())
        .map(|p| {
            let cands = candidates(nuclei, p, &cell, n_dim);
            let (vol, facets) = if n_dim == 2 {
                cell_2d(&cands, &cell, eps)?
            } else {
                cell_3d(&cands, &cell, eps)?
            };
            Ok((vol, facets, cands))
        })
        .collect();

    let mut nodes = Vec::with_capacity(nuclei.len());
    let mut elements = Vec::new();
    for (p, res) in cells.into_iter().enumerate() {
        let (volume, facets, cands) = res?;
        if !(volume > 0.0) {
            return Err(Error::DegenerateControlVolume { node: p, volume });
        }
        nodes.push(LatticeNode {
            id: p,
            position: nuclei[p],
            volume,
        });
        for f in facets {
            let c = cands[f.candidate];
            let canonical = p < c.node || (p == c.node && shift_positive(c.shift));
            if !canonical || f.area < area_tol {
                continue;
            }
            let e = c.offset / c.dist;
            elements.push(ConduitElement {
                node_p: p,
                node_q: c.node,
                length: c.dist,
                direction: e,
                normal: e,
                area: f.area,
                projected_area: f.area,
                centroid: nuclei[p] + f.centroid,
                image_shift: c.shift,
                lambda0,
            });
        }
    }
    let net = DualNetwork {
        nodes,
        elements,
        cell,
        n_dim,
        periodic: true,
    };
    let components = net.components();
    if components.len() > 1 {
        return Err(Error::SingularRve { components });
    }
    Ok(net)
}
