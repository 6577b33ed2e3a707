//! Tiling a periodic RVE into a finite, non-periodic discrete domain.

use super::{ConduitElement, DualNetwork, LatticeNode};
use crate::error::{Error, Result};

/// Outer face of the tiled box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

impl Side {
    pub const ALL: [Side; 6] = [Side::XMin, Side::XMax, Side::YMin, Side::YMax, Side::ZMin, Side::ZMax];

    pub fn axis(self) -> usize {
        self as usize / 2
    }

    pub fn is_max(self) -> bool {
        self as usize % 2 == 1
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    fn from_axis(axis: usize, max: bool) -> Side {
        Side::ALL[2 * axis + max as usize]
    }
}

/// How boundary nodes of the tiled domain are selected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryRule {
    /// Nodes that lost an element crossing the plane.
    CutElements,
    /// Nodes within the given distance of the plane.
    WithinDistance(f64),
}

#[derive(Debug, Clone)]
pub struct TiledDomain {
    pub network: DualNetwork,
    pub repetitions: [usize; 3],
    /// Box extent (m).
    pub extent: [f64; 3],
    /// RVE node each tiled node copies.
    pub rve_node: Vec<usize>,
    /// Tile index of each node.
    pub tile: Vec<[usize; 3]>,
    side_bits: Vec<u8>,
}

impl TiledDomain {
    pub fn touches(&self, node: usize, side: Side) -> bool {
        self.side_bits[node] & side.bit() != 0
    }

    pub fn boundary_nodes(&self, side: Side, rule: BoundaryRule) -> Vec<usize> {
        let axis = side.axis();
        let plane = if side.is_max() { self.extent[axis] } else { 0.0 };
        (0..self.network.nodes.len())
            .filter(|&i| match rule {
                BoundaryRule::CutElements => self.touches(i, side),
                BoundaryRule::WithinDistance(d) => {
                    (self.network.nodes[i].position[axis] - plane).abs() <= d
                }
            })
            .collect()
    }
}

/// Copies `rve` `repetitions[i]` times along each axis. Contacts whose partner
/// falls outside the box are removed and both ends flagged as boundary nodes.
pub fn tile_full_domain(rve: &DualNetwork, repetitions: &[usize]) -> Result<TiledDomain> {
    if !rve.periodic {
        return Err(Error::InvalidParameter("tiling needs a periodic RVE".into()));
    }
    let n_dim = rve.n_dim;
    if repetitions.len() != n_dim || repetitions.iter().any(|&r| r < 1) {
        return Err(Error::InvalidParameter(format!(
            "need {n_dim} repetitions, each at least 1"
        )));
    }
    let mut reps = [1usize; 3];
    reps[..n_dim].copy_from_slice(repetitions);
    let n_tiles: usize = reps.iter().product();
    let n_rve = rve.nodes.len();
    let tile_index = |t: [usize; 3]| (t[2] * reps[1] + t[1]) * reps[0] + t[0];
    let tile_coords = |k: usize| [k % reps[0], (k / reps[0]) % reps[1], k / (reps[0] * reps[1])];

    let mut nodes = Vec::with_capacity(n_tiles * n_rve);
    let mut rve_node = Vec::with_capacity(n_tiles * n_rve);
    let mut tile = Vec::with_capacity(n_tiles * n_rve);
    for k in 0..n_tiles {
        let t = tile_coords(k);
        let offset = rve.period_offset([t[0] as i32, t[1] as i32, t[2] as i32]);
        for n in &rve.nodes {
            nodes.push(LatticeNode {
                id: nodes.len(),
                position: n.position + offset,
                volume: n.volume,
            });
            rve_node.push(n.id);
            tile.push(t);
        }
    }
    let mut side_bits = vec![0u8; nodes.len()];
    let mut elements = Vec::new();
    for k in 0..n_tiles {
        let t = tile_coords(k);
        for e in &rve.elements {
            let p = k * n_rve + e.node_p;
            let mut target = [0usize; 3];
            let mut inside = true;
            for a in 0..n_dim {
                let u = t[a] as i64 + e.image_shift[a] as i64;
                if u < 0 || u >= reps[a] as i64 {
                    inside = false;
                    side_bits[p] |= Side::from_axis(a, u >= reps[a] as i64).bit();
                } else {
                    target[a] = u as usize;
                }
            }
            // Q end: its partner would sit at tile t - shift
            for a in 0..n_dim {
                let u = t[a] as i64 - e.image_shift[a] as i64;
                if u < 0 || u >= reps[a] as i64 {
                    side_bits[k * n_rve + e.node_q] |= Side::from_axis(a, u >= reps[a] as i64).bit();
                }
            }
            if inside {
                elements.push(ConduitElement {
                    node_p: p,
                    node_q: tile_index(target) * n_rve + e.node_q,
                    image_shift: [0, 0, 0],
                    centroid: e.centroid
                        + rve.period_offset([t[0] as i32, t[1] as i32, t[2] as i32]),
                    ..e.clone()
                });
            }
        }
    }
    let mut extent = rve.cell;
    for a in 0..n_dim {
        extent[a] *= reps[a] as f64;
    }
    Ok(TiledDomain {
        network: DualNetwork {
            nodes,
            elements,
            cell: extent,
            n_dim,
            periodic: false,
        },
        repetitions: reps,
        extent,
        rve_node,
        tile,
        side_bits,
    })
}

/// Number of elements a tiling keeps: Σ_e Π_a (reps_a − |s_a|)⁺.
pub fn expected_element_count(rve: &DualNetwork, repetitions: &[usize]) -> usize {
    rve.elements
        .iter()
        .map(|e| {
            (0..rve.n_dim)
                .map(|a| (repetitions[a] as i64 - e.image_shift[a].abs() as i64).max(0) as usize)
                .product::<usize>()
        })
        .sum()
}
