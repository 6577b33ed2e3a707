//! Periodic dual networks: lattice nodes with control volumes and the
//! conduit elements connecting them.

mod clip2d;
mod clip3d;
pub mod io;
pub mod nuclei;
pub mod skewed;
pub mod tiling;
pub mod voronoi;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub use io::{export_network, import_network, read_network, write_network};
pub use nuclei::{generate_periodic_nuclei, NucleiOptions};
pub use skewed::build_skewed_lattice;
pub use tiling::{expected_element_count, tile_full_domain, BoundaryRule, Side, TiledDomain};
pub use voronoi::build_voronoi_dual;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Out-of-plane thickness carried by 2D networks (m).
pub const PLANE_THICKNESS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeNode {
    pub id: usize,
    pub position: Vec3,
    /// Control volume W (m³; 2D areas times [`PLANE_THICKNESS`]).
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConduitElement {
    pub node_p: usize,
    pub node_q: usize,
    /// Node distance h (m).
    pub length: f64,
    /// Unit contact vector e_λ from P towards the image of Q.
    pub direction: Vec3,
    /// Unit facet normal o.
    pub normal: Vec3,
    /// Facet area S (m²).
    pub area: f64,
    /// Projected area S★ = |o·e_λ| S.
    pub projected_area: f64,
    /// Facet centroid; set to the contact midpoint when read from a file.
    pub centroid: Vec3,
    /// Periodic image of Q: x_Q + shift·L is the connected point.
    pub image_shift: [i32; 3],
    /// Intrinsic permeability coefficient λ₀ (s).
    pub lambda0: f64,
}

impl ConduitElement {
    /// Contact vector x_PQ = h e_λ.
    pub fn contact_vector(&self) -> Vec3 {
        self.direction * self.length
    }

    /// Geometric conductance factor S★/h.
    pub fn shape_factor(&self) -> f64 {
        self.projected_area / self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualNetwork {
    pub nodes: Vec<LatticeNode>,
    pub elements: Vec<ConduitElement>,
    /// Period lengths; for 2D the third entry is [`PLANE_THICKNESS`].
    pub cell: [f64; 3],
    pub n_dim: usize,
    pub periodic: bool,
}

/// Per-node residual of the closed-surface identity Σ S e_out.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceBalance {
    pub residual: f64,
    pub total_area: f64,
}

impl DualNetwork {
    /// Cell volume V₀.
    pub fn cell_volume(&self) -> f64 {
        self.cell.iter().product()
    }

    pub fn period_offset(&self, shift: [i32; 3]) -> Vec3 {
        Vec3::new(
            shift[0] as f64 * self.cell[0],
            shift[1] as f64 * self.cell[1],
            shift[2] as f64 * self.cell[2],
        )
    }

    /// Position of the image of Q seen from element `e`.
    pub fn image_position(&self, element: &ConduitElement) -> Vec3 {
        self.nodes[element.node_q].position + self.period_offset(element.image_shift)
    }

    pub fn total_volume(&self) -> f64 {
        self.nodes.iter().map(|n| n.volume).sum()
    }

    /// Whether every element has o ∥ e_λ.
    pub fn normals_parallel(&self) -> bool {
        self.elements
            .iter()
            .all(|e| (e.normal.dot(&e.direction).abs() - 1.0).abs() < 1e-12)
    }

    /// Element indices incident to each node (self-loops listed once).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.elements.iter().enumerate() {
            inc[e.node_p].push(k);
            if e.node_q != e.node_p {
                inc[e.node_q].push(k);
            }
        }
        inc
    }

    /// Σ_Q S e_out for every control volume.
    pub fn surface_balance(&self) -> Vec<SurfaceBalance> {
        let mut sum = vec![Vec3::zeros(); self.nodes.len()];
        let mut area = vec![0.0; self.nodes.len()];
        for e in &self.elements {
            sum[e.node_p] += e.direction * e.area;
            sum[e.node_q] -= e.direction * e.area;
            area[e.node_p] += e.area;
            area[e.node_q] += e.area;
        }
        sum.iter()
            .zip(area)
            .map(|(s, a)| SurfaceBalance {
                residual: s.norm(),
                total_area: a,
            })
            .collect()
    }

    /// Σ_e h S e⊗e.
    pub fn fabric_tensor(&self) -> Mat3 {
        self.elements.iter().fold(Mat3::zeros(), |acc, e| {
            acc + e.direction * e.direction.transpose() * (e.length * e.area)
        })
    }

    /// Connected components over the element graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for e in &self.elements {
            let (a, b) = (find(&mut parent, e.node_p), find(&mut parent, e.node_q));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Checks node/element type invariants and, for periodic networks, the
    /// volume partition and closed-surface identity.
    pub fn validate(&self) -> Result<()> {
        if !(self.n_dim == 2 || self.n_dim == 3) {
            return Err(Error::InvalidParameter(format!("n_dim = {}", self.n_dim)));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(Error::Invariant {
                    entity: "node",
                    id: node.id,
                    message: format!("ids must be consecutive (expected {i})"),
                });
            }
            if !(node.volume > 0.0) {
                return Err(Error::DegenerateControlVolume {
                    node: i,
                    volume: node.volume,
                });
            }
        }
        let scale = self.cell[..self.n_dim].iter().cloned().fold(0.0, f64::max);
        for (k, e) in self.elements.iter().enumerate() {
            let fail = |message: String| Error::Invariant {
                entity: "element",
                id: k,
                message,
            };
            if e.node_p >= self.nodes.len() || e.node_q >= self.nodes.len() {
                return Err(fail("node index out of range".into()));
            }
            if (e.direction.norm() - 1.0).abs() > 1e-9 || (e.normal.norm() - 1.0).abs() > 1e-9 {
                return Err(fail("direction and normal must be unit vectors".into()));
            }
            if !(e.area > 0.0) || !(e.projected_area > 0.0) || e.projected_area > e.area * (1.0 + 1e-12) {
                return Err(fail(format!(
                    "need 0 < S* <= S (S = {:e}, S* = {:e})",
                    e.area, e.projected_area
                )));
            }
            let expected = e.normal.dot(&e.direction).abs() * e.area;
            if (expected - e.projected_area).abs() > 1e-9 * e.area {
                return Err(fail(format!(
                    "S* = {:e} but |o·e| S = {expected:e}",
                    e.projected_area
                )));
            }
            if !(e.length > 0.0) || !(e.lambda0 > 0.0) {
                return Err(fail("length and lambda0 must be positive".into()));
            }
            if !self.periodic && e.image_shift != [0, 0, 0] {
                return Err(fail("image shift on a non-periodic network".into()));
            }
            if self.n_dim == 2 && (e.image_shift[2] != 0 || e.direction.z != 0.0) {
                return Err(fail("out-of-plane component in a 2D network".into()));
            }
            let x_pq = self.image_position(e) - self.nodes[e.node_p].position;
            if (x_pq - e.contact_vector()).norm() > 1e-9 * scale.max(e.length) {
                return Err(fail(format!(
                    "h e = {:?} does not match node separation {:?}",
                    e.contact_vector().as_slice(),
                    x_pq.as_slice()
                )));
            }
        }
        if self.periodic {
            let v0 = self.cell_volume();
            let total = self.total_volume();
            if (total - v0).abs() > 1e-9 * v0 {
                return Err(Error::NetworkInvariant(format!(
                    "control volumes sum to {total:e}, cell volume is {v0:e}"
                )));
            }
            for (i, b) in self.surface_balance().iter().enumerate() {
                if b.residual > 1e-9 * b.total_area {
                    return Err(Error::Invariant {
                        entity: "node",
                        id: i,
                        message: format!(
                            "control volume not closed: |Σ S e| = {:e}, Σ S = {:e}",
                            b.residual, b.total_area
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// Copy with every element's λ₀ set to `value`.
    pub fn with_uniform_lambda0(mut self, value: f64) -> Self {
        for e in &mut self.elements {
            e.lambda0 = value;
        }
        self
    }
}

/// Minimum-image displacement from `a` to `b` in a periodic cell.
pub(crate) fn periodic_delta(a: &Vec3, b: &Vec3, cell: &[f64; 3], n_dim: usize) -> Vec3 {
    let mut d = b - a;
    for i in 0..n_dim {
        d[i] -= cell[i] * (d[i] / cell[i]).round();
    }
    d
}
