//! Convex polygon clipped by half-planes, tracking which plane made each edge.

use super::Vec3;

/// Polygon in the xy-plane; `tags[i]` labels the edge `verts[i] -> verts[i+1]`.
#[derive(Debug, Clone)]
pub(super) struct Polygon {
    pub verts: Vec<Vec3>,
    pub tags: Vec<Option<usize>>,
}

impl Polygon {
    pub fn rectangle(half: [f64; 2]) -> Self {
        let (a, b) = (half[0], half[1]);
        Polygon {
            verts: vec![
                Vec3::new(-a, -b, 0.0),
                Vec3::new(a, -b, 0.0),
                Vec3::new(a, b, 0.0),
                Vec3::new(-a, b, 0.0),
            ],
            tags: vec![None; 4],
        }
    }

    /// Keeps `{y : n·y <= c}`; the new edge carries `tag`.
    pub fn clip(&mut self, n: &Vec3, c: f64, tag: usize, eps: f64) {
        let f: Vec<f64> = self.verts.iter().map(|v| n.dot(v) - c).collect();
        if f.iter().all(|&v| v <= eps) {
            return;
        }
        let m = self.verts.len();
        let mut verts = Vec::with_capacity(m + 1);
        let mut tags = Vec::with_capacity(m + 1);
        for i in 0..m {
            let k = (i + 1) % m;
            let (fi, fk) = (f[i], f[k]);
            let (vi, vk) = (self.verts[i], self.verts[k]);
            let cut = || vi + (vk - vi) * (fi / (fi - fk));
            match (fi <= eps, fk <= eps) {
                (true, true) => {
                    verts.push(vi);
                    tags.push(self.tags[i]);
                }
                (true, false) => {
                    verts.push(vi);
                    tags.push(self.tags[i]);
                    verts.push(if fi.abs() <= eps { vi } else { cut() });
                    tags.push(Some(tag));
                }
                (false, true) => {
                    verts.push(if fk.abs() <= eps { vk } else { cut() });
                    tags.push(self.tags[i]);
                }
                (false, false) => {}
            }
        }
        // drop zero-length edges, keeping the tag of the edge that follows
        let mut out_v: Vec<Vec3> = Vec::with_capacity(verts.len());
        let mut out_t: Vec<Option<usize>> = Vec::with_capacity(verts.len());
        for (v, t) in verts.into_iter().zip(tags) {
            if let Some(last) = out_v.last() {
                if (v - last).norm() <= eps {
                    *out_t.last_mut().unwrap() = t;
                    continue;
                }
            }
            out_v.push(v);
            out_t.push(t);
        }
        while out_v.len() > 1 && (out_v[0] - out_v[out_v.len() - 1]).norm() <= eps {
            out_v.pop();
            out_t.pop();
        }
        self.verts = out_v;
        self.tags = out_t;
    }

    pub fn radius(&self) -> f64 {
        self.verts.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        let m = self.verts.len();
        (0..m)
            .map(|i| {
                let (a, b) = (self.verts[i], self.verts[(i + 1) % m]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            * 0.5
    }

    /// `(tag, length, midpoint)` for every edge.
    pub fn edges(&self) -> impl Iterator<Item = (Option<usize>, f64, Vec3)> + '_ {
        let m = self.verts.len();
        (0..m).map(move |i| {
            let (a, b) = (self.verts[i], self.verts[(i + 1) % m]);
            (self.tags[i], (b - a).norm(), (a + b) * 0.5)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square_to_half() {
        let mut p = Polygon::rectangle([1.0, 1.0]);
        p.clip(&Vec3::new(1.0, 0.0, 0.0), 0.0, 7, 1e-12);
        assert!((p.area() - 2.0).abs() < 1e-14);
        let cut: Vec<_> = p.edges().filter(|e| e.0 == Some(7)).collect();
        assert_eq!(cut.len(), 1);
        assert!((cut[0].1 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn clip_through_vertex_leaves_no_zero_edges() {
        let mut p = Polygon::rectangle([1.0, 1.0]);
        let n = Vec3::new(1.0, 1.0, 0.0).normalize();
        p.clip(&n, 0.0, 3, 1e-12);
        assert_eq!(p.verts.len(), 3);
        assert!((p.area() - 2.0).abs() < 1e-14);
        assert!(p.edges().all(|e| e.1 > 1e-9));
        // a plane touching only a vertex changes nothing
        let before = p.verts.len();
        p.clip(&Vec3::new(-1.0, 0.0, 0.0), 1.0, 4, 1e-12);
        assert_eq!(p.verts.len(), before);
    }
}
