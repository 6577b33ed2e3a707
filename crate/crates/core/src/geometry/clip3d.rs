//! Convex polyhedron clipped by half-spaces. Faces are planar polygons
//! ordered counter-clockwise about their outward normal.

use super::Vec3;

#[derive(Debug, Clone)]
pub(super) struct Face {
    pub verts: Vec<Vec3>,
    pub normal: Vec3,
    pub tag: Option<usize>,
}

impl Face {
    /// Area and area-weighted centroid.
    pub fn area_centroid(&self) -> (f64, Vec3) {
        let a0 = self.verts[0];
        let mut area = 0.0;
        let mut c = Vec3::zeros();
        for w in self.verts[1..].windows(2) {
            let t = (w[0] - a0).cross(&(w[1] - a0)).dot(&self.normal) * 0.5;
            area += t;
            c += (a0 + w[0] + w[1]) * (t / 3.0);
        }
        if area.abs() > 0.0 {
            c /= area;
        } else {
            c = a0;
        }
        (area, c)
    }
}

#[derive(Debug, Clone)]
pub(super) struct Polyhedron {
    pub faces: Vec<Face>,
}

fn dedupe(points: &mut Vec<Vec3>, eps: f64) {
    let mut out: Vec<Vec3> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        if !out.iter().any(|q| (p - q).norm() <= eps) {
            out.push(p);
        }
    }
    *points = out;
}

/// Orders coplanar points counter-clockwise about `normal`.
fn sort_ccw(points: &mut [Vec3], normal: &Vec3) {
    let c = points.iter().fold(Vec3::zeros(), |a, p| a + p) / points.len() as f64;
    let u = (points[0] - c).normalize();
    let v = normal.cross(&u);
    points.sort_by(|a, b| {
        let (da, db) = (a - c, b - c);
        let ta = da.dot(&v).atan2(da.dot(&u));
        let tb = db.dot(&v).atan2(db.dot(&u));
        ta.total_cmp(&tb)
    });
}

impl Polyhedron {
    pub fn cuboid(half: [f64; 3]) -> Self {
        let mut faces = Vec::with_capacity(6);
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut n = Vec3::zeros();
                n[axis] = sign;
                let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
                let mut verts = Vec::with_capacity(4);
                for (sb, sc) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                    let mut p = Vec3::zeros();
                    p[axis] = sign * half[axis];
                    p[b] = sb * half[b];
                    p[c] = sc * half[c];
                    verts.push(p);
                }
                sort_ccw(&mut verts, &n);
                faces.push(Face {
                    verts,
                    normal: n,
                    tag: None,
                });
            }
        }
        Polyhedron { faces }
    }

    /// Keeps `{y : n·y <= c}`; the cap face carries `tag`.
    pub fn clip(&mut self, n: &Vec3, c: f64, tag: usize, eps: f64) {
        let outside = self
            .faces
            .iter()
            .any(|f| f.verts.iter().any(|v| n.dot(v) - c > eps));
        if !outside {
            return;
        }
        let mut cap: Vec<Vec3> = Vec::new();
        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        for face in &self.faces {
            let f: Vec<f64> = face.verts.iter().map(|v| n.dot(v) - c).collect();
            let m = face.verts.len();
            let mut verts = Vec::with_capacity(m + 1);
            for i in 0..m {
                let k = (i + 1) % m;
                let (vi, vk) = (face.verts[i], face.verts[k]);
                let (fi, fk) = (f[i], f[k]);
                if fi <= eps {
                    verts.push(vi);
                    if fi.abs() <= eps {
                        cap.push(vi);
                    }
                }
                if (fi <= eps) != (fk <= eps) && fi.abs() > eps && fk.abs() > eps {
                    let p = vi + (vk - vi) * (fi / (fi - fk));
                    verts.push(p);
                    cap.push(p);
                }
            }
            dedupe(&mut verts, eps);
            if verts.len() >= 3 {
                faces.push(Face {
                    verts,
                    normal: face.normal,
                    tag: face.tag,
                });
            }
        }
        dedupe(&mut cap, eps);
        if cap.len() >= 3 {
            sort_ccw(&mut cap, n);
            faces.push(Face {
                verts: cap,
                normal: *n,
                tag: Some(tag),
            });
        }
        self.faces = faces;
    }

    pub fn radius(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| f.verts.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Volume by the divergence theorem about the origin.
    pub fn volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let (a, c) = f.area_centroid();
                a * f.normal.dot(&c) / 3.0
            })
            .sum()
    }
}
