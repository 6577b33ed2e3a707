//! Line-oriented text format for dual networks.
//!
//! ```text
//! DIM n PERIODIC 0|1 CELL Lx Ly [Lz]
//! NODE id x y [z] W
//! ELEM id p q S Sstar h ex ey [ez] ox oy [oz] sx sy [sz] lambda0
//! ```
//! Lines starting with `#` are comments. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use super::{ConduitElement, DualNetwork, LatticeNode, Vec3, PLANE_THICKNESS};
use crate::error::{Error, Result};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes `network`; `export → import` reproduces every field bit-for-bit
/// except element centroids, which are not stored.
pub fn export_network(network: &DualNetwork) -> String {
    let d = network.n_dim;
    let mut s = String::new();
    let cell: Vec<String> = network.cell[..d].iter().map(|&v| num(v)).collect();
    let _ = writeln!(
        s,
        "DIM {d} PERIODIC {} CELL {}",
        network.periodic as u8,
        cell.join(" ")
    );
    for n in &network.nodes {
        let x: Vec<String> = n.position.iter().take(d).map(|&v| num(v)).collect();
        let _ = writeln!(s, "NODE {} {} {}", n.id, x.join(" "), num(n.volume));
    }
    for (k, e) in network.elements.iter().enumerate() {
        let vec = |v: &Vec3| v.iter().take(d).map(|&c| num(c)).collect::<Vec<_>>().join(" ");
        let shift: Vec<String> = e.image_shift[..d].iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            s,
            "ELEM {k} {} {} {} {} {} {} {} {} {}",
            e.node_p,
            e.node_q,
            num(e.area),
            num(e.projected_area),
            num(e.length),
            vec(&e.direction),
            vec(&e.normal),
            shift.join(" "),
            num(e.lambda0)
        );
    }
    s
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
    pos: usize,
}

impl<'a> Line<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            path: Default::default(),
            line: self.number,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str> {
        let t = self
            .tokens
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err("missing field"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, keyword: &str) -> Result<()> {
        let t = self.next()?;
        if t == keyword {
            Ok(())
        } else {
            Err(self.err(format!("expected `{keyword}`, found `{t}`")))
        }
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| self.err(format!("invalid {what} `{t}`")))
    }

    fn vec(&mut self, d: usize, what: &str) -> Result<Vec3> {
        let mut v = Vec3::zeros();
        for i in 0..d {
            v[i] = self.parse(what)?;
        }
        Ok(v)
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err("trailing fields"))
        }
    }
}

/// Parses a network and validates its invariants.
pub fn import_network(text: &str) -> Result<DualNetwork> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(number, l)| Line {
            number,
            tokens: l.split_whitespace().collect(),
            pos: 0,
        });
    let mut header = lines.next().ok_or(Error::Parse {
        path: Default::default(),
        line: 0,
        message: "empty file".into(),
    })?;
    header.expect("DIM")?;
    let n_dim: usize = header.parse("dimension")?;
    if !(n_dim == 2 || n_dim == 3) {
        return Err(header.err(format!("dimension must be 2 or 3, got {n_dim}")));
    }
    header.expect("PERIODIC")?;
    let periodic = match header.next()? {
        "0" => false,
        "1" => true,
        t => return Err(header.err(format!("PERIODIC must be 0 or 1, found `{t}`"))),
    };
    header.expect("CELL")?;
    let mut cell = [PLANE_THICKNESS; 3];
    for c in cell.iter_mut().take(n_dim) {
        *c = header.parse("cell length")?;
    }
    header.finish()?;

    let mut nodes = Vec::new();
    let mut elements = Vec::new();
    for mut line in lines {
        match line.next()? {
            "NODE" => {
                let id: usize = line.parse("node id")?;
                let position = line.vec(n_dim, "coordinate")?;
                let volume: f64 = line.parse("volume")?;
                line.finish()?;
                if id != nodes.len() {
                    return Err(line.err(format!("node ids must be consecutive, found {id}")));
                }
                nodes.push(LatticeNode {
                    id,
                    position,
                    volume,
                });
            }
            "ELEM" => {
                let id: usize = line.parse("element id")?;
                if id != elements.len() {
                    return Err(line.err(format!("element ids must be consecutive, found {id}")));
                }
                let node_p: usize = line.parse("node id")?;
                let node_q: usize = line.parse("node id")?;
                let area: f64 = line.parse("area")?;
                let projected_area: f64 = line.parse("projected area")?;
                let length: f64 = line.parse("length")?;
                let direction = line.vec(n_dim, "direction")?;
                let normal = line.vec(n_dim, "normal")?;
                let mut image_shift = [0i32; 3];
                for s in image_shift.iter_mut().take(n_dim) {
                    *s = line.parse("image shift")?;
                }
                let lambda0: f64 = line.parse("lambda0")?;
                line.finish()?;
                let start = nodes
                    .get(node_p)
                    .map(|n: &LatticeNode| n.position)
                    .ok_or_else(|| line.err(format!("element refers to unknown node {node_p}")))?;
                elements.push(ConduitElement {
                    node_p,
                    node_q,
                    length,
                    direction,
                    normal,
                    area,
                    projected_area,
                    centroid: start + direction * (0.5 * length),
                    image_shift,
                    lambda0,
                });
            }
            t => return Err(line.err(format!("unknown record `{t}`"))),
        }
    }
    let network = DualNetwork {
        nodes,
        elements,
        cell,
        n_dim,
        periodic,
    };
    network.validate()?;
    Ok(network)
}

pub fn read_network(path: &Path) -> Result<DualNetwork> {
    let text = std::fs::read_to_string(path)?;
    import_network(&text).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other,
    })
}

/// Writes `network`, preceded by `header` comment lines.
pub fn write_network(path: &Path, network: &DualNetwork, header: &[String]) -> Result<()> {
    let mut text = String::new();
    for h in header {
        let _ = writeln!(text, "# {h}");
    }
    text.push_str(&export_network(network));
    std::fs::write(path, text)?;
    Ok(())
}
