//! CSV and legacy-VTK writers. Every file starts with `#` provenance lines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::Scenario;
use super::pipeline::RunOutput;
use crate::error::{Error, Result};
use crate::geometry::DualNetwork;
use crate::macroscale::MacroMesh;
use crate::numerics::random::ALGORITHM;

/// Provenance lines: crate version, scenario, config hash, seed.
pub fn reproducibility_header(s: &Scenario, model: &str) -> Vec<String> {
    vec![
        format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        format!("scenario {}", s.name),
        format!("config_sha256 {}", s.config_hash),
        format!("seed {} rng {}", s.random.seed, ALGORITHM),
        format!("model {model}"),
    ]
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Writes `#`-prefixed header lines followed by a CSV table.
pub fn write_csv(path: &Path, header: &[String], columns: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    for line in header {
        writeln!(file, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    w.write_record(columns).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:.10e}"))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`] (comment lines skipped).
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_error)?;
    let columns = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        rows.push(
            rec.iter()
                .map(|v| v.parse::<f64>().map_err(|e| Error::Config(format!("{}: {e}", path.display()))))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((columns, rows))
}

fn vtk_header(w: &mut impl Write, title: &str) -> std::io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{title}")?;
    writeln!(w, "ASCII")
}

fn point_data(w: &mut impl Write, n: usize, names: &[&str], u: &[f64]) -> std::io::Result<()> {
    writeln!(w, "POINT_DATA {n}")?;
    let nf = names.len();
    for (f, name) in names.iter().enumerate() {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for i in 0..n {
            writeln!(w, "{:.10e}", u[i * nf + f])?;
        }
    }
    Ok(())
}

/// Quad mesh with nodal fields.
pub fn write_vtk_mesh(path: &Path, title: &str, mesh: &MacroMesh, names: &[&str], u: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    vtk_header(&mut w, title)?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", mesh.nodes.len())?;
    for x in &mesh.nodes {
        writeln!(w, "{:.10e} {:.10e} 0", x[0], x[1])?;
    }
    let ne = mesh.elements.len();
    writeln!(w, "CELLS {ne} {}", 5 * ne)?;
    for c in &mesh.elements {
        writeln!(w, "4 {} {} {} {}", c[0], c[1], c[2], c[3])?;
    }
    writeln!(w, "CELL_TYPES {ne}")?;
    for _ in 0..ne {
        writeln!(w, "9")?;
    }
    point_data(&mut w, mesh.nodes.len(), names, u)?;
    w.flush()?;
    Ok(())
}

/// Lattice nodes as points and contacts as lines.
pub fn write_vtk_network(path: &Path, title: &str, net: &DualNetwork, names: &[&str], u: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    vtk_header(&mut w, title)?;
    writeln!(w, "DATASET POLYDATA")?;
    writeln!(w, "POINTS {} double", net.nodes.len())?;
    for n in &net.nodes {
        let p = n.position;
        writeln!(w, "{:.10e} {:.10e} {:.10e}", p.x, p.y, if net.n_dim == 3 { p.z } else { 0.0 })?;
    }
    let ne = net.elements.len();
    writeln!(w, "LINES {ne} {}", 3 * ne)?;
    for e in &net.elements {
        writeln!(w, "2 {} {}", e.node_p, e.node_q)?;
    }
    point_data(&mut w, net.nodes.len(), names, u)?;
    w.flush()?;
    Ok(())
}

/// Geometry needed to write VTK snapshots.
pub enum VtkGeometry<'a> {
    Mesh(&'a MacroMesh),
    Network(&'a DualNetwork),
}

/// Writes flux history, profiles, point histories and snapshots into `dir`;
/// returns the files written.
pub fn write_run(dir: &Path, s: &Scenario, out: &RunOutput, geometry: Option<VtkGeometry>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let label = out.model.label();
    let header = reproducibility_header(s, label);
    let mut written = Vec::new();

    let mut columns = vec!["time_s".to_string()];
    for (name, field) in out.bc_names.iter().zip(&out.bc_fields) {
        let unit = if *field == super::config::FieldId::T { "W" } else { "g_per_day" };
        columns.push(format!("{name}_{unit}"));
    }
    let rows: Vec<Vec<f64>> = out
        .steps
        .iter()
        .map(|r| {
            let mut row = vec![r.time];
            row.extend((0..out.bc_names.len()).map(|b| out.reaction_report(b, r)));
            row
        })
        .collect();
    let path = dir.join("flux_history.csv");
    write_csv(&path, &header, &columns, &rows)?;
    written.push(path);

    for prof in &out.profiles {
        let path = dir.join(format!("profile_{}_step{}.csv", prof.name, prof.step));
        let mut cols = vec!["arc_length_m".to_string()];
        cols.extend(out.field_names.iter().map(|f| f.to_string()));
        let mut h = header.clone();
        h.push(format!("step {} time_s {:e}", prof.step, prof.time));
        write_csv(&path, &h, &cols, &prof.rows)?;
        written.push(path);
    }

    for (name, rows) in &out.points {
        let prefix = if s.is_htc() { "htc_point" } else { "point" };
        let path = dir.join(format!("{prefix}_{name}.csv"));
        let mut cols = vec!["time_s".to_string()];
        cols.extend(out.field_names.iter().map(|f| f.to_string()));
        if s.is_htc() {
            cols.push("alpha_c".into());
        }
        write_csv(&path, &header, &cols, rows)?;
        written.push(path);
    }

    if let Some(g) = geometry {
        for (step, time, u) in &out.snapshots {
            let path = dir.join(format!("fields_{label}_{step}.vtk"));
            let title = format!("{} {label} step {step} t={time:e} config {}", s.name, s.config_hash);
            match g {
                VtkGeometry::Mesh(m) => write_vtk_mesh(&path, &title, m, &out.field_names, u)?,
                VtkGeometry::Network(n) => write_vtk_network(&path, &title, n, &out.field_names, u)?,
            }
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let dir = std::env::temp_dir().join(format!("dh_csv_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let rows = vec![vec![0.0, 1.5e-7], vec![1.0, -2.0]];
        write_csv(&path, &["hello".into()], &["a".into(), "b".into()], &rows).unwrap();
        let (cols, back) = read_csv(&path).unwrap();
        assert_eq!(cols, vec!["a", "b"]);
        assert_eq!(back, rows);
        std::fs::remove_dir_all(&dir).ok();
    }
}
