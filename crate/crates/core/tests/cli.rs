use std::path::Path;
use std::process::{Command, Output};

use discrete_homog::scenario::read_csv;

fn dhom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhom"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = dhom(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn same_seed_writes_identical_lattice() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ok(a.path(), &["--config", "prism_linear", "--seed", "9", "generate-rve"]);
    ok(b.path(), &["--config", "prism_linear", "--seed", "9", "--deterministic", "generate-rve"]);
    ok(c.path(), &["--config", "prism_linear", "--seed", "10", "generate-rve"]);
    let read = |d: &tempfile::TempDir| std::fs::read_to_string(d.path().join("prism_linear.lattice")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert!(read(&a).lines().any(|l| l.contains("seed 9")));
}

#[test]
fn macro_run_writes_flux_profile_and_vtk() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--config", "prism_linear", "run-macro"]);
    let (cols, rows) = read_csv(&dir.path().join("flux_history.csv")).unwrap();
    assert_eq!(cols, vec!["time_s", "left_g_per_day", "right_g_per_day"]);
    assert_eq!(rows.len(), 50);
    let last = rows.last().unwrap();
    assert!((last[2] - 121.35).abs() < 0.5e-2 * 121.35);
    assert!((last[1] + last[2]).abs() < 1e-8 * last[2]);

    let (cols, rows) = read_csv(&dir.path().join("profile_center_step50.csv")).unwrap();
    assert_eq!(cols, vec!["arc_length_m", "p"]);
    assert_eq!(rows.len(), 121);
    let vtk = std::fs::read_to_string(dir.path().join("fields_macro_50.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version 3.0"));
    assert!(vtk.contains("CELL_TYPES 4") && vtk.contains("SCALARS p double 1"));
}

#[test]
fn rve_tensor_of_uniform_cube_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--config", "rve_3d", "rve-tensor"]);
    let (cols, rows) = read_csv(&dir.path().join("rve_tensor.csv")).unwrap();
    assert_eq!(cols, vec!["i", "j", "lambda_s", "normalized"]);
    assert_eq!(rows.len(), 9);
    for r in rows {
        let expect = if r[0] == r[1] { 1.0 } else { 0.0 };
        assert!((r[3] - expect).abs() < 1e-9);
    }
}

#[test]
fn unknown_suite_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dhom(dir.path(), &["verify", "bogus"]);
    assert!(!out.status.success());
    let out = dhom(dir.path(), &["--config", "no_such_scenario", "run-macro"]);
    assert!(!out.status.success());
}
