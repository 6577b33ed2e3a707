use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use discrete_homog::geometry::write_network;
use discrete_homog::scenario::pipeline::macro_mesh;
use discrete_homog::scenario::{
    build_rve, bundled_scenario, full_domain, reproducibility_header, rve_ensemble, rve_tensor, run_full,
    run_macro, run_suite, summarize, summarize_rve, write_csv, write_run, EnsembleSpec, RunOutput, Scenario,
    Suite, VtkGeometry,
};

#[derive(Parser)]
#[command(name = "dhom", version, about = "Homogenized and fully resolved lattice diffusion runs")]
struct Cli {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads for ensembles and paired runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fixed-order reductions (bit-identical reruns).
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the RVE lattice and check its invariants.
    GenerateRve,
    /// Effective conductivity tensor of the RVE.
    RveTensor,
    /// Tensor statistics over RVE sizes, structures and λ₀ variants.
    RveStudy,
    /// Homogenized finite-element run.
    RunMacro,
    /// Fully resolved discrete run.
    RunFull,
    /// Paired full/homogenized checks on bundled scenarios.
    Verify {
        /// linear, nonlinear, transient, htc or all
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn load(cli: &Cli) -> Result<Scenario> {
    let name = cli.config.as_deref().context("--config is required")?;
    let mut s = if Path::new(name).exists() {
        Scenario::load(Path::new(name))?
    } else {
        bundled_scenario(name).with_context(|| format!("'{name}' is neither a file nor a bundled scenario"))?
    };
    if let Some(seed) = cli.seed {
        s.random.seed = seed;
    }
    if cli.deterministic {
        s.solver.deterministic = true;
    }
    Ok(s)
}

fn generate_rve(cli: &Cli) -> Result<()> {
    let s = load(cli)?;
    let rve = build_rve(&s)?;
    let summary = summarize_rve(&rve.network)?;
    std::fs::create_dir_all(&cli.out_dir)?;
    let path = cli.out_dir.join(format!("{}.lattice", s.name));
    write_network(&path, &rve.network, &reproducibility_header(&s, "rve"))?;
    println!("{}", path.display());
    println!("nodes {} elements {}", summary.nodes, summary.elements);
    println!("volume partition error {:.3e}", summary.volume_error);
    println!("closed-surface residual {:.3e}", summary.surface_residual);
    if let Some(f) = summary.fabric_error {
        println!("fabric identity error {f:.3e}");
    }
    Ok(())
}

fn tensor(cli: &Cli) -> Result<()> {
    let s = load(cli)?;
    let rve = build_rve(&s)?;
    let t = rve_tensor(&s, &rve)?;
    let l0 = s.material.lambda0();
    let n = t.n_dim;
    let mut rows = Vec::new();
    for i in 0..n {
        println!("{}", (0..n).map(|j| format!("{:>14.6e}", t.lambda[(i, j)])).collect::<String>());
        for j in 0..n {
            rows.push(vec![i as f64, j as f64, t.lambda[(i, j)], t.lambda[(i, j)] / l0]);
        }
    }
    println!("asymmetry before symmetrization {:.3e}", t.asymmetry);
    std::fs::create_dir_all(&cli.out_dir)?;
    let cols = ["i", "j", "lambda_s", "normalized"].map(String::from);
    write_csv(&cli.out_dir.join("rve_tensor.csv"), &reproducibility_header(&s, "rve"), &cols, &rows)?;
    Ok(())
}

fn study(cli: &Cli) -> Result<()> {
    let s = load(cli)?;
    let spec = EnsembleSpec::from_scenario(&s)?;
    let samples = rve_ensemble(&spec)?;
    let rows = summarize(&samples, spec.n_dim);
    std::fs::create_dir_all(&cli.out_dir)?;
    let header = reproducibility_header(&s, "rve_study");
    let cols = [
        "size_m",
        "members",
        "mean_nodes",
        "mean_diagonal",
        "std_diagonal",
        "mean_abs_off_diagonal",
        "std_off_diagonal",
    ]
    .map(String::from);
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            println!(
                "size {:.3} m: diag {:.4} +- {:.4}, |off| {:.4} ({} members, {:.0} nodes)",
                r.size, r.mean_diagonal, r.std_diagonal, r.mean_abs_off_diagonal, r.members, r.mean_nodes
            );
            vec![
                r.size,
                r.members as f64,
                r.mean_nodes,
                r.mean_diagonal,
                r.std_diagonal,
                r.mean_abs_off_diagonal,
                r.std_off_diagonal,
            ]
        })
        .collect();
    write_csv(&cli.out_dir.join("rve_study.csv"), &header, &cols, &table)?;
    let n = spec.n_dim;
    let mut cols = vec!["size_m".to_string(), "structure".into(), "variant".into(), "nodes".into()];
    for i in 0..n {
        for j in i..n {
            cols.push(format!("l{i}{j}"));
        }
    }
    let per_sample: Vec<Vec<f64>> = samples
        .iter()
        .map(|m| {
            let mut row = vec![m.size, m.structure as f64, m.variant as f64, m.nodes as f64];
            for i in 0..n {
                for j in i..n {
                    row.push(m.normalized[(i, j)]);
                }
            }
            row
        })
        .collect();
    write_csv(&cli.out_dir.join("rve_study_samples.csv"), &header, &cols, &per_sample)?;
    Ok(())
}

fn report(out: &RunOutput) {
    for (i, name) in out.bc_names.iter().enumerate() {
        if let Some(last) = out.steps.last() {
            println!("{name}: {:.6e}", out.reaction_report(i, last));
        }
    }
    if let Some(a) = out.mean_alpha_c {
        println!("mean alpha_c {a:.4}");
    }
    println!(
        "{} dofs, {} steps, {} iterations, {:.2} s",
        out.dofs,
        out.steps.len(),
        out.total_iterations(),
        out.elapsed
    );
}

fn run(cli: &Cli, full: bool) -> Result<()> {
    let s = load(cli)?;
    let (out, files) = if full {
        let out = run_full(&s)?;
        let dom = full_domain(&s, &build_rve(&s)?)?;
        let files = write_run(&cli.out_dir, &s, &out, Some(VtkGeometry::Network(&dom.network)))?;
        (out, files)
    } else {
        let out = run_macro(&s)?;
        let mesh = macro_mesh(&s)?;
        let files = write_run(&cli.out_dir, &s, &out, Some(VtkGeometry::Mesh(&mesh)))?;
        (out, files)
    };
    report(&out);
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn verify(suite: &str) -> Result<()> {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mut failed = Vec::new();
    for suite in suites {
        let report = run_suite(suite)?;
        println!("{report}");
        if !report.passed() {
            failed.push(suite.to_string());
        }
    }
    if !failed.is_empty() {
        bail!("failed suites: {}", failed.join(", "));
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::GenerateRve => generate_rve(&cli),
        Command::RveTensor => tensor(&cli),
        Command::RveStudy => study(&cli),
        Command::RunMacro => run(&cli, false),
        Command::RunFull => run(&cli, true),
        Command::Verify { suite } => verify(suite),
    }
}
