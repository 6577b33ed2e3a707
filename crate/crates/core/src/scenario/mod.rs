//! Scenario files, pipelines, output writers and verification suites.

pub mod config;
pub mod output;
pub mod pipeline;
pub mod study;
pub mod verify;

pub use config::Scenario;
pub use output::{read_csv, reproducibility_header, write_csv, write_run, VtkGeometry};
pub use pipeline::{build_rve, full_domain, macro_mesh, run_full, run_macro, rve_tensor, summarize_rve, ModelKind, RunOutput, RveBuild, RveSummary};
pub use study::{derive_seed, rve_ensemble, summarize, EnsembleSpec, StudyRow, TensorSample};
pub use verify::{bundled_scenario, run_suite, Check, Suite, SuiteReport, BUNDLED};
