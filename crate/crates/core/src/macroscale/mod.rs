//! Finite element solvers for the homogenized (macroscopic) balance equations.

pub mod bc;
pub mod htc;
pub mod mesh;
pub mod pressure;
pub mod run;

pub use bc::{constraints_at, DirichletBC, TimeFunction};
pub use htc::HtcProblem;
pub use mesh::{GaussPoint, MacroMesh};
pub use pressure::{MacroResponse, PointResponse, PressureProblem, SlowRve};
pub use run::{run_steps, time_levels, StepRecord, KG_PER_S_TO_G_PER_DAY};
