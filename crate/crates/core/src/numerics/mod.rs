//! Shared numerical kernels.

pub mod banded;
pub mod cg;
pub mod newton;
pub mod random;
pub mod reduce;
pub mod sparse;

pub use banded::{solve_general, BandedLu};
pub use cg::{solve_spd, solve_spd_dense, solve_spd_monitored, CgReport};
pub use newton::{advance, newton_solve, Evaluation, NewtonSettings, NonlinearSystem, StepContext};
pub use random::{lognormal_draw, RandomStream};
pub use reduce::Summation;
pub use sparse::{CsrMatrix, SparseSymmetric, Triplets};
