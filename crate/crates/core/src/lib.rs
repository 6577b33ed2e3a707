//! Homogenization of discrete lattice diffusion models.

pub mod constitutive;
pub mod error;
pub mod fullmodel;
pub mod geometry;
pub mod macroscale;
pub mod numerics;
pub mod rve;
pub mod scenario;

pub use error::{Error, Result};
