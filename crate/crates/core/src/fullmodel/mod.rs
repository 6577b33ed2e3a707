//! Fully resolved discrete model on a tiled network, solved with the same
//! Newton engine as the macroscale problems.

pub mod htc;
pub mod interp;
pub mod pressure;

pub use htc::DiscreteHtc;
pub use interp::{idw, interpolate_line};
pub use pressure::DiscretePressure;
