//! Linear and nonlinear solvers for the implicit steppers.

mod banded;
mod newton;

pub use banded::{thomas, BandedLu, BandedMatrix};
pub use newton::{newton_solve, NewtonOptions, NewtonReport};
