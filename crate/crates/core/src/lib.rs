//! Conservative invariant difference schemes for plane one-dimensional
//! magnetohydrodynamics in mass Lagrangian coordinates.

pub mod audit;
pub mod boundary;
pub mod calculus;
pub mod circuit;
pub mod config;
pub mod eos;
pub mod error;
pub mod mesh;
pub mod profiles;
pub mod railgun;
pub mod runner;
pub mod schemes;
pub mod solver;
pub mod state;
pub mod suites;
pub mod symmetry;

pub use error::{Error, Result};
