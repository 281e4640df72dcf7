//! Implicit steppers for finite and infinite conductivity.

pub mod finite_sigma;
pub mod infinite_sigma;
mod layout;

use serde::{Deserialize, Serialize};

/// Diagnostics of one accepted step.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub iterations: usize,
    /// Largest scaled residual per equation group.
    pub residuals: Vec<(String, f64)>,
    pub viscosity_active: usize,
    pub temperature_clamps: usize,
}

impl StepReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}
