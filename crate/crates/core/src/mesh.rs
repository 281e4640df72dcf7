//! Uniform orthogonal mass-Lagrangian mesh.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform mesh in the mass coordinate `s ∈ [0, S]` with `M` cells and a
/// constant time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub total_mass: f64,
    pub cells: usize,
    pub h: f64,
    pub tau: f64,
    pub t0: f64,
}

impl MeshSpec {
    pub fn new(total_mass: f64, cells: usize, tau: f64) -> Result<Self> {
        Self::with_t0(total_mass, cells, tau, 0.0)
    }

    pub fn with_t0(total_mass: f64, cells: usize, tau: f64, t0: f64) -> Result<Self> {
        if !(total_mass > 0.0) || !total_mass.is_finite() {
            return Err(Error::InvalidMesh(format!("total mass must be positive, got {total_mass}")));
        }
        if cells < 2 {
            return Err(Error::InvalidMesh(format!("need at least 2 cells, got {cells}")));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidMesh(format!("time step must be positive, got {tau}")));
        }
        Ok(Self { total_mass, cells, h: total_mass / cells as f64, tau, t0 })
    }

    /// Mesh with a given cell mass `h` (used by transformed solutions, where
    /// `h` is the primary quantity).
    pub fn from_h(h: f64, cells: usize, tau: f64, t0: f64) -> Result<Self> {
        Self::with_t0(h * cells as f64, cells, tau, t0).map(|mut m| {
            m.h = h;
            m
        })
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    /// Mass coordinate of node `m`.
    pub fn s_node(&self, m: usize) -> f64 {
        m as f64 * self.h
    }

    /// Mass coordinate of the center of cell `c` (i.e. `s_{c+1/2}`).
    pub fn s_cell(&self, c: usize) -> f64 {
        (c as f64 + 0.5) * self.h
    }
}

/// Discretized mesh-invariance conditions for a generator with coefficients
/// `xi_s(s)` and `xi_t(t)`: uniformness `D+s D-s xi_s = 0`, `D+t D-t xi_t = 0`
/// and orthogonality `D±s xi_t = -D±t xi_s`. Returns the largest violation on
/// the stencil around `(t, s)`.
pub fn mesh_condition_residual(
    xi_t: &dyn Fn(f64, f64) -> f64,
    xi_s: &dyn Fn(f64, f64) -> f64,
    t: f64,
    s: f64,
    tau: f64,
    h: f64,
) -> f64 {
    let uni_s = (xi_s(t, s + h) - 2.0 * xi_s(t, s) + xi_s(t, s - h)) / (h * h);
    let uni_t = (xi_t(t + tau, s) - 2.0 * xi_t(t, s) + xi_t(t - tau, s)) / (tau * tau);
    let ortho_p = (xi_t(t, s + h) - xi_t(t, s)) / h + (xi_s(t + tau, s) - xi_s(t, s)) / tau;
    let ortho_m = (xi_t(t, s) - xi_t(t, s - h)) / h + (xi_s(t, s) - xi_s(t - tau, s)) / tau;
    uni_s.abs().max(uni_t.abs()).max(ortho_p.abs()).max(ortho_m.abs())
}
