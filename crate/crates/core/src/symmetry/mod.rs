//! Lie point symmetries acting on discrete solutions, and the numerical
//! invariance check of the schemes under them.

mod registry;
mod transform;
mod verify;

#[cfg(test)]
mod tests;

use serde::{Deserialize, Serialize};

pub use registry::{generators, Expectation, Regime};
pub use transform::{transform_solution, Discrete, Transformed};
pub use verify::{invariance_residual, regime_setup, symmetry_matrix, MatrixEntry, Scheme, SymmetryMatrix, EPSILONS};

/// Arbitrary function of the mass coordinate filling a generator slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotFn {
    One,
    S,
    SinS,
}

impl SlotFn {
    pub const BASIS: [SlotFn; 3] = [SlotFn::One, SlotFn::S, SlotFn::SinS];

    pub fn eval(self, s: f64) -> f64 {
        match self {
            SlotFn::One => 1.0,
            SlotFn::S => s,
            SlotFn::SinS => s.sin(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SlotFn::One => "1",
            SlotFn::S => "s",
            SlotFn::SinS => "sin s",
        }
    }
}

/// Transverse component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Y,
    Z,
}

/// Logarithmic weights of a scaling: `f -> exp(weight * eps) f`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Weights {
    pub t: f64,
    pub s: f64,
    pub x: f64,
    /// `y` and `z`.
    pub yz: f64,
    pub u: f64,
    /// `v` and `w`.
    pub vw: f64,
    pub rho: f64,
    pub p: f64,
    /// Both components of `H`.
    pub h: f64,
    /// Both components of `E`.
    pub e: f64,
}

/// Closed-form one-parameter group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    TimeShift,
    MassShift,
    /// `x -> x + eps`.
    ShiftX,
    /// `y` or `z` shifted by `eps q(s)`.
    ShiftTransverse { axis: Axis, q: SlotFn },
    /// `x -> x + eps t`, `u -> u + eps`.
    BoostX,
    /// Same in a transverse direction.
    BoostTransverse { axis: Axis },
    /// Rotation by `eps q(s)` of `(Hy, Hz)`, `(Ey, Ez)` and the currents,
    /// and with `kinematic` also of `(v, w)` and `(y, z)`.
    Rotate { kinematic: bool, q: SlotFn },
    Scale(Weights),
    /// `H_axis -> H_axis + eps q rho` with `p + kappa H^2/2` held fixed.
    MagneticPressure { axis: Axis, q: SlotFn },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryGenerator {
    pub name: &'static str,
    pub action: Action,
}

impl SymmetryGenerator {
    /// Display name with the slot function, e.g. `X8[q = sin s]`.
    pub fn label(&self) -> String {
        match self.action {
            Action::ShiftTransverse { q, .. } | Action::MagneticPressure { q, .. } => {
                format!("{}[q = {}]", self.name, q.label())
            }
            Action::Rotate { q, .. } if q != SlotFn::One => format!("{}[q = {}]", self.name, q.label()),
            _ => self.name.to_string(),
        }
    }

    /// Time component of the infinitesimal generator.
    pub fn xi_t(&self, t: f64) -> f64 {
        match self.action {
            Action::TimeShift => 1.0,
            Action::Scale(w) => w.t * t,
            _ => 0.0,
        }
    }

    /// Mass-coordinate component of the infinitesimal generator.
    pub fn xi_s(&self, s: f64) -> f64 {
        match self.action {
            Action::MassShift => 1.0,
            Action::Scale(w) => w.s * s,
            _ => 0.0,
        }
    }
}
