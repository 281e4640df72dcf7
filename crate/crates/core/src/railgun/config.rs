use serde::{Deserialize, Serialize};

use crate::circuit::CircuitParams;
use crate::eos::ConductivityModel;
use crate::{Error, Result};

/// The three canonical runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ExperimentCase {
    /// The field is too weak to stop the bunch.
    LowVoltage,
    /// The bunch is stopped and pushed back.
    HighVoltage,
    /// High voltage with a longitudinal field `sign * |H0|`.
    Longitudinal { sign: f64 },
}

impl ExperimentCase {
    /// Case by its number 1, 2 or 3 (3 with a positive longitudinal field).
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(ExperimentCase::LowVoltage),
            2 => Ok(ExperimentCase::HighVoltage),
            3 => Ok(ExperimentCase::Longitudinal { sign: 1.0 }),
            _ => Err(Error::Config(format!("unknown case {n}, expected 1, 2 or 3"))),
        }
    }
}

/// Every parameter of a run, in dimensionless units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RailgunConfig {
    pub case: ExperimentCase,
    pub total_mass: f64,
    pub cells: usize,
    pub tau: f64,
    pub t_max: f64,
    /// Time at which budgets are reported.
    pub report_time: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub h0: f64,
    pub rho0: f64,
    /// Background pressure.
    pub p0: f64,
    /// Bunch temperature.
    pub t0: f64,
    /// Bunch velocity.
    pub u0: f64,
    /// Transverse velocity given to all particles.
    pub v0: f64,
    /// Leftmost mass fraction occupied by the bunch.
    pub bunch_fraction: f64,
    /// Width of the linear ramp between bunch and background, in cells.
    pub ramp_cells: f64,
    /// Artificial viscosity in units of `h`.
    pub nu_over_h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub sigma: ConductivityModel,
    pub circuit: CircuitParams,
    /// Every how many steps a snapshot is kept.
    pub snapshot_every: usize,
    /// Every how many nodes a particle is tracked.
    pub track_every: usize,
}

impl RailgunConfig {
    pub fn preset(case: ExperimentCase) -> Self {
        let (v0, h0) = match case {
            ExperimentCase::LowVoltage => (1.67, 0.0),
            ExperimentCase::HighVoltage => (2.6, 0.0),
            ExperimentCase::Longitudinal { sign } => (2.6, sign.signum()),
        };
        Self {
            case,
            total_mass: 4.0,
            cells: 60,
            tau: 0.003,
            t_max: 0.7,
            report_time: 0.64,
            gamma: 5.0 / 3.0,
            kappa: 4.0 * std::f64::consts::PI,
            h0,
            rho0: 1.0,
            p0: 0.0056,
            t0: 3.0,
            u0: 0.75,
            v0: 0.05,
            bunch_fraction: 0.125,
            ramp_cells: 2.0,
            nu_over_h: 2.0,
            alpha: 0.5,
            beta: 0.5,
            tol: 1e-10,
            max_iter: 50,
            sigma: ConductivityModel::Exponential { sigma0: 500.0, beta: 5.0, rho0: 1.0 },
            circuit: CircuitParams { l0: 0.0035, r0: 1.17, c0: 1.64, v0 },
            snapshot_every: 10,
            track_every: 5,
        }
    }

    pub fn h(&self) -> f64 {
        self.total_mass / self.cells as f64
    }

    /// Node at the front of the bunch.
    pub fn front_node(&self) -> usize {
        (self.bunch_fraction * self.cells as f64).round() as usize
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.tau).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        let positive = [self.total_mass, self.tau, self.t_max, self.gamma - 1.0, self.kappa, self.rho0, self.t0, self.tol];
        if positive.iter().any(|x| !(*x > 0.0)) || self.p0 < 0.0 || self.cells < 4 {
            return Err(Error::Config("mass, tau, t_max, kappa, rho0, t0, tol must be positive and gamma > 1".into()));
        }
        if !(0.0..1.0).contains(&self.bunch_fraction) || self.front_node() == 0 {
            return Err(Error::Config(format!("bunch fraction {} leaves no bunch", self.bunch_fraction)));
        }
        if self.snapshot_every == 0 || self.track_every == 0 {
            return Err(Error::Config("snapshot_every and track_every must be positive".into()));
        }
        Ok(())
    }

    /// Set a dotted key, e.g. `circuit.v0=2.0` or `sigma.sigma0=800`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        crate::config::set_key(self, key, value)
    }
}
