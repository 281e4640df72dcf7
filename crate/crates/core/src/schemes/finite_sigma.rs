//! Completely conservative scheme for finite conductivity, one- and
//! two-component transverse fields.

use serde::{Deserialize, Serialize};

use super::StepReport;
use crate::boundary::{dsbar_padded, padded, star_padded, BoundaryClosure, CellField};
use crate::circuit::CircuitParams;
use crate::eos::ConductivityModel;
use crate::error::{Error, Result};
use super::layout::{group_residuals, newton_layer, CellVar, Layout, NodeVar, Slot};
use crate::solver::NewtonOptions;
use crate::state::{PhysicsParams, StateLayer};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteSigmaParams {
    pub alpha: f64,
    /// Weight of `Ez` in the `Hy` induction equation.
    pub beta1: f64,
    /// Weight of `Ey` in the `Hz` induction equation.
    pub beta2: f64,
    pub nu: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FiniteSigmaParams {
    fn default() -> Self {
        Self { alpha: 0.5, beta1: 0.5, beta2: 0.5, nu: 0.0, tol: 1e-10, max_iter: 100 }
    }
}

impl FiniteSigmaParams {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("alpha", self.alpha), ("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidParam(format!("{name} = {w} outside [0, 1]")));
            }
        }
        if !(self.tol > 0.0) || self.nu < 0.0 || self.max_iter == 0 {
            return Err(Error::InvalidParam("need tol > 0, nu >= 0, max_iter > 0".into()));
        }
        Ok(())
    }
}

/// Everything needed to advance the finite-conductivity scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSigma {
    pub params: FiniteSigmaParams,
    pub phys: PhysicsParams,
    pub sigma: ConductivityModel,
    pub bc: BoundaryClosure,
    pub circuit: Option<CircuitParams>,
    pub h: f64,
}

/// Cell fields padded with closure ghosts, plus node quantities of one layer.
#[derive(Debug, Clone)]
pub struct Ghosted {
    pub p: Vec<f64>,
    pub hy: Vec<f64>,
    pub hz: Vec<f64>,
    pub rho_star: Vec<f64>,
    pub sigma_star: Vec<f64>,
    pub dhy: Vec<f64>,
    pub dhz: Vec<f64>,
    pub clamps: usize,
}

impl Ghosted {
    pub fn new(l: &StateLayer, s: &FiniteSigma) -> Self {
        let k = s.phys.kappa;
        let p = padded(&l.p, s.bc.cell_ghosts(CellField::P, l, k));
        let hy = padded(&l.hy, s.bc.cell_ghosts(CellField::Hy, l, k));
        let hz = padded(&l.hz, s.bc.cell_ghosts(CellField::Hz, l, k));
        let n = l.cells();
        let rho = padded(&l.rho, (l.rho[0], l.rho[n - 1]));
        let mut clamps = 0;
        let sig: Vec<f64> = (0..n)
            .map(|c| {
                let (v, cl) = s.sigma.eval(l.rho[c], l.temp[c]);
                clamps += cl as usize;
                v
            })
            .collect();
        let sig = padded(&sig, (sig[0], sig[n - 1]));
        Self {
            dhy: dsbar_padded(&hy, s.h),
            dhz: dsbar_padded(&hz, s.h),
            p,
            hy,
            hz,
            rho_star: star_padded(&rho),
            sigma_star: star_padded(&sig),
            clamps,
        }
    }
}

fn half(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

fn weighted(a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| w * y + (1.0 - w) * x).collect()
}

/// Discrete fluxes and sources between two layers.
#[derive(Debug, Clone)]
pub struct Fluxes {
    pub u_half: Vec<f64>,
    pub v_half: Vec<f64>,
    pub w_half: Vec<f64>,
    /// Artificial viscous pressure per cell.
    pub omega: Vec<f64>,
    /// `p^(alpha)` on padded cells.
    pub p_alpha: Vec<f64>,
    /// Total momentum flux `p^(alpha) + omega + kappa (H . H^)/2` on padded cells.
    pub g: Vec<f64>,
    pub hy_half: Vec<f64>,
    pub hz_half: Vec<f64>,
    pub ey_beta: Vec<f64>,
    pub ez_beta: Vec<f64>,
    /// `kappa (Hy_sbar)^(0.5)` and `-kappa (Hz_sbar)^(0.5)` at nodes.
    pub jz_half: Vec<f64>,
    pub jy_half: Vec<f64>,
    pub qy: Vec<f64>,
    pub qz: Vec<f64>,
    /// Electromagnetic force per node.
    pub f: Vec<f64>,
}

impl Fluxes {
    pub fn new(cur: &StateLayer, next: &StateLayer, gc: &Ghosted, gn: &Ghosted, s: &FiniteSigma) -> Self {
        let (h, k, pr) = (s.h, s.phys.kappa, &s.params);
        let n = cur.cells();
        let u_half = half(&cur.u, &next.u);
        let omega: Vec<f64> = (0..n)
            .map(|c| {
                if pr.nu == 0.0 {
                    return 0.0;
                }
                let us = 0.5 * ((cur.u[c + 1] - cur.u[c]) + (next.u[c + 1] - next.u[c])) / h;
                if us < 0.0 {
                    -pr.nu * next.rho[c] * us
                } else {
                    0.0
                }
            })
            .collect();
        let p_alpha = weighted(&gc.p, &gn.p, pr.alpha);
        let g: Vec<f64> = (0..n + 2)
            .map(|c| {
                let om = if c >= 1 && c <= n { omega[c - 1] } else { 0.0 };
                p_alpha[c] + om + 0.5 * k * (gc.hy[c] * gn.hy[c] + gc.hz[c] * gn.hz[c])
            })
            .collect();
        let f: Vec<f64> = (0..=n)
            .map(|m| {
                let b = |c: usize| 0.5 * k * (gc.hy[c] * gn.hy[c] + gc.hz[c] * gn.hz[c]);
                -(b(m + 1) - b(m)) / h
            })
            .collect();
        let jz_half: Vec<f64> = half(&gc.dhy, &gn.dhy).iter().map(|d| k * d).collect();
        let jy_half: Vec<f64> = half(&gc.dhz, &gn.dhz).iter().map(|d| -k * d).collect();
        let ez_beta = weighted(&cur.ez, &next.ez, pr.beta1);
        let ey_beta = weighted(&cur.ey, &next.ey, pr.beta2);
        let q = |j: &[f64], e: &[f64]| -> Vec<f64> {
            (0..n).map(|c| 0.5 * (j[c] * e[c] + j[c + 1] * e[c + 1])).collect()
        };
        Self {
            v_half: half(&cur.v, &next.v),
            w_half: half(&cur.w, &next.w),
            hy_half: half(&gc.hy, &gn.hy),
            hz_half: half(&gc.hz, &gn.hz),
            qz: q(&jz_half, &ez_beta),
            qy: q(&jy_half, &ey_beta),
            u_half,
            omega,
            p_alpha,
            g,
            ey_beta,
            ez_beta,
            jz_half,
            jy_half,
            f,
        }
    }

    pub fn viscosity_active(&self) -> usize {
        self.omega.iter().filter(|w| **w != 0.0).count()
    }
}

/// Raw residuals in update form (time derivatives multiplied by `tau`).
#[derive(Debug, Clone, Default)]
pub struct Residuals {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub ey: Vec<f64>,
    pub ez: Vec<f64>,
    pub e: Vec<f64>,
    pub hy: Vec<f64>,
    pub hz: Vec<f64>,
    pub circuit: [f64; 2],
    /// Continuity per cell and kinematics per node; identically zero for
    /// layers produced by the stepper.
    pub mass: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl Residuals {
    /// Largest absolute residual over all groups, divided by `tau`.
    pub fn max_rate(&self, tau: f64) -> f64 {
        [&self.u, &self.v, &self.w, &self.ey, &self.ez, &self.e, &self.hy, &self.hz, &self.mass, &self.x, &self.y, &self.z]
            .iter()
            .flat_map(|v| v.iter())
            .chain(self.circuit.iter())
            .fold(0.0f64, |a, r| a.max(r.abs()))
            / tau
    }
}

impl FiniteSigma {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.phys.validate()?;
        if let Some(c) = &self.circuit {
            c.validate()?;
        }
        if self.bc.uses_circuit() != self.circuit.is_some() {
            return Err(Error::InvalidParam("circuit parameters and circuit closure must come together".into()));
        }
        Ok(())
    }

    /// Residuals of every scheme equation for the pair `(cur, next)`.
    ///
    /// Ohm's law is imposed on `next` only; `cur` carries its own `E`.
    pub fn residuals(&self, cur: &StateLayer, next: &StateLayer, tau: f64) -> Residuals {
        let gc = Ghosted::new(cur, self);
        let gn = Ghosted::new(next, self);
        let fl = Fluxes::new(cur, next, &gc, &gn, self);
        self.residuals_with(cur, next, tau, &gn, &fl)
    }

    fn residuals_with(&self, cur: &StateLayer, next: &StateLayer, tau: f64, gn: &Ghosted, fl: &Fluxes) -> Residuals {
        let (h, k, h0) = (self.h, self.phys.kappa, self.phys.h0);
        let n = cur.cells();
        let r = tau / h;
        let node_eq = |dir: Option<f64>, val: f64, rhs: f64| match dir {
            Some(d) => val - d,
            None => rhs,
        };
        let side = |m: usize| {
            if m == 0 {
                Some(&self.bc.left)
            } else if m == n {
                Some(&self.bc.right)
            } else {
                None
            }
        };
        let mut res = Residuals::default();
        for m in 0..=n {
            let sd = side(m);
            res.u.push(node_eq(
                sd.and_then(|s| s.u),
                next.u[m],
                next.u[m] - cur.u[m] + r * (fl.g[m + 1] - fl.g[m]),
            ));
            res.v.push(node_eq(
                sd.and_then(|s| s.v),
                next.v[m],
                next.v[m] - cur.v[m] - r * k * h0 * (fl.hy_half[m + 1] - fl.hy_half[m]),
            ));
            res.w.push(node_eq(
                sd.and_then(|s| s.w),
                next.w[m],
                next.w[m] - cur.w[m] - r * k * h0 * (fl.hz_half[m + 1] - fl.hz_half[m]),
            ));
            let iy = -k * gn.rho_star[m] * gn.dhz[m];
            let iz = k * gn.rho_star[m] * gn.dhy[m];
            res.ey.push(node_eq(sd.and_then(|s| s.ey), next.ey[m], gn.sigma_star[m] * next.ey[m] - iy));
            res.ez.push(node_eq(sd.and_then(|s| s.ez), next.ez[m], gn.sigma_star[m] * next.ez[m] - iz));
            res.x.push(next.x[m] - cur.x[m] - tau * fl.u_half[m]);
            res.y.push(next.y[m] - cur.y[m] - tau * fl.v_half[m]);
            res.z.push(next.z[m] - cur.z[m] - tau * fl.w_half[m]);
        }
        for c in 0..n {
            let us = fl.u_half[c + 1] - fl.u_half[c];
            res.mass.push(1.0 / next.rho[c] - 1.0 / cur.rho[c] - r * us);
            res.e.push(
                next.eps[c] - cur.eps[c] + r * (fl.p_alpha[c + 1] + fl.omega[c]) * us
                    - tau * (fl.qy[c] + fl.qz[c]),
            );
            res.hy.push(
                next.hy[c] / next.rho[c] - cur.hy[c] / cur.rho[c]
                    - r * (h0 * (fl.v_half[c + 1] - fl.v_half[c]) + fl.ez_beta[c + 1] - fl.ez_beta[c]),
            );
            res.hz.push(
                next.hz[c] / next.rho[c] - cur.hz[c] / cur.rho[c]
                    - r * (h0 * (fl.w_half[c + 1] - fl.w_half[c]) - (fl.ey_beta[c + 1] - fl.ey_beta[c])),
            );
        }
        if let (Some(cp), Some(a), Some(b)) = (&self.circuit, cur.circuit, next.circuit) {
            res.circuit = cp.residual(a, b, (cur.ez[n], next.ez[n]), tau);
        }
        res
    }
}

/// Positions, density and thermodynamics of `next` from its velocities and
/// pressure. Returns `false` if a cell collapses.
pub(crate) fn complete_kinematics(cur: &StateLayer, next: &mut StateLayer, tau: f64, h: f64, gamma: f64) -> bool {
    next.t = cur.t + tau;
    for m in 0..cur.nodes() {
        next.x[m] = cur.x[m] + 0.5 * tau * (cur.u[m] + next.u[m]);
        next.y[m] = cur.y[m] + 0.5 * tau * (cur.v[m] + next.v[m]);
        next.z[m] = cur.z[m] + 0.5 * tau * (cur.w[m] + next.w[m]);
    }
    for c in 0..cur.cells() {
        let du = 0.5 * ((cur.u[c + 1] - cur.u[c]) + (next.u[c + 1] - next.u[c]));
        let vol = 1.0 / cur.rho[c] + tau * du / h;
        if !(vol > 0.0) || !vol.is_finite() {
            return false;
        }
        next.rho[c] = 1.0 / vol;
        next.eps[c] = next.p[c] / ((gamma - 1.0) * next.rho[c]);
        next.temp[c] = next.p[c] / next.rho[c];
    }
    true
}

struct Scales {
    vel: f64,
    energy: f64,
    flux: f64,
    ohm: Vec<f64>,
    current: f64,
    voltage: f64,
}

impl FiniteSigma {
    fn scales(&self, l: &StateLayer) -> Scales {
        let k = self.phys.kappa;
        let amax = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let j = l.circuit.map_or(0.0, |c| c.current.abs());
        let n = l.cells();
        let mut sound = 0.0f64;
        let mut flux = 0.0f64;
        let mut eps = 0.0f64;
        for c in 0..n {
            let b2 = l.hy[c] * l.hy[c] + l.hz[c] * l.hz[c];
            sound = sound.max(((self.phys.gamma * l.p[c].abs() + k * b2) / l.rho[c]).sqrt());
            flux = flux.max(b2.sqrt() / l.rho[c]);
            eps = eps.max(l.eps[c].abs());
        }
        let rho_min = l.rho.iter().cloned().fold(f64::INFINITY, f64::min);
        let vel = 1.0 + amax(&l.u) + amax(&l.v) + amax(&l.w) + sound;
        let hmag = 1.0 + amax(&l.hy) + amax(&l.hz) + k * j;
        let emag = 1.0 + amax(&l.ey) + amax(&l.ez);
        let g = Ghosted::new(l, self);
        let ohm = (0..=n)
            .map(|m| k * g.rho_star[m] * hmag / self.h + g.sigma_star[m] * emag)
            .collect();
        Scales {
            vel,
            energy: eps + vel * vel,
            flux: 1.0 + flux + k * j / rho_min,
            ohm,
            current: 1.0 + j,
            voltage: 1.0 + l.circuit.map_or(0.0, |c| c.voltage.abs()),
        }
    }

    /// Fill `E` and the currents of `l` from Ohm's law.
    pub fn consistent_fields(&self, l: &mut StateLayer) {
        let g = Ghosted::new(l, self);
        let k = self.phys.kappa;
        let n = l.cells();
        for m in 0..=n {
            l.iy[m] = -k * g.rho_star[m] * g.dhz[m];
            l.iz[m] = k * g.rho_star[m] * g.dhy[m];
            let s = g.sigma_star[m];
            let side = if m == 0 { Some(&self.bc.left) } else if m == n { Some(&self.bc.right) } else { None };
            l.ey[m] = side.and_then(|s| s.ey).unwrap_or(if s > 0.0 { l.iy[m] / s } else { 0.0 });
            l.ez[m] = side.and_then(|s| s.ez).unwrap_or(if s > 0.0 { l.iz[m] / s } else { 0.0 });
        }
    }

    pub fn step_one_component(&self, cur: &StateLayer, tau: f64) -> Result<(StateLayer, StepReport)> {
        let layout = Layout {
            nodes: vec![NodeVar::U, NodeVar::Ez],
            cells: vec![CellVar::P, CellVar::Hy],
            circuit: self.circuit.is_some(),
            m: cur.cells(),
        };
        self.step_with(cur, tau, &layout)
    }

    pub fn step_extended(&self, cur: &StateLayer, tau: f64) -> Result<(StateLayer, StepReport)> {
        let layout = Layout {
            nodes: vec![NodeVar::U, NodeVar::V, NodeVar::W, NodeVar::Ey, NodeVar::Ez],
            cells: vec![CellVar::P, CellVar::Hy, CellVar::Hz],
            circuit: self.circuit.is_some(),
            m: cur.cells(),
        };
        self.step_with(cur, tau, &layout)
    }
}

impl FiniteSigma {
    fn step_with(&self, cur: &StateLayer, tau: f64, layout: &Layout) -> Result<(StateLayer, StepReport)> {
        cur.check_density()?;
        if !(tau > 0.0) {
            return Err(Error::InvalidParam(format!("time step {tau} must be positive")));
        }
        let (h, gamma) = (self.h, self.phys.gamma);
        let sc = self.scales(cur);
        let amax = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let pmag = amax(&cur.p).max(1e-8);
        let emag = 1.0 + amax(&cur.ey) + amax(&cur.ez);
        let hmag = sc.flux * cur.rho.iter().cloned().fold(0.0, f64::max);
        if cur.circuit.is_none() && layout.circuit {
            return Err(Error::InvalidParam("layer carries no circuit state".into()));
        }
        let typical = |s: Slot| match s {
            Slot::Node(_, NodeVar::Ey | NodeVar::Ez) => emag,
            Slot::Node(..) => sc.vel,
            Slot::Cell(_, CellVar::P) => pmag,
            Slot::Cell(..) => hmag,
            Slot::Current => sc.current,
            Slot::Voltage => sc.voltage,
        };
        let opts = NewtonOptions { tol: self.params.tol, max_iter: self.params.max_iter, ..Default::default() };
        let scaled = |res: &Residuals, s: Slot| -> f64 {
            match s {
                Slot::Node(k, NodeVar::U) => res.u[k] / sc.vel,
                Slot::Node(k, NodeVar::V) => res.v[k] / sc.vel,
                Slot::Node(k, NodeVar::W) => res.w[k] / sc.vel,
                Slot::Node(k, NodeVar::Ey) => res.ey[k] / sc.ohm[k],
                Slot::Node(k, NodeVar::Ez) => res.ez[k] / sc.ohm[k],
                Slot::Cell(k, CellVar::P) => res.e[k] / sc.energy,
                Slot::Cell(k, CellVar::Hy) => res.hy[k] / sc.flux,
                Slot::Cell(k, CellVar::Hz) => res.hz[k] / sc.flux,
                Slot::Current => res.circuit[0] / sc.current,
                Slot::Voltage => res.circuit[1] / sc.voltage,
            }
        };
        let (mut next, newton) = newton_layer(
            cur,
            layout,
            &typical,
            &opts,
            &|l| complete_kinematics(cur, l, tau, h, gamma),
            &|l| self.residuals(cur, l, tau),
            &scaled,
        )?;
        let gc = Ghosted::new(cur, self);
        let gn = Ghosted::new(&next, self);
        let k = self.phys.kappa;
        for m in 0..next.nodes() {
            next.iy[m] = -k * gn.rho_star[m] * gn.dhz[m];
            next.iz[m] = k * gn.rho_star[m] * gn.dhy[m];
        }
        let fl = Fluxes::new(cur, &next, &gc, &gn, self);
        let res = self.residuals_with(cur, &next, tau, &gn, &fl);
        let groups = group_residuals(layout, &res, &scaled);
        let report = StepReport {
            iterations: newton.iterations,
            residuals: groups,
            viscosity_active: fl.viscosity_active(),
            temperature_clamps: gn.clamps,
        };
        Ok((next, report))
    }
}

/// Forms of the energy balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyForm {
    Internal,
    SemiDivergent,
    Divergent,
}

impl FiniteSigma {
    /// Cell residual of the chosen energy balance between `cur` and `next`.
    pub fn energy_form(&self, cur: &StateLayer, next: &StateLayer, tau: f64, form: EnergyForm) -> Vec<f64> {
        let (h, k, h0) = (self.h, self.phys.kappa, self.phys.h0);
        let gc = Ghosted::new(cur, self);
        let gn = Ghosted::new(next, self);
        let fl = Fluxes::new(cur, next, &gc, &gn, self);
        let n = cur.cells();
        let pw: Vec<f64> = (0..n + 2)
            .map(|c| fl.p_alpha[c] + if c >= 1 && c <= n { fl.omega[c - 1] } else { 0.0 })
            .collect();
        let pw_star = star_padded(&pw);
        let g_star = star_padded(&fl.g);
        let hy_star = star_padded(&fl.hy_half);
        let hz_star = star_padded(&fl.hz_half);
        let ke = |l: &StateLayer, c: usize| {
            let sq = |m: usize| l.u[m] * l.u[m] + l.v[m] * l.v[m] + l.w[m] * l.w[m];
            0.25 * (sq(c) + sq(c + 1))
        };
        let mag = |l: &StateLayer, c: usize| 0.5 * k * (l.hy[c] * l.hy[c] + l.hz[c] * l.hz[c]) / l.rho[c];
        // node work of the Lorentz and transverse forces
        let work = |m: usize| {
            fl.u_half[m] * fl.f[m]
                + k * h0 * fl.v_half[m] * (fl.hy_half[m + 1] - fl.hy_half[m]) / h
                + k * h0 * fl.w_half[m] * (fl.hz_half[m + 1] - fl.hz_half[m]) / h
        };
        (0..n)
            .map(|c| {
                let de = (next.eps[c] - cur.eps[c]) / tau;
                let q = fl.qy[c] + fl.qz[c];
                let us = (fl.u_half[c + 1] - fl.u_half[c]) / h;
                match form {
                    EnergyForm::Internal => de + pw[c + 1] * us - q,
                    EnergyForm::SemiDivergent => {
                        let flux = |m: usize| pw_star[m] * fl.u_half[m];
                        de + (ke(next, c) - ke(cur, c)) / tau + (flux(c + 1) - flux(c)) / h
                            - 0.5 * (work(c) + work(c + 1))
                            - q
                    }
                    EnergyForm::Divergent => {
                        let flux = |m: usize| {
                            g_star[m] * fl.u_half[m]
                                - k * (fl.ez_beta[m] * hy_star[m] - fl.ey_beta[m] * hz_star[m])
                                - k * h0 * (fl.v_half[m] * hy_star[m] + fl.w_half[m] * hz_star[m])
                        };
                        de + (ke(next, c) - ke(cur, c) + mag(next, c) - mag(cur, c)) / tau
                            + (flux(c + 1) - flux(c)) / h
                    }
                }
            })
            .collect()
    }

    /// The combination of momentum, induction and continuity residuals that
    /// separates the divergent from the internal energy form; it holds for
    /// arbitrary layers, solutions or not.
    pub fn energy_form_gap(&self, cur: &StateLayer, next: &StateLayer, tau: f64) -> Vec<f64> {
        let mut free = self.clone();
        for s in [&mut free.bc.left, &mut free.bc.right] {
            s.u = None;
            s.v = None;
            s.w = None;
        }
        let k = self.phys.kappa;
        let res = free.residuals(cur, next, tau);
        let gc = Ghosted::new(cur, self);
        let gn = Ghosted::new(next, self);
        let fl = Fluxes::new(cur, next, &gc, &gn, self);
        let node = |m: usize| fl.u_half[m] * res.u[m] + fl.v_half[m] * res.v[m] + fl.w_half[m] * res.w[m];
        (0..cur.cells())
            .map(|c| {
                let hh = cur.hy[c] * next.hy[c] + cur.hz[c] * next.hz[c];
                (0.5 * (node(c) + node(c + 1))
                    + k * (fl.hy_half[c + 1] * res.hy[c] + fl.hz_half[c + 1] * res.hz[c])
                    - 0.5 * k * hh * res.mass[c])
                    / tau
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::MeshSpec;
    use crate::state::{init_state, PointState};

    fn scheme(h: f64, h0: f64) -> FiniteSigma {
        FiniteSigma {
            params: FiniteSigmaParams::default(),
            phys: PhysicsParams { gamma: 5.0 / 3.0, kappa: 1.0, h0 },
            sigma: ConductivityModel::Constant { sigma0: 2.0 },
            bc: BoundaryClosure::walls(),
            circuit: None,
            h,
        }
    }

    fn smooth(mesh: &MeshSpec, s: &FiniteSigma) -> StateLayer {
        let len = mesh.total_mass;
        let prof = move |x: f64| {
            let a = std::f64::consts::PI * x / len;
            PointState {
                rho: 1.0 + 0.2 * a.sin(),
                p: 1.0 + 0.1 * (2.0 * a).cos(),
                u: 0.3 * a.sin(),
                v: 0.1 * a.cos(),
                w: -0.05 * a.sin(),
                hy: 0.5 + 0.2 * a.cos(),
                hz: 0.3 * (2.0 * a).sin(),
            }
        };
        let mut l = init_state(mesh, &s.phys, &prof).unwrap();
        l.u[0] = 0.0;
        l.u[mesh.cells] = 0.0;
        s.consistent_fields(&mut l);
        l
    }

    fn total_energy(l: &StateLayer, s: &FiniteSigma) -> f64 {
        let k = s.phys.kappa;
        let cells: f64 = (0..l.cells())
            .map(|c| l.eps[c] + 0.5 * k * (l.hy[c] * l.hy[c] + l.hz[c] * l.hz[c]) / l.rho[c])
            .sum();
        let nodes: f64 = (0..l.nodes()).map(|m| 0.5 * (l.u[m] * l.u[m] + l.v[m] * l.v[m] + l.w[m] * l.w[m])).sum();
        s.h * (cells + nodes)
    }

    #[test]
    fn rest_state_is_fixed_point() {
        let mesh = MeshSpec::new(1.0, 10, 0.01).unwrap();
        let s = scheme(mesh.h, 0.0);
        let pt = PointState { rho: 1.0, p: 1.0, ..Default::default() };
        let l = init_state(&mesh, &s.phys, &|_x: f64| pt).unwrap();
        let (next, rep) = s.step_one_component(&l, mesh.tau).unwrap();
        assert!(rep.iterations <= 1);
        assert_eq!(next.p, l.p);
        assert_eq!(next.u, l.u);
        assert_eq!(next.x, l.x);
    }

    #[test]
    fn uniform_field_stays_frozen() {
        let mesh = MeshSpec::new(1.0, 10, 0.01).unwrap();
        let s = scheme(mesh.h, 0.0);
        let pt = PointState { rho: 1.0, p: 1.0, hy: 0.7, ..Default::default() };
        let mut l = init_state(&mesh, &s.phys, &|_x: f64| pt).unwrap();
        s.consistent_fields(&mut l);
        let (next, _) = s.step_one_component(&l, mesh.tau).unwrap();
        for c in 0..10 {
            assert!((next.hy[c] / next.rho[c] - 0.7).abs() < 1e-14);
            assert!(next.ez[c].abs() < 1e-14);
        }
    }

    #[test]
    fn transverse_velocity_stays_zero_without_fields() {
        let mesh = MeshSpec::new(1.0, 8, 0.01).unwrap();
        let s = scheme(mesh.h, 1.0);
        let l = init_state(&mesh, &s.phys, &|x: f64| PointState {
            rho: 1.0 + 0.1 * x,
            p: 1.0,
            u: 0.0,
            ..Default::default()
        })
        .unwrap();
        let (next, _) = s.step_extended(&l, mesh.tau).unwrap();
        assert!(next.v.iter().chain(&next.w).all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn energy_and_volume_conserved_between_walls() {
        let mesh = MeshSpec::new(2.0, 24, 0.01).unwrap();
        let s = scheme(mesh.h, 0.0);
        let mut l = smooth(&mesh, &s);
        let e0 = total_energy(&l, &s);
        let len0 = l.x[24] - l.x[0];
        for _ in 0..10 {
            let (n, rep) = s.step_extended(&l, mesh.tau).unwrap();
            assert!(rep.max_residual() <= 1e-10, "{rep:?}");
            l = n;
        }
        assert!((total_energy(&l, &s) - e0).abs() < 1e-12 * e0, "{} vs {e0}", total_energy(&l, &s));
        assert!((l.x[24] - l.x[0] - len0).abs() < 1e-13);
    }

    #[test]
    fn one_component_matches_reduced_extended() {
        let mesh = MeshSpec::new(2.0, 16, 0.01).unwrap();
        let s = scheme(mesh.h, 0.0);
        let mut l = smooth(&mesh, &s);
        l.v.iter_mut().for_each(|v| *v = 0.0);
        l.w.iter_mut().for_each(|v| *v = 0.0);
        l.hz.iter_mut().for_each(|v| *v = 0.0);
        s.consistent_fields(&mut l);
        let (a, _) = s.step_one_component(&l, mesh.tau).unwrap();
        let (b, _) = s.step_extended(&l, mesh.tau).unwrap();
        for (x, y) in a.p.iter().zip(&b.p).chain(a.hy.iter().zip(&b.hy)).chain(a.u.iter().zip(&b.u)) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        assert!(b.ey.iter().all(|e| e.abs() < 1e-14));
    }

    #[test]
    fn energy_forms_vanish_on_steps() {
        let mesh = MeshSpec::new(2.0, 20, 0.01).unwrap();
        let mut s = scheme(mesh.h, 0.8);
        s.params.nu = 2.0 * mesh.h;
        let l = smooth(&mesh, &s);
        let (n, _) = s.step_extended(&l, mesh.tau).unwrap();
        for form in [EnergyForm::Internal, EnergyForm::SemiDivergent, EnergyForm::Divergent] {
            let r = s.energy_form(&l, &n, mesh.tau, form);
            assert!(r.iter().all(|v| v.abs() < 1e-9), "{form:?}: {r:?}");
        }
    }

    #[test]
    fn energy_form_gap_is_an_identity() {
        use rand::{Rng, SeedableRng};
        let mesh = MeshSpec::new(2.0, 12, 0.01).unwrap();
        let mut s = scheme(mesh.h, 0.6);
        s.params.alpha = 0.3;
        s.params.beta1 = 0.7;
        s.params.beta2 = 0.2;
        let l = smooth(&mesh, &s);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut n = l.clone();
        for v in [&mut n.u, &mut n.v, &mut n.w, &mut n.ey, &mut n.ez, &mut n.hy, &mut n.hz, &mut n.eps] {
            v.iter_mut().for_each(|x| *x += rng.gen_range(-0.1..0.1));
        }
        n.rho.iter_mut().for_each(|x| *x *= rng.gen_range(0.9..1.1));
        let r1 = s.energy_form(&l, &n, mesh.tau, EnergyForm::Internal);
        let r3 = s.energy_form(&l, &n, mesh.tau, EnergyForm::Divergent);
        let gap = s.energy_form_gap(&l, &n, mesh.tau);
        assert!(r1.iter().any(|v| v.abs() > 1e-3));
        for c in 0..12 {
            assert!((r3[c] - r1[c] - gap[c]).abs() < 1e-10 * (1.0 + gap[c].abs()), "{c}: {} vs {}", r3[c] - r1[c], gap[c]);
        }
    }
}
