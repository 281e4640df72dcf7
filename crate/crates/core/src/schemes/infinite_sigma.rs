//! Ideal-conductivity schemes: the direct limit, its angular-momentum
//! preserving modification and the isentropic extended-stencil scheme.

use serde::{Deserialize, Serialize};

use super::layout::{group_residuals, newton_layer, CellVar, Layout, NodeVar, Slot};
use super::StepReport;
use crate::boundary::{padded, BoundaryClosure, CellField};
use crate::eos::{eps_factor, EosKind};
use crate::error::{Error, Result};
use crate::solver::NewtonOptions;
use crate::state::{PhysicsParams, StateLayer};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum InfSigmaVariant {
    /// Direct limit of the finite-conductivity scheme.
    Mod0,
    /// Implicit transverse momentum, explicit induction, `y_t = v`.
    Mod1 { eos: EosKind },
    /// Isentropic scheme with `p = S1 rho^ rho^_+` (gamma = 2).
    Mod2 { s1: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteSigma {
    pub variant: InfSigmaVariant,
    pub alpha: f64,
    pub nu: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub phys: PhysicsParams,
    pub bc: BoundaryClosure,
    pub h: f64,
    /// Largest admitted density ratio between neighbouring cells (Mod2).
    pub shock_ratio: f64,
}

impl InfiniteSigma {
    pub fn new(variant: InfSigmaVariant, phys: PhysicsParams, bc: BoundaryClosure, h: f64) -> Self {
        Self { variant, alpha: 0.5, nu: 0.0, tol: 1e-10, max_iter: 100, phys, bc, h, shock_ratio: 2.0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.phys.validate()?;
        if !(0.0..=1.0).contains(&self.alpha) || !(self.tol > 0.0) || self.nu < 0.0 {
            return Err(Error::InvalidParam("need alpha in [0, 1], tol > 0, nu >= 0".into()));
        }
        if self.bc.uses_circuit() {
            return Err(Error::InvalidParam("circuit closure needs finite conductivity".into()));
        }
        match self.variant {
            InfSigmaVariant::Mod0 => {}
            InfSigmaVariant::Mod1 { eos } => {
                eos.validate()?;
                if (eos.gamma() - self.phys.gamma).abs() > 1e-12 {
                    return Err(Error::InvalidParam(format!("EOS gamma {} differs from {}", eos.gamma(), self.phys.gamma)));
                }
                if eos.is_entropy_preserving() && (self.alpha == 0.0 || self.nu > 0.0) {
                    return Err(Error::InvalidParam("entropy-preserving EOS needs alpha > 0 and no viscosity".into()));
                }
            }
            InfSigmaVariant::Mod2 { s1 } => {
                if (self.phys.gamma - 2.0).abs() > 1e-12 || !(s1 > 0.0) || self.nu > 0.0 {
                    return Err(Error::InvalidParam("Mod2 needs gamma = 2, S1 > 0 and no viscosity".into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_entropy_preserving(&self) -> bool {
        matches!(self.variant, InfSigmaVariant::Mod1 { eos } if eos.is_entropy_preserving())
    }

    pub fn eos(&self) -> EosKind {
        match self.variant {
            InfSigmaVariant::Mod1 { eos } => eos,
            _ => EosKind::Continuum { gamma: self.phys.gamma },
        }
    }
}

/// Raw residuals in update form.
#[derive(Debug, Clone, Default)]
pub struct InfResiduals {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub e: Vec<f64>,
    pub hy: Vec<f64>,
    pub hz: Vec<f64>,
    pub mass: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl InfResiduals {
    pub fn max_rate(&self, tau: f64) -> f64 {
        [&self.u, &self.v, &self.w, &self.e, &self.hy, &self.hz, &self.mass, &self.x, &self.y, &self.z]
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |a, r| a.max(r.abs()))
            / tau
    }
}

/// Fluxes of one step. Node quantities have `M+1` entries; padded cell
/// quantities (`g`, `ty`, `tz`, `p_alpha`, `h**`) have `M+2` and carry the
/// closure ghosts.
#[derive(Debug, Clone)]
pub struct InfFluxes {
    /// Velocity of the mass and `x` equations.
    pub u_mass: Vec<f64>,
    pub omega: Vec<f64>,
    /// `p^(alpha) + omega` (Mod2: unused).
    pub p_alpha: Vec<f64>,
    /// Momentum flux: `u_t + g_sbar = 0`.
    pub g: Vec<f64>,
    /// Transverse field fluxes: `v_t = kappa H0 ty_sbar`.
    pub ty: Vec<f64>,
    pub tz: Vec<f64>,
    /// Induction velocities: `(Hy/rho)_t = H0 vy_s`.
    pub vy: Vec<f64>,
    pub vz: Vec<f64>,
    /// Kinematic velocities: `y_t = ky`.
    pub ky: Vec<f64>,
    pub kz: Vec<f64>,
    pub hyc: Vec<f64>,
    pub hyn: Vec<f64>,
    pub hzc: Vec<f64>,
    pub hzn: Vec<f64>,
}

fn half(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

impl InfiniteSigma {
    /// Pressure `S1 rho^_c rho^_{c+1}` acting during the step into `next`.
    pub fn mod2_pressure(&self, next: &StateLayer, s1: f64) -> Vec<f64> {
        let n = next.cells();
        (0..n).map(|c| s1 * next.rho[c] * next.rho[(c + 1).min(n - 1)]).collect()
    }

    fn complete(&self, cur: &StateLayer, next: &mut StateLayer, tau: f64) -> bool {
        let (h, gamma) = (self.h, self.phys.gamma);
        let n = cur.cells();
        next.t = cur.t + tau;
        let us = self.u_mass(cur, next);
        for m in 0..=n {
            next.x[m] = cur.x[m] + tau * us[m];
        }
        match self.variant {
            InfSigmaVariant::Mod0 => {
                for m in 0..=n {
                    next.y[m] = cur.y[m] + 0.5 * tau * (cur.v[m] + next.v[m]);
                    next.z[m] = cur.z[m] + 0.5 * tau * (cur.w[m] + next.w[m]);
                }
            }
            InfSigmaVariant::Mod1 { .. } => {
                for m in 0..=n {
                    next.y[m] = cur.y[m] + tau * cur.v[m];
                    next.z[m] = cur.z[m] + tau * cur.w[m];
                }
            }
            InfSigmaVariant::Mod2 { .. } => {
                // (y_+)_t = v with a copied ghost node at -1
                next.y[0] = cur.y[0] + tau * cur.v[0];
                next.z[0] = cur.z[0] + tau * cur.w[0];
                for m in 0..n {
                    next.y[m + 1] = cur.y[m + 1] + tau * cur.v[m];
                    next.z[m + 1] = cur.z[m + 1] + tau * cur.w[m];
                }
            }
        }
        for c in 0..n {
            let du = us[c + 1] - us[c];
            let vol = 1.0 / cur.rho[c] + tau * du / h;
            if !(vol > 0.0) || !vol.is_finite() {
                return false;
            }
            next.rho[c] = 1.0 / vol;
        }
        if let InfSigmaVariant::Mod2 { s1 } = self.variant {
            next.p = self.mod2_pressure(next, s1);
        }
        for c in 0..n {
            next.eps[c] = next.p[c] / ((gamma - 1.0) * next.rho[c]);
            next.temp[c] = next.p[c] / next.rho[c];
        }
        true
    }

    /// Node velocity carried by the kinematic and mass equations: `u^(0.5)`,
    /// or for Mod2 the old-layer average `(u + u_-)/2` with `u_-1 = u_0`.
    pub fn u_mass(&self, cur: &StateLayer, next: &StateLayer) -> Vec<f64> {
        match self.variant {
            InfSigmaVariant::Mod2 { .. } => {
                (0..cur.nodes()).map(|m| 0.5 * (cur.u[m] + cur.u[m.saturating_sub(1)])).collect()
            }
            _ => half(&cur.u, &next.u),
        }
    }

    fn ghosts(&self, l: &StateLayer, f: CellField) -> (f64, f64) {
        self.bc.cell_ghosts(f, l, self.phys.kappa)
    }

    /// Discrete fluxes between `cur` and `next`.
    pub fn fluxes(&self, cur: &StateLayer, next: &StateLayer) -> InfFluxes {
        let (h, k) = (self.h, self.phys.kappa);
        let n = cur.cells();
        let a = self.alpha;
        let u_mass = self.u_mass(cur, next);
        let hyc = padded(&cur.hy, self.ghosts(cur, CellField::Hy));
        let hyn = padded(&next.hy, self.ghosts(next, CellField::Hy));
        let hzc = padded(&cur.hz, self.ghosts(cur, CellField::Hz));
        let hzn = padded(&next.hz, self.ghosts(next, CellField::Hz));
        let omega: Vec<f64> = (0..n)
            .map(|c| {
                let us = u_mass[c + 1] - u_mass[c];
                if self.nu > 0.0 && us < 0.0 {
                    -self.nu * next.rho[c] * us / h
                } else {
                    0.0
                }
            })
            .collect();
        let om = |c: usize| if c >= 1 && c <= n { omega[c - 1] } else { 0.0 };
        let pc = padded(&cur.p, self.ghosts(cur, CellField::P));
        let pn = padded(&next.p, self.ghosts(next, CellField::P));
        let p_alpha: Vec<f64> = (0..n + 2).map(|c| a * pn[c] + (1.0 - a) * pc[c] + om(c)).collect();
        let shift = |v: &[f64]| -> Vec<f64> { (0..n + 2).map(|c| v[(c + 1).min(n + 1)]).collect() };
        let back = |v: &[f64]| -> Vec<f64> { (0..=n).map(|m| v[m.saturating_sub(1)]).collect() };
        let (g, ty, tz, vy, vz) = match self.variant {
            InfSigmaVariant::Mod2 { .. } => {
                let (hy2, hz2) = (shift(&hyn), shift(&hzn));
                let g = (0..n + 2).map(|c| pn[c] + 0.5 * k * (hy2[c] * hyn[c] + hz2[c] * hzn[c])).collect();
                (g, hy2, hz2, back(&cur.v), back(&cur.w))
            }
            _ => {
                let g = (0..n + 2).map(|c| p_alpha[c] + 0.5 * k * (hyc[c] * hyn[c] + hzc[c] * hzn[c])).collect();
                if let InfSigmaVariant::Mod0 = self.variant {
                    (g, half(&hyc, &hyn), half(&hzc, &hzn), half(&cur.v, &next.v), half(&cur.w, &next.w))
                } else {
                    (g, hyn.clone(), hzn.clone(), cur.v.clone(), cur.w.clone())
                }
            }
        };
        let (ky, kz) = match self.variant {
            InfSigmaVariant::Mod2 { .. } => (back(&cur.v), back(&cur.w)),
            _ => (vy.clone(), vz.clone()),
        };
        InfFluxes { u_mass, omega, p_alpha, g, ty, tz, vy, vz, ky, kz, hyc, hyn, hzc, hzn }
    }

    /// Residuals of every scheme equation. `prev` is used by the
    /// entropy-preserving energy equation only.
    pub fn residuals(&self, prev: &StateLayer, cur: &StateLayer, next: &StateLayer, tau: f64) -> InfResiduals {
        let (h, k, h0) = (self.h, self.phys.kappa, self.phys.h0);
        let n = cur.cells();
        let r = tau / h;
        let a = self.alpha;
        let fl = self.fluxes(cur, next);
        let side = |m: usize| if m == 0 { Some(&self.bc.left) } else if m == n { Some(&self.bc.right) } else { None };
        let pick = |d: Option<f64>, val: f64, eq: f64| d.map_or(eq, |d| val - d);
        let mut res = InfResiduals::default();
        for m in 0..=n {
            let sd = side(m);
            let du = next.u[m] - cur.u[m] + r * (fl.g[m + 1] - fl.g[m]);
            let dv = next.v[m] - cur.v[m] - r * k * h0 * (fl.ty[m + 1] - fl.ty[m]);
            let dw = next.w[m] - cur.w[m] - r * k * h0 * (fl.tz[m + 1] - fl.tz[m]);
            res.u.push(pick(sd.and_then(|s| s.u), next.u[m], du));
            res.v.push(pick(sd.and_then(|s| s.v), next.v[m], dv));
            res.w.push(pick(sd.and_then(|s| s.w), next.w[m], dw));
            res.x.push(next.x[m] - cur.x[m] - tau * fl.u_mass[m]);
            res.y.push(next.y[m] - cur.y[m] - tau * fl.ky[m]);
            res.z.push(next.z[m] - cur.z[m] - tau * fl.kz[m]);
        }
        let eos = self.eos();
        let mod2 = matches!(self.variant, InfSigmaVariant::Mod2 { .. });
        for c in 0..n {
            let us = fl.u_mass[c + 1] - fl.u_mass[c];
            res.mass.push(1.0 / next.rho[c] - 1.0 / cur.rho[c] - r * us);
            res.hy.push(next.hy[c] / next.rho[c] - cur.hy[c] / cur.rho[c] - r * h0 * (fl.vy[c + 1] - fl.vy[c]));
            res.hz.push(next.hz[c] / next.rho[c] - cur.hz[c] / cur.rho[c] - r * h0 * (fl.vz[c + 1] - fl.vz[c]));
            let pa = a * next.p[c] + (1.0 - a) * cur.p[c];
            res.e.push(if mod2 {
                0.0
            } else if eos.is_entropy_preserving() {
                let pp = a * cur.p[c] + (1.0 - a) * prev.p[c];
                pa * eps_factor(cur.rho[c], next.rho[c], eos)
                    - pp * (eps_factor(prev.rho[c], cur.rho[c], eos) - (1.0 / cur.rho[c] - 1.0 / prev.rho[c]))
            } else {
                next.eps[c] - cur.eps[c] + r * (pa + fl.omega[c]) * us
            });
        }
        res
    }
}

impl InfiniteSigma {
    /// For the modified scheme: the combination of scheme residuals equal to
    /// the three-layer energy balance at each cell, for arbitrary layers. The
    /// balance divided by `tau` is the scheme's two-layer energy form plus
    /// momentum, induction and continuity terms.
    pub fn energy_law_gap(&self, prev: &StateLayer, cur: &StateLayer, next: &StateLayer, tau: f64) -> Result<Vec<f64>> {
        if !matches!(self.variant, InfSigmaVariant::Mod1 { .. }) {
            return Err(Error::InvalidParam("three-layer energy form belongs to the modified scheme".into()));
        }
        let mut free = self.clone();
        for s in [&mut free.bc.left, &mut free.bc.right] {
            s.u = None;
            s.v = None;
            s.w = None;
        }
        let k = self.phys.kappa;
        let ep = self.eos().is_entropy_preserving();
        let old = free.residuals(prev, prev, cur, tau);
        let new = free.residuals(prev, cur, next, tau);
        let a = self.alpha;
        let node = |m: usize| {
            0.5 * ((prev.u[m] + cur.u[m]) * old.u[m] + (prev.v[m] + cur.v[m]) * old.v[m] + (prev.w[m] + cur.w[m]) * old.w[m])
        };
        Ok((0..cur.cells())
            .map(|c| {
                let e = if ep { new.e[c] } else { old.e[c] };
                let pp = if ep { a * cur.p[c] + (1.0 - a) * prev.p[c] } else { 0.0 };
                let hh = cur.hy[c] * prev.hy[c] + cur.hz[c] * prev.hz[c];
                (e + 0.5 * (node(c) + node(c + 1))
                    + 0.5 * k * (cur.hy[c] * (new.hy[c] + old.hy[c]) + cur.hz[c] * (new.hz[c] + old.hz[c]))
                    - (0.5 * k * hh + pp) * old.mass[c])
                    / tau
            })
            .collect())
    }
}

impl InfiniteSigma {
    /// Advance `cur` by `tau`. The entropy-preserving EOS needs the layer
    /// before `cur`; when absent (first step) a copy of `cur` stands in.
    pub fn step(&self, prev: Option<&StateLayer>, cur: &StateLayer, tau: f64) -> Result<(StateLayer, StepReport)> {
        cur.check_density()?;
        if !(tau > 0.0) {
            return Err(Error::InvalidParam(format!("time step {tau} must be positive")));
        }
        let prev = prev.unwrap_or(cur);
        let n = cur.cells();
        let amax = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let k = self.phys.kappa;
        let mut sound = 0.0f64;
        let mut flux = 0.0f64;
        for c in 0..n {
            let b2 = cur.hy[c] * cur.hy[c] + cur.hz[c] * cur.hz[c];
            sound = sound.max(((self.phys.gamma * cur.p[c].abs() + k * b2) / cur.rho[c]).sqrt());
            flux = flux.max(b2.sqrt() / cur.rho[c]);
        }
        let vel = 1.0 + amax(&cur.u) + amax(&cur.v) + amax(&cur.w) + sound;
        let energy = amax(&cur.eps) + vel * vel;
        let flux = 1.0 + flux;
        let pmag = amax(&cur.p).max(1e-8);
        let hmag = flux * cur.rho.iter().cloned().fold(0.0, f64::max);
        let mod2 = matches!(self.variant, InfSigmaVariant::Mod2 { .. });
        let layout = Layout {
            nodes: vec![NodeVar::U, NodeVar::V, NodeVar::W],
            cells: if mod2 { vec![CellVar::Hy, CellVar::Hz] } else { vec![CellVar::P, CellVar::Hy, CellVar::Hz] },
            circuit: false,
            m: n,
        };
        let typical = |s: Slot| match s {
            Slot::Cell(_, CellVar::P) => pmag,
            Slot::Cell(..) => hmag,
            _ => vel,
        };
        let pick = |res: &InfResiduals, s: Slot| match s {
            Slot::Node(m, NodeVar::U) => res.u[m] / vel,
            Slot::Node(m, NodeVar::V) => res.v[m] / vel,
            Slot::Node(m, NodeVar::W) => res.w[m] / vel,
            Slot::Cell(c, CellVar::P) => res.e[c] / energy,
            Slot::Cell(c, CellVar::Hy) => res.hy[c] / flux,
            Slot::Cell(c, CellVar::Hz) => res.hz[c] / flux,
            _ => 0.0,
        };
        let opts = NewtonOptions { tol: self.tol, max_iter: self.max_iter, ..Default::default() };
        let (next, newton) = newton_layer(
            cur,
            &layout,
            &typical,
            &opts,
            &|l| self.complete(cur, l, tau),
            &|l| self.residuals(prev, cur, l, tau),
            &pick,
        )?;
        if mod2 {
            for c in 0..n.saturating_sub(1) {
                let ratio = next.rho[c + 1] / next.rho[c];
                if ratio > self.shock_ratio || ratio < 1.0 / self.shock_ratio {
                    return Err(Error::StepRejected(format!(
                        "density jump {ratio:.3} at cell {c}: the isentropic scheme does not admit shocks"
                    )));
                }
            }
        }
        let res = self.residuals(prev, cur, &next, tau);
        let viscosity_active = (0..n)
            .filter(|&c| self.nu > 0.0 && (cur.u[c + 1] - cur.u[c]) + (next.u[c + 1] - next.u[c]) < 0.0)
            .count();
        let report = StepReport {
            iterations: newton.iterations,
            residuals: group_residuals(&layout, &res, &pick),
            viscosity_active,
            temperature_clamps: 0,
        };
        Ok((next, report))
    }

    /// Pressure at the new layer for which the shifted energy equation holds
    /// exactly, given the step's densities.
    pub fn invert_eos_pressure(&self, prev: &StateLayer, cur: &StateLayer, rho_next: &[f64]) -> Result<Vec<f64>> {
        let eos = self.eos();
        if !eos.is_entropy_preserving() {
            return Err(Error::UnsupportedEos(format!("{eos:?} is not entropy preserving")));
        }
        let a = self.alpha;
        (0..cur.cells())
            .map(|c| {
                let pp = a * cur.p[c] + (1.0 - a) * prev.p[c];
                let f = eps_factor(cur.rho[c], rho_next[c], eos);
                if !(f.is_finite() && f != 0.0) {
                    return Err(Error::InvalidParam(format!("degenerate densities in cell {c}")));
                }
                let target = pp * (eps_factor(prev.rho[c], cur.rho[c], eos) - (1.0 / cur.rho[c] - 1.0 / prev.rho[c]));
                Ok((target / f - (1.0 - a) * cur.p[c]) / a)
            })
            .collect()
    }
}
