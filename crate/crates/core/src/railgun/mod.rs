//! Deceleration of a plasma bunch in a channel fed by an external circuit.

mod artifacts;
mod config;

#[cfg(test)]
mod tests;

pub use artifacts::RunArtifacts;
pub use config::{ExperimentCase, RailgunConfig};

use crate::audit::{audit_step, ConservationReport, SchemeRef};
use crate::boundary::BoundaryClosure;
use crate::mesh::MeshSpec;
use crate::schemes::finite_sigma::{FiniteSigma, FiniteSigmaParams};
use crate::state::{init_state, PhysicsParams, PointState, StateLayer, TimeWindow};
use crate::{Error, Result};

/// Closure of the experiment: open pressure-free left end, conducting wall
/// at the right fed with `Hy = kappa J`.
pub fn boundary_closure() -> BoundaryClosure {
    BoundaryClosure::railgun()
}

/// Scheme configured for a run.
pub fn scheme(cfg: &RailgunConfig) -> FiniteSigma {
    let h = cfg.h();
    FiniteSigma {
        params: FiniteSigmaParams {
            alpha: cfg.alpha,
            beta1: cfg.beta,
            beta2: cfg.beta,
            nu: cfg.nu_over_h * h,
            tol: cfg.tol,
            max_iter: cfg.max_iter,
        },
        phys: PhysicsParams { gamma: cfg.gamma, kappa: cfg.kappa, h0: cfg.h0 },
        sigma: cfg.sigma,
        bc: boundary_closure(),
        circuit: Some(cfg.circuit),
        h,
    }
}

/// Hot bunch at the left, cold background at rest, joined by a linear ramp.
pub fn initial_layer(cfg: &RailgunConfig, s: &FiniteSigma) -> Result<StateLayer> {
    let mesh = MeshSpec::new(cfg.total_mass, cfg.cells, cfg.tau)?;
    let edge = cfg.bunch_fraction * cfg.total_mass;
    let width = cfg.ramp_cells * mesh.h;
    let profile = |m: f64| {
        // 0 inside the bunch, 1 in the background
        let w = if width > 0.0 { ((m - edge) / width + 0.5).clamp(0.0, 1.0) } else { f64::from(m >= edge) };
        PointState {
            rho: cfg.rho0,
            p: cfg.rho0 * cfg.t0 * (1.0 - w) + cfg.p0 * w,
            u: cfg.u0 * (1.0 - w),
            v: cfg.v0,
            ..Default::default()
        }
    };
    let mut l = init_state(&mesh, &s.phys, &profile)?;
    let n = cfg.cells;
    l.u[n] = 0.0;
    l.circuit = Some(cfg.circuit.initial());
    s.consistent_fields(&mut l);
    Ok(l)
}

/// Run one case to `t_max`, auditing every step.
pub fn run_case(cfg: &RailgunConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let s = scheme(cfg);
    s.validate()?;
    let mesh = MeshSpec::new(cfg.total_mass, cfg.cells, cfg.tau)?;
    let mut cur = initial_layer(cfg, &s)?;
    let mut art = RunArtifacts::new(cfg.clone(), mesh);
    art.record(&cur, 0);
    let mut total = ConservationReport::new(SchemeRef::Extended(&s).name());
    for step in 1..=cfg.steps() {
        let (next, _) = s.step_extended(&cur, cfg.tau).map_err(|e| Error::StepFailed { step, source: Box::new(e) })?;
        let win = TimeWindow::two(&cur, &next, cfg.tau);
        let rep = audit_step(&win, SchemeRef::Extended(&s))?;
        total.accumulate(&rep);
        art.budget_rows.push(rep.csv_row(step, next.t));
        if art.budget_header.is_empty() {
            art.budget_header = rep.csv_header();
        }
        if let (Some(a), Some(b)) = (cur.circuit, next.circuit) {
            let n = cfg.cells;
            let jm = 0.5 * (a.current + b.current);
            let em = 0.5 * (cur.ez[n] + next.ez[n]);
            let c = &cfg.circuit;
            let drift = c.energy(b) - c.energy(a) + cfg.tau * (c.r0 * jm * jm + em * jm);
            art.circuit_drift = art.circuit_drift.max(drift.abs() / c.energy(a).max(c.energy(b)));
        }
        if next.t <= cfg.report_time + 0.5 * cfg.tau {
            art.at_report = Some(total.clone());
        }
        art.record(&next, step);
        cur = next;
    }
    art.conservation = total;
    art.final_state = cur;
    Ok(art)
}
