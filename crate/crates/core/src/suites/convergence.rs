use serde::{Deserialize, Serialize};

use super::{Bound, SuiteReport};
use crate::boundary::BoundaryClosure;
use crate::eos::ConductivityModel;
use crate::mesh::MeshSpec;
use crate::schemes::finite_sigma::{FiniteSigma, FiniteSigmaParams};
use crate::state::{init_state, PhysicsParams, PointState, StateLayer};
use crate::Result;

/// Observed orders from self-convergence of three nested resolutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orders {
    /// `(h, tau) -> (h/2, tau/2)`.
    pub combined: f64,
    /// `(h, tau) -> (h/2, tau/4)`, as an order in `h`.
    pub quarter_step: f64,
    /// `tau -> tau/2` at fixed `h`.
    pub temporal: f64,
}

const T_END: f64 = 0.096;

fn solve(alpha: f64, beta: f64, cells: usize, tau: f64) -> Result<StateLayer> {
    let mesh = MeshSpec::new(1.0, cells, tau)?;
    let s = FiniteSigma {
        params: FiniteSigmaParams { alpha, beta1: beta, beta2: beta, tol: 1e-13, ..Default::default() },
        phys: PhysicsParams { gamma: 5.0 / 3.0, kappa: 1.0, h0: 0.0 },
        sigma: ConductivityModel::Constant { sigma0: 2.0 },
        bc: BoundaryClosure::walls(),
        circuit: None,
        h: mesh.h,
    };
    let pi = std::f64::consts::PI;
    let prof = |m: f64| PointState {
        rho: 1.0 + 0.1 * (2.0 * pi * m).sin(),
        p: 1.0 + 0.1 * (pi * m).cos(),
        u: 0.1 * (pi * m).sin(),
        hy: 0.5 + 0.1 * (pi * m).cos(),
        ..Default::default()
    };
    let mut l = init_state(&mesh, &s.phys, &prof)?;
    s.consistent_fields(&mut l);
    for _ in 0..(T_END / tau).round() as usize {
        l = s.step_one_component(&l, tau)?.0;
    }
    Ok(l)
}

/// Max difference of node values `u`, `x` on the coarse nodes.
fn diff(coarse: &StateLayer, fine: &StateLayer) -> f64 {
    let r = fine.cells() / coarse.cells();
    (0..coarse.nodes())
        .map(|m| (coarse.u[m] - fine.u[r * m]).abs().max((coarse.x[m] - fine.x[r * m]).abs()))
        .fold(0.0, f64::max)
}

fn order(levels: &[StateLayer; 3]) -> f64 {
    (diff(&levels[0], &levels[1]) / diff(&levels[1], &levels[2])).log2()
}

/// Self-convergence of the one-component scheme on smooth data.
pub fn observed_orders(alpha: f64, beta: f64) -> Result<Orders> {
    let (m, tau) = (16, 0.004);
    let run = |k: usize, q: usize| solve(alpha, beta, m << k, tau / (q.pow(k as u32) as f64));
    let combined = order(&[run(0, 2)?, run(1, 2)?, run(2, 2)?]);
    let quarter_step = order(&[run(0, 4)?, run(1, 4)?, run(2, 4)?]);
    let t = |k: u32| solve(alpha, beta, 2 * m, tau / 2f64.powi(k as i32));
    let temporal = order(&[t(0)?, t(1)?, t(2)?]);
    Ok(Orders { combined, quarter_step, temporal })
}

pub fn convergence_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("convergence");
    for (a, b) in [(0.5, 0.5), (0.7, 0.6), (1.0, 1.0)] {
        let o = observed_orders(a, b)?;
        let case = format!("alpha={a} beta={b}");
        rep.push(&case, "order (h, tau) -> (h/2, tau/2)", o.combined, Bound::AtLeast(0.8));
        rep.push(&case, "order (h, tau) -> (h/2, tau/4)", o.quarter_step, Bound::Report);
        let temporal = if a == 0.5 && b == 0.5 { Bound::AtLeast(1.8) } else { Bound::Report };
        rep.push(&case, "temporal order", o.temporal, temporal);
    }
    Ok(rep)
}
