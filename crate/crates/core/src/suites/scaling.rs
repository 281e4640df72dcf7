use crate::boundary::BoundaryClosure;
use crate::eos::ConductivityModel;
use crate::mesh::MeshSpec;
use crate::profiles::{reference_state, SmoothRandom};
use crate::schemes::finite_sigma::{FiniteSigma, FiniteSigmaParams};
use crate::state::{init_state, PhysicsParams, StateLayer};
use crate::Result;

/// Map a solution of the system with coupling `k` onto the `k = 1` system:
/// densities, pressure, fields and `E` scale by `k`, kinematics and currents
/// stay.
pub fn rescale_layer(l: &StateLayer, k: f64) -> StateLayer {
    let mut out = l.clone();
    for v in [&mut out.rho, &mut out.p, &mut out.hy, &mut out.hz, &mut out.ey, &mut out.ez] {
        v.iter_mut().for_each(|x| *x *= k);
    }
    out
}

fn scheme(kappa: f64, h0: f64, sigma: ConductivityModel, h: f64) -> FiniteSigma {
    FiniteSigma {
        params: FiniteSigmaParams { alpha: 0.6, beta1: 0.7, beta2: 0.4, tol: 1e-13, ..Default::default() },
        phys: PhysicsParams { gamma: 5.0 / 3.0, kappa, h0 },
        sigma,
        bc: BoundaryClosure::walls(),
        circuit: None,
        h,
    }
}

/// Largest relative mismatch, over all fields, between a run at coupling
/// `kappa` mapped to unit coupling and the unit-coupling run started from
/// the mapped data.
pub fn kappa_scaling_gap(kappa: f64, sigma: ConductivityModel, steps: usize) -> Result<f64> {
    let mesh = MeshSpec::new(1.0, 16, 0.004)?;
    let scaled_mesh = MeshSpec::new(kappa, 16, 0.004)?;
    let (h0, nu) = (0.7 / kappa.sqrt(), 0.3);
    let mut a = scheme(kappa, h0, sigma, mesh.h);
    a.params.nu = nu * mesh.h;
    let mut b = scheme(1.0, kappa * h0, sigma.rescaled(kappa)?, scaled_mesh.h);
    b.params.nu = nu * scaled_mesh.h;
    // same plasma beta as the unit-coupling reference data
    let mut base = reference_state(true);
    base.hy /= kappa.sqrt();
    base.hz /= kappa.sqrt();
    let prof = SmoothRandom::new(5, base, mesh.total_mass, 0.1);
    let mut la = init_state(&mesh, &a.phys, &prof)?;
    let n = la.cells();
    (la.u[0], la.u[n]) = (0.0, 0.0);
    la.align_transverse(mesh.h, h0, 0.1, -0.2);
    a.consistent_fields(&mut la);
    let mut lb = rescale_layer(&la, kappa);
    for _ in 0..steps {
        la = a.step_extended(&la, mesh.tau)?.0;
        lb = b.step_extended(&lb, mesh.tau)?.0;
    }
    let mapped = rescale_layer(&la, kappa);
    let pairs = [
        (&mapped.rho, &lb.rho),
        (&mapped.p, &lb.p),
        (&mapped.hy, &lb.hy),
        (&mapped.hz, &lb.hz),
        (&mapped.ey, &lb.ey),
        (&mapped.ez, &lb.ez),
        (&mapped.u, &lb.u),
        (&mapped.v, &lb.v),
        (&mapped.w, &lb.w),
        (&mapped.x, &lb.x),
        (&mapped.y, &lb.y),
        (&mapped.z, &lb.z),
    ];
    Ok(pairs
        .iter()
        .map(|(x, y)| {
            let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            x.iter().zip(y.iter()).fold(0.0f64, |m, (p, q)| m.max((p - q).abs())) / scale
        })
        .fold(0.0, f64::max))
}
