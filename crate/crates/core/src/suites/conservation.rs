use super::{Bound, SuiteReport};
use crate::audit::{audit_history, ConservationReport};
use crate::boundary::BoundaryClosure;
use crate::config::Built;
use crate::eos::{ConductivityModel, EosKind};
use crate::mesh::MeshSpec;
use crate::profiles::{reference_state, SmoothRandom};
use crate::runner::history;
use crate::schemes::finite_sigma::{FiniteSigma, FiniteSigmaParams};
use crate::schemes::infinite_sigma::{InfSigmaVariant, InfiniteSigma};
use crate::state::{init_state, PhysicsParams, PointState, StateLayer};
use crate::Result;

/// A scheme with its initial layer.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub built: Built,
    pub first: StateLayer,
    pub mesh: MeshSpec,
}

impl Scenario {
    pub fn run(&self, steps: usize) -> Result<Vec<StateLayer>> {
        history(&self.built, self.first.clone(), steps, self.mesh.tau)
    }

    pub fn audit(&self, steps: usize) -> Result<ConservationReport> {
        audit_history(&self.run(steps)?, self.built.scheme_ref(), self.mesh.tau)
    }
}

fn finite(h0: f64, sigma: ConductivityModel, mesh: &MeshSpec, tol: f64) -> FiniteSigma {
    FiniteSigma {
        params: FiniteSigmaParams { alpha: 0.6, beta1: 0.7, beta2: 0.4, tol: tol * 1e-2, ..Default::default() },
        phys: PhysicsParams { gamma: 5.0 / 3.0, kappa: 1.0, h0 },
        sigma,
        bc: BoundaryClosure::walls(),
        circuit: None,
        h: mesh.h,
    }
}

fn infinite(variant: InfSigmaVariant, gamma: f64, h0: f64, mesh: &MeshSpec, tol: f64) -> InfiniteSigma {
    let mut s = InfiniteSigma::new(variant, PhysicsParams { gamma, kappa: 1.0, h0 }, BoundaryClosure::walls(), mesh.h);
    s.tol = tol * 1e-2;
    s
}

fn random_layer(mesh: &MeshSpec, phys: &PhysicsParams, seed: u64, transverse: bool) -> Result<StateLayer> {
    let prof = SmoothRandom::new(seed, reference_state(transverse), mesh.total_mass, 0.1);
    let mut l = init_state(mesh, phys, &prof)?;
    let n = l.cells();
    (l.u[0], l.u[n]) = (0.0, 0.0);
    if !transverse {
        l.v.fill(0.0);
        l.w.fill(0.0);
        l.hz.fill(0.0);
    }
    if phys.h0 != 0.0 {
        l.align_transverse(mesh.h, phys.h0, 0.1, -0.2);
    }
    Ok(l)
}

/// Randomized smooth runs of every scheme in its regimes. Solver tolerance
/// is `tol / 100`.
pub fn scenarios(tol: f64, seed: u64) -> Result<Vec<Scenario>> {
    let fm = MeshSpec::new(1.0, 16, 0.004)?;
    let im = MeshSpec::new(1.0, 16, 0.002)?;
    let mut out = Vec::new();
    let (rho_sigma, const_sigma) = (ConductivityModel::PowerDensity, ConductivityModel::Constant { sigma0: 2.0 });
    let finite_cases = [
        ("one-component sigma=rho", false, 0.0, rho_sigma),
        ("one-component sigma const", false, 0.0, const_sigma),
        ("extended sigma=rho H0=0", true, 0.0, rho_sigma),
        ("extended sigma const H0=0.7", true, 0.7, const_sigma),
    ];
    for (k, (name, ext, h0, sigma)) in finite_cases.into_iter().enumerate() {
        let s = finite(h0, sigma, &fm, tol);
        let mut first = random_layer(&fm, &s.phys, seed + k as u64, ext)?;
        s.consistent_fields(&mut first);
        let built = if ext { Built::Extended(s) } else { Built::OneComponent(s) };
        out.push(Scenario { name: name.into(), built, first, mesh: fm });
    }
    let mod1 = |eos| InfSigmaVariant::Mod1 { eos };
    let inf_cases = [
        ("mod0 H0=0.8", InfSigmaVariant::Mod0, 5.0 / 3.0, 0.8),
        ("mod1 continuum H0=0.8", mod1(EosKind::Continuum { gamma: 1.4 }), 1.4, 0.8),
        ("mod1 entropy gamma=2 H0=0", mod1(EosKind::EntropyInteger { gamma: 2 }), 2.0, 0.0),
        ("mod1 entropy gamma=3 H0=0.8", mod1(EosKind::EntropyInteger { gamma: 3 }), 3.0, 0.8),
        ("mod1 entropy gamma=5/3 H0=0.5", mod1(EosKind::Entropy53), 5.0 / 3.0, 0.5),
        ("mod2 H0=0.6", InfSigmaVariant::Mod2 { s1: 0.8 }, 2.0, 0.6),
        ("mod2 H0=0", InfSigmaVariant::Mod2 { s1: 0.8 }, 2.0, 0.0),
    ];
    for (k, (name, variant, gamma, h0)) in inf_cases.into_iter().enumerate() {
        let s = infinite(variant, gamma, h0, &im, tol);
        let mut first = random_layer(&im, &s.phys, seed + 10 + k as u64, true)?;
        if let InfSigmaVariant::Mod2 { s1 } = variant {
            if h0 == 0.0 {
                // uniform B1 keeps the H0 = 0 shift law exact
                for c in 0..first.cells() {
                    first.hy[c] = 0.5 * first.rho[c];
                    first.hz[c] = -0.2 * first.rho[c];
                }
            }
            first.p = s.mod2_pressure(&first, s1);
            first.refresh_thermo(gamma);
        }
        out.push(Scenario { name: name.into(), built: Built::Infinite(s), first, mesh: im });
    }
    Ok(out)
}

/// Every applicable law within `100 tol` pointwise; others reported.
pub fn conservation_suite(tol: f64, steps: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("conservation");
    for sc in scenarios(tol, 1)? {
        let r = sc.audit(steps)?;
        for l in &r.laws {
            let bound = if l.audited() { Bound::AtMost(100.0 * tol) } else { Bound::Report };
            rep.push(&sc.name, format!("{} {}", l.id, l.name), l.max_residual, bound);
        }
    }
    let (m1, m0) = angular_contrast(0.003, 100)?;
    rep.push("rotating H0=1", "mod1 T3.11 max residual", m1, Bound::AtMost(100.0 * tol));
    rep.push("rotating H0=1", "mod0 T3.11 total drift", m0, Bound::AtLeast(1e-4));
    Ok(rep)
}

/// Angular momentum on rotating data with `H0 = 1`: worst pointwise
/// residual of Mod1 and total budget drift of Mod0 over `steps` steps.
pub fn angular_contrast(tau: f64, steps: usize) -> Result<(f64, f64)> {
    let mesh = MeshSpec::new(1.0, 24, tau)?;
    let k = std::f64::consts::TAU;
    let prof = |s: f64| PointState {
        rho: 1.0 + 0.1 * (k * s).sin(),
        p: 1.0,
        u: 0.0,
        v: 0.3 * (k * s).cos(),
        w: 0.3 * (k * s).sin(),
        hy: 0.5 * (k * s).cos(),
        hz: 0.5 * (k * s).sin(),
    };
    let mut out = [0.0; 2];
    for (i, variant) in [InfSigmaVariant::Mod1 { eos: EosKind::Continuum { gamma: 5.0 / 3.0 } }, InfSigmaVariant::Mod0]
        .into_iter()
        .enumerate()
    {
        let s = infinite(variant, 5.0 / 3.0, 1.0, &mesh, 1e-10);
        let mut first = init_state(&mesh, &s.phys, &prof)?;
        first.align_transverse(mesh.h, 1.0, 0.0, 0.0);
        let sc = Scenario { name: String::new(), built: Built::Infinite(s), first, mesh };
        let law = sc.audit(steps)?.law("T3.11").cloned().expect("angular momentum law");
        out[i] = if i == 0 { law.max_residual } else { law.cumulative_drift.abs() };
    }
    Ok((out[0], out[1]))
}
