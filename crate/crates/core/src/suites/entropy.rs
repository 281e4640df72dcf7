use super::{Bound, SuiteReport};
use crate::audit::{pathline_invariants, PathlineQuantity, SchemeRef};
use crate::boundary::BoundaryClosure;
use crate::eos::EosKind;
use crate::mesh::MeshSpec;
use crate::profiles::{reference_state, SmoothRandom};
use crate::schemes::infinite_sigma::{InfSigmaVariant, InfiniteSigma};
use crate::state::{init_state, PhysicsParams};
use crate::Result;

/// Largest pathline drift of the discrete entropy of `eos` over a smooth
/// Mod1 run. The run itself uses `eos` as its state equation.
pub fn entropy_drift(eos: EosKind, steps: usize) -> Result<f64> {
    let mesh = MeshSpec::new(1.0, 24, 0.005)?;
    let gamma = eos.gamma();
    let phys = PhysicsParams { gamma, kappa: 1.0, h0: 0.5 };
    let mut s = InfiniteSigma::new(InfSigmaVariant::Mod1 { eos }, phys, BoundaryClosure::walls(), mesh.h);
    s.tol = 1e-12;
    let prof = SmoothRandom::new(21, reference_state(true), mesh.total_mass, 0.1);
    let mut l = init_state(&mesh, &phys, &prof)?;
    let n = l.cells();
    (l.u[0], l.u[n]) = (0.0, 0.0);
    l.align_transverse(mesh.h, phys.h0, 0.0, 0.0);
    let hist = crate::runner::history(&crate::config::Built::Infinite(s.clone()), l, steps, mesh.tau)?;
    // measure with the entropy-preserving form of the same gamma
    let probe = match eos {
        EosKind::Continuum { gamma } if (gamma - 5.0 / 3.0).abs() < 1e-12 => EosKind::Entropy53,
        EosKind::Continuum { gamma } => EosKind::EntropyInteger { gamma: gamma.round() as u32 },
        e => e,
    };
    let mut m = s.clone();
    m.variant = InfSigmaVariant::Mod1 { eos: probe };
    let d = pathline_invariants(&hist, PathlineQuantity::Entropy, SchemeRef::Infinite(&m))?;
    Ok(d.form("discrete").map_or(f64::NAN, |v| v.iter().fold(0.0, |a: f64, x| a.max(*x))))
}

pub fn entropy_suite(tol: f64, steps: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("entropy");
    let kinds = [
        EosKind::EntropyInteger { gamma: 2 },
        EosKind::EntropyInteger { gamma: 3 },
        EosKind::EntropyInteger { gamma: 4 },
        EosKind::Entropy53,
    ];
    for eos in kinds {
        rep.push(format!("{eos:?}"), "pathline entropy drift", entropy_drift(eos, steps)?, Bound::AtMost(100.0 * tol));
        let cont = EosKind::Continuum { gamma: eos.gamma() };
        rep.push(format!("{cont:?}"), "pathline entropy drift", entropy_drift(cont, steps)?, Bound::AtLeast(1e-5));
    }
    Ok(rep)
}
