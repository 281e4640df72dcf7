//! Discrete conservation laws as data, evaluated as pointwise divergence
//! residuals `D_t + F_s` and as global budgets.

mod finite;
mod infinite;
mod pathline;
mod report;

pub use pathline::{pathline_invariants, PathlineDrift, PathlineQuantity};
pub use report::{ConservationReport, LawResult};

use crate::boundary::BoundaryClosure;
use crate::eos::ConductivityModel;
use crate::schemes::finite_sigma::FiniteSigma;
use crate::schemes::infinite_sigma::{InfSigmaVariant, InfiniteSigma};
use crate::state::{StateLayer, TimeWindow};
use crate::{Error, Result};

/// The scheme (and regime) whose solutions are audited.
#[derive(Debug, Clone, Copy)]
pub enum SchemeRef<'a> {
    OneComponent(&'a FiniteSigma),
    Extended(&'a FiniteSigma),
    Infinite(&'a InfiniteSigma),
}

impl<'a> SchemeRef<'a> {
    pub fn name(&self) -> String {
        match self {
            SchemeRef::OneComponent(_) => "finite_sigma/one_component".into(),
            SchemeRef::Extended(_) => "finite_sigma/extended".into(),
            SchemeRef::Infinite(s) => match s.variant {
                InfSigmaVariant::Mod0 => "infinite_sigma/mod0".into(),
                InfSigmaVariant::Mod1 { .. } => "infinite_sigma/mod1".into(),
                InfSigmaVariant::Mod2 { .. } => "infinite_sigma/mod2".into(),
            },
        }
    }

    fn h(&self) -> f64 {
        match self {
            SchemeRef::OneComponent(s) | SchemeRef::Extended(s) => s.h,
            SchemeRef::Infinite(s) => s.h,
        }
    }

    fn bc(&self) -> &'a BoundaryClosure {
        match self {
            SchemeRef::OneComponent(s) | SchemeRef::Extended(s) => &s.bc,
            SchemeRef::Infinite(s) => &s.bc,
        }
    }

    fn h0(&self) -> f64 {
        match self {
            SchemeRef::OneComponent(s) | SchemeRef::Extended(s) => s.phys.h0,
            SchemeRef::Infinite(s) => s.phys.h0,
        }
    }

    pub(crate) fn finite(&self, law: &str) -> Result<&'a FiniteSigma> {
        match self {
            SchemeRef::OneComponent(s) | SchemeRef::Extended(s) => Ok(s),
            _ => Err(self.mismatch(law)),
        }
    }

    pub(crate) fn infinite(&self, law: &str) -> Result<&'a InfiniteSigma> {
        match self {
            SchemeRef::Infinite(s) => Ok(s),
            _ => Err(self.mismatch(law)),
        }
    }

    fn mismatch(&self, law: &str) -> Error {
        Error::LawMismatch { law: law.into(), scheme: self.name() }
    }
}

/// Where the density of a law lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Density per cell, flux per node.
    Cell,
    /// Density per node, flux per padded cell (`-1..=M`).
    Node,
}

/// Condition under which a law is expected to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    SigmaIsRho,
    H0Zero,
    H0NonZero,
    EntropyPreserving,
    /// The law belongs to the modified scheme and is only reported for Mod0.
    NotMod0,
}

impl Predicate {
    pub fn holds(&self, s: SchemeRef<'_>) -> bool {
        match self {
            Predicate::SigmaIsRho => match s {
                SchemeRef::OneComponent(f) | SchemeRef::Extended(f) => f.sigma == ConductivityModel::PowerDensity,
                SchemeRef::Infinite(_) => false,
            },
            Predicate::H0Zero => s.h0() == 0.0,
            Predicate::H0NonZero => s.h0() != 0.0,
            Predicate::EntropyPreserving => matches!(s, SchemeRef::Infinite(i) if i.is_entropy_preserving()),
            Predicate::NotMod0 => !matches!(s, SchemeRef::Infinite(i) if i.variant == InfSigmaVariant::Mod0),
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Predicate::SigmaIsRho => "requires sigma = rho",
            Predicate::H0Zero => "requires H0 = 0",
            Predicate::H0NonZero => "requires H0 != 0",
            Predicate::EntropyPreserving => "requires an entropy-preserving state equation",
            Predicate::NotMod0 => "not a law of the averaged scheme",
        }
    }
}

/// Node equations a law relies on; a Dirichlet value at an end node
/// removes that node from the audited range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pin {
    U,
    V,
    W,
}

/// Densities on both layers and the flux of one law.
#[derive(Debug, Clone)]
pub struct LawValues {
    pub d0: Vec<f64>,
    pub d1: Vec<f64>,
    /// One more entry than the densities.
    pub flux: Vec<f64>,
    /// Inclusive location range where the law is claimed.
    pub lo: usize,
    pub hi: usize,
}

impl LawValues {
    fn full(d0: Vec<f64>, d1: Vec<f64>, flux: Vec<f64>) -> Self {
        let hi = d0.len() - 1;
        Self { d0, d1, flux, lo: 0, hi }
    }

    /// `D_t + F_s` at each location of the range.
    pub fn residuals(&self, tau: f64, h: f64) -> Vec<f64> {
        (self.lo..=self.hi)
            .map(|i| (self.d1[i] - self.d0[i]) / tau + (self.flux[i + 1] - self.flux[i]) / h)
            .collect()
    }

    /// Change of the discrete integral plus the boundary flux over the step,
    /// and the magnitude it is measured against.
    pub fn budget(&self, tau: f64, h: f64) -> (f64, f64) {
        let r = self.lo..=self.hi;
        let sum = |d: &[f64]| d[r.clone()].iter().sum::<f64>() * h;
        let abs = |d: &[f64]| d[r.clone()].iter().map(|x| x.abs()).sum::<f64>() * h;
        let (fl, fh) = (self.flux[self.lo], self.flux[self.hi + 1]);
        let drift = sum(&self.d1) - sum(&self.d0) + tau * (fh - fl);
        let scale = abs(&self.d0).max(abs(&self.d1)) + tau * (fl.abs() + fh.abs());
        (drift, scale)
    }
}

type Eval = for<'a> fn(SchemeRef<'a>, &TimeWindow<'a>) -> Result<LawValues>;

/// One row of a conservation-law table.
#[derive(Clone)]
pub struct ConservationLaw {
    pub id: &'static str,
    pub name: &'static str,
    pub placement: Placement,
    /// Number of layers the law spans.
    pub span: usize,
    pub requires: &'static [Predicate],
    pub pins: &'static [Pin],
    pub eval: Eval,
}

impl std::fmt::Debug for ConservationLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConservationLaw").field("id", &self.id).field("name", &self.name).finish()
    }
}

impl ConservationLaw {
    /// Evaluate on a window, shrinking the range at pinned end nodes.
    pub fn values(&self, s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
        if self.span == 3 {
            win.prev()?;
        }
        win.next()?;
        let mut v = (self.eval)(s, win)?;
        if self.placement == Placement::Node {
            let bc = s.bc();
            let pinned = |side: &crate::boundary::Side| {
                self.pins.iter().any(|p| match p {
                    Pin::U => side.u.is_some(),
                    Pin::V => side.v.is_some(),
                    Pin::W => side.w.is_some(),
                })
            };
            let last = v.d0.len() - 1;
            if pinned(&bc.left) && v.lo == 0 {
                v.lo = 1;
            }
            if pinned(&bc.right) && v.hi == last {
                v.hi = last - 1;
            }
        }
        Ok(v)
    }

    pub fn failed_predicate(&self, s: SchemeRef<'_>) -> Option<Predicate> {
        self.requires.iter().copied().find(|p| !p.holds(s))
    }
}

/// Every law catalogued for the scheme.
pub fn catalogue(s: SchemeRef<'_>) -> Vec<ConservationLaw> {
    match s {
        SchemeRef::OneComponent(_) => finite::table1(),
        SchemeRef::Extended(_) => finite::table2(),
        SchemeRef::Infinite(i) => match i.variant {
            InfSigmaVariant::Mod2 { .. } => infinite::mod2_laws(),
            _ => infinite::table3(),
        },
    }
}

/// Audit one window against the full catalogue. Laws spanning three layers
/// are skipped when the window has no previous layer.
pub fn audit_step(win: &TimeWindow<'_>, s: SchemeRef<'_>) -> Result<ConservationReport> {
    win.validate()?;
    let (tau, h) = (win.tau, s.h());
    let mut rep = ConservationReport::new(s.name());
    for law in catalogue(s) {
        let mut r = LawResult::new(&law);
        if law.span == 3 && win.prev.is_none() {
            r.skipped = Some("needs three layers".into());
        } else {
            let v = law.values(s, win)?;
            r.max_residual = v.residuals(tau, h).iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let (drift, scale) = v.budget(tau, h);
            r.record_budget(drift, scale);
            r.steps = 1;
            if let Some(p) = law.failed_predicate(s) {
                r.applicable = false;
                r.skipped = Some(p.describe().into());
            }
        }
        rep.laws.push(r);
    }
    rep.steps = 1;
    Ok(rep)
}

/// Audit of a single law by id; errors if the scheme has no such law.
pub fn audit_law(id: &str, win: &TimeWindow<'_>, s: SchemeRef<'_>) -> Result<Vec<f64>> {
    let law = catalogue(s).into_iter().find(|l| l.id == id).ok_or_else(|| s.mismatch(id))?;
    Ok(law.values(s, win)?.residuals(win.tau, s.h()))
}


/// Run total over consecutive layers; from the second step on every window
/// carries the previous layer.
pub fn audit_history(hist: &[StateLayer], s: SchemeRef<'_>, tau: f64) -> Result<ConservationReport> {
    let mut total = ConservationReport::new(s.name());
    for n in 0..hist.len().saturating_sub(1) {
        let win = match n {
            0 => TimeWindow::two(&hist[0], &hist[1], tau),
            _ => TimeWindow::three(&hist[n - 1], &hist[n], &hist[n + 1], tau),
        };
        total.accumulate(&audit_step(&win, s)?);
    }
    Ok(total)
}
