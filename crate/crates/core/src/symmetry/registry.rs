use serde::{Deserialize, Serialize};

use super::{Action, Axis, SlotFn, SymmetryGenerator, Weights};

/// Scheme and parameter regime whose generator list is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    OneComponentSigmaRho,
    OneComponentConstSigma,
    ExtendedH0ZeroSigmaRho,
    ExtendedH0ZeroConstSigma,
    ExtendedH0NonZero,
    /// `beta1 != beta2`.
    ExtendedH0NonZeroSplitBeta,
    IdealIsentropicH0NonZero,
    IdealIsentropicH0Zero,
}

impl Regime {
    pub const ALL: [Regime; 8] = [
        Regime::OneComponentSigmaRho,
        Regime::OneComponentConstSigma,
        Regime::ExtendedH0ZeroSigmaRho,
        Regime::ExtendedH0ZeroConstSigma,
        Regime::ExtendedH0NonZero,
        Regime::ExtendedH0NonZeroSplitBeta,
        Regime::IdealIsentropicH0NonZero,
        Regime::IdealIsentropicH0Zero,
    ];

    pub fn h0_zero(self) -> bool {
        matches!(
            self,
            Regime::OneComponentSigmaRho
                | Regime::OneComponentConstSigma
                | Regime::ExtendedH0ZeroSigmaRho
                | Regime::ExtendedH0ZeroConstSigma
                | Regime::IdealIsentropicH0Zero
        )
    }
}

/// What the scheme is expected to do under a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Admitted,
    Excluded,
    /// Alternative weights kept for the record; the outcome is not asserted.
    Reported,
}

const fn gen(name: &'static str, action: Action) -> SymmetryGenerator {
    SymmetryGenerator { name, action }
}

const W0: Weights = Weights { t: 0.0, s: 0.0, x: 0.0, yz: 0.0, u: 0.0, vw: 0.0, rho: 0.0, p: 0.0, h: 0.0, e: 0.0 };

fn kern0() -> Vec<SymmetryGenerator> {
    vec![
        gen("X1", Action::TimeShift),
        gen("X2", Action::MassShift),
        gen("X3", Action::ShiftX),
        gen("X4", Action::BoostX),
    ]
}

fn slots(name: &'static str, f: impl Fn(SlotFn) -> Action) -> Vec<SymmetryGenerator> {
    SlotFn::BASIS.iter().map(|&q| gen(name, f(q))).collect()
}

fn mark(list: Vec<SymmetryGenerator>, e: Expectation) -> Vec<(SymmetryGenerator, Expectation)> {
    list.into_iter().map(|g| (g, e)).collect()
}

/// Generators checked in a regime with their expected outcome. Slot
/// functions are expanded over `{1, s, sin s}`.
pub fn generators(r: Regime) -> Vec<(SymmetryGenerator, Expectation)> {
    let rot_eh = gen("X5", Action::Rotate { kinematic: false, q: SlotFn::One });
    let rot_full = gen("X5", Action::Rotate { kinematic: true, q: SlotFn::One });
    let stretch = Weights { s: 1.0, x: -1.0, u: -1.0, rho: 2.0, e: -1.0, ..W0 };
    let one_x5 = gen("X5", Action::Scale(stretch));
    let one_x6 =
        gen("X6", Action::Scale(Weights { t: 2.0, s: 2.0, u: -2.0, p: -2.0, rho: 2.0, e: -3.0, h: -1.0, ..W0 }));
    let one_x6_alt =
        gen("X6 alt", Action::Scale(Weights { t: 2.0, s: 2.0, u: -2.0, p: 2.0, rho: 2.0, e: -3.0, h: -1.0, ..W0 }));
    let x1a = gen("X1a", Action::Scale(stretch));
    let x2a = gen("X2a", Action::Scale(Weights { t: 2.0, x: 2.0, p: -2.0, rho: -2.0, e: -1.0, h: -1.0, ..W0 }));
    let transverse = || {
        let mut v = vec![
            gen("X6", Action::BoostTransverse { axis: Axis::Y }),
            gen("X7", Action::BoostTransverse { axis: Axis::Z }),
        ];
        v.extend(slots("X8", |q| Action::ShiftTransverse { axis: Axis::Y, q }));
        v.extend(slots("X9", |q| Action::ShiftTransverse { axis: Axis::Z, q }));
        v
    };
    use Expectation::*;
    let mut out = mark(kern0(), Admitted);
    match r {
        Regime::OneComponentSigmaRho => {
            out.extend(mark(vec![one_x5, one_x6], Admitted));
            out.push((one_x6_alt, Reported));
        }
        Regime::OneComponentConstSigma => out.extend(mark(vec![one_x5, one_x6], Excluded)),
        Regime::ExtendedH0ZeroSigmaRho => out.extend(mark(vec![rot_eh, x1a, x2a], Admitted)),
        Regime::ExtendedH0ZeroConstSigma => {
            out.push((rot_eh, Admitted));
            out.extend(mark(vec![x1a, x2a], Excluded));
        }
        Regime::ExtendedH0NonZero => {
            out.push((rot_full, Admitted));
            out.extend(mark(transverse(), Admitted));
        }
        Regime::ExtendedH0NonZeroSplitBeta => {
            out.push((rot_full, Excluded));
            out.extend(mark(transverse(), Admitted));
        }
        Regime::IdealIsentropicH0NonZero => {
            out.push((rot_full, Admitted));
            let x6 = Weights { t: 1.0, s: 2.0, u: -1.0, vw: -1.0, rho: 2.0, ..W0 };
            let x7 = Weights { s: -1.0, x: 1.0, yz: 1.0, u: 1.0, vw: 1.0, rho: -2.0, ..W0 };
            let mut v = vec![gen("X6", Action::Scale(x6)), gen("X7", Action::Scale(x7))];
            v.extend(slots("X8", |q| Action::ShiftTransverse { axis: Axis::Y, q }));
            v.extend(slots("X9", |q| Action::ShiftTransverse { axis: Axis::Z, q }));
            v.push(gen("X10", Action::BoostTransverse { axis: Axis::Y }));
            v.push(gen("X11", Action::BoostTransverse { axis: Axis::Z }));
            out.extend(mark(v, Admitted));
        }
        Regime::IdealIsentropicH0Zero => {
            let mut v = slots("X5", |q| Action::Rotate { kinematic: false, q });
            v.push(gen("X6", Action::Scale(Weights { t: 1.0, s: 2.0, u: -1.0, rho: 2.0, ..W0 })));
            v.push(gen("X7", Action::Scale(Weights { s: -1.0, x: 1.0, u: 1.0, rho: -2.0, ..W0 })));
            v.push(gen("X8", Action::Scale(Weights { s: 2.0, rho: 2.0, p: 2.0, h: 1.0, ..W0 })));
            out.extend(mark(v, Admitted));
            out.push((gen("X8 alt", Action::Scale(Weights { s: 2.0, rho: 2.0, p: 1.0, h: 1.0, ..W0 })), Reported));
            let mut v = slots("X9", |q| Action::MagneticPressure { axis: Axis::Y, q });
            v.extend(slots("X10", |q| Action::MagneticPressure { axis: Axis::Z, q }));
            out.extend(mark(v, Excluded));
        }
    }
    out
}
