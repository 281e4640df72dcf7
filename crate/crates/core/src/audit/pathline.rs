//! Quantities carried unchanged along pathlines.

use serde::{Deserialize, Serialize};

use super::{Predicate, SchemeRef};
use crate::eos::{entropy_factor, EosKind};
use crate::schemes::infinite_sigma::InfSigmaVariant;
use crate::state::StateLayer;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathlineQuantity {
    /// Discrete entropy of the state equation in use.
    Entropy,
    /// `(Hy^2 + Hz^2)/rho^2`, needs `H0 = 0`.
    B0,
    /// `p/rho^2 + B0/2`, needs `H0 = 0` and `gamma = 2`.
    A0,
    /// `H/rho`, `v`, `w`, `y - t v`, `z - t w`, needs `H0 = 0`.
    RemarkFamily,
    /// `(Hy_+ Hy + Hz_+ Hz)/(rho rho_+)` of the extended-stencil scheme.
    B1,
    /// `p_check/(rho rho_+) + kappa B1/2` of the extended-stencil scheme.
    S1B1,
}

/// Largest deviation from the initial value, per location, for each
/// discrete form of the quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathlineDrift {
    pub quantity: PathlineQuantity,
    pub forms: Vec<(String, Vec<f64>)>,
    pub skipped: Option<String>,
}

impl PathlineDrift {
    pub fn max(&self) -> f64 {
        self.forms.iter().flat_map(|f| f.1.iter()).fold(0.0f64, |a, x| a.max(*x))
    }

    pub fn form(&self, name: &str) -> Option<&[f64]> {
        self.forms.iter().find(|f| f.0 == name).map(|f| f.1.as_slice())
    }
}

/// Per-location drift of a sequence of values.
fn drift(series: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = series.first() else { return Vec::new() };
    (0..first.len())
        .map(|i| series.iter().map(|s| (s[i] - first[i]).abs()).fold(0.0, f64::max))
        .collect()
}

fn per_layer(history: &[StateLayer], f: impl Fn(&StateLayer) -> Vec<f64>) -> Vec<f64> {
    drift(&history.iter().map(f).collect::<Vec<_>>())
}

fn per_pair(history: &[StateLayer], f: impl Fn(&StateLayer, &StateLayer) -> Vec<f64>) -> Vec<f64> {
    drift(&history.windows(2).map(|w| f(&w[0], &w[1])).collect::<Vec<_>>())
}

fn params(s: SchemeRef<'_>) -> (f64, f64, f64, EosKind) {
    match s {
        SchemeRef::OneComponent(f) | SchemeRef::Extended(f) => {
            (f.params.alpha, f.phys.gamma, f.phys.kappa, EosKind::Continuum { gamma: f.phys.gamma })
        }
        SchemeRef::Infinite(i) => (i.alpha, i.phys.gamma, i.phys.kappa, i.eos()),
    }
}

fn b0(l: &StateLayer, c: usize) -> f64 {
    (l.hy[c] * l.hy[c] + l.hz[c] * l.hz[c]) / (l.rho[c] * l.rho[c])
}

fn b0_checked(p: &StateLayer, l: &StateLayer, c: usize) -> f64 {
    (l.hy[c] * p.hy[c] + l.hz[c] * p.hz[c]) / (l.rho[c] * p.rho[c])
}

fn b1(l: &StateLayer, c: usize) -> f64 {
    let r = (c + 1).min(l.cells() - 1);
    (l.hy[r] * l.hy[c] + l.hz[r] * l.hz[c]) / (l.rho[c] * l.rho[r])
}

/// Drift of a pathline invariant over a run history (consecutive layers).
pub fn pathline_invariants(history: &[StateLayer], which: PathlineQuantity, s: SchemeRef<'_>) -> Result<PathlineDrift> {
    if history.len() < 2 {
        return Err(Error::MissingLayer("history needs two layers"));
    }
    let (alpha, gamma, kappa, eos) = params(s);
    let mod2 = matches!(s, SchemeRef::Infinite(i) if matches!(i.variant, InfSigmaVariant::Mod2 { .. }));
    let needs: &[Predicate] = match which {
        PathlineQuantity::Entropy => &[],
        _ => &[Predicate::H0Zero],
    };
    let mut out = PathlineDrift { quantity: which, forms: Vec::new(), skipped: None };
    if let Some(p) = needs.iter().find(|p| !p.holds(s)) {
        out.skipped = Some(p.describe().into());
        return Ok(out);
    }
    let cells = |l: &StateLayer, f: &dyn Fn(&StateLayer, usize) -> f64| (0..l.cells()).map(|c| f(l, c)).collect::<Vec<_>>();
    let p_alpha = |p: &StateLayer, l: &StateLayer, c: usize| alpha * l.p[c] + (1.0 - alpha) * p.p[c];
    match which {
        PathlineQuantity::Entropy => {
            if mod2 {
                let f = per_layer(history, |l| cells(l, &|l, c| l.p[c] / (l.rho[c] * l.rho[(c + 1).min(l.cells() - 1)])));
                out.forms.push(("p/(rho rho_+)".into(), f));
            } else {
                let f = per_pair(history, |p, l| {
                    (0..l.cells()).map(|c| p_alpha(p, l, c) * entropy_factor(l.rho[c], p.rho[c], eos)).collect()
                });
                out.forms.push(("discrete".into(), f));
                let f = per_layer(history, |l| cells(l, &|l, c| l.p[c] / l.rho[c].powf(gamma)));
                out.forms.push(("p/rho^gamma".into(), f));
            }
        }
        PathlineQuantity::B0 => {
            out.forms.push(("plain".into(), per_layer(history, |l| cells(l, &b0))));
            let f = per_pair(history, |p, l| (0..l.cells()).map(|c| b0_checked(p, l, c)).collect());
            out.forms.push(("checked".into(), f));
        }
        PathlineQuantity::A0 => {
            if gamma != 2.0 {
                out.skipped = Some("requires gamma = 2".into());
                return Ok(out);
            }
            let ent = |p: &StateLayer, l: &StateLayer, c: usize| p_alpha(p, l, c) / (p.rho[c] * l.rho[c]);
            let f = per_pair(history, |p, l| (0..l.cells()).map(|c| ent(p, l, c) + 0.5 * kappa * b0(l, c)).collect());
            out.forms.push(("plain".into(), f));
            let f = per_pair(history, |p, l| {
                (0..l.cells()).map(|c| ent(p, l, c) + 0.5 * kappa * b0_checked(p, l, c)).collect()
            });
            out.forms.push(("checked".into(), f));
        }
        PathlineQuantity::RemarkFamily => {
            let nodes = |l: &StateLayer, f: &dyn Fn(&StateLayer, usize) -> f64| (0..l.nodes()).map(|m| f(l, m)).collect::<Vec<_>>();
            out.forms.push(("Hy/rho".into(), per_layer(history, |l| cells(l, &|l, c| l.hy[c] / l.rho[c]))));
            out.forms.push(("Hz/rho".into(), per_layer(history, |l| cells(l, &|l, c| l.hz[c] / l.rho[c]))));
            out.forms.push(("v".into(), per_layer(history, |l| l.v.clone())));
            out.forms.push(("w".into(), per_layer(history, |l| l.w.clone())));
            out.forms.push(("y-tv".into(), per_layer(history, |l| nodes(l, &|l, m| l.y[m] - l.t * l.v[m]))));
            out.forms.push(("z-tw".into(), per_layer(history, |l| nodes(l, &|l, m| l.z[m] - l.t * l.w[m]))));
        }
        PathlineQuantity::B1 | PathlineQuantity::S1B1 => {
            if !mod2 {
                out.skipped = Some("defined for the extended-stencil scheme".into());
                return Ok(out);
            }
            let f = if which == PathlineQuantity::B1 {
                per_layer(history, |l| cells(l, &b1))
            } else {
                per_layer(history, |l| {
                    cells(l, &|l, c| l.p[c] / (l.rho[c] * l.rho[(c + 1).min(l.cells() - 1)]) + 0.5 * kappa * b1(l, c))
                })
            };
            out.forms.push(("plain".into(), f));
        }
    }
    Ok(out)
}
