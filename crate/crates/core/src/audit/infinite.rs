//! Laws of the infinite-conductivity schemes.

use super::{ConservationLaw, LawValues, Pin, Placement, Predicate, SchemeRef};
use crate::boundary::star_padded;
use crate::eos::{entropy_factor, eps_factor};
use crate::schemes::infinite_sigma::{InfFluxes, InfSigmaVariant, InfiniteSigma};
use crate::state::{StateLayer, TimeWindow};
use crate::Result;

struct Ctx<'a> {
    s: &'a InfiniteSigma,
    prev: Option<&'a StateLayer>,
    cur: &'a StateLayer,
    next: &'a StateLayer,
    fl: InfFluxes,
    tau: f64,
}

impl<'a> Ctx<'a> {
    fn new(s: SchemeRef<'a>, win: &TimeWindow<'a>, id: &str) -> Result<Self> {
        let s = s.infinite(id)?;
        let next = win.next()?;
        Ok(Self { s, prev: win.prev, cur: win.cur, next, fl: s.fluxes(win.cur, next), tau: win.tau })
    }

    fn n(&self) -> usize {
        self.cur.cells()
    }

    fn cells(&self, f: impl Fn(&StateLayer, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        ((0..n).map(|c| f(self.cur, c)).collect(), (0..n).map(|c| f(self.next, c)).collect())
    }

    fn nodes(&self, f: impl Fn(&StateLayer, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.n() + 1;
        ((0..n).map(|m| f(self.cur, m)).collect(), (0..n).map(|m| f(self.next, m)).collect())
    }

    fn kh0(&self) -> f64 {
        self.s.phys.kappa * self.s.phys.h0
    }

    fn variant(&self) -> InfSigmaVariant {
        self.s.variant
    }
}

fn neg(v: &[f64], k: f64) -> Vec<f64> {
    v.iter().map(|x| -k * x).collect()
}

fn mass(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "mass")?;
    let (d0, d1) = c.cells(|l, i| 1.0 / l.rho[i]);
    Ok(LawValues::full(d0, d1, neg(&c.fl.u_mass, 1.0)))
}

fn flux_y(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "flux_y")?;
    let (d0, d1) = c.cells(|l, i| l.hy[i] / l.rho[i]);
    Ok(LawValues::full(d0, d1, neg(&c.fl.vy, c.s.phys.h0)))
}

fn flux_z(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "flux_z")?;
    let (d0, d1) = c.cells(|l, i| l.hz[i] / l.rho[i]);
    Ok(LawValues::full(d0, d1, neg(&c.fl.vz, c.s.phys.h0)))
}

fn momentum_u(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_u")?;
    let (d0, d1) = c.nodes(|l, m| l.u[m]);
    Ok(LawValues::full(d0, d1, c.fl.g.clone()))
}

fn momentum_v(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_v")?;
    let (d0, d1) = c.nodes(|l, m| l.v[m]);
    Ok(LawValues::full(d0, d1, neg(&c.fl.ty, c.kh0())))
}

fn momentum_w(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_w")?;
    let (d0, d1) = c.nodes(|l, m| l.w[m]);
    Ok(LawValues::full(d0, d1, neg(&c.fl.tz, c.kh0())))
}

fn center_x(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_x")?;
    if let InfSigmaVariant::Mod2 { .. } = c.variant() {
        // (t u* - x)_t + (t^ [g]_*)_s with u* = (u + u_-)/2
        let (d0, d1) = c.nodes(|l, m| l.t * 0.5 * (l.u[m] + l.u[m.saturating_sub(1)]) - l.x[m]);
        let g = &c.fl.g;
        let tn = c.next.t;
        let flux = (0..g.len()).map(|j| tn * 0.5 * (g[j] + g[j.saturating_sub(1)])).collect();
        // u* at node 1 also carries the pinned node 0
        let lo = 1 + c.s.bc.left.u.is_some() as usize;
        return Ok(LawValues { lo, ..LawValues::full(d0, d1, flux) });
    }
    let (d0, d1) = c.nodes(|l, m| (l.t - 0.5 * c.tau) * l.u[m] - l.x[m]);
    let flux = c.fl.g.iter().map(|g| c.cur.t * g).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn center_transverse(c: &Ctx<'_>, vel: fn(&StateLayer) -> &[f64], pos: fn(&StateLayer) -> &[f64], t: &[f64]) -> LawValues {
    let n = c.n();
    match c.variant() {
        InfSigmaVariant::Mod0 => {
            let (d0, d1) = c.nodes(|l, m| (l.t - 0.5 * c.tau) * vel(l)[m] - pos(l)[m]);
            LawValues::full(d0, d1, neg(t, c.cur.t * c.kh0()))
        }
        InfSigmaVariant::Mod1 { .. } => {
            let (d0, d1) = c.nodes(|l, m| l.t * vel(l)[m] - pos(l)[m]);
            LawValues::full(d0, d1, neg(t, c.next.t * c.kh0()))
        }
        InfSigmaVariant::Mod2 { .. } => {
            // (t v - y_+)_t; node M has no right neighbour
            let (d0, d1) = c.nodes(|l, m| l.t * vel(l)[m] - if m < n { pos(l)[m + 1] } else { 0.0 });
            LawValues { hi: n - 1, ..LawValues::full(d0, d1, neg(t, c.next.t * c.kh0())) }
        }
    }
}

fn center_y(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_y")?;
    Ok(center_transverse(&c, |l| &l.v, |l| &l.y, &c.fl.ty))
}

fn center_z(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_z")?;
    Ok(center_transverse(&c, |l| &l.w, |l| &l.z, &c.fl.tz))
}

fn kinetic(l: &StateLayer, c: usize) -> f64 {
    let sq = |m: usize| l.u[m] * l.u[m] + l.v[m] * l.v[m] + l.w[m] * l.w[m];
    0.25 * (sq(c) + sq(c + 1))
}

/// Energy. The averaged scheme has the two-layer form; the modified scheme
/// the three-layer form with checked internal and kinetic energy.
fn energy(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "energy")?;
    let (k, a) = (c.s.phys.kappa, c.s.alpha);
    if c.variant() == InfSigmaVariant::Mod0 {
        let fl = &c.fl;
        let g = star_padded(&fl.g);
        let (ty, tz) = (star_padded(&fl.ty), star_padded(&fl.tz));
        let mag = |l: &StateLayer, i: usize| 0.5 * k * (l.hy[i] * l.hy[i] + l.hz[i] * l.hz[i]) / l.rho[i];
        let (d0, d1) = c.cells(|l, i| l.eps[i] + kinetic(l, i) + mag(l, i));
        let flux = (0..=c.n())
            .map(|m| g[m] * fl.u_mass[m] - c.kh0() * (fl.vy[m] * ty[m] + fl.vz[m] * tz[m]))
            .collect();
        return Ok(LawValues::full(d0, d1, flux));
    }
    let prev = c.prev.expect("three-layer law");
    let eos = c.s.eos();
    let dens = |p: &StateLayer, q: &StateLayer, i: usize| {
        let eps = if eos.is_entropy_preserving() {
            (a * q.p[i] + (1.0 - a) * p.p[i]) * eps_factor(p.rho[i], q.rho[i], eos)
        } else {
            p.eps[i]
        };
        eps + kinetic(p, i) + 0.5 * k * (q.hy[i] * p.hy[i] + q.hz[i] * p.hz[i]) / q.rho[i]
    };
    let n = c.n();
    let d0 = (0..n).map(|i| dens(prev, c.cur, i)).collect();
    let d1 = (0..n).map(|i| dens(c.cur, c.next, i)).collect();
    let old = c.s.fluxes(prev, c.cur);
    let g = star_padded(&old.g);
    let (hy, hz) = (star_padded(&old.hyn), star_padded(&old.hzn));
    let flux = (0..=n)
        .map(|m| {
            let (v, w) = (0.5 * (prev.v[m] + c.cur.v[m]), 0.5 * (prev.w[m] + c.cur.w[m]));
            g[m] * old.u_mass[m] - c.kh0() * (v * hy[m] + w * hz[m])
        })
        .collect();
    Ok(LawValues::full(d0, d1, flux))
}

/// `(z v - y w)_t + (kappa H0 (y^ H^z_- - z^ H^y_-))_s`; Mod2 pairs
/// `z` with `v_-`.
fn angular(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "angular")?;
    let n = c.n();
    let mod2 = matches!(c.variant(), InfSigmaVariant::Mod2 { .. });
    let sh = |m: usize| if mod2 { m.saturating_sub(1) } else { m };
    let (d0, d1) = c.nodes(|l, m| l.z[m] * l.v[sh(m)] - l.y[m] * l.w[sh(m)]);
    let (nx, fl) = (c.next, &c.fl);
    let mut flux: Vec<f64> = (0..=n).map(|j| c.kh0() * (nx.y[j] * fl.hzn[j] - nx.z[j] * fl.hyn[j])).collect();
    flux.push(flux[n]);
    Ok(LawValues { lo: mod2 as usize, hi: n - 1, ..LawValues::full(d0, d1, flux) })
}

fn entropy(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "entropy")?;
    let prev = c.prev.expect("three-layer law");
    let (a, eos) = (c.s.alpha, c.s.eos());
    let ent = |p: &StateLayer, q: &StateLayer, i: usize| {
        (a * q.p[i] + (1.0 - a) * p.p[i]) * entropy_factor(q.rho[i], p.rho[i], eos)
    };
    let n = c.n();
    let d0 = (0..n).map(|i| ent(prev, c.cur, i)).collect();
    let d1 = (0..n).map(|i| ent(c.cur, c.next, i)).collect();
    Ok(LawValues::full(d0, d1, vec![0.0; n + 1]))
}

fn mod2_s1(s: &InfiniteSigma) -> f64 {
    match s.variant {
        InfSigmaVariant::Mod2 { s1 } => s1,
        _ => 0.0,
    }
}

/// `rho^_*` at nodes with copied end cells.
fn rho_star(l: &StateLayer) -> Vec<f64> {
    let n = l.cells();
    (0..=n).map(|j| 0.5 * (l.rho[j.saturating_sub(1)] + l.rho[j.min(n - 1)])).collect()
}

/// Analogue of the `d/ds` law for `H0 != 0`, three layers.
fn shift_law_h0(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "shift_h0")?;
    let prev = c.prev.expect("three-layer law");
    let (h0, s1, n) = (c.s.phys.h0, mod2_s1(c.s), c.n());
    let star = |v: &[f64], i: usize| 0.5 * (v[i] + v[i.saturating_sub(1)]);
    let dens = |p: &StateLayer, q: &StateLayer, i: usize| {
        p.u[i] / p.rho[i] + (star(&p.v, i) * q.hy[i] + star(&p.w, i) * q.hz[i]) / (h0 * q.rho[i])
    };
    let d0 = (0..n).map(|i| dens(prev, c.cur, i)).collect();
    let d1 = (0..n).map(|i| dens(c.cur, c.next, i)).collect();
    let rs = rho_star(c.cur);
    let flux = (0..=n)
        .map(|j| {
            let b = j.saturating_sub(1);
            let (v, w) = (c.cur.v[b], c.cur.w[b]);
            2.0 * rs[j] * s1 - 0.5 * (prev.u[j] * prev.u[b] + v * v + w * w)
        })
        .collect();
    Ok(LawValues { lo: 1, hi: n - 1, ..LawValues::full(d0, d1, flux) })
}

/// Analogue of the `d/ds` law for `H0 = 0` with uniform `B1`.
fn shift_law(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "shift")?;
    let (k, s1, n) = (c.s.phys.kappa, mod2_s1(c.s), c.n());
    let (d0, d1) = c.cells(|l, i| l.u[i] / l.rho[i]);
    let nx = c.next;
    let rs = rho_star(nx);
    let (hy, hz) = (&c.fl.hyn, &c.fl.hzn);
    let flux = (0..=n)
        .map(|j| {
            let b = j.saturating_sub(1);
            // B1 of the cell pair (j-1, j), padded indices j and j+1
            let rl = nx.rho[b];
            let rr = nx.rho[j.min(n - 1)];
            let b1 = (hy[j] * hy[j + 1] + hz[j] * hz[j + 1]) / (rl * rr);
            rs[j] * (2.0 * s1 + k * b1) - 0.5 * c.cur.u[j] * c.cur.u[b]
        })
        .collect();
    Ok(LawValues { lo: 1, hi: n - 1, ..LawValues::full(d0, d1, flux) })
}

fn law(
    id: &'static str,
    name: &'static str,
    placement: Placement,
    span: usize,
    requires: &'static [Predicate],
    pins: &'static [Pin],
    eval: super::Eval,
) -> ConservationLaw {
    ConservationLaw { id, name, placement, span, requires, pins, eval }
}

use Placement::{Cell, Node};

pub(super) fn table3() -> Vec<ConservationLaw> {
    vec![
        law("T3.1", "mass", Cell, 2, &[], &[], mass),
        law("T3.2", "magnetic flux y", Cell, 2, &[], &[], flux_y),
        law("T3.3", "magnetic flux z", Cell, 2, &[], &[], flux_z),
        law("T3.4", "momentum x", Node, 2, &[], &[Pin::U], momentum_u),
        law("T3.5", "momentum y", Node, 2, &[], &[Pin::V], momentum_v),
        law("T3.6", "momentum z", Node, 2, &[], &[Pin::W], momentum_w),
        law("T3.7", "center of mass x", Node, 2, &[], &[Pin::U], center_x),
        law("T3.8", "center of mass y", Node, 2, &[], &[Pin::V], center_y),
        law("T3.9", "center of mass z", Node, 2, &[], &[Pin::W], center_z),
        law("T3.10", "energy", Cell, 3, &[], &[], energy),
        law("T3.11", "angular momentum", Node, 2, &[Predicate::NotMod0], &[Pin::V, Pin::W], angular),
        law("T3.12", "entropy", Cell, 3, &[Predicate::EntropyPreserving], &[], entropy),
    ]
}

pub(super) fn mod2_laws() -> Vec<ConservationLaw> {
    vec![
        law("M2.1", "mass", Cell, 2, &[], &[], mass),
        law("M2.2", "magnetic flux y", Cell, 2, &[], &[], flux_y),
        law("M2.3", "magnetic flux z", Cell, 2, &[], &[], flux_z),
        law("M2.4", "momentum x", Node, 2, &[], &[Pin::U], momentum_u),
        law("M2.5", "momentum y", Node, 2, &[], &[Pin::V], momentum_v),
        law("M2.6", "momentum z", Node, 2, &[], &[Pin::W], momentum_w),
        law("M2.7", "angular momentum", Node, 2, &[], &[Pin::V, Pin::W], angular),
        law("M2.8", "center of mass x", Node, 2, &[], &[Pin::U], center_x),
        law("M2.9", "center of mass y", Node, 2, &[], &[Pin::V], center_y),
        law("M2.10", "center of mass z", Node, 2, &[], &[Pin::W], center_z),
        law("M2.11", "mass shift (H0 != 0)", Cell, 3, &[Predicate::H0NonZero], &[], shift_law_h0),
        law("M2.12", "mass shift (H0 = 0)", Cell, 2, &[Predicate::H0Zero], &[], shift_law),
    ]
}
