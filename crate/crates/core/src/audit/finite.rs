//! Laws of the finite-conductivity scheme, one-component and extended.

use super::{ConservationLaw, LawValues, Pin, Placement, Predicate, SchemeRef};
use crate::boundary::star_padded;
use crate::schemes::finite_sigma::{FiniteSigma, Fluxes, Ghosted};
use crate::state::{StateLayer, TimeWindow};
use crate::Result;

struct Ctx<'a> {
    s: &'a FiniteSigma,
    cur: &'a StateLayer,
    next: &'a StateLayer,
    gc: Ghosted,
    gn: Ghosted,
    fl: Fluxes,
    tau: f64,
}

impl<'a> Ctx<'a> {
    fn new(s: SchemeRef<'a>, win: &TimeWindow<'a>, id: &str) -> Result<Self> {
        let s = s.finite(id)?;
        let (cur, next) = (win.cur, win.next()?);
        let gc = Ghosted::new(cur, s);
        let gn = Ghosted::new(next, s);
        let fl = Fluxes::new(cur, next, &gc, &gn, s);
        Ok(Self { s, cur, next, gc, gn, fl, tau: win.tau })
    }

    fn cells(&self, f: impl Fn(&StateLayer, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.cur.cells();
        ((0..n).map(|c| f(self.cur, c)).collect(), (0..n).map(|c| f(self.next, c)).collect())
    }

    fn nodes(&self, f: impl Fn(&StateLayer, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.cur.nodes();
        ((0..n).map(|m| f(self.cur, m)).collect(), (0..n).map(|m| f(self.next, m)).collect())
    }

    /// Half-sum time coefficient `(t + t_check)/2` of a layer.
    fn tmid(&self, l: &StateLayer) -> f64 {
        l.t - 0.5 * self.tau
    }

    fn kh0(&self) -> f64 {
        self.s.phys.kappa * self.s.phys.h0
    }
}

fn mass(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "mass")?;
    let (d0, d1) = c.cells(|l, i| 1.0 / l.rho[i]);
    let flux = c.fl.u_half.iter().map(|u| -u).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn flux_y(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "flux_y")?;
    let h0 = c.s.phys.h0;
    let (d0, d1) = c.cells(|l, i| l.hy[i] / l.rho[i]);
    let flux = (0..c.cur.nodes()).map(|m| -(c.fl.ez_beta[m] + h0 * c.fl.v_half[m])).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn flux_z(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "flux_z")?;
    let h0 = c.s.phys.h0;
    let (d0, d1) = c.cells(|l, i| l.hz[i] / l.rho[i]);
    let flux = (0..c.cur.nodes()).map(|m| c.fl.ey_beta[m] - h0 * c.fl.w_half[m]).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn momentum_u(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_u")?;
    let (d0, d1) = c.nodes(|l, m| l.u[m]);
    Ok(LawValues::full(d0, d1, c.fl.g.clone()))
}

fn momentum_v(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_v")?;
    let (d0, d1) = c.nodes(|l, m| l.v[m]);
    let flux = c.fl.hy_half.iter().map(|x| -c.kh0() * x).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn momentum_w(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "momentum_w")?;
    let (d0, d1) = c.nodes(|l, m| l.w[m]);
    let flux = c.fl.hz_half.iter().map(|x| -c.kh0() * x).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn center_x(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_x")?;
    let (d0, d1) = c.nodes(|l, m| c.tmid(l) * l.u[m] - l.x[m]);
    let flux = c.fl.g.iter().map(|g| c.cur.t * g).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn center_y(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_y")?;
    let (d0, d1) = c.nodes(|l, m| c.tmid(l) * l.v[m] - l.y[m]);
    let flux = c.fl.hy_half.iter().map(|x| -c.cur.t * c.kh0() * x).collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn center_z(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "center_z")?;
    let (d0, d1) = c.nodes(|l, m| c.tmid(l) * l.w[m] - l.z[m]);
    let flux = c.fl.hz_half.iter().map(|x| -c.cur.t * c.kh0() * x).collect();
    Ok(LawValues::full(d0, d1, flux))
}

/// Total energy density per cell.
pub(crate) fn total_energy(l: &StateLayer, c: usize, kappa: f64) -> f64 {
    let sq = |m: usize| l.u[m] * l.u[m] + l.v[m] * l.v[m] + l.w[m] * l.w[m];
    l.eps[c] + 0.25 * (sq(c) + sq(c + 1)) + 0.5 * kappa * (l.hy[c] * l.hy[c] + l.hz[c] * l.hz[c]) / l.rho[c]
}

fn energy(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "energy")?;
    let (k, h0) = (c.s.phys.kappa, c.s.phys.h0);
    let fl = &c.fl;
    let g_star = star_padded(&fl.g);
    let hy_star = star_padded(&fl.hy_half);
    let hz_star = star_padded(&fl.hz_half);
    let (d0, d1) = c.cells(|l, i| total_energy(l, i, k));
    let flux = (0..c.cur.nodes())
        .map(|m| {
            g_star[m] * fl.u_half[m] - k * (fl.ez_beta[m] * hy_star[m] - fl.ey_beta[m] * hz_star[m])
                - k * h0 * (fl.v_half[m] * hy_star[m] + fl.w_half[m] * hz_star[m])
        })
        .collect();
    Ok(LawValues::full(d0, d1, flux))
}

fn angular(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "angular")?;
    let (d0, d1) = c.nodes(|l, m| l.z[m] * l.v[m] - l.y[m] * l.w[m]);
    let flux = vec![0.0; d0.len() + 1];
    Ok(LawValues::full(d0, d1, flux))
}

/// `(s H/rho)_t + (kappa H_-^(beta) -+ s_- E^(beta))_s = 0` for `sigma = rho`.
fn moment(c: &Ctx<'_>, hc: &[f64], hn: &[f64], beta: f64, e: &[f64], sign: f64) -> Vec<f64> {
    let (h, k) = (c.s.h, c.s.phys.kappa);
    (0..c.cur.nodes())
        .map(|m| {
            let hb = beta * hn[m] + (1.0 - beta) * hc[m];
            k * hb - sign * (m as f64 - 0.5) * h * e[m]
        })
        .collect()
}

fn moment_y(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "moment_y")?;
    let h = c.s.h;
    let (d0, d1) = c.cells(|l, i| (i as f64 + 0.5) * h * l.hy[i] / l.rho[i]);
    let flux = moment(&c, &c.gc.hy, &c.gn.hy, c.s.params.beta1, &c.fl.ez_beta, 1.0);
    Ok(LawValues::full(d0, d1, flux))
}

fn moment_z(s: SchemeRef<'_>, win: &TimeWindow<'_>) -> Result<LawValues> {
    let c = Ctx::new(s, win, "moment_z")?;
    let h = c.s.h;
    let (d0, d1) = c.cells(|l, i| (i as f64 + 0.5) * h * l.hz[i] / l.rho[i]);
    let flux = moment(&c, &c.gc.hz, &c.gn.hz, c.s.params.beta2, &c.fl.ey_beta, -1.0);
    Ok(LawValues::full(d0, d1, flux))
}

fn law(
    id: &'static str,
    name: &'static str,
    placement: Placement,
    requires: &'static [Predicate],
    pins: &'static [Pin],
    eval: super::Eval,
) -> ConservationLaw {
    ConservationLaw { id, name, placement, span: 2, requires, pins, eval }
}

use Placement::{Cell, Node};

pub(super) fn table1() -> Vec<ConservationLaw> {
    vec![
        law("T1.1", "mass", Cell, &[], &[], mass),
        law("T1.2", "magnetic flux", Cell, &[], &[], flux_y),
        law("T1.3", "momentum", Node, &[], &[Pin::U], momentum_u),
        law("T1.4", "center of mass", Node, &[], &[Pin::U], center_x),
        law("T1.5", "energy", Cell, &[], &[], energy),
        law("T1.6", "flux moment (sigma = rho)", Cell, &[Predicate::SigmaIsRho], &[], moment_y),
    ]
}

pub(super) fn table2() -> Vec<ConservationLaw> {
    const SR: &[Predicate] = &[Predicate::SigmaIsRho, Predicate::H0Zero];
    vec![
        law("T2.1", "mass", Cell, &[], &[], mass),
        law("T2.2", "magnetic flux y", Cell, &[], &[], flux_y),
        law("T2.3", "magnetic flux z", Cell, &[], &[], flux_z),
        law("T2.4", "momentum x", Node, &[], &[Pin::U], momentum_u),
        law("T2.5", "momentum y", Node, &[], &[Pin::V], momentum_v),
        law("T2.6", "momentum z", Node, &[], &[Pin::W], momentum_w),
        law("T2.7", "center of mass x", Node, &[], &[Pin::U], center_x),
        law("T2.8", "center of mass y", Node, &[], &[Pin::V], center_y),
        law("T2.9", "center of mass z", Node, &[], &[Pin::W], center_z),
        law("T2.10", "energy", Cell, &[], &[], energy),
        law("T2.11", "angular momentum", Node, &[Predicate::H0Zero], &[Pin::V, Pin::W], angular),
        law("T2.12", "flux moment y (sigma = rho)", Cell, SR, &[], moment_y),
        law("T2.13", "flux moment z (sigma = rho)", Cell, SR, &[], moment_z),
    ]
}
