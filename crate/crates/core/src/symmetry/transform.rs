use serde::{Deserialize, Serialize};

use super::{Action, Axis, SymmetryGenerator, Weights};
use crate::mesh::mesh_condition_residual;
use crate::state::StateLayer;
use crate::{Error, Result};

/// A run history on a uniform mesh whose first node sits at mass `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrete {
    pub layers: Vec<StateLayer>,
    pub h: f64,
    pub tau: f64,
    pub s0: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl Discrete {
    pub fn s_node(&self, m: usize) -> f64 {
        self.s0 + m as f64 * self.h
    }

    pub fn s_cell(&self, c: usize) -> f64 {
        self.s0 + (c as f64 + 0.5) * self.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transformed {
    pub sol: Discrete,
    /// Largest violation of the mesh uniformness and orthogonality
    /// conditions by the generator on the transformed mesh.
    pub mesh_residual: f64,
}

fn rotate(a: &mut [f64], b: &mut [f64], angle: impl Fn(usize) -> f64) {
    for i in 0..a.len() {
        let (sn, cs) = angle(i).sin_cos();
        let (x, y) = (a[i], b[i]);
        a[i] = x * cs + y * sn;
        b[i] = -x * sn + y * cs;
    }
}

fn scale(v: &mut [f64], f: f64) {
    v.iter_mut().for_each(|x| *x *= f);
}

fn scale_layer(l: &mut StateLayer, w: &Weights, eps: f64) {
    let f = |k: f64| (k * eps).exp();
    l.t *= f(w.t);
    scale(&mut l.x, f(w.x));
    for v in [&mut l.y, &mut l.z] {
        scale(v, f(w.yz));
    }
    scale(&mut l.u, f(w.u));
    for v in [&mut l.v, &mut l.w] {
        scale(v, f(w.vw));
    }
    scale(&mut l.rho, f(w.rho));
    scale(&mut l.p, f(w.p));
    for v in [&mut l.eps, &mut l.temp] {
        scale(v, f(w.p - w.rho));
    }
    for v in [&mut l.hy, &mut l.hz] {
        scale(v, f(w.h));
    }
    for v in [&mut l.ey, &mut l.ez] {
        scale(v, f(w.e));
    }
    for v in [&mut l.iy, &mut l.iz] {
        scale(v, f(w.rho + w.h - w.s));
    }
}

/// Apply the finite transformation `exp(eps X)` to every layer and the mesh.
pub fn transform_solution(sol: &Discrete, g: &SymmetryGenerator, eps: f64) -> Result<Transformed> {
    if !eps.is_finite() {
        return Err(Error::InvalidParam(format!("group parameter {eps} is not finite")));
    }
    let mut out = sol.clone();
    match g.action {
        Action::TimeShift => out.layers.iter_mut().for_each(|l| l.t += eps),
        Action::MassShift => out.s0 += eps,
        Action::Scale(w) => {
            out.h *= (w.s * eps).exp();
            out.s0 *= (w.s * eps).exp();
            out.tau *= (w.t * eps).exp();
        }
        _ => {}
    }
    if !(out.h > 0.0 && out.tau > 0.0 && out.h.is_finite() && out.tau.is_finite()) {
        return Err(Error::InvalidParam(format!("eps = {eps} leaves h = {}, tau = {}", out.h, out.tau)));
    }
    let (sn, sc): (Vec<f64>, Vec<f64>) = {
        let l = &sol.layers[0];
        ((0..l.nodes()).map(|m| sol.s_node(m)).collect(), (0..l.cells()).map(|c| sol.s_cell(c)).collect())
    };
    for l in out.layers.iter_mut() {
        let t = l.t;
        match g.action {
            Action::TimeShift | Action::MassShift => {}
            Action::ShiftX => l.x.iter_mut().for_each(|x| *x += eps),
            Action::ShiftTransverse { axis, q } => {
                let v = if axis == Axis::Y { &mut l.y } else { &mut l.z };
                v.iter_mut().zip(&sn).for_each(|(y, s)| *y += eps * q.eval(*s));
            }
            Action::BoostX => {
                l.x.iter_mut().for_each(|x| *x += eps * t);
                l.u.iter_mut().for_each(|u| *u += eps);
            }
            Action::BoostTransverse { axis } => {
                let (y, v) = if axis == Axis::Y { (&mut l.y, &mut l.v) } else { (&mut l.z, &mut l.w) };
                y.iter_mut().for_each(|y| *y += eps * t);
                v.iter_mut().for_each(|v| *v += eps);
            }
            Action::Rotate { kinematic, q } => {
                let node = |m: usize| eps * q.eval(sn[m]);
                rotate(&mut l.hy, &mut l.hz, |c| eps * q.eval(sc[c]));
                rotate(&mut l.ey, &mut l.ez, node);
                rotate(&mut l.iy, &mut l.iz, node);
                if kinematic {
                    rotate(&mut l.v, &mut l.w, node);
                    rotate(&mut l.y, &mut l.z, node);
                }
            }
            Action::Scale(w) => scale_layer(l, &w, eps),
            Action::MagneticPressure { axis, q } => {
                for c in 0..l.cells() {
                    let a = q.eval(sc[c]) * l.rho[c];
                    let hf = if axis == Axis::Y { &mut l.hy[c] } else { &mut l.hz[c] };
                    let dp = -sol.kappa * a * (*hf * eps + 0.5 * a * eps * eps);
                    *hf += eps * a;
                    l.p[c] += dp;
                    l.eps[c] += dp / ((sol.gamma - 1.0) * l.rho[c]);
                    l.temp[c] = l.p[c] / l.rho[c];
                }
            }
        }
        l.check_density()?;
    }
    let mut mesh_residual = 0.0f64;
    for l in &out.layers {
        for m in 0..l.nodes() {
            let r = mesh_condition_residual(
                &|t, _| g.xi_t(t),
                &|_, s| g.xi_s(s),
                l.t,
                out.s_node(m),
                out.tau,
                out.h,
            );
            mesh_residual = mesh_residual.max(r);
        }
    }
    Ok(Transformed { sol: out, mesh_residual })
}
