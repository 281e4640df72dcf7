//! Layered state containers on the staggered mass mesh.
//!
//! Node fields (`u, v, w, x, y, z, Ey, Ez, iy, iz`) live on the `M + 1`
//! integer nodes, cell fields (`rho, p, eps, Hy, Hz, T`) on the `M` cells
//! centered at `s_{m+1/2}`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eos;
use crate::error::{Error, Result};
use crate::mesh::MeshSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub gamma: f64,
    /// Magnetic constant (1 after rescaling, 4π in the railgun experiment).
    pub kappa: f64,
    /// Constant longitudinal field.
    pub h0: f64,
}

impl PhysicsParams {
    pub fn new(gamma: f64, kappa: f64, h0: f64) -> Result<Self> {
        let p = Self { gamma, kappa, h0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) {
            return Err(Error::InvalidParam(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidParam(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !self.h0.is_finite() {
            return Err(Error::InvalidParam("H0 must be finite".into()));
        }
        Ok(())
    }
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0, kappa: 1.0, h0: 0.0 }
    }
}

/// External circuit state attached to a layer (railgun runs only).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitState {
    pub current: f64,
    pub voltage: f64,
}

/// All grid functions at one time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateLayer {
    pub t: f64,
    // nodes
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub ey: Vec<f64>,
    pub ez: Vec<f64>,
    pub iy: Vec<f64>,
    pub iz: Vec<f64>,
    // cells
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    pub eps: Vec<f64>,
    pub hy: Vec<f64>,
    pub hz: Vec<f64>,
    pub temp: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitState>,
}

/// Point values of an initial profile at mass coordinate `s`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointState {
    pub rho: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub hy: f64,
    pub hz: f64,
}

/// Initial data as functions of the mass coordinate.
pub trait InitialProfile {
    fn at(&self, s: f64) -> PointState;
}

impl<F: Fn(f64) -> PointState> InitialProfile for F {
    fn at(&self, s: f64) -> PointState {
        self(s)
    }
}

/// Spatially uniform state.
#[derive(Debug, Clone, Copy)]
pub struct Uniform(pub PointState);

impl InitialProfile for Uniform {
    fn at(&self, _s: f64) -> PointState {
        self.0
    }
}

impl StateLayer {
    pub fn zeros(cells: usize, t: f64) -> Self {
        let n = cells + 1;
        Self {
            t,
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: vec![0.0; n],
            x: vec![0.0; n],
            y: vec![0.0; n],
            z: vec![0.0; n],
            ey: vec![0.0; n],
            ez: vec![0.0; n],
            iy: vec![0.0; n],
            iz: vec![0.0; n],
            rho: vec![1.0; cells],
            p: vec![0.0; cells],
            eps: vec![0.0; cells],
            hy: vec![0.0; cells],
            hz: vec![0.0; cells],
            temp: vec![0.0; cells],
            circuit: None,
        }
    }

    pub fn cells(&self) -> usize {
        self.rho.len()
    }

    pub fn nodes(&self) -> usize {
        self.u.len()
    }

    /// Largest violation of `x_s = 1/rho`.
    pub fn compatibility_residual(&self, h: f64) -> f64 {
        (0..self.cells())
            .map(|c| ((self.x[c + 1] - self.x[c]) / h - 1.0 / self.rho[c]).abs())
            .fold(0.0, f64::max)
    }

    /// Recompute `eps` (continuum EOS) and `T = p/rho` from `p` and `rho`.
    pub fn refresh_thermo(&mut self, gamma: f64) {
        for c in 0..self.cells() {
            self.eps[c] = self.p[c] / ((gamma - 1.0) * self.rho[c]);
            self.temp[c] = self.p[c] / self.rho[c];
        }
    }

    pub fn check_density(&self) -> Result<()> {
        for (c, &r) in self.rho.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::NonPositiveDensity { cell: c, rho: r });
            }
        }
        Ok(())
    }

    /// Set `y, z` so that `y_s = Hy/(H0 rho)` and `z_s = Hz/(H0 rho)`
    /// with `y(0) = y0`, `z(0) = z0`.
    pub fn align_transverse(&mut self, h: f64, h0: f64, y0: f64, z0: f64) {
        self.y[0] = y0;
        self.z[0] = z0;
        for c in 0..self.cells() {
            self.y[c + 1] = self.y[c] + h * self.hy[c] / (h0 * self.rho[c]);
            self.z[c + 1] = self.z[c] + h * self.hz[c] / (h0 * self.rho[c]);
        }
    }

    pub fn to_json(&self, meta: &serde_json::Value) -> Result<String> {
        let snap = serde_json::json!({ "meta": meta, "layer": self });
        Ok(serde_json::to_string_pretty(&snap)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let layer = v.get("layer").cloned().unwrap_or(v);
        Ok(serde_json::from_value(layer)?)
    }

    pub fn write_csv<W: Write>(&self, mesh: &MeshSpec, mut out: W) -> Result<()> {
        writeln!(out, "m,s,x,rho,p,T,u,v,w,Hy,Hz,Ey,Ez")?;
        let cells = self.cells();
        for m in 0..self.nodes() {
            let cell = |f: &[f64]| if m < cells { f[m].to_string() } else { String::new() };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                m,
                mesh.s_node(m),
                self.x[m],
                cell(&self.rho),
                cell(&self.p),
                cell(&self.temp),
                self.u[m],
                self.v[m],
                self.w[m],
                cell(&self.hy),
                cell(&self.hz),
                self.ey[m],
                self.ez[m]
            )?;
        }
        Ok(())
    }

    pub fn save_csv(&self, mesh: &MeshSpec, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(mesh, f)
    }
}

/// Sample an initial profile on the mesh. Velocities at nodes, thermodynamic
/// and magnetic quantities at cell centers; `x` is integrated from `x(0) = 0`
/// so that `x_s = 1/rho` holds exactly.
pub fn init_state(mesh: &MeshSpec, phys: &PhysicsParams, profile: &dyn InitialProfile) -> Result<StateLayer> {
    let mut layer = StateLayer::zeros(mesh.cells, mesh.t0);
    for m in 0..mesh.nodes() {
        let pt = profile.at(mesh.s_node(m));
        layer.u[m] = pt.u;
        layer.v[m] = pt.v;
        layer.w[m] = pt.w;
    }
    for c in 0..mesh.cells {
        let pt = profile.at(mesh.s_cell(c));
        if !(pt.rho > 0.0) {
            return Err(Error::NonPositiveDensity { cell: c, rho: pt.rho });
        }
        layer.rho[c] = pt.rho;
        layer.p[c] = pt.p;
        layer.hy[c] = pt.hy;
        layer.hz[c] = pt.hz;
        layer.eps[c] = eos::eps_continuum(pt.p, pt.rho, phys.gamma)?;
        layer.temp[c] = pt.p / pt.rho;
    }
    layer.x[0] = 0.0;
    for c in 0..mesh.cells {
        layer.x[c + 1] = layer.x[c] + mesh.h / layer.rho[c];
    }
    Ok(layer)
}

/// Two or three consecutive layers.
#[derive(Debug, Clone, Copy)]
pub struct TimeWindow<'a> {
    pub prev: Option<&'a StateLayer>,
    pub cur: &'a StateLayer,
    pub next: Option<&'a StateLayer>,
    pub tau: f64,
}

impl<'a> TimeWindow<'a> {
    pub fn two(cur: &'a StateLayer, next: &'a StateLayer, tau: f64) -> Self {
        Self { prev: None, cur, next: Some(next), tau }
    }

    pub fn three(prev: &'a StateLayer, cur: &'a StateLayer, next: &'a StateLayer, tau: f64) -> Self {
        Self { prev: Some(prev), cur, next: Some(next), tau }
    }

    pub fn next(&self) -> Result<&'a StateLayer> {
        self.next.ok_or(Error::MissingLayer("next"))
    }

    pub fn prev(&self) -> Result<&'a StateLayer> {
        self.prev.ok_or(Error::MissingLayer("previous"))
    }

    /// Check that consecutive layer times differ by `tau`.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.cur.t.abs());
        if let Some(n) = self.next {
            if ((n.t - self.cur.t) - self.tau).abs() > tol {
                return Err(Error::InvalidParam(format!("next layer at t={} is not cur+tau", n.t)));
            }
        }
        if let Some(p) = self.prev {
            if ((self.cur.t - p.t) - self.tau).abs() > tol {
                return Err(Error::InvalidParam(format!("prev layer at t={} is not cur-tau", p.t)));
            }
        }
        if self.prev.is_none() && self.next.is_none() {
            return Err(Error::MissingLayer("next"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rest() -> Uniform {
        Uniform(PointState { rho: 1.0, p: 0.0056, ..Default::default() })
    }

    #[test]
    fn rest_state_positions() {
        let mesh = MeshSpec::new(4.0, 60, 0.003).unwrap();
        let l = init_state(&mesh, &PhysicsParams::default(), &rest()).unwrap();
        assert!(l.u.iter().all(|&u| u == 0.0));
        for m in 0..=60 {
            assert!((l.x[m] - m as f64 * mesh.h).abs() < 1e-12);
        }
        assert!(l.compatibility_residual(mesh.h) < 1e-13);
    }

    #[test]
    fn dense_gas_positions() {
        let mesh = MeshSpec::new(4.0, 4, 0.1).unwrap();
        let prof = Uniform(PointState { rho: 2.0, p: 1.0, ..Default::default() });
        let l = init_state(&mesh, &PhysicsParams::default(), &prof).unwrap();
        assert_eq!(l.x, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn nonpositive_density_rejected() {
        let mesh = MeshSpec::new(1.0, 4, 0.1).unwrap();
        let prof = |s: f64| PointState { rho: 0.5 - s, p: 1.0, ..Default::default() };
        assert!(matches!(
            init_state(&mesh, &PhysicsParams::default(), &prof),
            Err(Error::NonPositiveDensity { .. })
        ));
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let mesh = MeshSpec::new(1.0, 7, 0.1).unwrap();
        let prof = |s: f64| PointState {
            rho: 1.0 + 0.3 * (s * 7.1).sin(),
            p: 0.1 / 3.0 + s,
            u: (s * 3.3).cos() / 7.0,
            v: 1e-17 * s,
            w: -s / 3.0,
            hy: std::f64::consts::PI * s,
            hz: 0.1,
        };
        let mut l = init_state(&mesh, &PhysicsParams::default(), &prof).unwrap();
        l.circuit = Some(CircuitState { current: 1.0 / 3.0, voltage: 2.6 });
        let text = l.to_json(&serde_json::json!({"t": l.t})).unwrap();
        let back = StateLayer::from_json(&text).unwrap();
        assert_eq!(l, back);
        for (a, b) in l.rho.iter().zip(&back.rho) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn csv_layout() {
        let mesh = MeshSpec::new(1.0, 2, 0.1).unwrap();
        let l = init_state(&mesh, &PhysicsParams::default(), &rest()).unwrap();
        let mut buf = Vec::new();
        l.write_csv(&mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "m,s,x,rho,p,T,u,v,w,Hy,Hz,Ey,Ez");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("2,1,1,,"));
    }
}
