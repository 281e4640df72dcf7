//! Run configuration read from a TOML file.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryClosure;
use crate::circuit::CircuitParams;
use crate::eos::{ConductivityModel, EosKind};
use crate::mesh::MeshSpec;
use crate::profiles::SmoothRandom;
use crate::schemes::finite_sigma::{FiniteSigma, FiniteSigmaParams};
use crate::schemes::infinite_sigma::{InfSigmaVariant, InfiniteSigma};
use crate::state::{init_state, PhysicsParams, PointState, StateLayer, Uniform};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub total_mass: f64,
    pub cells: usize,
    pub tau: f64,
    pub steps: usize,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    OneComponent,
    Extended,
    Mod0,
    Mod1,
    Mod2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub nu: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Constant of the extended-stencil state equation.
    pub s1: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        let p = FiniteSigmaParams::default();
        Self { kind: SchemeKind::Extended, alpha: p.alpha, beta1: p.beta1, beta2: p.beta2, nu: p.nu, tol: p.tol, max_iter: p.max_iter, s1: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConfig {
    Walls,
    /// Zero-gradient ghosts and no Dirichlet nodes.
    Free,
    Railgun,
    Custom(BoundaryClosure),
}

impl BoundaryConfig {
    pub fn closure(&self) -> BoundaryClosure {
        match *self {
            BoundaryConfig::Walls => BoundaryClosure::walls(),
            BoundaryConfig::Free => BoundaryClosure::default(),
            BoundaryConfig::Railgun => BoundaryClosure::railgun(),
            BoundaryConfig::Custom(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    Uniform { state: PointState },
    SmoothRandom { base: PointState, seed: u64, amp: f64 },
    /// Smooth random density and fields with the pressure tied to the
    /// density by the state equation (`S1 rho rho_+` for Mod2).
    Isentropic { base: PointState, seed: u64, amp: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub snapshot_every: usize,
    pub audit: bool,
    /// Largest admitted pointwise conservation residual of an applicable law.
    pub audit_threshold: f64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), snapshot_every: 10, audit: true, audit_threshold: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mesh: MeshConfig,
    pub physics: PhysicsParams,
    #[serde(default)]
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub eos: Option<EosKind>,
    #[serde(default)]
    pub sigma: ConductivityModel,
    pub boundary: BoundaryConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub circuit: Option<CircuitParams>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Set a dotted key of a serializable value, e.g. `scheme.alpha` to `0.5`.
/// The raw value is read as JSON, falling back to a plain string.
pub fn set_key<T: Serialize + serde::de::DeserializeOwned>(target: &mut T, key: &str, raw: &str) -> Result<()> {
    let mut doc = serde_json::to_value(&*target)?;
    let mut slot = &mut doc;
    for part in key.split('.') {
        slot = slot.get_mut(part).ok_or_else(|| Error::Config(format!("unknown key {key}")))?;
    }
    *slot = serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.into()));
    *target = serde_json::from_value(doc).map_err(|e| Error::Config(format!("{key}={raw}: {e}")))?;
    Ok(())
}

/// A scheme ready to step.
#[derive(Debug, Clone)]
pub enum Built {
    OneComponent(FiniteSigma),
    Extended(FiniteSigma),
    Infinite(InfiniteSigma),
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply `key=value`; call `validate` once all overrides are in.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        set_key(self, key, raw)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn mesh_spec(&self) -> Result<MeshSpec> {
        MeshSpec::with_t0(self.mesh.total_mass, self.mesh.cells, self.mesh.tau, self.mesh.t0)
    }

    /// Cross-field checks that the individual types cannot express.
    pub fn validate(&self) -> Result<()> {
        self.mesh_spec()?;
        let bad = |m: &str| Err(Error::Config(m.into()));
        let kind = self.scheme.kind;
        let infinite = matches!(kind, SchemeKind::Mod0 | SchemeKind::Mod1 | SchemeKind::Mod2);
        if self.eos.is_some_and(|e| e.is_entropy_preserving()) && kind != SchemeKind::Mod1 {
            return bad("an entropy-preserving state equation needs scheme.kind = \"mod1\"");
        }
        if kind == SchemeKind::Mod2 && !matches!(self.initial, InitialConfig::Isentropic { .. }) {
            return bad("scheme.kind = \"mod2\" needs initial.kind = \"isentropic\"");
        }
        if kind == SchemeKind::Mod2 && (self.physics.gamma - 2.0).abs() > 1e-12 {
            return bad("scheme.kind = \"mod2\" needs physics.gamma = 2");
        }
        if infinite && (self.circuit.is_some() || self.boundary.closure().uses_circuit()) {
            return bad("the circuit closure needs finite conductivity");
        }
        match self.build()? {
            Built::OneComponent(s) | Built::Extended(s) => s.validate(),
            Built::Infinite(s) => s.validate(),
        }
    }

    pub fn build(&self) -> Result<Built> {
        let h = self.mesh_spec()?.h;
        let c = &self.scheme;
        let finite = || FiniteSigma {
            params: FiniteSigmaParams { alpha: c.alpha, beta1: c.beta1, beta2: c.beta2, nu: c.nu, tol: c.tol, max_iter: c.max_iter },
            phys: self.physics,
            sigma: self.sigma,
            bc: self.boundary.closure(),
            circuit: self.circuit,
            h,
        };
        let infinite = |variant| {
            let mut s = InfiniteSigma::new(variant, self.physics, self.boundary.closure(), h);
            (s.alpha, s.nu, s.tol, s.max_iter) = (c.alpha, c.nu, c.tol, c.max_iter);
            s
        };
        let eos = self.eos.unwrap_or(EosKind::Continuum { gamma: self.physics.gamma });
        Ok(match c.kind {
            SchemeKind::OneComponent => Built::OneComponent(finite()),
            SchemeKind::Extended => Built::Extended(finite()),
            SchemeKind::Mod0 => Built::Infinite(infinite(InfSigmaVariant::Mod0)),
            SchemeKind::Mod1 => Built::Infinite(infinite(InfSigmaVariant::Mod1 { eos })),
            SchemeKind::Mod2 => Built::Infinite(infinite(InfSigmaVariant::Mod2 { s1: c.s1 })),
        })
    }

    /// Initial layer, with fields made consistent with the scheme.
    pub fn initial_layer(&self, built: &Built) -> Result<StateLayer> {
        let mesh = self.mesh_spec()?;
        let mut l = match self.initial {
            InitialConfig::Uniform { state } => init_state(&mesh, &self.physics, &Uniform(state))?,
            InitialConfig::SmoothRandom { base, seed, amp } | InitialConfig::Isentropic { base, seed, amp } => {
                init_state(&mesh, &self.physics, &SmoothRandom::new(seed, base, mesh.total_mass, amp))?
            }
        };
        if let InitialConfig::Isentropic { base, .. } = self.initial {
            let g = self.physics.gamma;
            l.p = match built {
                Built::Infinite(s) if self.scheme.kind == SchemeKind::Mod2 => s.mod2_pressure(&l, self.scheme.s1),
                _ => l.rho.iter().map(|r| base.p / base.rho.powf(g) * r.powf(g)).collect(),
            };
            l.refresh_thermo(g);
        }
        if matches!(self.boundary, BoundaryConfig::Walls) {
            let n = l.cells();
            (l.u[0], l.u[n]) = (0.0, 0.0);
        }
        if self.physics.h0 != 0.0 {
            l.align_transverse(mesh.h, self.physics.h0, l.y[0], l.z[0]);
        }
        if let Some(c) = &self.circuit {
            l.circuit = Some(c.initial());
        }
        if let Built::OneComponent(s) | Built::Extended(s) = built {
            s.consistent_fields(&mut l);
        }
        Ok(l)
    }
}
