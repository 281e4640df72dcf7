use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::RailgunConfig;
use crate::audit::ConservationReport;
use crate::mesh::MeshSpec;
use crate::state::StateLayer;
use crate::Result;

/// Everything a run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunArtifacts {
    pub config: RailgunConfig,
    pub mesh: MeshSpec,
    /// `(step, layer)`.
    pub snapshots: Vec<(usize, StateLayer)>,
    /// `(t, J, V)`.
    pub circuit: Vec<(f64, f64, f64)>,
    /// `(t, node, x, y)` of the tracked particles.
    pub trajectories: Vec<(f64, usize, f64, f64)>,
    /// `(t, u)` at the bunch front.
    pub front: Vec<(f64, f64)>,
    pub budget_header: String,
    pub budget_rows: Vec<String>,
    pub conservation: ConservationReport,
    /// Run total up to the report time.
    pub at_report: Option<ConservationReport>,
    /// Largest relative energy drift of the circuit per step.
    pub circuit_drift: f64,
    pub final_state: StateLayer,
}

impl RunArtifacts {
    pub(super) fn new(config: RailgunConfig, mesh: MeshSpec) -> Self {
        Self {
            config,
            mesh,
            snapshots: Vec::new(),
            circuit: Vec::new(),
            trajectories: Vec::new(),
            front: Vec::new(),
            budget_header: String::new(),
            budget_rows: Vec::new(),
            conservation: ConservationReport::new(String::new()),
            at_report: None,
            circuit_drift: 0.0,
            final_state: StateLayer::zeros(0, 0.0),
        }
    }

    pub(super) fn record(&mut self, l: &StateLayer, step: usize) {
        let cfg = &self.config;
        if step % cfg.snapshot_every == 0 {
            self.snapshots.push((step, l.clone()));
        }
        if let Some(c) = l.circuit {
            self.circuit.push((l.t, c.current, c.voltage));
        }
        for m in (0..l.nodes()).step_by(cfg.track_every) {
            self.trajectories.push((l.t, m, l.x[m], l.y[m]));
        }
        self.front.push((l.t, l.u[cfg.front_node()]));
    }

    pub fn min_front_velocity(&self) -> f64 {
        self.front.iter().map(|f| f.1).fold(f64::INFINITY, f64::min)
    }

    /// First time the bunch front moves backward, if it does.
    pub fn reversal_time(&self) -> Option<f64> {
        self.front.iter().find(|f| f.1 < 0.0).map(|f| f.0)
    }

    /// Trajectory `(t, x, y)` of one tracked node.
    pub fn trajectory(&self, node: usize) -> Vec<(f64, f64, f64)> {
        self.trajectories.iter().filter(|p| p.1 == node).map(|p| (p.0, p.2, p.3)).collect()
    }

    /// Write `snapshots/NNNN.csv`, `circuit.csv`, `trajectories.csv`,
    /// `front.csv`, `budgets.csv`, `conservation.json` and `case.json`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let snaps = dir.join("snapshots");
        fs::create_dir_all(&snaps)?;
        for (step, l) in &self.snapshots {
            l.save_csv(&self.mesh, &snaps.join(format!("{step:04}.csv")))?;
        }
        let mut f = fs::File::create(dir.join("circuit.csv"))?;
        writeln!(f, "t,J,V")?;
        for (t, j, v) in &self.circuit {
            writeln!(f, "{t},{j},{v}")?;
        }
        let mut f = fs::File::create(dir.join("trajectories.csv"))?;
        writeln!(f, "t,particle,x,y")?;
        for (t, m, x, y) in &self.trajectories {
            writeln!(f, "{t},{m},{x},{y}")?;
        }
        let mut f = fs::File::create(dir.join("front.csv"))?;
        writeln!(f, "t,u")?;
        for (t, u) in &self.front {
            writeln!(f, "{t},{u}")?;
        }
        let mut f = fs::File::create(dir.join("budgets.csv"))?;
        writeln!(f, "{}", self.budget_header)?;
        for r in &self.budget_rows {
            writeln!(f, "{r}")?;
        }
        let summary = serde_json::json!({
            "run": self.conservation,
            "at_report_time": self.at_report,
            "circuit_energy_drift": self.circuit_drift,
        });
        fs::write(dir.join("conservation.json"), serde_json::to_string_pretty(&summary)?)?;
        fs::write(dir.join("case.json"), serde_json::to_string_pretty(&self.config)?)?;
        Ok(())
    }
}
