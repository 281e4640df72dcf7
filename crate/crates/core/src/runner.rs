//! Orchestration of a configured run: stepping, auditing and output.

use std::fs;
use std::io::Write;

use crate::audit::{audit_step, ConservationReport, SchemeRef};
use crate::config::{Built, RunConfig};
use crate::state::{StateLayer, TimeWindow};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: usize,
    pub final_state: StateLayer,
    pub report: ConservationReport,
}

impl RunSummary {
    /// Applicable laws whose pointwise residual exceeds `threshold`.
    pub fn violations(&self, threshold: f64) -> Vec<String> {
        self.report
            .laws
            .iter()
            .filter(|l| l.audited() && l.max_residual > threshold)
            .map(|l| format!("{} {} residual {:e}", l.id, l.name, l.max_residual))
            .collect()
    }
}

fn scheme_ref(b: &Built) -> SchemeRef<'_> {
    match b {
        Built::OneComponent(s) => SchemeRef::OneComponent(s),
        Built::Extended(s) => SchemeRef::Extended(s),
        Built::Infinite(s) => SchemeRef::Infinite(s),
    }
}

/// Advance one step; `prev` only matters for three-layer schemes.
pub fn step(b: &Built, prev: Option<&StateLayer>, cur: &StateLayer, tau: f64) -> Result<StateLayer> {
    Ok(match b {
        Built::OneComponent(s) => s.step_one_component(cur, tau)?.0,
        Built::Extended(s) => s.step_extended(cur, tau)?.0,
        Built::Infinite(s) => s.step(prev, cur, tau)?.0,
    })
}

/// Run to completion, writing snapshots, budgets and the final state into
/// `output.dir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let built = cfg.build()?;
    let mesh = cfg.mesh_spec()?;
    let out = &cfg.output;
    let snaps = out.dir.join("snapshots");
    fs::create_dir_all(&snaps)?;
    fs::write(out.dir.join("config.toml"), cfg.to_toml()?)?;
    let mut budgets = fs::File::create(out.dir.join("budgets.csv"))?;
    let s = scheme_ref(&built);
    let mut report = ConservationReport::new(s.name());
    let mut prev: Option<StateLayer> = None;
    let mut cur = cfg.initial_layer(&built)?;
    cur.save_csv(&mesh, &snaps.join("0000.csv"))?;
    for n in 1..=cfg.mesh.steps {
        let next = step(&built, prev.as_ref(), &cur, mesh.tau).map_err(|e| Error::StepFailed { step: n, source: Box::new(e) })?;
        if out.audit {
            let win = match &prev {
                Some(p) => TimeWindow::three(p, &cur, &next, mesh.tau),
                None => TimeWindow::two(&cur, &next, mesh.tau),
            };
            let rep = audit_step(&win, s)?;
            if n == 1 {
                writeln!(budgets, "{}", rep.csv_header())?;
            }
            writeln!(budgets, "{}", rep.csv_row(n, next.t))?;
            report.accumulate(&rep);
        }
        if out.snapshot_every > 0 && n % out.snapshot_every == 0 {
            next.save_csv(&mesh, &snaps.join(format!("{n:04}.csv")))?;
        }
        prev = Some(std::mem::replace(&mut cur, next));
    }
    fs::write(out.dir.join("conservation.json"), report.to_json()?)?;
    let meta = serde_json::json!({ "scheme": s.name(), "steps": cfg.mesh.steps });
    fs::write(out.dir.join("final.json"), cur.to_json(&meta)?)?;
    Ok(RunSummary { steps: cfg.mesh.steps, final_state: cur, report })
}

/// `steps` layers after `first`, `first` included.
pub fn history(b: &Built, first: StateLayer, steps: usize, tau: f64) -> Result<Vec<StateLayer>> {
    let mut out = vec![first];
    for n in 0..steps {
        let prev = n.checked_sub(1).map(|p| &out[p]);
        let next = step(b, prev, &out[n], tau).map_err(|e| Error::StepFailed { step: n + 1, source: Box::new(e) })?;
        out.push(next);
    }
    Ok(out)
}

impl Built {
    pub fn scheme_ref(&self) -> SchemeRef<'_> {
        scheme_ref(self)
    }
}
