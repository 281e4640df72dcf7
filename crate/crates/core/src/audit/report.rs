use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::ConservationLaw;
use crate::Result;

/// Outcome of one law over one step or a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawResult {
    pub id: String,
    pub name: String,
    /// `false` when a predicate fails; the numbers are still reported.
    pub applicable: bool,
    pub skipped: Option<String>,
    /// Largest pointwise `|D_t + F_s|`.
    pub max_residual: f64,
    /// Last step's budget drift and its magnitude.
    pub budget_drift: f64,
    pub budget_scale: f64,
    /// Largest per-step relative drift.
    pub max_relative_drift: f64,
    /// Signed sum of the per-step drifts.
    pub cumulative_drift: f64,
    pub steps: usize,
}

impl LawResult {
    pub fn new(law: &ConservationLaw) -> Self {
        Self {
            id: law.id.into(),
            name: law.name.into(),
            applicable: true,
            skipped: None,
            max_residual: 0.0,
            budget_drift: 0.0,
            budget_scale: 0.0,
            max_relative_drift: 0.0,
            cumulative_drift: 0.0,
            steps: 0,
        }
    }

    pub fn record_budget(&mut self, drift: f64, scale: f64) {
        self.budget_drift = drift;
        self.budget_scale = scale;
        self.cumulative_drift += drift;
        self.max_relative_drift = self.max_relative_drift.max(relative(drift, scale));
    }

    /// Relative drift of the last step.
    pub fn relative_drift(&self) -> f64 {
        relative(self.budget_drift, self.budget_scale)
    }

    /// Evaluated and expected to hold.
    pub fn audited(&self) -> bool {
        self.applicable && self.steps > 0
    }
}

fn relative(drift: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        drift.abs() / scale
    } else {
        drift.abs()
    }
}

/// Per-law residual norms and budget drifts for a step or a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub scheme: String,
    pub steps: usize,
    pub laws: Vec<LawResult>,
}

impl ConservationReport {
    pub fn new(scheme: String) -> Self {
        Self { scheme, steps: 0, laws: Vec::new() }
    }

    pub fn law(&self, id: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.id == id)
    }

    /// Fold a later step's report into a run total.
    pub fn accumulate(&mut self, step: &ConservationReport) {
        if self.laws.is_empty() {
            *self = step.clone();
            return;
        }
        for s in &step.laws {
            let Some(l) = self.laws.iter_mut().find(|l| l.id == s.id) else {
                self.laws.push(s.clone());
                continue;
            };
            if s.steps == 0 {
                continue;
            }
            if l.steps == 0 {
                l.skipped = s.skipped.clone();
            }
            l.applicable = s.applicable;
            l.max_residual = l.max_residual.max(s.max_residual);
            l.budget_drift = s.budget_drift;
            l.budget_scale = s.budget_scale;
            l.max_relative_drift = l.max_relative_drift.max(s.max_relative_drift);
            l.cumulative_drift += s.cumulative_drift;
            l.steps += s.steps;
        }
        self.steps += step.steps;
    }

    /// Largest residual among laws that are expected to hold.
    pub fn worst_applicable(&self) -> f64 {
        self.laws.iter().filter(|l| l.audited()).map(|l| l.max_residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} ({} steps)\n", self.scheme, self.steps);
        let _ = writeln!(out, "{:<8} {:<36} {:>12} {:>12} {:>12}  note", "law", "name", "max |res|", "rel drift", "cum drift");
        for l in &self.laws {
            let note = match (&l.skipped, l.applicable) {
                (Some(s), false) => format!("reported only: {s}"),
                (Some(s), true) => format!("skipped: {s}"),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{:<8} {:<36} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
                l.id, l.name, l.max_residual, l.max_relative_drift, l.cumulative_drift, note
            );
        }
        out
    }

    pub fn csv_header(&self) -> String {
        let ids: Vec<&str> = self.laws.iter().map(|l| l.id.as_str()).collect();
        format!("step,t,{}", ids.join(","))
    }

    /// One CSV row with the last budget drift of every law.
    pub fn csv_row(&self, step: usize, t: f64) -> String {
        let vals: Vec<String> = self.laws.iter().map(|l| format!("{:e}", l.budget_drift)).collect();
        format!("{step},{t},{}", vals.join(","))
    }
}
