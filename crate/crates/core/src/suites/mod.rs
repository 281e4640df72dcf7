//! Built-in verification suites over a fixed scenario matrix.

mod conservation;
mod convergence;
mod entropy;
mod scaling;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use conservation::{angular_contrast, conservation_suite, scenarios, Scenario};
pub use convergence::{convergence_suite, observed_orders, Orders};
pub use entropy::{entropy_drift, entropy_suite};
pub use scaling::{kappa_scaling_gap, rescale_layer};

use crate::symmetry::{symmetry_matrix, Expectation, Regime};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    /// Recorded without a pass criterion.
    Report,
}

impl Bound {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
            Bound::Report => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub case: String,
    pub check: String,
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.into(), rows: Vec::new() }
    }

    pub fn push(&mut self, case: impl Into<String>, check: impl Into<String>, value: f64, bound: Bound) {
        let pass = bound.holds(value);
        self.rows.push(SuiteRow { case: case.into(), check: check.into(), value, bound, pass });
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for r in &self.rows {
            let bound = match r.bound {
                Bound::AtMost(b) => format!("<= {b:e}"),
                Bound::AtLeast(b) => format!(">= {b:e}"),
                Bound::Report => "reported".into(),
            };
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {:<40} {:<40} {:>24e} {bound}", r.case, r.check, r.value);
        }
        out
    }
}

/// Symmetry matrix as a suite; the printed residual is the worst over the
/// tested parameters, or the weakest for excluded generators.
pub fn symmetry_suite(tol: f64) -> Result<SuiteReport> {
    let m = symmetry_matrix(&Regime::ALL, tol)?;
    let mut rep = SuiteReport::new("symmetry");
    for e in &m.entries {
        let case = format!("{:?}", e.regime);
        let (value, bound) = match e.expected {
            Expectation::Admitted => (e.residuals.iter().map(|r| r.1).fold(0.0, f64::max), Bound::AtMost(100.0 * tol)),
            Expectation::Excluded => {
                let ratio = e.residuals.iter().filter(|r| r.0 > 0.0).map(|r| r.1 / r.0).fold(f64::INFINITY, f64::min);
                (ratio, Bound::AtLeast(1e-6))
            }
            Expectation::Reported => (e.residuals.iter().map(|r| r.1).fold(0.0, f64::max), Bound::Report),
        };
        rep.push(case, format!("{} {:?}", e.generator, e.expected), value, bound);
    }
    Ok(rep)
}
