//! Interleaved unknown layout and the Newton driver shared by the steppers.

use crate::error::Result;
use crate::solver::{newton_solve, NewtonOptions, NewtonReport};
use crate::state::StateLayer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NodeVar {
    U,
    V,
    W,
    Ey,
    Ez,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CellVar {
    P,
    Hy,
    Hz,
}

pub(crate) fn node_field(l: &mut StateLayer, v: NodeVar) -> &mut Vec<f64> {
    match v {
        NodeVar::U => &mut l.u,
        NodeVar::V => &mut l.v,
        NodeVar::W => &mut l.w,
        NodeVar::Ey => &mut l.ey,
        NodeVar::Ez => &mut l.ez,
    }
}

pub(crate) fn cell_field(l: &mut StateLayer, v: CellVar) -> &mut Vec<f64> {
    match v {
        CellVar::P => &mut l.p,
        CellVar::Hy => &mut l.hy,
        CellVar::Hz => &mut l.hz,
    }
}

/// Unknowns interleaved by index so the Jacobian stays banded; the circuit
/// pair goes last, next to the right end it couples to.
pub(crate) struct Layout {
    pub nodes: Vec<NodeVar>,
    pub cells: Vec<CellVar>,
    pub circuit: bool,
    pub m: usize,
}

impl Layout {
    pub fn stride(&self) -> usize {
        self.nodes.len() + self.cells.len()
    }

    pub fn len(&self) -> usize {
        self.m * self.stride() + self.nodes.len() + if self.circuit { 2 } else { 0 }
    }

    pub fn bandwidth(&self) -> usize {
        2 * self.stride() + 2
    }

    pub fn for_each(&self, mut f: impl FnMut(usize, Slot)) {
        let mut i = 0;
        for k in 0..=self.m {
            for &v in &self.nodes {
                f(i, Slot::Node(k, v));
                i += 1;
            }
            if k < self.m {
                for &v in &self.cells {
                    f(i, Slot::Cell(k, v));
                    i += 1;
                }
            }
        }
        if self.circuit {
            f(i, Slot::Current);
            f(i + 1, Slot::Voltage);
        }
    }

    pub fn pack(&self, l: &mut StateLayer) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.for_each(|i, s| out[i] = s.get(l));
        out
    }

    pub fn unpack(&self, xs: &[f64], l: &mut StateLayer) {
        self.for_each(|i, s| s.set(l, xs[i]));
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Slot {
    Node(usize, NodeVar),
    Cell(usize, CellVar),
    Current,
    Voltage,
}

impl Slot {
    pub fn get(self, l: &mut StateLayer) -> f64 {
        match self {
            Slot::Node(k, v) => node_field(l, v)[k],
            Slot::Cell(k, v) => cell_field(l, v)[k],
            Slot::Current => l.circuit.map_or(0.0, |c| c.current),
            Slot::Voltage => l.circuit.map_or(0.0, |c| c.voltage),
        }
    }

    pub fn set(self, l: &mut StateLayer, x: f64) {
        match self {
            Slot::Node(k, v) => node_field(l, v)[k] = x,
            Slot::Cell(k, v) => cell_field(l, v)[k] = x,
            Slot::Current => l.circuit.get_or_insert_with(Default::default).current = x,
            Slot::Voltage => l.circuit.get_or_insert_with(Default::default).voltage = x,
        }
    }
}

/// Solve for the new layer with Newton's method. `complete` derives the
/// dependent fields of a trial layer (returning `false` if it is not
/// admissible), `eval` computes the residual groups and `pick` extracts the
/// scaled residual paired with each unknown.
pub(crate) fn newton_layer<R>(
    cur: &StateLayer,
    layout: &Layout,
    typical: &dyn Fn(Slot) -> f64,
    opts: &NewtonOptions,
    complete: &dyn Fn(&mut StateLayer) -> bool,
    eval: &dyn Fn(&StateLayer) -> R,
    pick: &dyn Fn(&R, Slot) -> f64,
) -> Result<(StateLayer, NewtonReport)> {
    let mut trial = cur.clone();
    let mut xs = layout.pack(&mut trial);
    let mut typ = vec![0.0; xs.len()];
    layout.for_each(|i, s| typ[i] = typical(s));
    let bw = layout.bandwidth();
    let rep = newton_solve(&mut xs, bw, bw, &typ, opts, |x, r| {
        layout.unpack(x, &mut trial);
        if !complete(&mut trial) {
            return false;
        }
        let res = eval(&trial);
        layout.for_each(|i, s| r[i] = pick(&res, s));
        true
    })?;
    let mut next = cur.clone();
    layout.unpack(&xs, &mut next);
    if !complete(&mut next) {
        return Err(crate::error::Error::StepRejected("collapsed cell in converged layer".into()));
    }
    Ok((next, rep))
}

/// Largest scaled residual per unknown kind.
pub(crate) fn group_residuals<R>(layout: &Layout, res: &R, pick: &dyn Fn(&R, Slot) -> f64) -> Vec<(String, f64)> {
    let mut groups: Vec<(String, f64)> = Vec::new();
    layout.for_each(|_, s| {
        let name = match s {
            Slot::Node(_, v) => format!("{v:?}"),
            Slot::Cell(_, v) => format!("{v:?}"),
            Slot::Current | Slot::Voltage => "circuit".to_string(),
        };
        let val = pick(res, s).abs();
        match groups.iter_mut().find(|g| g.0 == name) {
            Some(g) => g.1 = g.1.max(val),
            None => groups.push((name, val)),
        }
    });
    groups
}
