//! Ghost-cell and Dirichlet closures at the two ends of the mass interval.

use serde::{Deserialize, Serialize};

use crate::state::StateLayer;

/// Value of a cell field in the ghost cell beyond an end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CellGhost {
    /// Zero gradient: the ghost repeats the adjacent cell.
    #[default]
    Copy,
    Fixed(f64),
    /// `kappa * J` with `J` the circuit current of the same layer.
    CircuitCurrent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Side {
    pub p: CellGhost,
    pub hy: CellGhost,
    pub hz: CellGhost,
    /// Dirichlet values imposed at the end node.
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub w: Option<f64>,
    pub ey: Option<f64>,
    pub ez: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct BoundaryClosure {
    pub left: Side,
    pub right: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellField {
    P,
    Hy,
    Hz,
}

impl BoundaryClosure {
    /// Rigid walls with zero-gradient ghosts.
    pub fn walls() -> Self {
        let side = Side { u: Some(0.0), ..Side::default() };
        Self { left: side, right: side }
    }

    /// Left end open to vacuum, right end a conducting wall fed by the circuit.
    pub fn railgun() -> Self {
        let left = Side {
            p: CellGhost::Fixed(0.0),
            hy: CellGhost::Fixed(0.0),
            hz: CellGhost::Fixed(0.0),
            ..Side::default()
        };
        let right = Side {
            hy: CellGhost::CircuitCurrent,
            hz: CellGhost::Fixed(0.0),
            u: Some(0.0),
            ey: Some(0.0),
            ..Side::default()
        };
        Self { left, right }
    }

    pub fn uses_circuit(&self) -> bool {
        [self.left, self.right]
            .iter()
            .any(|s| [s.p, s.hy, s.hz].contains(&CellGhost::CircuitCurrent))
    }

    /// Ghost values `(left, right)` of a cell field on `layer`.
    pub fn cell_ghosts(&self, field: CellField, layer: &StateLayer, kappa: f64) -> (f64, f64) {
        let (vals, gl, gr) = match field {
            CellField::P => (&layer.p, self.left.p, self.right.p),
            CellField::Hy => (&layer.hy, self.left.hy, self.right.hy),
            CellField::Hz => (&layer.hz, self.left.hz, self.right.hz),
        };
        let j = layer.circuit.map_or(0.0, |c| c.current);
        let pick = |g: CellGhost, adj: f64| match g {
            CellGhost::Copy => adj,
            CellGhost::Fixed(v) => v,
            CellGhost::CircuitCurrent => kappa * j,
        };
        (pick(gl, vals[0]), pick(gr, vals[vals.len() - 1]))
    }
}

/// `vals` padded with one ghost on each side.
pub fn padded(vals: &[f64], ghosts: (f64, f64)) -> Vec<f64> {
    let mut out = Vec::with_capacity(vals.len() + 2);
    out.push(ghosts.0);
    out.extend_from_slice(vals);
    out.push(ghosts.1);
    out
}

/// Node average of a padded cell array: entry `m` is `(a_{m-1} + a_m)/2`.
pub fn star_padded(pad: &[f64]) -> Vec<f64> {
    pad.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Backward difference at nodes of a padded cell array.
pub fn dsbar_padded(pad: &[f64], h: f64) -> Vec<f64> {
    pad.windows(2).map(|w| (w[1] - w[0]) / h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::CircuitState;

    #[test]
    fn ghost_values() {
        let mut l = StateLayer::zeros(3, 0.0);
        l.hy = vec![1.0, 2.0, 3.0];
        l.circuit = Some(CircuitState { current: 0.5, voltage: 1.0 });
        let bc = BoundaryClosure::railgun();
        assert_eq!(bc.cell_ghosts(CellField::Hy, &l, 2.0), (0.0, 1.0));
        assert_eq!(BoundaryClosure::walls().cell_ghosts(CellField::Hy, &l, 2.0), (1.0, 3.0));
        assert!(bc.uses_circuit());
        assert!(!BoundaryClosure::walls().uses_circuit());
    }

    #[test]
    fn padded_helpers() {
        let pad = padded(&[1.0, 3.0], (0.0, 5.0));
        assert_eq!(star_padded(&pad), vec![0.5, 2.0, 4.0]);
        assert_eq!(dsbar_padded(&pad, 0.5), vec![2.0, 4.0, 4.0]);
    }
}
