//! Finite-difference operators on the staggered mesh: spatial right/left
//! differences, time differences over a window, alpha-weighted layers and
//! the star interpolation of cell values to nodes.

use crate::error::{Error, Result};
use crate::state::{StateLayer, TimeWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alignment {
    Node,
    Cell,
}

impl Alignment {
    fn flip(self) -> Self {
        match self {
            Alignment::Node => Alignment::Cell,
            Alignment::Cell => Alignment::Node,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Alignment::Node => "node",
            Alignment::Cell => "cell",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    pub values: Vec<f64>,
    pub align: Alignment,
}

impl GridFn {
    pub fn node(values: Vec<f64>) -> Self {
        Self { values, align: Alignment::Node }
    }

    pub fn cell(values: Vec<f64>) -> Self {
        Self { values, align: Alignment::Cell }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// How an operator treats the end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPolicy {
    /// Return only the interior-valid entries.
    Interior,
    /// Extend with the given ghost values (left, right).
    Ghost(f64, f64),
    /// Fail if the stencil would leave the grid.
    Error,
}

/// Right difference `(phi_+ - phi)/h`. A node function yields cell values and
/// vice versa; the result has one entry fewer.
pub fn d_s(phi: &GridFn, h: f64) -> Result<GridFn> {
    if phi.len() < 2 {
        return Err(Error::TooShort { len: phi.len(), need: 2 });
    }
    let values = phi.values.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    Ok(GridFn { values, align: phi.align.flip() })
}

/// Left difference `(phi - phi_-)/h`. Same interior values as [`d_s`] but
/// indexed from the right point of each pair; with a ghost policy the result
/// keeps the input length, the ghost supplying `phi_-` at the first entry.
pub fn d_sbar(phi: &GridFn, h: f64, policy: BoundaryPolicy) -> Result<GridFn> {
    match policy {
        BoundaryPolicy::Ghost(left, _) => {
            if phi.is_empty() {
                return Err(Error::TooShort { len: 0, need: 1 });
            }
            let mut values = Vec::with_capacity(phi.len());
            values.push((phi.values[0] - left) / h);
            values.extend(phi.values.windows(2).map(|w| (w[1] - w[0]) / h));
            Ok(GridFn { values, align: phi.align.flip() })
        }
        BoundaryPolicy::Interior | BoundaryPolicy::Error => d_s(phi, h),
    }
}

/// Named grid functions of a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    U,
    V,
    W,
    X,
    Y,
    Z,
    Ey,
    Ez,
    Rho,
    P,
    Eps,
    Hy,
    Hz,
    Temp,
}

impl Field {
    pub fn of(self, l: &StateLayer) -> GridFn {
        use Field::*;
        match self {
            U => GridFn::node(l.u.clone()),
            V => GridFn::node(l.v.clone()),
            W => GridFn::node(l.w.clone()),
            X => GridFn::node(l.x.clone()),
            Y => GridFn::node(l.y.clone()),
            Z => GridFn::node(l.z.clone()),
            Ey => GridFn::node(l.ey.clone()),
            Ez => GridFn::node(l.ez.clone()),
            Rho => GridFn::cell(l.rho.clone()),
            P => GridFn::cell(l.p.clone()),
            Eps => GridFn::cell(l.eps.clone()),
            Hy => GridFn::cell(l.hy.clone()),
            Hz => GridFn::cell(l.hz.clone()),
            Temp => GridFn::cell(l.temp.clone()),
        }
    }
}

fn time_diff(a: &GridFn, b: &GridFn, tau: f64) -> GridFn {
    GridFn { values: a.values.iter().zip(&b.values).map(|(x, y)| (x - y) / tau).collect(), align: a.align }
}

/// Forward time difference `(phi^ - phi)/tau`.
pub fn d_t(win: &TimeWindow, field: Field) -> Result<GridFn> {
    let next = win.next()?;
    Ok(time_diff(&field.of(next), &field.of(win.cur), win.tau))
}

/// Backward time difference `(phi - phi^v)/tau`.
pub fn d_tcheck(win: &TimeWindow, field: Field) -> Result<GridFn> {
    let prev = win.prev()?;
    Ok(time_diff(&field.of(win.cur), &field.of(prev), win.tau))
}

/// Scalar `alpha*next + (1-alpha)*cur`.
#[inline]
pub fn wavg(cur: f64, next: f64, alpha: f64) -> f64 {
    alpha * next + (1.0 - alpha) * cur
}

/// `phi^(alpha) = alpha*phi^ + (1-alpha)*phi`. Weights outside `[0, 1]` are
/// evaluated but logged.
pub fn weighted_avg(phi: &GridFn, phi_next: &GridFn, alpha: f64) -> Result<GridFn> {
    if phi.align != phi_next.align {
        return Err(Error::Alignment { expected: phi.align.name(), got: phi_next.align.name() });
    }
    if phi.len() != phi_next.len() {
        return Err(Error::InvalidParam("weighted_avg: length mismatch".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        log::warn!("time weight {alpha} outside [0, 1]");
    }
    let values = phi.values.iter().zip(&phi_next.values).map(|(&a, &b)| wavg(a, b, alpha)).collect();
    Ok(GridFn { values, align: phi.align })
}

/// Star interpolation of a cell function to the `M + 1` nodes on a uniform
/// mesh: interior node `m` gets `(phi_{m-1/2} + phi_{m+1/2})/2`. End nodes get
/// the adjacent cell value unless ghost values are supplied.
pub fn star(phi: &GridFn, ghosts: Option<(f64, f64)>) -> Result<GridFn> {
    if phi.align != Alignment::Cell {
        return Err(Error::Alignment { expected: "cell", got: phi.align.name() });
    }
    if phi.is_empty() {
        return Err(Error::TooShort { len: 0, need: 1 });
    }
    let n = phi.len();
    let (gl, gr) = ghosts.unwrap_or((phi.values[0], phi.values[n - 1]));
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.5 * (gl + phi.values[0]));
    out.extend(phi.values.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    out.push(0.5 * (phi.values[n - 1] + gr));
    Ok(GridFn::node(out))
}

/// Star interpolation on a general mesh at one node, with `h_left` the
/// width of the cell to the left and `h_right` of the one to the right.
pub fn star_general(left: f64, right: f64, h_left: f64, h_right: f64) -> f64 {
    (h_right * left + h_left * right) / (h_left + h_right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::StateLayer;
    use proptest::prelude::*;

    #[test]
    fn right_difference_examples() {
        let r = d_s(&GridFn::node(vec![0.0, 1.0, 2.0]), 1.0).unwrap();
        assert_eq!(r.values, vec![1.0, 1.0]);
        assert_eq!(r.align, Alignment::Cell);
        let r = d_s(&GridFn::node(vec![1.0, 4.0, 9.0]), 2.0).unwrap();
        assert_eq!(r.values, vec![1.5, 2.5]);
        let r = d_s(&GridFn::cell(vec![3.0; 5]), 0.1).unwrap();
        assert!(r.values.iter().all(|&v| v == 0.0));
        assert!(d_s(&GridFn::node(vec![1.0]), 1.0).is_err());
    }

    #[test]
    fn left_difference_with_ghost() {
        let r = d_sbar(&GridFn::cell(vec![1.0, 3.0]), 1.0, BoundaryPolicy::Ghost(0.0, 0.0)).unwrap();
        assert_eq!(r.values, vec![1.0, 2.0]);
        assert_eq!(r.align, Alignment::Node);
    }

    #[test]
    fn time_differences() {
        let mut a = StateLayer::zeros(2, 0.0);
        let mut b = StateLayer::zeros(2, 1.5);
        a.p = vec![2.0, 2.0];
        b.p = vec![5.0, 2.0];
        let w = TimeWindow::two(&a, &b, 1.5);
        assert_eq!(d_t(&w, Field::P).unwrap().values, vec![2.0, 0.0]);
        assert_eq!(d_t(&w, Field::U).unwrap().values, vec![0.0; 3]);
        assert!(d_tcheck(&w, Field::P).is_err());
        let w = TimeWindow { prev: Some(&a), cur: &b, next: None, tau: 1.5 };
        assert_eq!(d_tcheck(&w, Field::P).unwrap().values, vec![2.0, 0.0]);
    }

    #[test]
    fn weighted_examples() {
        let a = GridFn::cell(vec![2.0]);
        let b = GridFn::cell(vec![4.0]);
        assert_eq!(weighted_avg(&a, &b, 0.0).unwrap().values, vec![2.0]);
        assert_eq!(weighted_avg(&a, &b, 1.0).unwrap().values, vec![4.0]);
        assert_eq!(weighted_avg(&a, &b, 0.5).unwrap().values, vec![3.0]);
        assert!(weighted_avg(&a, &GridFn::node(vec![1.0]), 0.5).is_err());
    }

    #[test]
    fn star_examples() {
        let s = star(&GridFn::cell(vec![1.0, 3.0]), None).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 3.0]);
        let s = star(&GridFn::cell(vec![7.0; 4]), None).unwrap();
        assert!(s.values.iter().all(|&v| v == 7.0));
        assert!(star(&GridFn::node(vec![1.0, 2.0]), None).is_err());
        // general-mesh formula: h_i = 1 (right), h_{i-1} = 3 (left)
        assert_eq!(star_general(2.0, 6.0, 3.0, 1.0), 5.0);
        // reduces to the arithmetic mean on a uniform mesh
        assert_eq!(star_general(2.0, 6.0, 0.5, 0.5), 4.0);
    }

    #[test]
    fn star_and_difference_commute_on_linear() {
        let h = 0.25;
        let nodes: Vec<f64> = (0..9).map(|m| 3.0 * m as f64 * h - 1.0).collect();
        let cells: Vec<f64> = (0..8).map(|c| 3.0 * (c as f64 + 0.5) * h - 1.0).collect();
        // d_s of a node function, starred back to interior nodes
        let a = star(&d_s(&GridFn::node(nodes.clone()), h).unwrap(), None).unwrap();
        // d_s of starred cell function
        let b = d_s(&star(&GridFn::cell(cells), None).unwrap(), h).unwrap();
        for m in 1..8 {
            assert!((a.values[m] - 3.0).abs() < 1e-12);
        }
        for c in 1..7 {
            assert!((b.values[c] - 3.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn d_s_is_linear(
            phi in prop::collection::vec(-10.0f64..10.0, 6),
            psi in prop::collection::vec(-10.0f64..10.0, 6),
            a in -3.0f64..3.0, b in -3.0f64..3.0,
        ) {
            let h = 0.1;
            let comb: Vec<f64> = phi.iter().zip(&psi).map(|(x, y)| a * x + b * y).collect();
            let l = d_s(&GridFn::node(comb), h).unwrap();
            let r1 = d_s(&GridFn::node(phi), h).unwrap();
            let r2 = d_s(&GridFn::node(psi), h).unwrap();
            for i in 0..5 {
                let rhs = a * r1.values[i] + b * r2.values[i];
                prop_assert!((l.values[i] - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
            }
        }

        #[test]
        fn weighted_avg_identity(phi in -100.0f64..100.0, nxt in -100.0f64..100.0, alpha in 0.0f64..1.0) {
            let w = weighted_avg(&GridFn::cell(vec![phi]), &GridFn::cell(vec![nxt]), alpha).unwrap();
            let lhs = w.values[0] - phi;
            let rhs = alpha * (nxt - phi);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + phi.abs() + nxt.abs()));
        }

        /// Summation by parts: sum_c (phi_{c+1} - phi_c) psi_c
        ///   = -sum_{m=1}^{M-1} phi_m (psi_m - psi_{m-1}) + phi_M psi_{M-1} - phi_0 psi_0.
        #[test]
        fn summation_by_parts(
            phi in prop::collection::vec(-5.0f64..5.0, 9),
            psi in prop::collection::vec(-5.0f64..5.0, 8),
        ) {
            let h = 0.3;
            let dphi = d_s(&GridFn::node(phi.clone()), h).unwrap();
            let lhs: f64 = dphi.values.iter().zip(&psi).map(|(d, p)| d * p * h).sum();
            let dpsi = d_s(&GridFn::cell(psi.clone()), h).unwrap();
            let inner: f64 = (1..8).map(|m| phi[m] * dpsi.values[m - 1] * h).sum();
            let rhs = -inner + phi[8] * psi[7] - phi[0] * psi[0];
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
