//! External RLC circuit feeding the right end of the channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::CircuitState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub l0: f64,
    pub r0: f64,
    pub c0: f64,
    pub v0: f64,
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.l0 > 0.0 && self.c0 > 0.0 && self.r0 >= 0.0) {
            return Err(Error::InvalidParam(format!("circuit needs L0, C0 > 0 and R0 >= 0, got {self:?}")));
        }
        Ok(())
    }

    pub fn initial(&self) -> CircuitState {
        CircuitState { current: 0.0, voltage: self.v0 }
    }

    /// Residuals of the midpoint circuit equations, in current and voltage units.
    pub fn residual(&self, cur: CircuitState, next: CircuitState, ez_m: (f64, f64), tau: f64) -> [f64; 2] {
        let jm = 0.5 * (cur.current + next.current);
        let vm = 0.5 * (cur.voltage + next.voltage);
        let em = 0.5 * (ez_m.0 + ez_m.1);
        [
            (self.l0 * (next.current - cur.current) + tau * (self.r0 * jm - vm + em)) / self.l0,
            next.voltage - cur.voltage + tau * jm / self.c0,
        ]
    }

    /// Stored energy `L0 J^2/2 + C0 V^2/2`.
    pub fn energy(&self, s: CircuitState) -> f64 {
        0.5 * self.l0 * s.current * s.current + 0.5 * self.c0 * s.voltage * s.voltage
    }
}

/// Advance the circuit one step for a given `Ez` at the right node on both layers.
pub fn circuit_step(cur: CircuitState, ez_m: (f64, f64), tau: f64, p: &CircuitParams) -> Result<CircuitState> {
    // [a11 a12; a21 a22] (J^, V^) = (b1, b2)
    let a11 = p.l0 + 0.5 * tau * p.r0;
    let a12 = -0.5 * tau;
    let a21 = 0.5 * tau / p.c0;
    let a22 = 1.0;
    let b1 = p.l0 * cur.current - 0.5 * tau * p.r0 * cur.current + 0.5 * tau * cur.voltage
        - 0.5 * tau * (ez_m.0 + ez_m.1);
    let b2 = cur.voltage - 0.5 * tau * cur.current / p.c0;
    let det = a11 * a22 - a12 * a21;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Singular(0));
    }
    Ok(CircuitState { current: (b1 * a22 - a12 * b2) / det, voltage: (a11 * b2 - a21 * b1) / det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> CircuitParams {
        CircuitParams { l0: 0.0035, r0: 1.17, c0: 1.64, v0: 2.6 }
    }

    #[test]
    fn first_step_from_rest() {
        let p = params();
        let tau = 0.003;
        let s = circuit_step(p.initial(), (0.0, 0.0), tau, &p).unwrap();
        let want = tau * p.v0 / (p.l0 + tau * p.r0 / 2.0 + tau * tau / (4.0 * p.c0));
        assert!((s.current - want).abs() < 1e-14 * want);
        assert!(s.current > 0.0);
        let r = p.residual(p.initial(), s, (0.0, 0.0), tau);
        assert!(r[0].abs() < 1e-12 && r[1].abs() < 1e-14);
    }

    #[test]
    fn vanishing_step_is_identity() {
        let p = params();
        let c = CircuitState { current: 0.3, voltage: 1.1 };
        let s = circuit_step(c, (0.2, 0.2), 1e-12, &p).unwrap();
        assert!((s.current - c.current).abs() < 1e-8);
        assert!((s.voltage - c.voltage).abs() < 1e-10);
    }

    #[test]
    fn lossless_oscillation_keeps_energy() {
        let p = CircuitParams { r0: 0.0, ..params() };
        let e0 = p.energy(p.initial());
        let mut s = p.initial();
        for _ in 0..10_000 {
            s = circuit_step(s, (0.0, 0.0), 0.003, &p).unwrap();
        }
        assert!((p.energy(s) - e0).abs() < 1e-12 * e0);
    }
}
