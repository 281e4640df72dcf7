//! Reproducible smooth initial data for verification runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::state::{InitialProfile, PointState};

/// A base state plus a few random low Fourier modes per field.
#[derive(Debug, Clone)]
pub struct SmoothRandom {
    pub base: PointState,
    pub length: f64,
    /// `(amplitude, wave number, phase)` per field, in the order
    /// rho, p, u, v, w, hy, hz.
    pub modes: [Vec<(f64, f64, f64)>; 7],
}

impl SmoothRandom {
    /// Relative perturbation size `amp` of the base values (absolute for
    /// fields whose base is zero).
    pub fn new(seed: u64, base: PointState, length: f64, amp: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = [base.rho, base.p, base.u, base.v, base.w, base.hy, base.hz];
        let modes = std::array::from_fn(|i| {
            let scale = if b[i] == 0.0 { amp } else { amp * b[i].abs() };
            (1..=3)
                .map(|k| {
                    let a = scale * rng.gen_range(-1.0..1.0) / k as f64;
                    (a, k as f64, rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect()
        });
        Self { base, length, modes }
    }

    fn field(&self, i: usize, s: f64) -> f64 {
        let x = std::f64::consts::TAU * s / self.length;
        self.modes[i].iter().map(|(a, k, ph)| a * (k * x + ph).sin()).sum()
    }
}

impl InitialProfile for SmoothRandom {
    fn at(&self, s: f64) -> PointState {
        let b = self.base;
        PointState {
            rho: b.rho + self.field(0, s),
            p: b.p + self.field(1, s),
            u: b.u + self.field(2, s),
            v: b.v + self.field(3, s),
            w: b.w + self.field(4, s),
            hy: b.hy + self.field(5, s),
            hz: b.hz + self.field(6, s),
        }
    }
}

/// Base state used by the verification suites.
pub fn reference_state(transverse: bool) -> PointState {
    PointState {
        rho: 1.0,
        p: 1.0,
        u: 0.0,
        v: if transverse { 0.1 } else { 0.0 },
        w: if transverse { -0.05 } else { 0.0 },
        hy: 0.5,
        hz: if transverse { 0.3 } else { 0.0 },
    }
}
