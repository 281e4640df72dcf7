//! Equations of state and conductivity models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Internal-energy closure.
///
/// The entropy-preserving kinds express `eps` on a layer through the
/// alpha-weighted pressure `p^(alpha)` of the step leaving that layer and the
/// densities of both layers, chosen so that the shifted energy equation of the
/// infinite-conductivity scheme telescopes into a discrete entropy law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EosKind {
    Continuum { gamma: f64 },
    EntropyInteger { gamma: u32 },
    Entropy53,
}

impl EosKind {
    pub fn gamma(&self) -> f64 {
        match *self {
            EosKind::Continuum { gamma } => gamma,
            EosKind::EntropyInteger { gamma } => gamma as f64,
            EosKind::Entropy53 => 5.0 / 3.0,
        }
    }

    pub fn is_entropy_preserving(&self) -> bool {
        !matches!(self, EosKind::Continuum { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EosKind::Continuum { gamma } if !(gamma > 1.0) => {
                Err(Error::UnsupportedEos(format!("gamma must exceed 1, got {gamma}")))
            }
            EosKind::EntropyInteger { gamma } if gamma < 2 => {
                Err(Error::UnsupportedEos(format!("integer gamma must be at least 2, got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    /// Entropy-preserving closure matching a (possibly rational) gamma.
    pub fn entropy_preserving_for(gamma: f64) -> Result<Self> {
        if (gamma - 5.0 / 3.0).abs() < 1e-12 {
            return Ok(EosKind::Entropy53);
        }
        let g = gamma.round();
        if (gamma - g).abs() < 1e-12 && g >= 2.0 {
            return Ok(EosKind::EntropyInteger { gamma: g as u32 });
        }
        Err(Error::UnsupportedEos(format!("no entropy-preserving closure for gamma = {gamma}")))
    }
}

pub fn eps_continuum(p: f64, rho: f64, gamma: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParam(format!("density must be positive, got {rho}")));
    }
    if !(gamma > 1.0) {
        return Err(Error::UnsupportedEos(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok(p / ((gamma - 1.0) * rho))
}

/// `sum_{k=0}^{g-2} a^{g-k-1} b^{k+1}`.
fn power_sum(g: u32, a: f64, b: f64) -> f64 {
    (0..=g - 2).map(|k| a.powi((g - k - 1) as i32) * b.powi((k + 1) as i32)).sum()
}

/// Ratio `eps / p^(alpha)` of the discrete closure for densities `rho` (this
/// layer) and `rho_next` (next layer).
pub fn eps_factor(rho: f64, rho_next: f64, kind: EosKind) -> f64 {
    match kind {
        EosKind::Continuum { gamma } => 1.0 / ((gamma - 1.0) * rho),
        // sum_k rho^^{g-k-1} rho^{k-g+2} = power_sum(rho^, rho) / rho^{g-1}
        EosKind::EntropyInteger { gamma } => rho.powi(gamma as i32 - 1) / power_sum(gamma, rho_next, rho),
        EosKind::Entropy53 => {
            let a = rho.cbrt();
            let b = rho_next.cbrt();
            (b * b + a * b + a * a) / (a * rho_next * (a + b))
        }
    }
}

/// Ratio `S / p^v(alpha)` of the discrete entropy for densities `rho` (this
/// layer) and `rho_prev` (previous layer).
pub fn entropy_factor(rho: f64, rho_prev: f64, kind: EosKind) -> f64 {
    match kind {
        EosKind::EntropyInteger { gamma } => (gamma as f64 - 1.0) / power_sum(gamma, rho, rho_prev),
        EosKind::Entropy53 => {
            let a = rho.cbrt();
            let c = rho_prev.cbrt();
            2.0 / 3.0 * (c * c + a * c + a * a) / (rho * rho_prev * (a + c))
        }
        EosKind::Continuum { gamma } => {
            let g = gamma.round();
            if (gamma - 5.0 / 3.0).abs() < 1e-12 {
                entropy_factor(rho, rho_prev, EosKind::Entropy53)
            } else if (gamma - g).abs() < 1e-12 && g >= 2.0 {
                entropy_factor(rho, rho_prev, EosKind::EntropyInteger { gamma: g as u32 })
            } else {
                1.0 / (rho * rho_prev).powf(0.5 * gamma)
            }
        }
    }
}

/// Discrete internal energy from the weighted pressure and the densities of
/// the current and next layers.
pub fn eps_discrete(p_alpha: f64, rho: f64, rho_next: f64, kind: EosKind) -> Result<f64> {
    kind.validate()?;
    if !(rho > 0.0 && rho_next > 0.0) {
        return Err(Error::InvalidParam("densities must be positive".into()));
    }
    Ok(p_alpha * eps_factor(rho, rho_next, kind))
}

/// Discrete entropy `(gamma-1) p^v(alpha) / sum_k rho^{g-k-1} rho^v^{k+1}` (or
/// its gamma = 5/3 analogue), constant along pathlines on exact solutions of
/// the entropy-preserving scheme.
pub fn entropy_discrete(p_alpha_prev: f64, rho: f64, rho_prev: f64, kind: EosKind) -> Result<f64> {
    kind.validate()?;
    if !(rho > 0.0 && rho_prev > 0.0) {
        return Err(Error::InvalidParam("densities must be positive".into()));
    }
    Ok(p_alpha_prev * entropy_factor(rho, rho_prev, kind))
}

/// Electrical conductivity as a function of density and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConductivityModel {
    Constant { sigma0: f64 },
    /// `sigma = rho`.
    PowerDensity,
    /// `sigma = sigma0 * T^{3/2} * exp(-beta * rho0 / rho)`.
    Exponential { sigma0: f64, beta: f64, rho0: f64 },
}

impl Default for ConductivityModel {
    fn default() -> Self {
        ConductivityModel::Exponential { sigma0: 10.0, beta: 5.0, rho0: 1.0 }
    }
}

impl ConductivityModel {
    /// Conductivity and whether the temperature had to be clamped at zero.
    pub fn eval(&self, rho: f64, temp: f64) -> (f64, bool) {
        let clamped = temp < 0.0;
        let t = temp.max(0.0);
        let s = match *self {
            ConductivityModel::Constant { sigma0 } => sigma0,
            ConductivityModel::PowerDensity => rho,
            ConductivityModel::Exponential { sigma0, beta, rho0 } => sigma0 * t * t.sqrt() * (-beta * rho0 / rho).exp(),
        };
        (s, clamped)
    }

    pub fn sigma(&self, rho: f64, temp: f64) -> f64 {
        self.eval(rho, temp).0
    }

    /// The model seen after the rescaling `rho -> k rho`, `sigma -> sigma/k`
    /// with temperature unchanged. `sigma = rho` has no image in the family.
    pub fn rescaled(&self, k: f64) -> Result<Self> {
        match *self {
            ConductivityModel::Constant { sigma0 } => Ok(ConductivityModel::Constant { sigma0: sigma0 / k }),
            ConductivityModel::PowerDensity => {
                Err(Error::InvalidParam("sigma = rho is not preserved by density rescaling".into()))
            }
            ConductivityModel::Exponential { sigma0, beta, rho0 } => {
                Ok(ConductivityModel::Exponential { sigma0: sigma0 / k, beta, rho0: rho0 * k })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rescaled_conductivity_divides_by_k() {
        let k = 4.0 * std::f64::consts::PI;
        for m in [ConductivityModel::Constant { sigma0: 3.0 }, ConductivityModel::Exponential { sigma0: 3.0, beta: 0.7, rho0: 1.2 }] {
            let r = m.rescaled(k).unwrap();
            for (rho, t) in [(0.5, 1.0), (2.0, 0.3)] {
                assert!((r.sigma(k * rho, t) - m.sigma(rho, t) / k).abs() < 1e-14);
            }
        }
        assert!(ConductivityModel::PowerDensity.rescaled(k).is_err());
    }

    #[test]
    fn continuum_examples() {
        assert_eq!(eps_continuum(2.0, 1.0, 3.0).unwrap(), 1.0);
        assert_eq!(eps_continuum(0.0, 1.0, 3.0).unwrap(), 0.0);
        assert!((eps_continuum(0.0056, 1.0, 5.0 / 3.0).unwrap() - 0.0084).abs() < 1e-15);
        assert!(eps_continuum(1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn discrete_eps_examples() {
        let g2 = EosKind::EntropyInteger { gamma: 2 };
        assert_eq!(eps_discrete(2.0, 1.0, 4.0, g2).unwrap(), 0.5);
        let g3 = EosKind::EntropyInteger { gamma: 3 };
        assert!((eps_discrete(6.0, 1.0, 2.0, g3).unwrap() - 1.0).abs() < 1e-15);
        for g in 2..=5u32 {
            let k = EosKind::EntropyInteger { gamma: g };
            let e = eps_discrete(1.7, 1.3, 1.3, k).unwrap();
            assert!((e - 1.7 / ((g as f64 - 1.0) * 1.3)).abs() < 1e-14);
        }
        let e = eps_discrete(0.8, 1.2, 1.2, EosKind::Entropy53).unwrap();
        assert!((e - 1.5 * 0.8 / 1.2).abs() < 1e-14);
        assert!(eps_discrete(1.0, 1.0, 1.0, EosKind::EntropyInteger { gamma: 1 }).is_err());
    }

    #[test]
    fn discrete_entropy_examples() {
        let g2 = EosKind::EntropyInteger { gamma: 2 };
        assert_eq!(entropy_discrete(2.0, 1.0, 2.0, g2).unwrap(), 1.0);
        let g3 = EosKind::EntropyInteger { gamma: 3 };
        assert_eq!(entropy_discrete(4.0, 1.0, 1.0, g3).unwrap(), 4.0);
        for g in 2..=4u32 {
            let k = EosKind::EntropyInteger { gamma: g };
            let s = entropy_discrete(0.9, 1.4, 1.4, k).unwrap();
            assert!((s - 0.9 / 1.4f64.powi(g as i32)).abs() < 1e-14);
        }
    }

    #[test]
    fn rational_gamma_lookup() {
        assert_eq!(EosKind::entropy_preserving_for(5.0 / 3.0).unwrap(), EosKind::Entropy53);
        assert_eq!(EosKind::entropy_preserving_for(3.0).unwrap(), EosKind::EntropyInteger { gamma: 3 });
        assert!(EosKind::entropy_preserving_for(1.4).is_err());
    }

    #[test]
    fn conductivity_examples() {
        assert_eq!(ConductivityModel::PowerDensity.sigma(2.0, 1.0), 2.0);
        let m0 = ConductivityModel::Exponential { sigma0: 10.0, beta: 0.0, rho0: 1.0 };
        assert!((m0.sigma(0.3, 2.0) - 10.0 * 2f64.powf(1.5)).abs() < 1e-12);
        let m = ConductivityModel::default();
        let s = m.sigma(1.0, 3.0);
        assert!((s - 10.0 * 3f64.powf(1.5) * (-5f64).exp()).abs() < 1e-12);
        assert!((s - 0.35).abs() < 0.005);
        assert!(m.sigma(0.2, 0.0056) < 1e-12);
        let (v, clamped) = m.eval(1.0, -0.1);
        assert_eq!(v, 0.0);
        assert!(clamped);
    }

    /// Independent evaluation of the general-gamma denominator directly from
    /// the sum written with negative exponents.
    fn negative_exponent_denominator(g: u32, rho: f64, rho_next: f64) -> f64 {
        (0..=g - 2)
            .map(|k| rho_next.powi((g - k - 1) as i32) * rho.powi(k as i32 - g as i32 + 2))
            .sum()
    }

    proptest! {
        #[test]
        fn denominator_identity(g in 2u32..=6, rho in 0.2f64..5.0, rn in 0.2f64..5.0, p in 0.01f64..10.0) {
            let k = EosKind::EntropyInteger { gamma: g };
            let eps = eps_discrete(p, rho, rn, k).unwrap();
            let back = eps * negative_exponent_denominator(g, rho, rn);
            prop_assert!((back - p).abs() <= 1e-12 * p.max(1.0));
        }

        #[test]
        fn first_order_consistency(g in 2u32..=4, rho in 0.5f64..2.0, p in 0.1f64..2.0) {
            // Richardson: (e(d) - e0) / (e(d/2) - e0) -> 2 for a first-order error
            let k = EosKind::EntropyInteger { gamma: g };
            let e0 = eps_continuum(p, rho, g as f64).unwrap();
            let d = 1e-3;
            let e1 = eps_discrete(p, rho, rho + d, k).unwrap() - e0;
            let e2 = eps_discrete(p, rho, rho + d / 2.0, k).unwrap() - e0;
            prop_assert!((e1 / e2 - 2.0).abs() < 0.01);
        }

        #[test]
        fn sigma_monotone_in_t(rho in 0.05f64..5.0, t1 in 0.0f64..5.0, dt in 0.0f64..5.0) {
            for m in [ConductivityModel::default(), ConductivityModel::PowerDensity, ConductivityModel::Constant { sigma0: 2.0 }] {
                let a = m.sigma(rho, t1);
                let b = m.sigma(rho, t1 + dt);
                prop_assert!(a >= 0.0 && b >= a);
            }
        }
    }
}
