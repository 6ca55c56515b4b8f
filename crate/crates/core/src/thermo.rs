//! Casimir energies and finite-temperature thermodynamics of a conformally
//! coupled (`α = 0`, so `ω_l = l`) scalar.
//!
//! The Bose sum is reorganised over the thermal winding number `m`:
//!
//! ```text
//! F = E₀ - (1/β) Σ_m K(mβ)/m,   E = E₀ - Σ_m K'(mβ),   S = Σ_m K(mβ)/m - β Σ_m K'(mβ)
//! ```
//!
//! with `K` the cylinder kernel, so `F = E - S/β` term by term.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{HomogeneousKernel, Kernel, LensSpec};
use crate::NeumaierSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("β = {beta} is below β_min = {beta_min}; the winding sum needs ~1/β terms (lower beta_min and raise max_terms to proceed)")]
    SlowConvergence { beta: f64, beta_min: f64 },
    #[error("winding sum not converged after {terms} terms")]
    TermCap { terms: usize },
    #[error("invalid thermal state: {0}")]
    InvalidState(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Real,
    Complex,
}

impl Field {
    pub fn factor(self) -> f64 {
        match self {
            Field::Real => 1.0,
            Field::Complex => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub beta: f64,
    pub field: Field,
    pub series_tol: f64,
    pub beta_min: f64,
    pub max_terms: usize,
}

impl ThermoState {
    pub fn new(beta: f64, field: Field) -> Result<Self, ThermoError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(ThermoError::InvalidState(format!("β = {beta} must be positive")));
        }
        Ok(ThermoState { beta, field, series_tol: 1e-12, beta_min: 1e-2, max_terms: 1_000_000 })
    }

    pub fn real(beta: f64) -> Result<Self, ThermoError> {
        Self::new(beta, Field::Real)
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn field_factor(&self) -> f64 {
        self.field.factor()
    }
}

/// Free energy, internal energy and entropy at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thermodynamics {
    pub beta: f64,
    pub free_energy: f64,
    pub internal_energy: f64,
    pub entropy: f64,
    pub terms: usize,
}

/// Complex-field Casimir energy
/// `[(7 - 120δ² + 240δ⁴)q⁴ + 40(1 - 12δ²)q² + 112] / (2880 q)`.
/// A real scalar carries half of this.
pub fn casimir_energy(q: f64, delta: f64) -> f64 {
    let d2 = delta * delta;
    let q2 = q * q;
    ((7.0 - 120.0 * d2 + 240.0 * d2 * d2) * q2 * q2 + 40.0 * (1.0 - 12.0 * d2) * q2 + 112.0) / (2880.0 * q)
}

/// [`casimir_energy`] in exact rational arithmetic.
pub fn casimir_energy_exact(q: i64, delta: Ratio<i64>) -> Ratio<i64> {
    let q = Ratio::from_integer(q);
    let d2 = delta * delta;
    let int = |n: i64| Ratio::from_integer(n);
    let q2 = q * q;
    ((int(7) - int(120) * d2 + int(240) * d2 * d2) * q2 * q2 + int(40) * (int(1) - int(12) * d2) * q2 + int(112))
        / (int(2880) * q)
}

/// Real-scalar Casimir energy of a homogeneous lens space.
pub fn casimir_energy_real(spec: &LensSpec) -> f64 {
    0.5 * casimir_energy(spec.order(), spec.delta())
}

/// Thermodynamics of a homogeneous lens space.
pub fn thermodynamics(spec: &LensSpec, state: &ThermoState) -> Result<Thermodynamics, ThermoError> {
    let kernel = Kernel::Homogeneous(HomogeneousKernel::new(spec));
    thermodynamics_with(&kernel, casimir_energy_real(spec), state)
}

pub fn free_energy(spec: &LensSpec, state: &ThermoState) -> Result<f64, ThermoError> {
    Ok(thermodynamics(spec, state)?.free_energy)
}

pub fn internal_energy(spec: &LensSpec, state: &ThermoState) -> Result<f64, ThermoError> {
    Ok(thermodynamics(spec, state)?.internal_energy)
}

pub fn entropy(spec: &LensSpec, state: &ThermoState) -> Result<f64, ThermoError> {
    Ok(thermodynamics(spec, state)?.entropy)
}

/// Thermodynamics for any kernel, given its real-scalar Casimir energy.
pub fn thermodynamics_with(kernel: &Kernel, e0_real: f64, state: &ThermoState) -> Result<Thermodynamics, ThermoError> {
    let beta = state.beta;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(ThermoError::InvalidState(format!("β = {beta} must be positive")));
    }
    if beta < state.beta_min {
        return Err(ThermoError::SlowConvergence { beta, beta_min: state.beta_min });
    }
    let zero = Complex64::new(0.0, 0.0);
    // terms decrease at least geometrically with ratio e^{-β}
    let tail_factor = 1.0 / (-(-beta).exp_m1());
    let mut k_sum = NeumaierSum::new();
    let mut dk_sum = NeumaierSum::new();
    let mut terms = 0;
    loop {
        terms += 1;
        if terms > state.max_terms {
            return Err(ThermoError::TermCap { terms: state.max_terms });
        }
        let tau = Complex64::new(terms as f64 * beta, 0.0);
        let k = kernel.k_scaled(tau, zero).re / terms as f64;
        let dk = kernel.dk(tau).re;
        k_sum.add(k);
        dk_sum.add(dk);
        let small = |term: f64, sum: f64| term.abs() * tail_factor <= state.series_tol * sum.abs() || term == 0.0;
        if small(k, k_sum.value()) && small(dk, dk_sum.value()) {
            break;
        }
    }
    let (ks, dks) = (k_sum.value(), dk_sum.value());
    let f = state.field_factor();
    Ok(Thermodynamics {
        beta,
        free_energy: f * (e0_real - ks / beta),
        internal_energy: f * (e0_real - dks),
        entropy: f * (ks - beta * dks),
        terms,
    })
}

/// Leading high-temperature behaviour of a real scalar on a quotient of
/// order `group_order`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighTemperature {
    pub free_energy: f64,
    pub internal_energy: f64,
    pub entropy: f64,
}

pub fn high_temp_asymptotics(group_order: f64, beta: f64, zprime0: f64) -> HighTemperature {
    let p4 = PI.powi(4);
    HighTemperature {
        free_energy: -p4 / (45.0 * group_order) / beta.powi(4) - 0.5 * zprime0 / beta,
        internal_energy: p4 / (15.0 * group_order) / beta.powi(4),
        entropy: 4.0 * p4 / (45.0 * group_order) / beta.powi(3) + 0.5 * zprime0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casimir_values() {
        assert!((casimir_energy(1.0, 0.5) - 1.0 / 120.0).abs() < 1e-17);
        assert!((casimir_energy(2.0, 0.5) + 7.0 / 120.0).abs() < 1e-16);
        assert_eq!(casimir_energy(3.0, 0.3), casimir_energy(3.0, -0.3));
        assert_eq!(casimir_energy_exact(1, Ratio::new(1, 2)), Ratio::new(1, 120));
        assert_eq!(casimir_energy_exact(1, Ratio::new(-1, 2)), Ratio::new(1, 120));
    }

    #[test]
    fn casimir_is_tau_squared_laurent_coefficient() {
        for (q, r) in [(1u32, 0.0), (2, 0.0), (4, 1.0), (5, 2.0), (7, 3.5)] {
            let spec = LensSpec::new(q, r).unwrap();
            let kernel = HomogeneousKernel::new(&spec);
            let e0 = casimir_energy_real(&spec);
            assert!((kernel.laurent_coefficient(2) - e0).abs() < 1e-13 * e0.abs().max(1.0), "q={q} r={r}");
        }
    }

    #[test]
    fn low_temperature_limit() {
        let spec = LensSpec::untwisted(1);
        let state = ThermoState::real(50.0).unwrap();
        let t = thermodynamics(&spec, &state).unwrap();
        let e0 = casimir_energy_real(&spec);
        assert!((t.free_energy - e0).abs() < 1e-15);
        assert!((t.internal_energy - e0).abs() < 1e-15);
        assert!(t.entropy.abs() < 1e-15);
    }

    #[test]
    fn identity_and_positivity() {
        let spec = LensSpec::new(4, 1.0).unwrap();
        for beta in [0.05, 0.3, 1.0, 4.0] {
            let state = ThermoState::new(beta, Field::Complex).unwrap();
            let t = thermodynamics(&spec, &state).unwrap();
            let lhs = t.free_energy;
            let rhs = t.internal_energy - t.entropy / beta;
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
            assert!(t.entropy >= 0.0);
        }
    }

    #[test]
    fn small_beta_is_refused() {
        let spec = LensSpec::untwisted(1);
        let err = free_energy(&spec, &ThermoState::real(1e-3).unwrap()).unwrap_err();
        assert!(matches!(err, ThermoError::SlowConvergence { .. }));
        assert!(ThermoState::real(-1.0).is_err());
    }

    #[test]
    fn asymptotic_entropy_difference() {
        let a = high_temp_asymptotics(2.0, 0.1, 0.3);
        let b = high_temp_asymptotics(2.0, 0.2, 0.3);
        let c = high_temp_asymptotics(2.0, 0.1, -5.0);
        let d = high_temp_asymptotics(2.0, 0.2, -5.0);
        assert!(((a.entropy - b.entropy) - (c.entropy - d.entropy)).abs() < 1e-9);
    }
}
