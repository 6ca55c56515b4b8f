//! Zeta-function continuations to `s = 0` and `s = 1` by contour integration
//! of the cylinder kernel.
//!
//! Every family uses the single form
//!
//! ```text
//! Z'(0) = ∫₀^∞ dx Re[ 2 K(τ) cosh(ατ) / τ ],   τ = x + iΔ,
//! ```
//!
//! for a real scalar with eigenvalues `l² - α²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{default_line, integrate_semi_infinite, ContourLine, QuadratureError};
use crate::kernels::{HomogeneousKernel, Kernel, KernelError, LensSpec, Quotient};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("unsupported quotient: {0}")]
    Unsupported(String),
}

/// The eigenvalue shift `α²`; eigenvalues are `l² - α²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    alpha_sq: f64,
}

impl Coupling {
    pub fn new(alpha_sq: f64) -> Result<Self, DetError> {
        if !alpha_sq.is_finite() {
            return Err(DetError::InvalidCoupling(format!("α² = {alpha_sq} is not finite")));
        }
        Ok(Coupling { alpha_sq })
    }

    pub fn conformal4() -> Self {
        Coupling { alpha_sq: 0.0 }
    }

    pub fn conformal3() -> Self {
        Coupling { alpha_sq: 0.25 }
    }

    pub fn minimal() -> Self {
        Coupling { alpha_sq: 1.0 }
    }

    /// `α² = 1/4 - μ²`.
    pub fn mass(mu: f64) -> Self {
        Coupling { alpha_sq: 0.25 - mu * mu }
    }

    /// `α² = -m²`.
    pub fn imaginary_mass(m: f64) -> Self {
        Coupling { alpha_sq: -m * m }
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    /// Principal square root of `α²`, imaginary for negative `α²`.
    pub fn alpha(&self) -> Complex64 {
        if self.alpha_sq >= 0.0 {
            Complex64::new(self.alpha_sq.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-self.alpha_sq).sqrt())
        }
    }

    fn require_contour(&self) -> Result<(), DetError> {
        if self.alpha_sq >= 1.0 {
            return Err(DetError::InvalidCoupling(format!(
                "α² = {} ≥ 1 gives a zero or negative mode; only the minimal-coupling path handles α² = 1",
                self.alpha_sq
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// `Z'(0)`.
    #[serde(rename = "zprime0")]
    ZPrime0,
    /// `Z(1)`.
    #[serde(rename = "z1")]
    ZAt1,
    /// `Z̄'(0)`, with the `l = 1` mode removed.
    #[serde(rename = "subtracted-zprime0")]
    SubtractedZPrime0,
    /// Helmholtz free energy at inverse temperature `β`.
    FreeEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    pub field: &'static str,
    pub normalization: &'static str,
}

impl Convention {
    pub const CANONICAL: Convention = Convention { field: "real-scalar", normalization: "canonical" };
}

impl Default for Convention {
    fn default() -> Self {
        Self::CANONICAL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub convention: Convention,
    pub quantity: Quantity,
    pub quotient: Option<Quotient>,
    pub coupling: Option<Coupling>,
    /// Odd-order homogeneous lens spaces are outside the binary-lift setting
    /// of the generating function; the formula is applied regardless.
    pub formula_extended: bool,
    /// Non-integer lens order: the closed forms are evaluated but describe no
    /// quotient space.
    pub non_integer_order: bool,
}

impl SpectralResult {
    pub(crate) fn new(value: f64, abs_error_estimate: f64, quantity: Quantity) -> Self {
        SpectralResult {
            value,
            abs_error_estimate,
            convention: Convention::CANONICAL,
            quantity,
            quotient: None,
            coupling: None,
            formula_extended: false,
            non_integer_order: false,
        }
    }

    pub(crate) fn describing(mut self, quotient: &Quotient, coupling: &Coupling) -> Self {
        if let Quotient::Lens(spec) = quotient {
            self.formula_extended = spec.is_formula_extended();
            self.non_integer_order = spec.integer_order().is_none();
        }
        self.quotient = Some(quotient.clone());
        self.coupling = Some(*coupling);
        self
    }

    /// `log det = -Z'(0)`; only meaningful for the `Z'(0)` quantities.
    pub fn logdet(&self) -> f64 {
        -self.value
    }

    pub fn det(&self) -> f64 {
        self.logdet().exp()
    }

    /// Absolute error of [`det`](Self::det) propagated from the `Z'(0)` error.
    pub fn det_error(&self) -> f64 {
        self.det() * self.abs_error_estimate
    }
}

fn resolve_line(kernel: &Kernel, quotient: &Quotient, coupling: &Coupling, line: Option<&ContourLine>) -> Result<ContourLine, DetError> {
    let line = match line {
        Some(line) => *line,
        None => default_line(quotient, coupling)?,
    };
    let gap = kernel.pole_gap();
    if !(line.delta > 0.0 && line.delta < gap) {
        return Err(QuadratureError::InvalidLine(format!(
            "offset Δ = {} must lie strictly between 0 and the pole gap {gap}",
            line.delta
        ))
        .into());
    }
    kernel.check(Complex64::new(0.0, line.delta))?;
    Ok(line)
}

/// `Z'(0)` for any quotient family at a coupling with `α² < 1`.
pub fn zprime0(quotient: &Quotient, coupling: &Coupling, line: Option<&ContourLine>) -> Result<SpectralResult, DetError> {
    coupling.require_contour()?;
    let kernel = Kernel::for_quotient(quotient);
    let line = resolve_line(&kernel, quotient, coupling, line)?;
    let alpha = coupling.alpha();
    // 2K cosh(ατ) = K e^{ατ} + K e^{-ατ}
    let integrand = |x: f64| {
        let tau = line.point(x);
        ((kernel.k_scaled(tau, alpha) + kernel.k_scaled(tau, -alpha)) / tau).re
    };
    let r = integrate_semi_infinite(integrand, &line)?;
    Ok(SpectralResult::new(r.value, r.abs_error_estimate, Quantity::ZPrime0).describing(quotient, coupling))
}

/// `Z(1)` of a homogeneous lens space, `∫₀^∞ dx Re[H(τ) cosh(ατ)]`.
pub fn z_at_1(spec: &LensSpec, coupling: &Coupling, line: Option<&ContourLine>) -> Result<SpectralResult, DetError> {
    coupling.require_contour()?;
    if coupling.alpha_sq() < 0.0 {
        return Err(DetError::InvalidCoupling("Z(1) is implemented for 0 ≤ α² < 1".into()));
    }
    let quotient = Quotient::Lens(*spec);
    let kernel = HomogeneousKernel::new(spec);
    let line = resolve_line(&Kernel::Homogeneous(kernel.clone()), &quotient, coupling, line)?;
    let alpha = coupling.alpha();
    let integrand = |x: f64| {
        let tau = line.point(x);
        (0.5 * (kernel.h_scaled(tau, alpha) + kernel.h_scaled(tau, -alpha))).re
    };
    let r = integrate_semi_infinite(integrand, &line)?;
    Ok(SpectralResult::new(r.value, r.abs_error_estimate, Quantity::ZAt1).describing(&quotient, coupling))
}

/// `(π/4q) Σ_{p=1}^{q-1} cosec(πp/q)` for the lens space of even order `2q`.
pub fn z1_closed_form_even(two_q: u32) -> Result<f64, DetError> {
    if two_q == 0 || two_q % 2 == 1 {
        return Err(DetError::Unsupported(format!("closed form needs an even positive order, got {two_q}")));
    }
    let q = (two_q / 2) as f64;
    let sum: f64 = (1..two_q / 2).map(|p| 1.0 / (PI * p as f64 / q).sin()).sum();
    Ok(PI / (4.0 * q) * sum)
}

const BRACKET_SERIES_LIMIT: f64 = 0.5;

/// `2ατ sinh ατ - 2 cosh ατ + 2 - α²τ²`, stable for small `ατ`.
pub fn small_tau_bracket(alpha: f64, tau: f64) -> f64 {
    let x = alpha * tau;
    if x.abs() < BRACKET_SERIES_LIMIT {
        // Σ_{k≥2} 2(2k-1)/(2k)! x^{2k}
        let x2 = x * x;
        let mut term = x2 * x2 / 24.0;
        let mut sum = 0.0;
        for k in 2..20 {
            let kf = k as f64;
            sum += 2.0 * (2.0 * kf - 1.0) * term;
            if term < 1e-18 * sum.abs() {
                break;
            }
            term *= x2 / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        }
        return sum;
    }
    2.0 * x * x.sinh() - 2.0 * x.cosh() + 2.0 - x * x
}

fn require_untwisted(spec: &LensSpec) -> Result<(), DetError> {
    if !spec.is_untwisted() {
        return Err(DetError::Unsupported("the zero-mode subtraction needs an untwisted lens space".into()));
    }
    Ok(())
}

/// `Z̄'(0)` with the single `l = 1` mode removed, for `0 ≤ α ≤ 1`, obtained by
/// integrating back in `α²` from the conformal point:
///
/// ```text
/// Z̄'(0,α) = ∫₀^∞ dτ/τ² [H - e^{-τ}] B_α(τ) + α²(Z(1,0) - 1) + Z'(0,0)
/// ```
pub fn subtracted_zprime0(spec: &LensSpec, alpha: f64, line: Option<&ContourLine>) -> Result<SpectralResult, DetError> {
    require_untwisted(spec)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(DetError::InvalidCoupling(format!("α = {alpha} outside [0, 1]")));
    }
    let conformal = Coupling::conformal4();
    let z1 = z_at_1(spec, &conformal, line)?;
    let zp = zprime0(&Quotient::Lens(*spec), &conformal, line)?;
    let kernel = HomogeneousKernel::new(spec);
    let q = spec.order();
    let integrand = |tau: f64| {
        if tau < 1e-6 {
            return alpha.powi(4) / (4.0 * q);
        }
        let t = Complex64::new(tau, 0.0);
        let hbar = kernel.h(t).re - (-tau).exp();
        hbar * small_tau_bracket(alpha, tau) / (tau * tau)
    };
    let mut real_line = ContourLine::real_axis(2.0 - alpha - 0.25);
    if let Some(l) = line {
        real_line = real_line.with_tolerances(l.abs_tol, l.rel_tol);
    }
    let r = integrate_semi_infinite(integrand, &real_line)?;
    let a2 = alpha * alpha;
    let value = r.value + a2 * (z1.value - 1.0) + zp.value;
    let error = r.abs_error_estimate + a2 * z1.abs_error_estimate + zp.abs_error_estimate;
    let coupling = Coupling { alpha_sq: a2 };
    Ok(SpectralResult::new(value, error, Quantity::SubtractedZPrime0).describing(&Quotient::Lens(*spec), &coupling))
}

/// `Z̄'(0, q, 1)` at minimal coupling.
pub fn minimal_logdet(spec: &LensSpec, line: Option<&ContourLine>) -> Result<SpectralResult, DetError> {
    subtracted_zprime0(spec, 1.0, line)
}

/// `Σ_{l≥2} D_l (l² - α²)^{-2}`, the second `α²`-derivative of `Z̄'(0)`,
/// evaluated as `½ ∫₀^∞ τ [H - e^{-τ}] sinh(ατ)/α dτ`.
pub fn resolvent_square_sum(spec: &LensSpec, alpha: f64) -> Result<SpectralResult, DetError> {
    require_untwisted(spec)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(DetError::InvalidCoupling(format!("α = {alpha} outside [0, 1)")));
    }
    let kernel = HomogeneousKernel::new(spec);
    let q = spec.order();
    let integrand = |tau: f64| {
        let sinhc = if alpha * tau < 1e-8 { tau } else { (alpha * tau).sinh() / alpha };
        if tau < 1e-6 {
            return 0.5 / q;
        }
        let hbar = kernel.h(Complex64::new(tau, 0.0)).re - (-tau).exp();
        0.5 * tau * hbar * sinhc
    };
    let r = integrate_semi_infinite(integrand, &ContourLine::real_axis(2.0 - alpha - 0.25))?;
    let coupling = Coupling { alpha_sq: alpha * alpha };
    Ok(SpectralResult::new(r.value, r.abs_error_estimate, Quantity::SubtractedZPrime0)
        .describing(&Quotient::Lens(*spec), &coupling))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens(q: u32) -> Quotient {
        Quotient::Lens(LensSpec::untwisted(q))
    }

    #[test]
    fn sphere_conformal_value() {
        // -ζ(3)/(2π²) for the conformal scalar on S³
        let zeta3 = 1.202_056_903_159_594_3;
        let r = zprime0(&lens(1), &Coupling::conformal4(), None).unwrap();
        assert!((r.value + zeta3 / (2.0 * PI * PI)).abs() < 1e-9, "{}", r.value);
        assert!(r.abs_error_estimate < 1e-9);
    }

    #[test]
    fn sphere_conformal3_value() {
        let zeta3 = 1.202_056_903_159_594_3;
        // free energy F = -Z'(0)/2 of the conformally coupled scalar
        let free_energy = 2f64.ln() / 8.0 - 3.0 * zeta3 / (16.0 * PI * PI);
        let r = zprime0(&lens(1), &Coupling::conformal3(), None).unwrap();
        assert!((r.value + 2.0 * free_energy).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn det_is_exp_minus_zprime() {
        let r = zprime0(&lens(3), &Coupling::conformal4(), None).unwrap();
        assert!((r.det() - (-r.value).exp()).abs() < 1e-15);
        assert_eq!(r.logdet(), -r.value);
        assert!(r.formula_extended);
    }

    #[test]
    fn closed_form_z1() {
        assert_eq!(z1_closed_form_even(2).unwrap(), 0.0);
        assert!((z1_closed_form_even(4).unwrap() - PI / 8.0).abs() < 1e-15);
        let s3 = 3f64.sqrt();
        let expected = PI / 24.0 * (2.0 + 2.0 / s3 + 1.0 + 2.0 / s3 + 2.0);
        assert!((z1_closed_form_even(12).unwrap() - expected).abs() < 1e-14);
        assert!(z1_closed_form_even(7).is_err());
    }

    #[test]
    fn bracket_values() {
        assert_eq!(small_tau_bracket(1.0, 0.0), 0.0);
        let b = small_tau_bracket(1.0, 1e-3);
        // τ⁴/4 + τ⁶/72 + ...
        let reference = 2.5e-13 + 1e-18 / 72.0;
        assert!((b / reference - 1.0).abs() < 1e-8);
        let direct = 4.0 * 2f64.sinh() - 2.0 * 2f64.cosh() + 2.0 - 4.0;
        assert!((small_tau_bracket(1.0, 2.0) - direct).abs() < 1e-13);
        assert!((small_tau_bracket(1.0, 2.0) - 4.984).abs() < 1e-3);
        // both branches agree at the switch
        let lo = small_tau_bracket(1.0, BRACKET_SERIES_LIMIT * (1.0 - 1e-12));
        let x = BRACKET_SERIES_LIMIT;
        let hi = 2.0 * x * x.sinh() - 2.0 * x.cosh() + 2.0 - x * x;
        assert!((lo / hi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coupling_rejections() {
        assert!(zprime0(&lens(1), &Coupling::minimal(), None).is_err());
        assert!(minimal_logdet(&LensSpec::new(4, 1.0).unwrap(), None).is_err());
        assert!(matches!(
            z_at_1(&LensSpec::untwisted(2), &Coupling::imaginary_mass(2.0), None),
            Err(DetError::InvalidCoupling(_))
        ));
    }

    #[test]
    fn explicit_line_outside_gap_is_rejected() {
        let line = ContourLine::shifted(2.0, 1.0);
        let err = zprime0(&lens(4), &Coupling::conformal4(), Some(&line)).unwrap_err();
        assert!(matches!(err, DetError::Quadrature(QuadratureError::InvalidLine(_))));
    }

    #[test]
    fn mass_parametrisation() {
        assert_eq!(Coupling::mass(0.0).alpha_sq(), 0.25);
        assert_eq!(Coupling::imaginary_mass(3.0).alpha(), Complex64::new(0.0, 3.0));
    }
}
