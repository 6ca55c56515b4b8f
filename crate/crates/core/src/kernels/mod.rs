//! Degeneracy generating functions and cylinder kernels for cyclic and
//! binary-cyclic quotients of odd spheres.
//!
//! Every kernel is evaluated in closed form. For `Re τ ≥ 0` the expressions are
//! rewritten in terms of `t = e^{-τ}` so that nothing overflows far out on the
//! integration line, and the opposite half-plane is reached through the parity
//! of the kernel (`H` even, `K` odd).
//!
//! The homogeneous lens kernel is
//!
//! ```text
//! H(τ) = cosh(qδτ) / (2 sinh τ sinh(qτ/2)),      K(τ) = -H'(τ)
//! ```
//!
//! with `δ = r/q - 1/2`, and the two-sided / higher-dimensional kernels are the
//! group averages
//!
//! ```text
//! K(τ) = sinh τ / (2^{e-1} q) Σ_p Π_i 1 / (cosh τ - cos β_i(p)).
//! ```

mod cyclic;
mod homogeneous;
mod oracle;
mod spec;

pub use cyclic::CyclicKernel;
pub use homogeneous::HomogeneousKernel;
pub use oracle::{degeneracies_oracle, taylor_coefficients, DegeneracySpec};
pub use spec::{GeneralLensSpec, HigherLensSpec, LensSpec, Quotient};

use num_complex::Complex64;
use thiserror::Error;

/// Distance below which a kernel evaluation is refused.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid quotient: {0}")]
    InvalidSpec(String),
    #[error("τ = {re}{im:+}i lies {distance:.3e} from a kernel pole")]
    PoleProximity { re: f64, im: f64, distance: f64 },
    #[error("character sum for l = {l} gave non-integral value {value}")]
    NonIntegral { l: usize, value: f64 },
}

/// A closed-form cylinder kernel of any supported quotient family.
#[derive(Debug, Clone)]
pub enum Kernel {
    Homogeneous(HomogeneousKernel),
    Cyclic(CyclicKernel),
}

impl Kernel {
    pub fn for_quotient(quotient: &Quotient) -> Self {
        match quotient {
            Quotient::Lens(spec) => Kernel::Homogeneous(HomogeneousKernel::new(spec)),
            Quotient::General(spec) => Kernel::Cyclic(CyclicKernel::general(spec)),
            Quotient::Higher(spec) => Kernel::Cyclic(CyclicKernel::higher(spec)),
        }
    }

    /// Distance from the real axis to the nearest non-real pole.
    pub fn pole_gap(&self) -> f64 {
        match self {
            Kernel::Homogeneous(k) => k.pole_gap(),
            Kernel::Cyclic(k) => k.pole_gap(),
        }
    }

    pub fn pole_distance(&self, tau: Complex64) -> f64 {
        match self {
            Kernel::Homogeneous(k) => k.pole_distance(tau),
            Kernel::Cyclic(k) => k.pole_distance(tau),
        }
    }

    /// `K(τ)·e^{sτ}`, without pole checking. Used inside quadrature loops.
    pub fn k_scaled(&self, tau: Complex64, shift: Complex64) -> Complex64 {
        match self {
            Kernel::Homogeneous(k) => k.k_scaled(tau, shift),
            Kernel::Cyclic(k) => k.k_scaled(tau, shift),
        }
    }

    /// `K'(τ)`, without pole checking.
    pub fn dk(&self, tau: Complex64) -> Complex64 {
        match self {
            Kernel::Homogeneous(k) => k.dk(tau),
            Kernel::Cyclic(k) => k.dk(tau),
        }
    }

    pub fn k(&self, tau: Complex64) -> Result<Complex64, KernelError> {
        self.check(tau)?;
        Ok(self.k_scaled(tau, Complex64::new(0.0, 0.0)))
    }

    pub(crate) fn check(&self, tau: Complex64) -> Result<(), KernelError> {
        let distance = self.pole_distance(tau);
        if distance < POLE_GUARD {
            return Err(KernelError::PoleProximity { re: tau.re, im: tau.im, distance });
        }
        Ok(())
    }
}

/// Degeneracy kernel `H(τ) = Σ d_l e^{-lτ}` of a homogeneous lens space.
pub fn homogeneous_h(spec: &LensSpec, tau: Complex64) -> Result<Complex64, KernelError> {
    let kernel = HomogeneousKernel::new(spec);
    kernel.check(tau)?;
    Ok(kernel.h(tau))
}

/// Cylinder kernel `K(τ) = -H'(τ) = Σ l d_l e^{-lτ}` of a homogeneous lens space.
pub fn homogeneous_k(spec: &LensSpec, tau: Complex64) -> Result<Complex64, KernelError> {
    let kernel = HomogeneousKernel::new(spec);
    kernel.check(tau)?;
    Ok(kernel.k(tau))
}

/// Cylinder kernel of the two-sided lens space `L(q; ν₁, ν₂)`.
pub fn general_k(spec: &GeneralLensSpec, tau: Complex64) -> Result<Complex64, KernelError> {
    Kernel::Cyclic(CyclicKernel::general(spec)).k(tau)
}

/// Cylinder kernel of the lens space `S^{2e-1}/Z_q` with twists `ν₁..ν_e`.
pub fn higher_k(spec: &HigherLensSpec, tau: Complex64) -> Result<Complex64, KernelError> {
    Kernel::Cyclic(CyclicKernel::higher(spec)).k(tau)
}

pub fn pole_gap(quotient: &Quotient) -> f64 {
    Kernel::for_quotient(quotient).pole_gap()
}

/// Distance from `y` to the nearest point of the lattice `period·Z`.
pub(crate) fn lattice_distance(y: f64, period: f64) -> f64 {
    let k = (y / period).round();
    (y - k * period).abs()
}

/// `e^z - 1` for complex `z`, accurate near zero.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    let re = x.exp_m1() * y.cos() - 2.0 * half * half;
    let im = x.exp() * y.sin();
    Complex64::new(re, im)
}
