use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::KernelError;

/// Homogeneous lens space `S³/Z_q` carrying a U(1) twist `ω^r`.
///
/// The order is normally a positive integer. [`LensSpec::with_real_order`]
/// admits real `q` so the closed-form kernels can be swept continuously; such
/// a spec has no quotient-space meaning and is rejected by the degeneracy oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensSpec {
    q: f64,
    r: f64,
}

impl LensSpec {
    pub fn new(q: u32, r: f64) -> Result<Self, KernelError> {
        if q == 0 {
            return Err(KernelError::InvalidSpec("lens order q must be at least 1".into()));
        }
        Self::with_real_order(q as f64, r)
    }

    pub fn untwisted(q: u32) -> Self {
        assert!(q >= 1, "lens order q must be at least 1");
        LensSpec { q: q as f64, r: 0.0 }
    }

    pub fn with_real_order(q: f64, r: f64) -> Result<Self, KernelError> {
        if !(q.is_finite() && q > 0.0) {
            return Err(KernelError::InvalidSpec(format!("lens order must be positive, got {q}")));
        }
        if !(r.is_finite() && r >= 0.0 && r < q) {
            return Err(KernelError::InvalidSpec(format!("twist r = {r} outside [0, {q})")));
        }
        Ok(LensSpec { q, r })
    }

    pub fn order(&self) -> f64 {
        self.q
    }

    pub fn integer_order(&self) -> Option<u32> {
        (self.q.fract() == 0.0).then_some(self.q as u32)
    }

    pub fn twist(&self) -> f64 {
        self.r
    }

    pub fn integer_twist(&self) -> Option<u32> {
        (self.r.fract() == 0.0).then_some(self.r as u32)
    }

    /// The flux offset `δ = r/q - 1/2`.
    pub fn delta(&self) -> f64 {
        self.r / self.q - 0.5
    }

    pub fn is_untwisted(&self) -> bool {
        self.r == 0.0
    }

    /// Odd orders have no binary-lift interpretation; the generating function
    /// is applied to them regardless.
    pub fn is_formula_extended(&self) -> bool {
        matches!(self.integer_order(), Some(q) if q % 2 == 1)
    }
}

/// Two-sided lens space `L(q; ν₁, ν₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralLensSpec {
    q: u32,
    nu1: u32,
    nu2: u32,
}

impl GeneralLensSpec {
    pub fn new(q: u32, nu1: u32, nu2: u32) -> Result<Self, KernelError> {
        if q == 0 {
            return Err(KernelError::InvalidSpec("lens order q must be at least 1".into()));
        }
        for nu in [nu1, nu2] {
            if gcd(nu, q) != 1 {
                return Err(KernelError::InvalidSpec(format!("ν = {nu} is not coprime to q = {q}")));
            }
        }
        Ok(GeneralLensSpec { q, nu1, nu2 })
    }

    /// `L(q; 1, ν)`.
    pub fn with_twist(q: u32, nu: u32) -> Result<Self, KernelError> {
        Self::new(q, 1, nu)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn nu(&self) -> (u32, u32) {
        (self.nu1, self.nu2)
    }

    pub fn lambda1(&self) -> u32 {
        mod_inverse(self.nu1, self.q)
    }

    pub fn lambda2(&self) -> u32 {
        mod_inverse(self.nu2, self.q)
    }

    /// Multiplies through by `λ₁` so that the first twist becomes 1.
    pub fn normalize(&self) -> Self {
        let lambda = self.lambda1() as u64;
        let q = self.q as u64;
        let nu = (self.nu2 as u64 * lambda % q) as u32;
        let nu = if self.q == 1 { 1 } else { nu };
        GeneralLensSpec { q: self.q, nu1: 1, nu2: nu }
    }

    /// `(β₁(p), β₂(p))` reduced to `[0, 2π)`.
    pub fn angles(&self, p: u32) -> (f64, f64) {
        (angle(p, self.nu1, self.q), angle(p, self.nu2, self.q))
    }
}

/// Lens space `S^{2e-1}/Z_q` with twists `ν₁..ν_e`, `e ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigherLensSpec {
    q: u32,
    nu: Vec<u32>,
}

impl HigherLensSpec {
    pub fn new(q: u32, nu: Vec<u32>) -> Result<Self, KernelError> {
        if q == 0 {
            return Err(KernelError::InvalidSpec("lens order q must be at least 1".into()));
        }
        if nu.len() < 2 {
            return Err(KernelError::InvalidSpec(format!(
                "higher lens spaces need e ≥ 2 twists, got {}",
                nu.len()
            )));
        }
        if let Some(&bad) = nu.iter().find(|&&n| gcd(n, q) != 1) {
            return Err(KernelError::InvalidSpec(format!("ν = {bad} is not coprime to q = {q}")));
        }
        Ok(HigherLensSpec { q, nu })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Half the dimension of the covering `S^{2e-1}`'s embedding space.
    pub fn e(&self) -> usize {
        self.nu.len()
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn angles(&self, p: u32) -> Vec<f64> {
        self.nu.iter().map(|&n| angle(p, n, self.q)).collect()
    }
}

impl From<GeneralLensSpec> for HigherLensSpec {
    fn from(spec: GeneralLensSpec) -> Self {
        HigherLensSpec { q: spec.q, nu: vec![spec.nu1, spec.nu2] }
    }
}

/// Any of the supported quotient families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Quotient {
    Lens(LensSpec),
    General(GeneralLensSpec),
    Higher(HigherLensSpec),
}

impl Quotient {
    pub fn as_lens(&self) -> Option<&LensSpec> {
        match self {
            Quotient::Lens(spec) => Some(spec),
            _ => None,
        }
    }
}

impl From<LensSpec> for Quotient {
    fn from(spec: LensSpec) -> Self {
        Quotient::Lens(spec)
    }
}

impl From<GeneralLensSpec> for Quotient {
    fn from(spec: GeneralLensSpec) -> Self {
        Quotient::General(spec)
    }
}

impl From<HigherLensSpec> for Quotient {
    fn from(spec: HigherLensSpec) -> Self {
        Quotient::Higher(spec)
    }
}

fn angle(p: u32, nu: u32, q: u32) -> f64 {
    let k = (p as u64 * nu as u64) % q as u64;
    2.0 * PI * k as f64 / q as f64
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: u32, m: u32) -> u32 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i64 % m as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    old_s.rem_euclid(m as i64) as u32
}
