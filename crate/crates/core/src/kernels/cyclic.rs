use num_complex::Complex64;
use std::f64::consts::PI;

use super::{cexpm1, lattice_distance, GeneralLensSpec, HigherLensSpec, KernelError, POLE_GUARD};

/// Group-averaged kernel of a (possibly two-sided, possibly higher
/// dimensional) cyclic quotient.
///
/// With `t = e^{-τ}` each factor `cosh τ - cos β` becomes
/// `e^τ/2 · ((1-t)² + 4t sin²(β/2))`, which gives
///
/// ```text
/// K = (1 - t²) t^{e-1} / q · Σ_p Π_i 1 / ((1-t)² + 4t sin²(β_i(p)/2)).
/// ```
#[derive(Debug, Clone)]
pub struct CyclicKernel {
    q: u32,
    e: usize,
    /// `4 sin²(β_i(p)/2)`, one row per group element.
    weights: Vec<Vec<f64>>,
    /// Distinct reduced angles in `[0, 2π)`, for pole bookkeeping.
    angles: Vec<f64>,
}

impl CyclicKernel {
    pub fn general(spec: &GeneralLensSpec) -> Self {
        Self::higher(&HigherLensSpec::from(*spec))
    }

    pub fn higher(spec: &HigherLensSpec) -> Self {
        let q = spec.order();
        let mut weights = Vec::with_capacity(q as usize);
        let mut angles: Vec<f64> = Vec::new();
        for p in 0..q {
            let row = spec.angles(p);
            for &beta in &row {
                if !angles.contains(&beta) {
                    angles.push(beta);
                }
            }
            weights.push(row.iter().map(|b| 4.0 * (0.5 * b).sin().powi(2)).collect());
        }
        CyclicKernel { q, e: spec.e(), weights, angles }
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn pole_gap(&self) -> f64 {
        self.angles
            .iter()
            .map(|&b| if b == 0.0 { 2.0 * PI } else { b })
            .fold(2.0 * PI, f64::min)
    }

    pub fn pole_distance(&self, tau: Complex64) -> f64 {
        self.angles
            .iter()
            .flat_map(|&b| [tau.im - b, tau.im + b])
            .map(|y| tau.re.hypot(lattice_distance(y, 2.0 * PI)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check(&self, tau: Complex64) -> Result<(), KernelError> {
        let distance = self.pole_distance(tau);
        if distance < POLE_GUARD {
            return Err(KernelError::PoleProximity { re: tau.re, im: tau.im, distance });
        }
        Ok(())
    }

    /// `K(τ)·e^{sτ}`.
    pub fn k_scaled(&self, tau: Complex64, shift: Complex64) -> Complex64 {
        if tau.re < 0.0 {
            return -self.k_scaled(-tau, -shift);
        }
        let t = (-tau).exp();
        let m = cexpm1(-tau);
        let prefactor = -cexpm1(-2.0 * tau) * ((shift - (self.e - 1) as f64) * tau).exp();
        let sum: Complex64 = self
            .weights
            .iter()
            .map(|row| row.iter().map(|&w| 1.0 / (m * m + t * w)).product::<Complex64>())
            .sum();
        prefactor * sum / self.q as f64
    }

    /// `K'(τ) = -t dK/dt`.
    pub fn dk(&self, tau: Complex64) -> Complex64 {
        if tau.re < 0.0 {
            return self.dk(-tau);
        }
        let e = self.e as f64;
        let t = (-tau).exp();
        let m = cexpm1(-tau);
        let te1 = ((1.0 - e) * tau).exp();
        let a = -cexpm1(-2.0 * tau) * te1;
        // t·A'(t) for A = (1 - t²) t^{e-1}
        let ta = (e - 1.0) * te1 - (e + 1.0) * te1 * t * t;
        let mut sum_p = Complex64::new(0.0, 0.0);
        let mut sum_tdp = Complex64::new(0.0, 0.0);
        for row in &self.weights {
            let mut p = Complex64::new(1.0, 0.0);
            let mut log_deriv = Complex64::new(0.0, 0.0);
            for &w in row {
                let qf = m * m + t * w;
                // t dQ/dt = t(2(t - 1) + w)
                let tdq = t * (2.0 * m + w);
                p /= qf;
                log_deriv += tdq / qf;
            }
            sum_p += p;
            sum_tdp -= p * log_deriv;
        }
        -(ta * sum_p + a * sum_tdp) / self.q as f64
    }
}
