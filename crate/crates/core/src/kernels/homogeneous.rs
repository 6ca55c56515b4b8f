use num_complex::Complex64;
use std::f64::consts::PI;

use super::{cexpm1, lattice_distance, KernelError, LensSpec, POLE_GUARD};

const LAURENT_TERMS: usize = 16;

/// Closed-form `H` and `K` of a twisted homogeneous lens space.
///
/// For `Re τ ≥ 0` both are evaluated from
///
/// ```text
/// H(τ) = (e^{c₁τ} + e^{c₂τ}) / ((1 - e^{-2τ})(1 - e^{-qτ})),   c₁ = -(1+r), c₂ = -(1+q-r)
/// ```
///
/// and its hand-differentiated quotient-rule derivatives. Close to the origin a
/// Laurent expansion in `τ²` takes over.
#[derive(Debug, Clone)]
pub struct HomogeneousKernel {
    q: f64,
    c1: f64,
    c2: f64,
    laurent: [f64; LAURENT_TERMS],
    laurent_radius: f64,
}

impl HomogeneousKernel {
    pub fn new(spec: &LensSpec) -> Self {
        let q = spec.order();
        let r = spec.twist();
        let gap = PI.min(2.0 * PI / q);
        HomogeneousKernel {
            q,
            c1: -(1.0 + r),
            c2: -(1.0 + q - r),
            laurent: laurent_coefficients(q * spec.delta(), 0.5 * q),
            laurent_radius: (1e-2f64).min(0.25 * gap),
        }
    }

    pub fn order(&self) -> f64 {
        self.q
    }

    pub fn pole_gap(&self) -> f64 {
        PI.min(2.0 * PI / self.q)
    }

    pub fn pole_distance(&self, tau: Complex64) -> f64 {
        let y = lattice_distance(tau.im, PI).min(lattice_distance(tau.im, 2.0 * PI / self.q));
        tau.re.hypot(y)
    }

    pub fn check(&self, tau: Complex64) -> Result<(), KernelError> {
        let distance = self.pole_distance(tau);
        if distance < POLE_GUARD {
            return Err(KernelError::PoleProximity { re: tau.re, im: tau.im, distance });
        }
        Ok(())
    }

    /// Coefficient of `τ^{2k-2}` in the Laurent expansion of `H`. The `k = 0`
    /// term is `1/q`; `k = 2` is the real-scalar Casimir energy.
    pub fn laurent_coefficient(&self, k: usize) -> f64 {
        self.laurent[k]
    }

    pub fn h(&self, tau: Complex64) -> Complex64 {
        self.h_scaled(tau, Complex64::new(0.0, 0.0))
    }

    pub fn k(&self, tau: Complex64) -> Complex64 {
        self.k_scaled(tau, Complex64::new(0.0, 0.0))
    }

    /// `H(τ)·e^{sτ}`.
    pub fn h_scaled(&self, tau: Complex64, shift: Complex64) -> Complex64 {
        if tau.re < 0.0 {
            return self.h_scaled(-tau, -shift);
        }
        if tau.norm() < self.laurent_radius {
            let u = tau * tau;
            return self.laurent_sum(u, |_| 1.0) / u * (shift * tau).exp();
        }
        let t = self.terms(tau, shift);
        t.num / t.den
    }

    /// `K(τ)·e^{sτ}`. The shift never enters the derivative coefficients.
    pub fn k_scaled(&self, tau: Complex64, shift: Complex64) -> Complex64 {
        if tau.re < 0.0 {
            return -self.k_scaled(-tau, -shift);
        }
        if tau.norm() < self.laurent_radius {
            let u = tau * tau;
            let series = self.laurent_sum(u, |k| (2 * k) as f64 - 2.0);
            return -series / (u * tau) * (shift * tau).exp();
        }
        let t = self.terms(tau, shift);
        -(t.dnum * t.den - t.num * t.dden) / (t.den * t.den)
    }

    /// `K'(τ) = -H''(τ)`.
    pub fn dk(&self, tau: Complex64) -> Complex64 {
        if tau.re < 0.0 {
            return self.dk(-tau);
        }
        if tau.norm() < self.laurent_radius {
            let u = tau * tau;
            let series = self.laurent_sum(u, |k| ((2 * k) as f64 - 2.0) * ((2 * k) as f64 - 3.0));
            return -series / (u * u);
        }
        let t = self.terms(tau, Complex64::new(0.0, 0.0));
        let first = t.dnum * t.den - t.num * t.dden;
        let second = (t.d2num * t.den - t.num * t.d2den) * t.den - 2.0 * t.dden * first;
        -second / (t.den * t.den * t.den)
    }

    fn laurent_sum(&self, u: Complex64, weight: impl Fn(usize) -> f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..LAURENT_TERMS).rev() {
            acc = acc * u + self.laurent[k] * weight(k);
        }
        acc
    }

    fn terms(&self, tau: Complex64, shift: Complex64) -> Terms {
        let e1 = ((self.c1 + shift) * tau).exp();
        let e2 = ((self.c2 + shift) * tau).exp();
        let m2 = (-2.0 * tau).exp();
        let mq = (-self.q * tau).exp();
        let p1 = -cexpm1(-2.0 * tau);
        let p2 = -cexpm1(-self.q * tau);
        let dp1 = 2.0 * m2;
        let d2p1 = -4.0 * m2;
        let dp2 = self.q * mq;
        let d2p2 = -self.q * self.q * mq;
        Terms {
            num: e1 + e2,
            dnum: self.c1 * e1 + self.c2 * e2,
            d2num: self.c1 * self.c1 * e1 + self.c2 * self.c2 * e2,
            den: p1 * p2,
            dden: dp1 * p2 + p1 * dp2,
            d2den: d2p1 * p2 + 2.0 * dp1 * dp2 + p1 * d2p2,
        }
    }
}

struct Terms {
    num: Complex64,
    dnum: Complex64,
    d2num: Complex64,
    den: Complex64,
    dden: Complex64,
    d2den: Complex64,
}

/// Coefficients of `τ²H = cosh(aτ) / (2b S(τ²) S(b²τ²))` in powers of `τ²`,
/// where `S(u) = sinh(√u)/√u`.
fn laurent_coefficients(a: f64, b: f64) -> [f64; LAURENT_TERMS] {
    let n = LAURENT_TERMS;
    let mut fact = vec![1.0f64; 2 * n + 2];
    for i in 1..fact.len() {
        fact[i] = fact[i - 1] * i as f64;
    }
    let cosh: Vec<f64> = (0..n).map(|k| a.powi(2 * k as i32) / fact[2 * k]).collect();
    let s1: Vec<f64> = (0..n).map(|k| 1.0 / fact[2 * k + 1]).collect();
    let s2: Vec<f64> = (0..n).map(|k| (b * b).powi(k as i32) / fact[2 * k + 1]).collect();
    let den = mul(&s1, &s2);
    let quotient = div(&cosh, &den);
    let mut out = [0.0; LAURENT_TERMS];
    for k in 0..n {
        out[k] = quotient[k] / (2.0 * b);
    }
    out
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

fn div(num: &[f64], den: &[f64]) -> Vec<f64> {
    let n = num.len();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = num[k];
        for j in 0..k {
            acc -= out[j] * den[k - j];
        }
        out[k] = acc / den[0];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laurent_and_closed_form_agree_at_the_switch() {
        for (q, r) in [(1, 0.0), (2, 0.0), (4, 1.0), (7, 3.0), (12, 5.0)] {
            let kernel = HomogeneousKernel::new(&LensSpec::new(q, r).unwrap());
            let radius = kernel.laurent_radius;
            for phase in [0.0, 0.4, -1.1] {
                let tau = Complex64::from_polar(radius * 1.0001, phase);
                let inner = Complex64::from_polar(radius * 0.9999, phase);
                let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();
                assert!(rel(kernel.h(tau), kernel.h(inner)) < 1e-3);
                // direct comparison of the two branches at one point
                let u = tau * tau;
                let series_h = kernel.laurent_sum(u, |_| 1.0) / u;
                assert!(rel(series_h, kernel.h(tau)) < 1e-11, "q={q} r={r}");
                let series_k = -kernel.laurent_sum(u, |k| (2 * k) as f64 - 2.0) / (u * tau);
                assert!(rel(series_k, kernel.k(tau)) < 1e-9, "q={q} r={r}");
            }
        }
    }

    #[test]
    fn leading_laurent_term_is_one_over_q() {
        for q in [1, 3, 8] {
            let kernel = HomogeneousKernel::new(&LensSpec::untwisted(q));
            assert!((kernel.laurent_coefficient(0) - 1.0 / q as f64).abs() < 1e-15);
            // K q τ³ → 2
            let k = kernel.k(c(1e-4, 0.0));
            assert!((k.re * q as f64 * 1e-12 - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let kernel = HomogeneousKernel::new(&LensSpec::new(5, 2.0).unwrap());
        let step = 1e-4;
        for x in [0.5, 1.0, 2.0] {
            let tau = c(x, 0.0);
            let fd_k = -(kernel.h(tau + step) - kernel.h(tau - step)) / (2.0 * step);
            assert!((fd_k - kernel.k(tau)).norm() < 1e-6);
            let fd_dk = (kernel.k(tau + step) - kernel.k(tau - step)) / (2.0 * step);
            assert!((fd_dk - kernel.dk(tau)).norm() < 1e-6 * kernel.dk(tau).norm());
        }
        let tiny = c(3e-3, 1e-3);
        let fd = (kernel.k(tiny + 1e-7) - kernel.k(tiny - 1e-7)) / 2e-7;
        assert!((fd - kernel.dk(tiny)).norm() < 1e-5 * kernel.dk(tiny).norm());
    }

    #[test]
    fn scaled_kernel_is_shifted_kernel() {
        let kernel = HomogeneousKernel::new(&LensSpec::new(3, 1.0).unwrap());
        let shift = c(0.5, 2.0);
        for tau in [c(0.8, 0.4), c(-1.3, 0.2), c(4e-3, 0.0)] {
            let direct = kernel.k(tau) * (shift * tau).exp();
            assert!((kernel.k_scaled(tau, shift) - direct).norm() < 1e-12 * direct.norm());
            let direct_h = kernel.h(tau) * (shift * tau).exp();
            assert!((kernel.h_scaled(tau, shift) - direct_h).norm() < 1e-12 * direct_h.norm());
        }
    }

    #[test]
    fn far_line_does_not_overflow() {
        let kernel = HomogeneousKernel::new(&LensSpec::untwisted(6));
        let v = kernel.k_scaled(c(800.0, 0.3), c(0.9, 0.0));
        assert!(v.is_finite());
        assert!(v.norm() < 1e-30);
    }
}
