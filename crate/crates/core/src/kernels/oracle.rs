//! Brute-force degeneracies from group-averaged SU(2) characters.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{GeneralLensSpec, KernelError, LensSpec};

const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub enum DegeneracySpec<'a> {
    /// Right-action degeneracies `d_l`.
    Homogeneous(&'a LensSpec),
    /// Total degeneracies `D_l`.
    General(&'a GeneralLensSpec),
}

/// `χ_l(πk/q) = sin(lθ)/sin θ`, using the exact limit when `θ ∈ πZ`.
fn character(l: usize, k: u64, q: u64) -> f64 {
    if k.is_multiple_of(q) {
        let turns = k / q;
        let sign = if (turns * (l as u64 - 1)).is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * l as f64;
    }
    let theta = PI * k as f64 / q as f64;
    (l as f64 * theta).sin() / theta.sin()
}

/// Degeneracies for levels `l = 1..=l_max`; element 0 is level 1.
pub fn degeneracies_oracle(spec: DegeneracySpec<'_>, l_max: usize) -> Result<Vec<i64>, KernelError> {
    if l_max == 0 {
        return Err(KernelError::InvalidSpec("l_max must be at least 1".into()));
    }
    let raw: Vec<(usize, f64)> = match spec {
        DegeneracySpec::Homogeneous(lens) => {
            let (q, r) = match (lens.integer_order(), lens.integer_twist()) {
                (Some(q), Some(r)) => (q as u64, r as u64),
                _ => {
                    return Err(KernelError::InvalidSpec(
                        "the degeneracy oracle needs integer order and twist".into(),
                    ))
                }
            };
            (1..=l_max)
                .map(|l| {
                    let sum: f64 = (0..q)
                        .map(|p| {
                            let phase = 2.0 * PI * ((p * r) % q) as f64 / q as f64;
                            phase.cos() * character(l, (2 * p) % (2 * q), q)
                        })
                        .sum();
                    (l, sum / q as f64)
                })
                .collect()
        }
        DegeneracySpec::General(general) => {
            let q = general.order() as u64;
            let (n1, n2) = general.nu();
            let (n1, n2) = (n1 as u64, n2 as u64);
            (1..=l_max)
                .map(|l| {
                    let sum: f64 = (0..q)
                        .map(|p| {
                            let plus = (p * (n1 + n2)) % (2 * q);
                            let minus = (p * (2 * q + n1 % (2 * q) - n2 % (2 * q))) % (2 * q);
                            character(l, plus, q) * character(l, minus, q)
                        })
                        .sum();
                    (l, sum / q as f64)
                })
                .collect()
        }
    };
    raw.into_iter()
        .map(|(l, value)| {
            let rounded = value.round();
            if (value - rounded).abs() > INTEGRALITY_TOL {
                Err(KernelError::NonIntegral { l, value })
            } else {
                Ok(rounded as i64)
            }
        })
        .collect()
}

/// Taylor coefficients in `t = e^{-τ}` of a function given as a function of
/// `τ`, for powers `0..=l_max`, by a discrete Cauchy integral on `|t| = 0.7`.
pub fn taylor_coefficients<F>(f: F, l_max: usize) -> Vec<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    const RADIUS: f64 = 0.7;
    const NODES: usize = 256;
    let samples: Vec<Complex64> = (0..NODES)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / NODES as f64;
            f(Complex64::new(-RADIUS.ln(), -theta))
        })
        .collect();
    (0..=l_max)
        .map(|n| {
            let acc: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let theta = 2.0 * PI * ((j * n) % NODES) as f64 / NODES as f64;
                    v * Complex64::from_polar(1.0, -theta)
                })
                .sum();
            acc.re / NODES as f64 / RADIUS.powi(n as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_projective_space() {
        let s3 = LensSpec::untwisted(1);
        let d = degeneracies_oracle(DegeneracySpec::Homogeneous(&s3), 20).unwrap();
        assert_eq!(d, (1..=20).collect::<Vec<i64>>());
        let p3 = LensSpec::untwisted(2);
        let d = degeneracies_oracle(DegeneracySpec::Homogeneous(&p3), 5).unwrap();
        assert_eq!(d, vec![1, 0, 3, 0, 5]);
    }

    #[test]
    fn general_trivial_group_is_l_squared() {
        let spec = GeneralLensSpec::new(1, 1, 1).unwrap();
        let d = degeneracies_oracle(DegeneracySpec::General(&spec), 10).unwrap();
        assert_eq!(d, (1..=10).map(|l| l * l).collect::<Vec<i64>>());
    }

    #[test]
    fn constant_mode_survives() {
        for q in 1..=12 {
            let d = degeneracies_oracle(DegeneracySpec::Homogeneous(&LensSpec::untwisted(q)), 1).unwrap();
            assert_eq!(d, vec![1]);
        }
    }

    #[test]
    fn rejects_real_twist() {
        let spec = LensSpec::new(4, 0.5).unwrap();
        assert!(degeneracies_oracle(DegeneracySpec::Homogeneous(&spec), 3).is_err());
    }
}
