//! Closed-form kernels against brute-force character sums.

use lensdet::kernels::{
    degeneracies_oracle, general_k, taylor_coefficients, CyclicKernel, DegeneracySpec, GeneralLensSpec,
    HigherLensSpec, HomogeneousKernel, LensSpec,
};
use num_complex::Complex64;

const L_MAX: usize = 30;

fn assert_integer_match(coeffs: &[f64], oracle: &[i64], label: &str) {
    assert!(coeffs[0].abs() < 1e-7, "{label}: constant term {}", coeffs[0]);
    for (l, &d) in oracle.iter().enumerate() {
        let c = coeffs[l + 1];
        assert_eq!(c.round() as i64, d, "{label}: l = {}", l + 1);
        assert!((c - d as f64).abs() < 1e-6, "{label}: l = {} coefficient {c}", l + 1);
    }
}

#[test]
fn homogeneous_generating_function_matches_oracle() {
    for q in 1..=12u32 {
        for r in 0..q {
            let spec = LensSpec::new(q, r as f64).unwrap();
            let kernel = HomogeneousKernel::new(&spec);
            let coeffs = taylor_coefficients(|tau| kernel.h(tau), L_MAX);
            let oracle = degeneracies_oracle(DegeneracySpec::Homogeneous(&spec), L_MAX).unwrap();
            assert!(oracle.iter().all(|&d| d >= 0));
            assert_integer_match(&coeffs, &oracle, &format!("q={q} r={r}"));
        }
    }
}

#[test]
fn twist_sum_rule() {
    for q in 1..=12u32 {
        let mut totals = vec![0i64; L_MAX];
        for r in 0..q {
            let spec = LensSpec::new(q, r as f64).unwrap();
            let d = degeneracies_oracle(DegeneracySpec::Homogeneous(&spec), L_MAX).unwrap();
            for (t, x) in totals.iter_mut().zip(d) {
                *t += x;
            }
        }
        assert_eq!(totals, (1..=L_MAX as i64).collect::<Vec<_>>(), "q = {q}");
    }
}

#[test]
fn two_sided_kernel_matches_oracle() {
    for q in [5u32, 7, 29] {
        for nu in 1..q {
            let spec = GeneralLensSpec::new(q, 1, nu).unwrap();
            let kernel = CyclicKernel::general(&spec);
            let coeffs = taylor_coefficients(|tau| kernel.k_scaled(tau, Complex64::new(0.0, 0.0)), L_MAX);
            let oracle = degeneracies_oracle(DegeneracySpec::General(&spec), L_MAX).unwrap();
            assert!(oracle.iter().all(|&d| d >= 0));
            assert_integer_match(&coeffs, &oracle, &format!("q={q} nu={nu}"));
        }
    }
}

#[test]
fn homogeneous_total_degeneracies_are_l_times_right() {
    // L(q; 1, 1) counts D_l = l d_l of the untwisted homogeneous space
    for q in [2u32, 5, 9] {
        let general = degeneracies_oracle(DegeneracySpec::General(&GeneralLensSpec::new(q, 1, 1).unwrap()), L_MAX)
            .unwrap();
        let homogeneous = degeneracies_oracle(DegeneracySpec::Homogeneous(&LensSpec::untwisted(q)), L_MAX).unwrap();
        for (l, (g, h)) in general.iter().zip(&homogeneous).enumerate() {
            assert_eq!(*g, (l as i64 + 1) * h);
        }
    }
}

#[test]
fn two_sided_closed_form_against_long_series() {
    let spec = GeneralLensSpec::new(5, 1, 2).unwrap();
    let d = degeneracies_oracle(DegeneracySpec::General(&spec), 200).unwrap();
    let series: f64 = d.iter().enumerate().map(|(i, &x)| x as f64 * (-1.2 * (i + 1) as f64).exp()).sum();
    let k = general_k(&spec, Complex64::new(1.2, 0.0)).unwrap().re;
    assert!((k / series - 1.0).abs() < 1e-10);
}

#[test]
fn higher_kernel_series_is_nonnegative() {
    let spec = HigherLensSpec::new(1, vec![1, 1, 1]).unwrap();
    let kernel = CyclicKernel::higher(&spec);
    let coeffs = taylor_coefficients(|tau| kernel.k_scaled(tau, Complex64::new(0.0, 0.0)), L_MAX);
    assert!(coeffs.iter().all(|&c| c > -1e-7));
    let spec = HigherLensSpec::new(3, vec![1, 1, 2]).unwrap();
    let kernel = CyclicKernel::higher(&spec);
    let coeffs = taylor_coefficients(|tau| kernel.k_scaled(tau, Complex64::new(0.0, 0.0)), L_MAX);
    for c in coeffs {
        assert!(c > -1e-7 && (c - c.round()).abs() < 1e-6, "{c}");
    }
}
