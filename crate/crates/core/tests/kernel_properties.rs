use lensdet::kernels::{
    general_k, higher_k, homogeneous_h, homogeneous_k, GeneralLensSpec, HigherLensSpec, Kernel, LensSpec, Quotient,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn tau_strategy() -> impl Strategy<Value = Complex64> {
    // keep clear of the imaginary-axis poles
    (0.05f64..4.0, -0.3f64..0.3, prop::bool::ANY)
        .prop_map(|(x, y, flip)| if flip { Complex64::new(-x, y) } else { Complex64::new(x, y) })
}

fn quotient_strategy() -> impl Strategy<Value = Quotient> {
    prop_oneof![
        (1u32..=12, 0.0f64..1.0).prop_map(|(q, f)| Quotient::Lens(LensSpec::new(q, (f * q as f64).floor()).unwrap())),
        (2u32..=30, 1u32..30).prop_filter_map("coprime", |(q, nu)| GeneralLensSpec::new(q, 1, nu % q).ok().map(Quotient::General)),
        (2u32..=9, prop::collection::vec(1u32..9, 3..=4))
            .prop_filter_map("coprime", |(q, nu)| HigherLensSpec::new(q, nu).ok().map(Quotient::Higher)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn every_kernel_is_odd(quotient in quotient_strategy(), tau in tau_strategy()) {
        let kernel = Kernel::for_quotient(&quotient);
        let k = kernel.k(tau).unwrap();
        let mirrored = kernel.k(-tau).unwrap();
        prop_assert!((k + mirrored).norm() <= 1e-12 * k.norm().max(1.0));
    }

    #[test]
    fn normalization_invariance(q in 2u32..=40, nu1 in 1u32..40, nu2 in 1u32..40, tau in tau_strategy()) {
        let spec = GeneralLensSpec::new(q, nu1 % q, nu2 % q);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let a = general_k(&spec, tau).unwrap();
        let b = general_k(&spec.normalize(), tau).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn e2_higher_is_general(q in 1u32..=30, nu in 1u32..30, tau in tau_strategy()) {
        let general = GeneralLensSpec::new(q, 1, nu % q.max(1));
        prop_assume!(general.is_ok());
        let general = general.unwrap();
        let (n1, n2) = general.nu();
        let higher = HigherLensSpec::new(q, vec![n1, n2]).unwrap();
        let a = general_k(&general, tau).unwrap();
        let b = higher_k(&higher, tau).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn twisted_h_is_even(q in 1u32..=12, r in 0.0f64..1.0, tau in tau_strategy()) {
        let spec = LensSpec::with_real_order(q as f64, r * q as f64).unwrap();
        let h = homogeneous_h(&spec, tau).unwrap();
        let m = homogeneous_h(&spec, -tau).unwrap();
        prop_assert!((h - m).norm() <= 1e-12 * h.norm().max(1.0));
    }
}

#[test]
fn k_is_minus_h_prime() {
    let step = 1e-4;
    for (q, r) in [(1, 0.0), (2, 0.0), (4, 1.0), (7, 3.0), (12, 11.0)] {
        let spec = LensSpec::new(q, r).unwrap();
        for x in [0.5, 1.0, 2.0] {
            let tau = Complex64::new(x, 0.0);
            let h = |dx: f64| homogeneous_h(&spec, tau + dx).unwrap();
            // five-point central stencil; the three-point one has an O(h²) error near 1e-6 at x = 0.5
            let fd = -(h(-2.0 * step) - 8.0 * h(-step) + 8.0 * h(step) - h(2.0 * step)) / (12.0 * step);
            assert!((fd - homogeneous_k(&spec, tau).unwrap()).norm() <= 1e-6, "q={q} r={r} x={x}");
        }
    }
}

#[test]
fn small_tau_leading_behaviour() {
    for q in [1u32, 2, 3, 8] {
        let spec = LensSpec::untwisted(q);
        for x in [1e-3, 1e-5] {
            let k = homogeneous_k(&spec, Complex64::new(x, 0.0)).unwrap().re;
            assert!((k * q as f64 * x.powi(3) - 2.0).abs() < 1e-4, "q={q} x={x}");
        }
        let g = general_k(&GeneralLensSpec::new(q, 1, 1).unwrap(), Complex64::new(1e-3, 0.0)).unwrap().re;
        assert!((g * q as f64 * 1e-9 - 2.0).abs() < 1e-4);
    }
}
