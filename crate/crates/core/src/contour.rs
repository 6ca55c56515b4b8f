//! Semi-infinite quadrature along lines `τ = x + iΔ`, `x ≥ 0`.
//!
//! The integrand is truncated at a point `X` where a sampled exponential
//! envelope `C e^{-ρx}` certifies the discarded tail, and `[0, X]` is handled by
//! globally adaptive 21-point Gauss-Kronrod subdivision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detcore::Coupling;
use crate::kernels::{Kernel, Quotient};
use crate::NeumaierSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach tolerance after {} evaluations (value {}, error {:.3e})", .0.evaluations, .0.value, .0.abs_error_estimate)]
    NonConvergence(QuadratureResult),
    #[error("integrand returned a non-finite value at x = {x}; the contour may pass too close to a pole")]
    NonFinite { x: f64 },
    #[error("invalid contour line: {0}")]
    InvalidLine(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourLine {
    /// Imaginary offset of the line.
    pub delta: f64,
    /// Lower bound on the exponential decay rate of the integrand.
    pub decay_rate: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Upper bound on the length of the initial subintervals, used for
    /// oscillatory integrands.
    pub max_piece: Option<f64>,
}

impl Default for ContourLine {
    fn default() -> Self {
        ContourLine {
            delta: 0.0,
            decay_rate: 1.0,
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_evals: 1_000_000,
            max_piece: None,
        }
    }
}

impl ContourLine {
    pub fn real_axis(decay_rate: f64) -> Self {
        ContourLine { decay_rate, ..Default::default() }
    }

    pub fn shifted(delta: f64, decay_rate: f64) -> Self {
        ContourLine { delta, decay_rate, ..Default::default() }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        ContourLine { delta, ..self }
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        ContourLine { abs_tol, rel_tol, ..self }
    }

    pub fn point(&self, x: f64) -> Complex64 {
        Complex64::new(x, self.delta)
    }

    fn validate(&self) -> Result<(), QuadratureError> {
        let bad = |msg: String| Err(QuadratureError::InvalidLine(msg));
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return bad(format!("offset Δ = {} must be finite and non-negative", self.delta));
        }
        if !(self.decay_rate.is_finite() && self.decay_rate > 0.0) {
            return bad(format!("decay rate ρ = {} must be positive", self.decay_rate));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if matches!(self.max_piece, Some(p) if p.is_nan() || p <= 0.0) {
            return bad("max_piece must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Line placement for the contour integrals of `quotient` at `coupling`.
pub fn default_line(quotient: &Quotient, coupling: &Coupling) -> Result<ContourLine, QuadratureError> {
    if coupling.alpha_sq() >= 1.0 {
        return Err(QuadratureError::InvalidLine(format!(
            "α² = {} ≥ 1 has non-positive eigenvalues; use the subtracted minimal-coupling path",
            coupling.alpha_sq()
        )));
    }
    let gap = Kernel::for_quotient(quotient).pole_gap();
    let alpha = coupling.alpha();
    let mut line = ContourLine::shifted(0.5 * gap, 1.0 - alpha.re.max(0.0));
    if alpha.im != 0.0 {
        line.max_piece = Some(2.0 * std::f64::consts::PI / alpha.im.abs());
    }
    Ok(line)
}

/// `∫₀^∞ f(x) dx` for a real integrand decaying at least like `e^{-ρx}`.
pub fn integrate_semi_infinite<F>(f: F, line: &ContourLine) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    line.validate()?;
    let mut evaluations = 0usize;
    let (upper, tail) = truncation_point(&f, line, &mut evaluations)?;
    let mut result = integrate_finite(&f, 0.0, upper, line, 0.5 * line.abs_tol, &mut evaluations)?;
    result.abs_error_estimate += tail;
    result.evaluations = evaluations;
    if result.converged {
        Ok(result)
    } else {
        Err(QuadratureError::NonConvergence(result))
    }
}

/// Adaptive GK21 on `[a, b]` with the line's tolerances.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, line: &ContourLine) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    line.validate()?;
    let mut evaluations = 0usize;
    let result = integrate_finite(&f, a, b, line, line.abs_tol, &mut evaluations)?;
    if result.converged {
        Ok(result)
    } else {
        Err(QuadratureError::NonConvergence(result))
    }
}

const ENVELOPE_SAMPLES: usize = 48;

fn truncation_point<F>(f: &F, line: &ContourLine, evaluations: &mut usize) -> Result<(f64, f64), QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let rho = line.decay_rate;
    let target = 0.5 * line.abs_tol;
    let mut upper = (4.0 / rho).max(4.0);
    for _ in 0..200 {
        let mut envelope = 0.0f64;
        for i in 0..=ENVELOPE_SAMPLES {
            let x = upper * (0.5 + 0.5 * i as f64 / ENVELOPE_SAMPLES as f64);
            let v = f(x);
            *evaluations += 1;
            if !v.is_finite() {
                return Err(QuadratureError::NonFinite { x });
            }
            envelope = envelope.max(v.abs() * (rho * (x - upper)).exp());
        }
        // C e^{-ρX} with C = max |f(x)| e^{ρx}
        let tail = envelope / rho;
        if tail < target {
            return Ok((upper, tail));
        }
        upper *= 1.25;
    }
    Err(QuadratureError::InvalidLine(format!(
        "integrand does not decay at the declared rate ρ = {rho}"
    )))
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resolved: bool,
}

struct Ranked {
    error: f64,
    index: usize,
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken by position so the refinement order is reproducible
        self.error.total_cmp(&other.error).then(other.index.cmp(&self.index))
    }
}

fn integrate_finite<F>(
    f: &F,
    a: f64,
    b: f64,
    line: &ContourLine,
    abs_tol: f64,
    evaluations: &mut usize,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let length = b - a;
    let mut count = 8usize;
    if let Some(piece) = line.max_piece {
        count = count.max((length / piece).ceil() as usize);
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(4 * count);
    let mut heap = BinaryHeap::new();
    for i in 0..count {
        let lo = a + length * i as f64 / count as f64;
        let hi = if i + 1 == count { b } else { a + length * (i + 1) as f64 / count as f64 };
        let piece = gk21(f, lo, hi, evaluations)?;
        if !piece.resolved {
            heap.push(Ranked { error: piece.error, index: pieces.len() });
        }
        pieces.push(piece);
    }

    let total = |pieces: &[Piece]| -> (f64, f64) {
        let value: NeumaierSum = pieces.iter().map(|p| p.value).collect();
        let error: NeumaierSum = pieces.iter().map(|p| p.error).collect();
        (value.value(), error.value())
    };

    let (mut value, mut error) = total(&pieces);
    let mut converged = true;
    while error > abs_tol.max(line.rel_tol * value.abs()) {
        let Some(Ranked { index, .. }) = heap.pop() else {
            // every remaining piece sits at its roundoff floor
            break;
        };
        if *evaluations + 42 > line.max_evals {
            converged = false;
            break;
        }
        let parent = pieces[index];
        let mid = 0.5 * (parent.a + parent.b);
        let mut left = gk21(f, parent.a, mid, evaluations)?;
        let mut right = gk21(f, mid, parent.b, evaluations)?;
        if mid <= parent.a || mid >= parent.b || (parent.b - parent.a) < 1e-13 * (1.0 + mid.abs()) {
            left.resolved = true;
            right.resolved = true;
        }
        value += left.value + right.value - parent.value;
        error += left.error + right.error - parent.error;
        pieces[index] = left;
        if !left.resolved {
            heap.push(Ranked { error: left.error, index });
        }
        if !right.resolved {
            heap.push(Ranked { error: right.error, index: pieces.len() });
        }
        pieces.push(right);
    }

    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (value, error) = total(&pieces);
    Ok(QuadratureResult { value, abs_error_estimate: error, evaluations: *evaluations, converged })
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn gk21<F>(f: &F, a: f64, b: f64, evaluations: &mut usize) -> Result<Piece, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite { x })
        }
    };
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let f_center = eval(center)?;
    let mut gauss = 0.0;
    let mut kronrod = f_center * WGK[10];
    let mut res_abs = kronrod.abs();
    for j in 0..10 {
        let x = half * XGK[j];
        let (v1, v2) = (eval(center - x)?, eval(center + x)?);
        fv1[j] = v1;
        fv2[j] = v2;
        kronrod += WGK[j] * (v1 + v2);
        res_abs += WGK[j] * (v1.abs() + v2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (v1 + v2);
        }
    }
    *evaluations += 21;
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = ((kronrod - gauss) * half).abs();
    let (res_abs, res_asc) = (res_abs * half.abs(), res_asc * half.abs());
    let mut error = err;
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    let resolved = error <= floor;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Piece { a, b, value: kronrod * half, error, resolved })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let r = integrate_semi_infinite(|x| (-x).exp(), &ContourLine::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.abs_error_estimate >= 0.0);
    }

    #[test]
    fn shifted_exponential() {
        let line = ContourLine::shifted(0.7, 1.0);
        let r = integrate_semi_infinite(|x| (-line.point(x)).exp().re, &line).unwrap();
        assert!((r.value - 0.7f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn polynomial_times_exponential() {
        let line = ContourLine::real_axis(1.5);
        let r = integrate_semi_infinite(|x| x * (-2.0 * x).exp(), &line).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand_is_resolved() {
        // ∫ cos(40x) e^{-x} dx = 1/(1 + 1600)
        let line = ContourLine { max_piece: Some(0.05), ..ContourLine::default() };
        let r = integrate_semi_infinite(|x| (40.0 * x).cos() * (-x).exp(), &line).unwrap();
        assert!((r.value - 1.0 / 1601.0).abs() < 1e-11);
    }

    #[test]
    fn non_finite_is_reported() {
        let err = integrate_semi_infinite(|x| 1.0 / (x - 1.0) * (-x).exp(), &ContourLine::default());
        assert!(matches!(err, Err(QuadratureError::NonFinite { .. }) | Err(QuadratureError::NonConvergence(_))));
        let err = integrate_semi_infinite(|_| f64::NAN, &ContourLine::default()).unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite { .. }));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let line = ContourLine { max_evals: 500, abs_tol: 1e-15, rel_tol: 1e-15, ..ContourLine::default() };
        let r = integrate_semi_infinite(|x| (x.sqrt() * 30.0).sin() * (-x).exp(), &line);
        assert!(matches!(r, Err(QuadratureError::NonConvergence(res)) if !res.converged));
    }

    #[test]
    fn invalid_lines_rejected() {
        let line = ContourLine { decay_rate: 0.0, ..ContourLine::default() };
        assert!(matches!(integrate_semi_infinite(|x| (-x).exp(), &line), Err(QuadratureError::InvalidLine(_))));
    }

    #[test]
    fn default_lines() {
        use crate::kernels::LensSpec;
        use std::f64::consts::PI;
        let q4 = Quotient::Lens(LensSpec::untwisted(4));
        let s3 = Quotient::Lens(LensSpec::untwisted(1));
        assert!((default_line(&q4, &Coupling::conformal4()).unwrap().delta - PI / 4.0).abs() < 1e-15);
        assert!((default_line(&s3, &Coupling::conformal3()).unwrap().decay_rate - 0.5).abs() < 1e-15);
        assert_eq!(default_line(&s3, &Coupling::imaginary_mass(10.0)).unwrap().decay_rate, 1.0);
        assert!(default_line(&s3, &Coupling::minimal()).is_err());
    }
}
