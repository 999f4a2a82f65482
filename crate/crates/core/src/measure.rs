//! Resolution-of-unity measures.
//!
//! The diagonal resolution ∫ d²z h(|z|²) |z;μ;α)(z;μ;α| = P_μ with an unnormalized
//! state |z;μ;α) = Σ_k c'_k z^k |kλ+μ⟩ reduces, after the angular integral, to the
//! moment problem
//!
//! ```text
//! ∫₀^∞ h(y) y^k dy = [π λ^{(λ−2α)(k+1)} c'²_k]^{-1},   k = 0, 1, 2, …
//! ```
//!
//! where h is a Meijer G-function G^{λ−α,0}_{α,λ−α} times a constant A. The constant
//! is fixed by k = 0; every k ≥ 1 is then an independent test, done exactly through
//! the Mellin transform (a ratio of Gamma products) rather than by quadrature.
//!
//! The eigenstates of a obey a nondiagonal resolution whose weights are built from
//! the α = 0 densities; [`verify_nondiagonal`] reduces it to the same moments.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::cstates::{check_label, cs_log_coefficients};
use crate::error::{Error, Result};
use crate::specfun::{meijer_g_residue_series, mellin_meijer_g, MeijerParams};

/// Pass threshold for moment mismatches.
pub const MOMENT_TOL: f64 = 1e-10;

/// h^{(α)}_μ(y) = A · G^{λ−α,0}_{α,λ−α}(y | arow; brow).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialMeasure {
    pub mu: usize,
    pub alpha: usize,
    pub mg: MeijerParams,
    /// ln A.
    #[serde(rename = "logA")]
    pub log_a: f64,
}

impl RadialMeasure {
    /// h(y) by residue summation; generic parameters only.
    pub fn density(&self, y: f64) -> Result<f64> {
        Ok(self.log_a.exp() * meijer_g_residue_series(&self.mg, y)?)
    }

    /// ln ∫₀^∞ h(y) y^{s−1} dy.
    pub fn log_mellin(&self, s: f64) -> Result<f64> {
        Ok(self.log_a + mellin_meijer_g(&self.mg, s)?)
    }
}

/// Whether the density form is established for this label or only conjectured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Proved,
    Conjecture,
}

pub fn regime(lambda: usize, alpha: usize) -> Regime {
    if 2 * alpha != lambda || matches!(lambda, 2 | 4 | 6) {
        Regime::Proved
    } else {
        Regime::Conjecture
    }
}

/// Meijer-G rows of h^{(α)}_μ and the constant fixed by the k = 0 moment.
pub fn radial_measure(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<RadialMeasure> {
    check_label(params, mu, alpha)?;
    let lambda = params.lambda();
    let arow = (mu + 1..=mu + alpha).map(|nu| params.betabar(nu) - 1.0).collect();
    let brow = std::iter::once(0.0)
        .chain((1..=mu).map(|nu| params.betabar(nu)))
        .chain((mu + alpha + 1..lambda).map(|nu| params.betabar(nu) - 1.0))
        .collect();
    let mg = MeijerParams::new(arow, brow);
    let log_a = required_moment(params, mu, alpha, 0)? - mellin_meijer_g(&mg, 1.0)?;
    Ok(RadialMeasure { mu, alpha, mg, log_a })
}

/// ln of the k-th moment the density must have: −ln[π λ^{(λ−2α)(k+1)} c'²_k].
pub fn required_moment(params: &AlgebraParams, mu: usize, alpha: usize, k: usize) -> Result<f64> {
    let ln_c = cs_log_coefficients(params, mu, alpha, k)?;
    Ok(required_from_coefficient(params, alpha, k, ln_c[k]))
}

fn required_from_coefficient(params: &AlgebraParams, alpha: usize, k: usize, ln_c: f64) -> f64 {
    let lambda = params.lambda();
    let power = ((lambda - 2 * alpha) * (k + 1)) as f64;
    -(PI.ln() + power * (lambda as f64).ln() + 2.0 * ln_c)
}

/// Moment-level check of the diagonal resolution for one label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub lambda: usize,
    pub alpha_params: Vec<f64>,
    pub mu: usize,
    pub alpha: usize,
    pub kmax: usize,
    pub max_rel_error: f64,
    pub regime: Regime,
    /// |exp(logA + ln Mellin(k+1)) / required(k) − 1| for k = 0..=kmax.
    pub per_k: Vec<f64>,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < MOMENT_TOL
    }
}

/// Compares the Mellin moments of h^{(α)}_μ with the required moments for k = 0..=kmax.
pub fn verify_resolution(params: &AlgebraParams, mu: usize, alpha: usize, kmax: usize) -> Result<ResolutionReport> {
    let measure = radial_measure(params, mu, alpha)?;
    verify_resolution_using(params, &measure, kmax)
}

/// As [`verify_resolution`] with a caller-supplied measure.
pub fn verify_resolution_using(
    params: &AlgebraParams,
    measure: &RadialMeasure,
    kmax: usize,
) -> Result<ResolutionReport> {
    let (mu, alpha) = (measure.mu, measure.alpha);
    let ln_c = cs_log_coefficients(params, mu, alpha, kmax)?;
    let mut per_k = Vec::with_capacity(kmax + 1);
    for (k, l) in ln_c.iter().enumerate() {
        let got = measure.log_mellin(k as f64 + 1.0)?;
        let want = required_from_coefficient(params, alpha, k, *l);
        per_k.push((got - want).exp_m1().abs());
    }
    Ok(ResolutionReport {
        lambda: params.lambda(),
        alpha_params: params.alpha().to_vec(),
        mu,
        alpha,
        kmax,
        max_rel_error: per_k.iter().cloned().fold(0.0, f64::max),
        regime: regime(params.lambda(), alpha),
        per_k,
    })
}

/// The weights h_μ(t) and g_μ(t) of the nondiagonal resolution at t = |z|²/λ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondiagonalWeights {
    pub t: f64,
    pub h: Vec<f64>,
    pub g: Vec<Complex64>,
}

/// h_μ(t) = λ^λ (∏_{ν≤μ} β̄_ν) t^{λ−μ−1} h^{(0)}_μ(t^λ) and g_μ(t) = (1/λ) Σ_ν e^{2πiμν/λ} h_ν(t).
///
/// Needs pointwise α = 0 densities, so degenerate parameters are rejected; their
/// nondiagonal resolution is still covered at moment level by [`verify_nondiagonal`].
pub fn nondiagonal_weights(params: &AlgebraParams, t: f64) -> Result<NondiagonalWeights> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::Domain(t, "nondiagonal weight argument"));
    }
    let lambda = params.lambda();
    let lf = lambda as f64;
    let mut h = Vec::with_capacity(lambda);
    let mut prod = 1.0;
    for mu in 0..lambda {
        if mu > 0 {
            prod *= params.betabar(mu);
        }
        let measure = radial_measure(params, mu, 0)?;
        let inner = measure.density(t.powi(lambda as i32))?;
        h.push(lf.powi(lambda as i32) * prod * t.powi((lambda - mu - 1) as i32) * inner);
    }
    let g = fourier_combination(&h, 1.0);
    Ok(NondiagonalWeights { t, h, g })
}

/// (1/λ) Σ_ν e^{2πi·sign·μν/λ} x_ν for μ = 0..λ−1.
fn fourier_combination(x: &[f64], sign: f64) -> Vec<Complex64> {
    let lf = x.len() as f64;
    (0..x.len())
        .map(|mu| {
            x.iter()
                .enumerate()
                .map(|(nu, &v)| Complex64::from_polar(v, sign * 2.0 * PI * (mu * nu) as f64 / lf))
                .sum::<Complex64>()
                / lf
        })
        .collect()
}

/// Moment-level check of the nondiagonal resolution of the eigenstates of a.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondiagonalReport {
    pub lambda: usize,
    pub kmax: usize,
    /// max_n |⟨n| (h-form) |n⟩ − 1| over n = kλ+μ, k ≤ kmax.
    pub diagonal_mismatch: f64,
    /// max |Σ_μ (1/λ) e^{2πiμ(ν−n)/λ} − δ| over n, ν: how far the g-form phases are from
    /// selecting the h-form weight of the grade of n.
    pub fourier_leakage: f64,
    /// max_n |⟨n| (g-form) |n⟩ − 1|.
    pub max_rel_error: f64,
}

impl NondiagonalReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < MOMENT_TOL
    }
}

/// Checks both sides of the nondiagonal resolution against the identity.
///
/// With |z) = Σ_n e_n z^n |n⟩ and e_n = (F(1)⋯F(n))^{-1/2}, the angular integral removes
/// every element with n ≠ n'. For n = kλ+μ the h-form diagonal element is
///
/// ```text
/// e_n² π λ^{n+1} ∫₀^∞ h_μ(t) t^n dt = e_n² π λ^{n+1} λ^{λ−1} (∏_{ν≤μ} β̄_ν) ∫₀^∞ h^{(0)}_μ(s) s^k ds,
/// ```
///
/// evaluated through the Mellin transform of the α = 0 density. The g-form element
/// carries the phases e^{−2πiμn/λ}; their sum against g reproduces h of the grade of n,
/// and the numerically formed combination is applied to the h-form value.
pub fn verify_nondiagonal(params: &AlgebraParams, kmax: usize) -> Result<NondiagonalReport> {
    let measures = (0..params.lambda())
        .map(|mu| radial_measure(params, mu, 0))
        .collect::<Result<Vec<_>>>()?;
    verify_nondiagonal_using(params, &measures, kmax)
}

/// As [`verify_nondiagonal`] with caller-supplied α = 0 measures, one per grade.
pub fn verify_nondiagonal_using(
    params: &AlgebraParams,
    measures: &[RadialMeasure],
    kmax: usize,
) -> Result<NondiagonalReport> {
    let lambda = params.lambda();
    if measures.len() != lambda {
        return Err(Error::DimensionMismatch(measures.len(), lambda));
    }
    let lf = lambda as f64;
    let nmax = (kmax + 1) * lambda - 1;

    let mut ln_e2 = vec![0.0; nmax + 1];
    for n in 1..=nmax {
        ln_e2[n] = ln_e2[n - 1] - params.ln_structure(n);
    }
    let mut ln_prod = vec![0.0; lambda];
    for mu in 1..lambda {
        ln_prod[mu] = ln_prod[mu - 1] + params.betabar(mu).ln();
    }

    let mut diagonal_mismatch: f64 = 0.0;
    let mut fourier_leakage: f64 = 0.0;
    let mut max_rel_error: f64 = 0.0;
    for n in 0..=nmax {
        let (k, mu) = (n / lambda, n % lambda);
        let ln_elem = ln_e2[n]
            + PI.ln()
            + (n + lambda) as f64 * lf.ln()
            + ln_prod[mu]
            + measures[mu].log_mellin(k as f64 + 1.0)?;
        let h_form = ln_elem.exp();
        diagonal_mismatch = diagonal_mismatch.max((h_form - 1.0).abs());

        // Σ_μ' g_μ' e^{−2πiμ'n/λ} = Σ_ν w_ν h_ν with w_ν = (1/λ) Σ_μ' e^{2πiμ'(ν−n)/λ}
        let mut selected = Complex64::new(0.0, 0.0);
        for nu in 0..lambda {
            let w: Complex64 = (0..lambda)
                .map(|m| {
                    let phase = 2.0 * PI * (m * nu) as f64 / lf - 2.0 * PI * (m * n) as f64 / lf;
                    Complex64::from_polar(1.0 / lf, phase)
                })
                .sum();
            let target = if nu == mu { 1.0 } else { 0.0 };
            fourier_leakage = fourier_leakage.max((w - target).norm());
            if nu == mu {
                selected += w;
            }
        }
        let g_form = selected * h_form;
        max_rel_error = max_rel_error.max((g_form - 1.0).norm());
    }
    max_rel_error = max_rel_error.max(fourier_leakage);
    Ok(NondiagonalReport {
        lambda,
        kmax,
        diagonal_mismatch,
        fourier_leakage,
        max_rel_error,
    })
}

/// Outcome of sampling a density for sign changes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivitySample {
    pub evaluated: usize,
    /// Points where the residue series could not certify its accuracy.
    pub skipped: usize,
    pub negative: usize,
    pub min_value: f64,
    pub max_value: f64,
}

impl PositivitySample {
    /// Largest negative excursion relative to the largest sampled value; 0 when all are ≥ 0.
    pub fn relative_negativity(&self) -> f64 {
        if self.negative == 0 {
            return 0.0;
        }
        -self.min_value / self.max_value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Evaluates h^{(α)}_μ on `ys` and counts negative values.
///
/// Errors with [`Error::Degenerate`] for parameters the residue series cannot handle.
pub fn sample_positivity(params: &AlgebraParams, mu: usize, alpha: usize, ys: &[f64]) -> Result<PositivitySample> {
    let measure = radial_measure(params, mu, alpha)?;
    measure.mg.check_generic()?;
    let mut out = PositivitySample {
        evaluated: 0,
        skipped: 0,
        negative: 0,
        min_value: f64::INFINITY,
        max_value: f64::NEG_INFINITY,
    };
    for &y in ys {
        match measure.density(y) {
            Ok(v) => {
                out.evaluated += 1;
                out.min_value = out.min_value.min(v);
                out.max_value = out.max_value.max(v);
                if v < 0.0 {
                    out.negative += 1;
                }
            }
            Err(Error::PrecisionLoss { .. }) => out.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: usize, a: &[f64]) -> AlgebraParams {
        AlgebraParams::with_alpha(l, a).unwrap()
    }

    fn generic(l: usize) -> AlgebraParams {
        let bb: &[f64] = match l {
            3 => &[0.3125, 0.59375],
            4 => &[0.3, 0.75, 0.625],
            5 => &[0.15, 0.55, 0.9, 0.7],
            6 => &[0.2, 0.45, 0.5, 0.85, 0.95],
            8 => &[0.21875, 0.40625, 0.3125, 0.5625, 0.78125, 0.84375, 1.15625],
            _ => unreachable!(),
        };
        AlgebraParams::from_betabar(l, bb, 1e-10).unwrap()
    }

    fn labels(l: usize) -> Vec<(usize, usize)> {
        (0..=l / 2)
            .flat_map(|alpha| (0..l - alpha).map(move |mu| (mu, alpha)))
            .collect()
    }

    fn ln_factorial(n: usize) -> f64 {
        (1..=n).map(|m| (m as f64).ln()).sum()
    }

    #[test]
    fn boson_rows() {
        let p = params(2, &[0.0, 0.0]);
        let m0 = radial_measure(&p, 0, 0).unwrap();
        assert!(m0.mg.arow.is_empty());
        assert_eq!(m0.mg.brow, vec![0.0, -0.5]);
        let m1 = radial_measure(&p, 1, 0).unwrap();
        assert_eq!(m1.mg.brow, vec![0.0, 0.5]);
    }

    #[test]
    fn row_structure_lambda4() {
        let p = generic(4);
        let m = radial_measure(&p, 1, 1).unwrap();
        assert_eq!(m.mg.arow, vec![p.betabar(2) - 1.0]);
        assert_eq!(m.mg.brow, vec![0.0, p.betabar(1), p.betabar(3) - 1.0]);
        for (mu, alpha) in labels(4) {
            let m = radial_measure(&p, mu, alpha).unwrap();
            assert_eq!(m.mg.arow.len(), alpha);
            assert_eq!(m.mg.brow.len(), 4 - alpha);
        }
    }

    #[test]
    fn required_moment_values() {
        let p = params(2, &[0.0, 0.0]);
        let m0 = required_moment(&p, 0, 0, 0).unwrap();
        assert!((m0 - (1.0 / (4.0 * PI)).ln()).abs() < 1e-15);
        let m1 = required_moment(&p, 0, 0, 1).unwrap();
        assert!((m1 - (2.0 / (16.0 * PI)).ln()).abs() < 1e-15);
    }

    #[test]
    fn required_moment_by_quadrature() {
        // oracle: ∫ y^k √π y^{-1/2} e^{-2√y} dy by Simpson's rule in u = √y
        let p = params(2, &[0.0, 0.0]);
        let m = radial_measure(&p, 0, 0).unwrap();
        let a = m.log_a.exp();
        let (steps, top) = (200_000, 40.0);
        let du = top / steps as f64;
        for k in 0..3 {
            let f = |u: f64| 2.0 * u.powi(2 * k as i32) * PI.sqrt() * (-2.0 * u).exp();
            let mut s = f(0.0) + f(top);
            for i in 1..steps {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * du);
            }
            let quad = a * s * du / 3.0;
            let want = required_moment(&p, 0, 0, k).unwrap().exp();
            assert!((quad / want - 1.0).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn consecutive_required_moments() {
        let p = params(3, &[1.0, 0.0, -1.0]);
        for (mu, alpha) in labels(3) {
            let c = cs_log_coefficients(&p, mu, alpha, 12).unwrap();
            for k in 0..11 {
                let r = required_moment(&p, mu, alpha, k + 1).unwrap() - required_moment(&p, mu, alpha, k).unwrap();
                let want = -((3 - 2 * alpha) as f64) * 3f64.ln() + 2.0 * (c[k] - c[k + 1]);
                assert!((r - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boson_moments_are_factorials() {
        // Σ over grades: π 4^{k+1} ∫ h_μ y^k dy = n! with n = 2k + μ
        let p = params(2, &[0.0, 0.0]);
        for mu in 0..2 {
            let m = radial_measure(&p, mu, 0).unwrap();
            for k in 0..=50 {
                let got = m.log_mellin(k as f64 + 1.0).unwrap() + PI.ln() + (k + 1) as f64 * 4f64.ln();
                let want = ln_factorial(2 * k + mu);
                assert!((got - want).abs() < 1e-12 * want.max(1.0), "μ={mu} k={k}");
            }
        }
        let rep = verify_resolution(&p, 0, 0, 50).unwrap();
        assert!(rep.max_rel_error < 1e-12);
        assert_eq!(rep.regime, Regime::Proved);
    }

    #[test]
    fn all_labels_resolve() {
        let mut sets = vec![
            params(2, &[0.0, 0.0]),
            params(2, &[1.0, -1.0]),
            params(3, &[1.0, 0.0, -1.0]),
        ];
        sets.extend([3, 4, 5, 6].map(generic));
        for p in sets {
            for (mu, alpha) in labels(p.lambda()) {
                let rep = verify_resolution(&p, mu, alpha, 50).unwrap();
                assert!(
                    rep.passed(),
                    "λ={} μ={mu} α={alpha} err={:e}",
                    p.lambda(),
                    rep.max_rel_error
                );
                assert_eq!(rep.per_k.len(), 51);
            }
        }
    }

    #[test]
    fn half_lambda_family() {
        let p = generic(6);
        for mu in 0..3 {
            let rep = verify_resolution(&p, mu, 3, 50).unwrap();
            assert!(rep.passed());
            assert_eq!(rep.regime, Regime::Proved);
        }
        let p = generic(8);
        for mu in 0..4 {
            let rep = verify_resolution(&p, mu, 4, 50).unwrap();
            assert_eq!(rep.regime, Regime::Conjecture);
            assert!(rep.max_rel_error.is_finite());
        }
    }

    #[test]
    fn corrupted_constant_detected() {
        let p = generic(4);
        let mut m = radial_measure(&p, 1, 1).unwrap();
        m.log_a += 1e-6;
        let rep = verify_resolution_using(&p, &m, 20).unwrap();
        assert!((rep.max_rel_error - 1e-6).abs() < 1e-9);
        assert!(!rep.passed());
    }

    #[test]
    fn boson_closed_form_density() {
        let p = params(2, &[0.0, 0.0]);
        let m = radial_measure(&p, 0, 0).unwrap();
        assert!((m.log_a - (1.0 / (4.0 * PI.powf(1.5))).ln()).abs() < 1e-14);
        for y in [0.05f64, 0.3, 1.0, 4.0, 10.0] {
            let want = m.log_a.exp() * PI.sqrt() * y.powf(-0.5) * (-2.0 * f64::sqrt(y)).exp();
            assert!((m.density(y).unwrap() / want - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn boson_nondiagonal_weights() {
        let p = params(2, &[0.0, 0.0]);
        for t in [0.1, 0.5, 1.0, 2.5] {
            let w = nondiagonal_weights(&p, t).unwrap();
            let want = (-2.0 * t).exp() / PI;
            assert!((w.h[0] / want - 1.0).abs() < 1e-8);
            assert!((w.h[1] / want - 1.0).abs() < 1e-8);
            assert!((w.g[0].re / want - 1.0).abs() < 1e-8);
            assert!(w.g[1].norm() < 1e-8 * want);
        }
    }

    #[test]
    fn fourier_inversion_of_weights() {
        let p = generic(3);
        let w = nondiagonal_weights(&p, 0.7).unwrap();
        for nu in 0..3 {
            let back: Complex64 = (0..3)
                .map(|mu| w.g[mu] * Complex64::from_polar(1.0, -2.0 * PI * (mu * nu) as f64 / 3.0))
                .sum();
            assert!((back.re - w.h[nu]).abs() < 1e-14 * w.h[nu].abs());
            assert!(back.im.abs() < 1e-14 * w.h[nu].abs());
        }
    }

    #[test]
    fn degenerate_weights_rejected() {
        let p = params(2, &[1.0, -1.0]);
        assert!(matches!(nondiagonal_weights(&p, 0.5), Err(Error::Degenerate { .. })));
        assert!(matches!(
            sample_positivity(&p, 0, 0, &[0.5]),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn nondiagonal_resolution() {
        let rep = verify_nondiagonal(&params(2, &[0.0, 0.0]), 40).unwrap();
        assert!(rep.max_rel_error < 1e-12);
        let rep = verify_nondiagonal(&params(3, &[1.0, 0.0, -1.0]), 30).unwrap();
        assert!(rep.passed());
        for l in [4, 5, 6] {
            assert!(verify_nondiagonal(&generic(l), 30).unwrap().passed());
        }
    }

    #[test]
    fn nondiagonal_corruption_detected() {
        let p = params(3, &[1.0, 0.0, -1.0]);
        let mut ms: Vec<_> = (0..3).map(|mu| radial_measure(&p, mu, 0).unwrap()).collect();
        ms[1].log_a += 1e-6;
        let rep = verify_nondiagonal_using(&p, &ms, 10).unwrap();
        assert!((rep.diagonal_mismatch - 1e-6).abs() < 1e-9);
        assert!(!rep.passed());
    }

    #[test]
    fn sampled_positivity() {
        let ys: Vec<f64> = (1..40).map(|i| 0.05 * i as f64).collect();
        for l in [3, 4, 5, 6] {
            let p = generic(l);
            for mu in 0..l {
                let s = sample_positivity(&p, mu, 0, &ys).unwrap();
                assert_eq!(s.negative, 0, "λ={l} μ={mu}");
                assert!(s.evaluated > 0);
            }
        }
    }
}
