//! Meijer G-functions of class G^{q,0}_{p,q}.
//!
//! With all lower parameters in the numerator of the Mellin-Barnes integrand,
//!
//! ```text
//! ∫₀^∞ y^{s-1} G(y) dy = ∏_j Γ(b_j + s) / ∏_i Γ(a_i + s),
//! ```
//!
//! which is what the moment checks use. Pointwise values come from summing the
//! residues at s = b_h + k of Γ(b_h - s) (generic parameters only):
//!
//! ```text
//! G(y) = Σ_h [∏_{j≠h} Γ(b_j - b_h) / ∏_i Γ(a_i - b_h)] y^{b_h}
//!            · ₚF_{q-1}(1 + b_h - a; 1 + b_h - b_{j≠h}; (-1)^{p-q} y).
//! ```
//!
//! For p < q the inner series are entire; for p = q they converge on y < 1 and
//! G vanishes identically for y > 1.

use serde::{Deserialize, Serialize};

use super::dd::Dd;
use super::gamma::{ln_gamma_signed, log_gamma};
use crate::error::{Error, Result};

/// Per-branch term cap for the residue series.
pub const RESIDUE_TERM_CAP: usize = 10_000;

/// Relative accuracy the residue evaluator must certify, otherwise it errors.
pub const RESIDUE_TARGET: f64 = 1e-8;

/// Window length of the ratio-test convergence monitor.
const WINDOW: usize = 32;

/// Parameters closer than this to an integer difference count as degenerate.
const DEGENERACY_GAP: f64 = 1e-8;

/// Assumed relative error of a Gamma-product prefactor, per Gamma factor.
const GAMMA_REL_ERR: f64 = 5e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeijerParams {
    pub arow: Vec<f64>,
    pub brow: Vec<f64>,
}

impl MeijerParams {
    pub fn new(arow: Vec<f64>, brow: Vec<f64>) -> Self {
        Self { arow, brow }
    }

    /// Checks that no two lower parameters differ by an integer.
    pub fn check_generic(&self) -> Result<()> {
        for i in 0..self.brow.len() {
            for j in i + 1..self.brow.len() {
                let d = self.brow[i] - self.brow[j];
                if (d - d.round()).abs() < DEGENERACY_GAP {
                    return Err(Error::Degenerate { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn is_generic(&self) -> bool {
        self.check_generic().is_ok()
    }
}

/// ln of the Mellin transform Σ ln Γ(b_j + s) − Σ ln Γ(a_i + s); every argument must be positive.
pub fn mellin_meijer_g(p: &MeijerParams, s: f64) -> Result<f64> {
    let mut acc = 0.0;
    for b in &p.brow {
        acc += log_gamma(b + s).map_err(|_| Error::Domain(b + s, "mellin_meijer_g"))?;
    }
    for a in &p.arow {
        acc -= log_gamma(a + s).map_err(|_| Error::Domain(a + s, "mellin_meijer_g"))?;
    }
    Ok(acc)
}

/// Σ_k ∏(upper)_k / ∏(lower)_k · x^k / k! in double-double, with the largest |term| seen.
fn dd_series(upper: &[f64], lower: &[f64], x: f64) -> Result<(Dd, f64)> {
    let scale = upper.iter().chain(lower).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut sum = Dd::ONE;
    let mut term = Dd::ONE;
    let mut max_term = 1.0f64;
    let mut window_start = 1.0f64;
    for k in 0..RESIDUE_TERM_CAP {
        let kf = Dd::from(k as f64);
        let num = upper.iter().fold(Dd::from(x), |acc, &u| acc * (Dd::from(u) + kf));
        let den = lower
            .iter()
            .fold(Dd::from(k as f64 + 1.0), |acc, &l| acc * (Dd::from(l) + kf));
        term = term * num / den;
        if term.hi == 0.0 {
            // an upper parameter hit a nonpositive integer: the series terminated
            return Ok((sum, max_term));
        }
        sum = sum + term;
        let mag = term.hi.abs();
        max_term = max_term.max(mag);

        if (k + 1) % WINDOW == 0 {
            let decreasing = mag < window_start;
            window_start = mag;
            let j = k as f64 + 1.0;
            if decreasing && j > scale + 1.0 {
                // every later ratio is bounded by this product once j exceeds all parameters
                let mut bound = x.abs() / (j + 1.0);
                let mut lows = lower.iter().map(|l| l + j);
                for u in upper {
                    let d = lows.next().unwrap_or(j + 1.0);
                    bound *= ((u + j) / d).abs().max(1.0);
                }
                for d in lows {
                    bound /= d;
                }
                if upper.len() > lower.len() {
                    bound *= j + 1.0;
                }
                if bound < 1.0 && mag / (1.0 - bound) <= 1e-33 * sum.hi.abs() {
                    return Ok((sum, max_term));
                }
            }
        }
    }
    Err(Error::NoConvergence {
        what: "Meijer-G residue branch",
        cap: RESIDUE_TERM_CAP,
    })
}

/// Pointwise G^{q,0}_{p,q}(y | arow; brow) by residue summation.
///
/// Errors with [`Error::Degenerate`] when two lower parameters differ by an integer and
/// with [`Error::PrecisionLoss`] when cancellation between branches leaves less than the
/// [`RESIDUE_TARGET`] relative accuracy.
pub fn meijer_g_residue_series(p: &MeijerParams, y: f64) -> Result<f64> {
    if y <= 0.0 || !y.is_finite() {
        return Err(Error::Domain(y, "meijer_g_residue_series"));
    }
    let (np, nq) = (p.arow.len(), p.brow.len());
    if nq == 0 || np > nq {
        return Err(Error::Domain(np as f64, "Meijer-G row lengths"));
    }
    p.check_generic()?;
    if np == nq {
        if y > 1.0 {
            return Ok(0.0);
        }
        if y == 1.0 {
            return Err(Error::Domain(y, "G^{q,0}_{q,q} at y = 1"));
        }
    }
    let x = if (nq - np) % 2 == 1 { -y } else { y };
    let ln_y = y.ln();

    let mut total = Dd::ZERO;
    let mut err = 0.0f64;
    for (h, &bh) in p.brow.iter().enumerate() {
        let mut log_pref = bh * ln_y;
        let mut sign = 1.0;
        for (j, &bj) in p.brow.iter().enumerate() {
            if j != h {
                let (l, s) = ln_gamma_signed(bj - bh);
                log_pref += l;
                sign *= s;
            }
        }
        let mut vanishes = false;
        for &a in &p.arow {
            let (l, s) = ln_gamma_signed(a - bh);
            if s == 0.0 {
                vanishes = true;
                break;
            }
            log_pref -= l;
            sign *= s;
        }
        if vanishes {
            continue;
        }
        let pref = sign * log_pref.exp();

        let upper: Vec<f64> = p.arow.iter().map(|a| 1.0 + bh - a).collect();
        let lower: Vec<f64> = p
            .brow
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != h)
            .map(|(_, b)| 1.0 + bh - b)
            .collect();
        let (series, max_term) = dd_series(&upper, &lower, x)?;
        total = total + Dd::from(pref) * series;

        let factors = (nq + np) as f64;
        let pref_rel = GAMMA_REL_ERR * factors + f64::EPSILON * log_pref.abs();
        err += pref.abs() * (series.hi.abs() * pref_rel + max_term * 1e-30);
    }
    let value = total.to_f64();
    let estimate = if value == 0.0 { f64::INFINITY } else { err / value.abs() };
    if estimate > RESIDUE_TARGET {
        return Err(Error::PrecisionLoss { y, estimate });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn g(arow: &[f64], brow: &[f64]) -> MeijerParams {
        MeijerParams::new(arow.to_vec(), brow.to_vec())
    }

    /// Complex ln Γ by upward shift and Stirling; only used to build quadrature oracles.
    fn c_ln_gamma(mut z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        while z.norm() < 20.0 {
            shift += z.ln();
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let series =
            inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 / 1188.0))));
        (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
    }

    /// G(y) = (1/2π) ∫ Φ(c + it) y^{-c-it} dt on the line Re s = c, trapezoid rule.
    fn inverse_mellin(p: &MeijerParams, y: f64, c: f64, tmax: f64, h: f64) -> f64 {
        let n = (tmax / h).round() as i64;
        let mut acc = 0.0;
        for i in -n..=n {
            let s = Complex64::new(c, i as f64 * h);
            let mut logphi = Complex64::new(0.0, 0.0);
            for b in &p.brow {
                logphi += c_ln_gamma(s + b);
            }
            for a in &p.arow {
                logphi -= c_ln_gamma(s + a);
            }
            let val = (logphi - s * y.ln()).exp();
            acc += val.re;
        }
        acc * h / (2.0 * PI)
    }

    #[test]
    fn mellin_examples() {
        for k in 0..6 {
            let m = mellin_meijer_g(&g(&[], &[0.0]), k as f64 + 1.0).unwrap();
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            assert!((m - fact.ln()).abs() < 1e-14);
        }
        let m = mellin_meijer_g(&g(&[], &[0.0, -0.5]), 1.0).unwrap();
        assert!((m - PI.sqrt().ln()).abs() < 1e-14);
        let m = mellin_meijer_g(&g(&[0.5], &[0.0]), 2.0).unwrap();
        // Γ(2)/Γ(5/2) = 1 / (3√π/4)
        assert!((m - (4.0 / (3.0 * PI.sqrt())).ln()).abs() < 1e-14);
        assert!(mellin_meijer_g(&g(&[], &[-1.5]), 1.0).is_err());
    }

    #[test]
    fn mellin_matches_quadrature_of_closed_form() {
        // G^{2,0}_{0,2}(y | 0, -1/2) = √π y^{-1/2} e^{-2√y}; with y = u², ∫₀^∞ G dy = 2√π ∫ e^{-2u} du
        let h = 1e-3;
        let mut acc = 0.0;
        let mut u: f64 = 0.5 * h;
        while u < 40.0 {
            acc += 2.0 * PI.sqrt() * (-2.0 * u).exp() * h;
            u += h;
        }
        let m = mellin_meijer_g(&g(&[], &[0.0, -0.5]), 1.0).unwrap().exp();
        assert!((acc - m).abs() < 1e-6);
    }

    #[test]
    fn exponential_case() {
        let p = g(&[], &[0.0]);
        assert!((meijer_g_residue_series(&p, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
        for i in 0..=40 {
            let y = 0.05 + i as f64 * (10.0 - 0.05) / 40.0;
            let got = meijer_g_residue_series(&p, y).unwrap();
            assert!((got / (-y).exp() - 1.0).abs() < 1e-8, "y={y}");
        }
    }

    #[test]
    fn half_integer_pair_closed_form() {
        let p = g(&[], &[0.0, -0.5]);
        let closed = |y: f64| PI.sqrt() * y.powf(-0.5) * (-2.0 * y.sqrt()).exp();
        let at = meijer_g_residue_series(&p, 0.25).unwrap();
        assert!((at - 1.3040986643).abs() < 1e-9);
        assert!((at / closed(0.25) - 1.0).abs() < 1e-12);
        for i in 0..=40 {
            let y = 0.05 + i as f64 * (10.0 - 0.05) / 40.0;
            let got = meijer_g_residue_series(&p, y).unwrap();
            assert!((got / closed(y) - 1.0).abs() < 1e-8, "y={y}");
        }
    }

    #[test]
    fn three_lower_parameters_against_inverse_mellin() {
        let p = g(&[], &[0.0, 0.3, 0.7]);
        for y in [0.5, 0.1, 2.0] {
            let got = meijer_g_residue_series(&p, y).unwrap();
            let oracle = inverse_mellin(&p, y, 0.5, 40.0, 0.02);
            assert!((got - oracle).abs() < 1e-6 * oracle.abs(), "y={y}: {got} vs {oracle}");
        }
    }

    #[test]
    fn upper_row_against_inverse_mellin() {
        let p = g(&[0.9], &[0.0, 0.35]);
        for y in [0.3, 1.7] {
            let got = meijer_g_residue_series(&p, y).unwrap();
            let oracle = inverse_mellin(&p, y, 0.5, 90.0, 0.02);
            assert!((got - oracle).abs() < 1e-6 * oracle.abs(), "y={y}: {got} vs {oracle}");
        }
    }

    #[test]
    fn square_case_is_supported_on_unit_interval() {
        // G^{1,0}_{1,1}(y | a; b) = y^b (1-y)^{a-b-1} / Γ(a-b) on (0,1)
        let (a, b) = (1.8, 0.3);
        let p = g(&[a], &[b]);
        for y in [0.05f64, 0.3, 0.6, 0.9] {
            let want = y.powf(b) * (1.0 - y).powf(a - b - 1.0) / log_gamma(a - b).unwrap().exp();
            let got = meijer_g_residue_series(&p, y).unwrap();
            assert!((got / want - 1.0).abs() < 1e-10, "y={y}");
        }
        assert_eq!(meijer_g_residue_series(&p, 1.5).unwrap(), 0.0);
        assert!(meijer_g_residue_series(&p, 1.0).is_err());
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let p = g(&[], &[0.0, -1.0 / 3.0, 0.0]);
        assert!(matches!(
            meijer_g_residue_series(&p, 0.5),
            Err(Error::Degenerate { i: 0, j: 2 })
        ));
        assert!(!g(&[], &[0.5, 2.5]).is_generic());
    }

    #[test]
    fn reports_precision_loss() {
        let p = g(&[], &[0.0]);
        assert!(matches!(
            meijer_g_residue_series(&p, 60.0),
            Err(Error::PrecisionLoss { .. })
        ));
    }

    /// Simpson rule for ∫₀^Y y^k G(y) dy in the variable x = ln y.
    fn moment_quadrature(p: &MeijerParams, k: i32, ymax: f64) -> f64 {
        let (x0, x1) = (-40.0f64, ymax.ln());
        let n = 8000;
        let h = (x1 - x0) / n as f64;
        let f = |x: f64| {
            let y = x.exp();
            y.powi(k + 1) * meijer_g_residue_series(p, y).unwrap()
        };
        let mut acc = f(x0) + f(x1);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(x0 + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn mellin_and_series_agree() {
        // G^{1,0}_{0,1}(y | b) = y^b e^{-y}; tail ∫_Y^∞ y^m e^{-y} ≤ Y^m e^{-Y} / (1 - m/Y)
        let ymax: f64 = 25.0;
        for b in [0.3, -0.4] {
            let p = g(&[], &[b]);
            for k in 0..3 {
                let quad = moment_quadrature(&p, k, ymax);
                let exact = mellin_meijer_g(&p, k as f64 + 1.0).unwrap().exp();
                let m = k as f64 + b;
                let tail = ymax.powf(m) * (-ymax).exp() / (1.0 - m / ymax);
                assert!((quad - exact).abs() <= tail + 1e-6 * exact, "b={b} k={k}");
            }
        }
    }
}
