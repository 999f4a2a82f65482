//! Coherent states of the extended oscillator.
//!
//! Two families are built here:
//!
//! - |z;μ;α⟩, the normalizable solutions of (a^{λ-α} − z (a†)^α)|ψ⟩ = 0 inside the
//!   grade-μ subspace, expanded as N^{-1/2} Σ_k c'_k z^k |kλ+μ⟩;
//! - the eigenstates a|z⟩ = z|z⟩, assembled from the α = 0 family of every grade
//!   at the label ω = z^λ.
//!
//! Coefficients use the convention c'_0 = 1 and come from the two-term recursion
//! that the defining equation forces. They are carried in log space so that long
//! truncations neither underflow nor overflow.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::error::{Error, Result};
use crate::fock::{lower_pow, raise_pow};
use crate::specfun::{pfq, ratio_bound_from};

/// Iteration cap when searching for a truncation order.
pub const CS_TERM_CAP: usize = 100_000;

/// Tail of Σ c'²_k |z|^{2k} left out by the truncation, relative to the partial sum.
const TAIL_REL: f64 = 1e-16;
/// Residual of the defining equation caused by cutting the series, on the unit-norm state.
const EDGE_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Rejects labels outside 0 ≤ α ≤ ⌊λ/2⌋, 0 ≤ μ ≤ λ−α−1.
pub fn check_label(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<()> {
    let lambda = params.lambda();
    if 2 * alpha > lambda || mu + alpha >= lambda {
        return Err(Error::InvalidLabel { lambda, mu, alpha });
    }
    Ok(())
}

/// ln(c'_{k+1} / c'_k) = ½ [Σ_{j=1}^{α} ln F(kλ+μ+j) − Σ_{i=0}^{λ−α−1} ln F((k+1)λ+μ−i)].
fn ln_step(params: &AlgebraParams, mu: usize, alpha: usize, k: usize) -> f64 {
    let lambda = params.lambda();
    let up: f64 = (1..=alpha).map(|j| params.ln_structure(k * lambda + mu + j)).sum();
    let down: f64 = (0..lambda - alpha)
        .map(|i| params.ln_structure((k + 1) * lambda + mu - i))
        .sum();
    0.5 * (up - down)
}

/// ln c'_0 .. ln c'_kmax.
pub fn cs_log_coefficients(params: &AlgebraParams, mu: usize, alpha: usize, kmax: usize) -> Result<Vec<f64>> {
    check_label(params, mu, alpha)?;
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(0.0);
    for k in 0..kmax {
        out.push(out[k] + ln_step(params, mu, alpha, k));
    }
    Ok(out)
}

/// c'_0 .. c'_kmax with c'_0 = 1.
pub fn cs_coefficients(params: &AlgebraParams, mu: usize, alpha: usize, kmax: usize) -> Result<Vec<f64>> {
    Ok(cs_log_coefficients(params, mu, alpha, kmax)?
        .into_iter()
        .map(f64::exp)
        .collect())
}

/// Upper parameters, lower parameters and argument y = |z|²/λ^{λ−2α} of the
/// hypergeometric form of N^{(α)}_μ(|z|).
pub fn cs_norm_parameters(params: &AlgebraParams, mu: usize, alpha: usize, absz: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let lambda = params.lambda();
    let upper = (mu + 1..=mu + alpha).map(|nu| params.betabar(nu)).collect();
    let lower = (1..=mu)
        .map(|nu| params.betabar(nu) + 1.0)
        .chain((mu + alpha + 1..lambda).map(|nu| params.betabar(nu)))
        .collect();
    let y = absz * absz / (lambda as f64).powi((lambda - 2 * alpha) as i32);
    (upper, lower, y)
}

fn check_disc(params: &AlgebraParams, alpha: usize, absz: f64, y: f64) -> Result<()> {
    if 2 * alpha == params.lambda() && y >= 1.0 {
        return Err(Error::OutsideUnitDisc { absz, y });
    }
    Ok(())
}

/// N^{(α)}_μ(|z|) = Σ_k c'²_k |z|^{2k}, evaluated in closed hypergeometric form.
pub fn cs_norm(params: &AlgebraParams, mu: usize, alpha: usize, absz: f64) -> Result<f64> {
    check_label(params, mu, alpha)?;
    if absz < 0.0 || !absz.is_finite() {
        return Err(Error::Domain(absz, "coherent-state label modulus"));
    }
    let (upper, lower, y) = cs_norm_parameters(params, mu, alpha, absz);
    check_disc(params, alpha, absz, y)?;
    pfq(&upper, &lower, y)
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// Smallest K at which Σ c'²_k |z|^{2k} may be cut.
///
/// Two conditions must hold at K: the rigorous tail bound on the dropped terms is
/// below 1e-16 of the partial sum, and the residual that the cut leaves in the
/// defining equation of the unit-norm state is below 1e-13.
pub fn truncation_order(params: &AlgebraParams, mu: usize, alpha: usize, absz: f64) -> Result<usize> {
    check_label(params, mu, alpha)?;
    if absz < 0.0 || !absz.is_finite() {
        return Err(Error::Domain(absz, "coherent-state label modulus"));
    }
    if absz == 0.0 {
        return Ok(0);
    }
    let lambda = params.lambda();
    let (upper, lower, y) = cs_norm_parameters(params, mu, alpha, absz);
    check_disc(params, alpha, absz, y)?;

    let ln_z = absz.ln();
    let mut ln_c = 0.0;
    let mut ln_sum = 0.0;
    for k in 0..CS_TERM_CAP {
        let ln_term = 2.0 * ln_c + 2.0 * k as f64 * ln_z;
        if k > 0 {
            ln_sum = log_add(ln_sum, ln_term);
        }
        let rel = (ln_term - ln_sum).exp();
        let bound = ratio_bound_from(&upper, &lower, y, k as f64);
        let ln_up: f64 = (1..=alpha).map(|j| params.ln_structure(k * lambda + mu + j)).sum();
        let edge = absz * (0.5 * (ln_term - ln_sum + ln_up)).exp();
        if k > 0 && bound < 1.0 && rel < 1e-14 && rel * bound / (1.0 - bound) <= TAIL_REL && edge <= EDGE_TOL {
            return Ok(k);
        }
        ln_c += ln_step(params, mu, alpha, k);
    }
    Err(Error::NoConvergence {
        what: "coherent-state truncation",
        cap: CS_TERM_CAP,
    })
}

/// Σ_{k ≤ K} c'²_k |z|^{2k} summed from the recursion, with K from [`truncation_order`].
pub fn cs_norm_by_recursion(params: &AlgebraParams, mu: usize, alpha: usize, absz: f64) -> Result<f64> {
    let kmax = truncation_order(params, mu, alpha, absz)?;
    if kmax == 0 {
        return Ok(1.0);
    }
    let ln_z = absz.ln();
    let ln_c = cs_log_coefficients(params, mu, alpha, kmax)?;
    Ok(ln_c
        .iter()
        .enumerate()
        .map(|(k, l)| (2.0 * l + 2.0 * k as f64 * ln_z).exp())
        .sum())
}

/// |z;μ;α⟩ truncated at k = `kmax`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentState {
    pub z: Complex64,
    pub mu: usize,
    pub alpha: usize,
    /// c'_0..c'_kmax.
    #[serde(rename = "coefficients")]
    pub cprime: Vec<f64>,
    /// N^{(α)}_μ(|z|) from the closed form.
    pub norm: f64,
    pub kmax: usize,
    #[serde(skip)]
    lambda: usize,
    #[serde(skip)]
    ln_cprime: Vec<f64>,
}

impl CoherentState {
    /// Builds the state with an adaptively chosen truncation.
    pub fn new(params: &AlgebraParams, z: Complex64, mu: usize, alpha: usize) -> Result<Self> {
        let kmax = truncation_order(params, mu, alpha, z.norm())?;
        Self::with_truncation(params, z, mu, alpha, kmax)
    }

    /// Builds the state with a caller-chosen truncation; no tail check is made.
    pub fn with_truncation(params: &AlgebraParams, z: Complex64, mu: usize, alpha: usize, kmax: usize) -> Result<Self> {
        let norm = cs_norm(params, mu, alpha, z.norm())?;
        let ln_cprime = cs_log_coefficients(params, mu, alpha, kmax)?;
        Ok(Self {
            z,
            mu,
            alpha,
            cprime: ln_cprime.iter().map(|l| l.exp()).collect(),
            norm,
            kmax,
            lambda: params.lambda(),
            ln_cprime,
        })
    }

    /// Fock dimension Kλ + λ that holds the whole truncated expansion.
    pub fn required_dim(&self) -> usize {
        (self.kmax + 1) * self.lambda
    }

    /// Σ_{k ≤ K} c'²_k |z|^{2k}.
    pub fn truncated_norm(&self) -> f64 {
        self.log_amplitudes().iter().map(|l| (2.0 * l).exp()).sum()
    }

    /// ln(c'_k |z|^k) for k = 0..=K; only k = 0 when z = 0.
    fn log_amplitudes(&self) -> Vec<f64> {
        if self.z == ZERO {
            return vec![0.0];
        }
        let ln_z = self.z.norm().ln();
        self.ln_cprime
            .iter()
            .enumerate()
            .map(|(k, l)| l + k as f64 * ln_z)
            .collect()
    }

    /// Unit-norm amplitudes on |0⟩..|dim−1⟩.
    pub fn vector(&self, dim: usize) -> Result<Vec<Complex64>> {
        let required = self.required_dim();
        if dim < required {
            return Err(Error::InsufficientDimension { dim, required });
        }
        let logs = self.log_amplitudes();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let arg = self.z.arg();
        let mut v = vec![ZERO; dim];
        for (k, l) in logs.iter().enumerate() {
            v[k * self.lambda + self.mu] = Complex64::from_polar((l - top).exp(), k as f64 * arg);
        }
        let scale = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= scale;
        }
        Ok(v)
    }
}

/// Unit-norm |z;μ;α⟩ on a Fock space of dimension `dim`.
pub fn cs_build(params: &AlgebraParams, z: Complex64, mu: usize, alpha: usize, dim: usize) -> Result<Vec<Complex64>> {
    CoherentState::new(params, z, mu, alpha)?.vector(dim)
}

/// ‖(a^{λ−α} − z (a†)^α) v‖ with truncated ladder operators.
///
/// The caller keeps the support of `v` at least α levels below the top of the space.
pub fn cs_residual(params: &AlgebraParams, v: &[Complex64], z: Complex64, alpha: usize) -> f64 {
    let down = lower_pow(params, v, params.lambda() - alpha);
    let up = raise_pow(params, v, alpha);
    down.iter()
        .zip(&up)
        .map(|(d, u)| (d - z * u).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// ‖a v − z v‖ with the truncated annihilation operator.
pub fn eigen_residual(params: &AlgebraParams, v: &[Complex64], z: Complex64) -> f64 {
    lower_pow(params, v, 1)
        .iter()
        .zip(v)
        .map(|(d, x)| (d - z * x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// a-eigenstate |z⟩ = 𝒩^{-1/2} Σ_μ d'_μ (z/√λ)^μ |ω;μ;0⟩ with ω = z^λ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCs {
    pub z: Complex64,
    pub dprime: Vec<f64>,
    /// 𝒩(|z|) from the closed form.
    pub norm: f64,
    /// |ω;μ;0⟩ for μ = 0..λ−1, sharing one truncation order.
    pub components: Vec<CoherentState>,
}

impl EigenCs {
    pub fn new(params: &AlgebraParams, z: Complex64) -> Result<Self> {
        let lambda = params.lambda();
        let omega = z.powu(lambda as u32);
        let mut kmax = 0;
        for mu in 0..lambda {
            kmax = kmax.max(truncation_order(params, mu, 0, omega.norm())?);
        }
        let components = (0..lambda)
            .map(|mu| CoherentState::with_truncation(params, omega, mu, 0, kmax))
            .collect::<Result<Vec<_>>>()?;
        let mut prod = 1.0;
        let mut dprime = Vec::with_capacity(lambda);
        for (mu, c) in components.iter().enumerate() {
            if mu > 0 {
                prod *= params.betabar(mu);
            }
            dprime.push((c.norm / prod).sqrt());
        }
        Ok(Self {
            z,
            dprime,
            norm: eigen_cs_norm(params, z.norm())?,
            components,
        })
    }

    pub fn required_dim(&self) -> usize {
        self.components[0].required_dim()
    }

    /// Σ_μ d'_μ (z/√λ)^μ |ω;μ;0⟩ before division by √𝒩.
    pub fn unnormalized_vector(&self, dim: usize) -> Result<Vec<Complex64>> {
        let lambda = self.components.len();
        let step = self.z / (lambda as f64).sqrt();
        let mut out = vec![ZERO; dim];
        let mut factor = Complex64::new(1.0, 0.0);
        for (mu, c) in self.components.iter().enumerate() {
            let w = factor * self.dprime[mu];
            for (o, x) in out.iter_mut().zip(c.vector(dim)?) {
                *o += w * x;
            }
            factor *= step;
        }
        Ok(out)
    }

    /// Unit-norm |z⟩.
    pub fn vector(&self, dim: usize) -> Result<Vec<Complex64>> {
        let scale = self.norm.sqrt();
        Ok(self.unnormalized_vector(dim)?.into_iter().map(|x| x / scale).collect())
    }
}

/// Eigenstate |z⟩ of a together with its unit-norm vector of length `dim`.
pub fn eigen_cs_build(params: &AlgebraParams, z: Complex64, dim: usize) -> Result<(EigenCs, Vec<Complex64>)> {
    let cs = EigenCs::new(params, z)?;
    let v = cs.vector(dim)?;
    Ok((cs, v))
}

/// 𝒩(|z|) = Σ_μ ₀F_{λ−1}(; β̄_1+1..β̄_μ+1, β̄_{μ+1}..β̄_{λ−1}; t^λ) t^μ / ∏_{ν≤μ} β̄_ν, t = |z|²/λ.
pub fn eigen_cs_norm(params: &AlgebraParams, absz: f64) -> Result<f64> {
    let lambda = params.lambda();
    let t = absz * absz / lambda as f64;
    let y = t.powi(lambda as i32);
    let mut total = 0.0;
    let mut prod = 1.0;
    for mu in 0..lambda {
        if mu > 0 {
            prod *= params.betabar(mu);
        }
        let (_, lower, _) = cs_norm_parameters(params, mu, 0, 0.0);
        total += pfq(&[], &lower, y)? * t.powi(mu as i32) / prod;
    }
    Ok(total)
}

/// e_n = (F(1)⋯F(n))^{-1/2} for n = 0..=nmax: the amplitudes of 𝒩^{1/2}|z⟩ are e_n z^n.
pub fn eigen_weights(params: &AlgebraParams, nmax: usize) -> Vec<f64> {
    let mut ln_w = 0.0;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    for n in 1..=nmax {
        ln_w -= 0.5 * params.ln_structure(n);
        out.push(ln_w.exp());
    }
    out
}

/// 1 − |⟨ψ|φ⟩|² between |z;0;1⟩ and the normalized e^{zJ₊}|0⟩ of the su(1,1) case (λ = 2).
///
/// The exponential is summed term by term with the truncated J₊ = (a†)²/2 on a space
/// twice the size the coherent state needs.
pub fn perelomov_infidelity(params: &AlgebraParams, z: Complex64) -> Result<f64> {
    if params.lambda() != 2 {
        return Err(Error::Domain(
            params.lambda() as f64,
            "Perelomov states need lambda = 2",
        ));
    }
    let cs = CoherentState::new(params, z, 0, 1)?;
    let dim = 2 * cs.required_dim();
    let psi = cs.vector(dim)?;

    let mut term = vec![ZERO; dim];
    term[0] = Complex64::new(1.0, 0.0);
    let mut phi = term.clone();
    for m in 1..dim {
        term = raise_pow(params, &term, 2)
            .into_iter()
            .map(|x| x * z / (2.0 * m as f64))
            .collect();
        let size: f64 = term.iter().map(|x| x.norm_sqr()).sum();
        if size == 0.0 {
            break;
        }
        for (p, t) in phi.iter_mut().zip(&term) {
            *p += t;
        }
    }
    let norm2: f64 = phi.iter().map(|x| x.norm_sqr()).sum();
    let overlap = cs_overlap(&psi, &phi)?;
    Ok((1.0 - overlap.norm_sqr() / norm2).max(0.0))
}

/// ⟨u|v⟩.
pub fn cs_overlap(u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(u.iter().zip(v).map(|(a, b)| a.conj() * b).sum())
}
