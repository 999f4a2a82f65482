//! Bargmann realizations: generators as differential operators on polynomials.
//!
//! Inside one grade μ the unnormalized coherent states |z;μ;α) = Σ_k c'_k z^k |kλ+μ⟩
//! send |kλ+μ⟩ to the weighted monomial c'_k z^k, and the SGA generators become the
//! differential operators returned by [`sga_diffops`]. On the whole Fock space the
//! eigenstates of a send |n⟩ to e_n z^n in component n mod λ of a λ-vector, and
//! N, a†, a become the λ×λ operator matrices of [`vector_bargmann_ops`].
//!
//! Operators act on exact coefficient lists; no function is ever sampled. Matrix
//! elements recovered from a Bargmann action are compared entry by entry with the
//! truncated Fock matrices.

use std::fmt;

use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::cstates::{check_label, cs_coefficients, cs_log_coefficients, eigen_weights};
use crate::error::{Error, Result};
use crate::fock::FockRep;

/// Coefficients of z^0, z^1, … .
pub type Poly = Vec<f64>;

/// coeff · z^s ∘ ∏_i (z∂ + c_i) ∘ ∂^t.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffTerm {
    pub coeff: f64,
    pub zshift: i64,
    pub euler: Vec<f64>,
    pub dorder: usize,
}

impl DiffTerm {
    /// Image of z^n as (coefficient, exponent); `None` when ∂^t annihilates z^n.
    pub fn on_monomial(&self, n: usize) -> Option<(f64, i64)> {
        if self.dorder > n {
            return None;
        }
        let m = (n - self.dorder) as f64;
        let falling: f64 = (0..self.dorder).map(|j| (n - j) as f64).product();
        let euler: f64 = self.euler.iter().map(|c| m + c).product();
        Some((self.coeff * euler * falling, (n - self.dorder) as i64 + self.zshift))
    }
}

/// Sum of [`DiffTerm`]s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffOp {
    pub terms: Vec<DiffTerm>,
}

impl DiffOp {
    pub fn single(coeff: f64, zshift: i64, euler: Vec<f64>, dorder: usize) -> Self {
        Self {
            terms: vec![DiffTerm {
                coeff,
                zshift,
                euler,
                dorder,
            }],
        }
    }

    pub fn identity() -> Self {
        Self::single(1.0, 0, Vec::new(), 0)
    }

    /// z ∂/∂z.
    pub fn euler() -> Self {
        Self::single(1.0, 0, vec![0.0], 0)
    }

    pub fn apply(&self, poly: &[f64]) -> Result<Poly> {
        let mut out: Poly = Vec::new();
        for (n, &c) in poly.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for term in &self.terms {
                let Some((factor, exponent)) = term.on_monomial(n) else {
                    continue;
                };
                let value = factor * c;
                if value == 0.0 {
                    continue;
                }
                if exponent < 0 {
                    return Err(Error::NegativeExponent { exponent, coeff: value });
                }
                let e = exponent as usize;
                if out.len() <= e {
                    out.resize(e + 1, 0.0);
                }
                out[e] += value;
            }
        }
        Ok(out)
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for DiffTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.coeff != 1.0 {
            parts.push(fmt_num(self.coeff));
        }
        match self.zshift {
            0 => {}
            1 => parts.push("z".to_string()),
            s => parts.push(format!("z^{s}")),
        }
        for c in &self.euler {
            parts.push(if *c == 0.0 {
                "z∂".to_string()
            } else if *c < 0.0 {
                format!("(z∂ - {})", fmt_num(-c))
            } else {
                format!("(z∂ + {})", fmt_num(*c))
            });
        }
        match self.dorder {
            0 => {}
            1 => parts.push("∂".to_string()),
            t => parts.push(format!("∂^{t}")),
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        write!(f, "{}", parts.join("·"))
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Functional alias for [`DiffOp::apply`].
pub fn apply_diffop(op: &DiffOp, poly: &[f64]) -> Result<Poly> {
    op.apply(poly)
}

/// λ×λ grid of optional operators acting on λ-vectors of polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorDiffOp {
    pub lambda: usize,
    /// Row-major.
    pub entries: Vec<Option<DiffOp>>,
}

impl VectorDiffOp {
    pub fn empty(lambda: usize) -> Self {
        Self {
            lambda,
            entries: vec![None; lambda * lambda],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&DiffOp> {
        self.entries[row * self.lambda + col].as_ref()
    }

    pub fn set(&mut self, row: usize, col: usize, op: DiffOp) {
        self.entries[row * self.lambda + col] = Some(op);
    }

    pub fn apply(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.lambda {
            return Err(Error::DimensionMismatch(v.len(), self.lambda));
        }
        let mut out = vec![Poly::new(); self.lambda];
        for (row, slot) in out.iter_mut().enumerate() {
            for (col, p) in v.iter().enumerate() {
                if let Some(op) = self.get(row, col) {
                    add_into(slot, &op.apply(p)?, 1.0);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for VectorDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.lambda)
            .map(|r| {
                (0..self.lambda)
                    .map(|c| self.get(r, c).map_or("0".to_string(), |op| op.to_string()))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

fn add_into(acc: &mut Poly, p: &[f64], scale: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += scale * x;
    }
}

fn monomial(n: usize, coeff: f64) -> Poly {
    let mut p = vec![0.0; n + 1];
    p[n] = coeff;
    p
}

fn coeff_at(p: &[f64], n: usize) -> f64 {
    p.get(n).copied().unwrap_or(0.0)
}

/// Bargmann image c'_k z^k of |kλ+μ⟩ in the grade-μ realization of the α family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedMonomial {
    pub degree: usize,
    pub weight: f64,
}

pub fn bargmann_basis(params: &AlgebraParams, mu: usize, alpha: usize, k: usize) -> Result<WeightedMonomial> {
    let c = cs_coefficients(params, mu, alpha, k)?;
    Ok(WeightedMonomial {
        degree: k,
        weight: c[k],
    })
}

/// Fock index of degree k in the grade-μ realization.
pub fn subspace_index(lambda: usize, mu: usize, k: usize) -> usize {
    k * lambda + mu
}

/// (component, degree) of |n⟩ in the vector realization: component n mod λ, degree n.
pub fn vector_position(lambda: usize, n: usize) -> (usize, usize) {
    (n % lambda, n)
}

/// 𝒥₊, 𝒥₋, 𝒥₀ on the grade-μ realization of the α family:
///
/// ```text
/// 𝒥₊ = λ^{α−1} z ∏_{ν=μ+1}^{μ+α} (z∂ + β̄_ν)
/// 𝒥₋ = λ^{λ−α−1} ∏_{ν=1}^{μ} (z∂ + β̄_ν + 1) ∏_{ν=μ+α+1}^{λ−1} (z∂ + β̄_ν) ∂
/// 𝒥₀ = z∂ + (β̄_μ + β̄_{μ+1})/2
/// ```
pub fn sga_diffops(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<(DiffOp, DiffOp, DiffOp)> {
    check_label(params, mu, alpha)?;
    let lambda = params.lambda();
    let lf = lambda as f64;
    let jplus = DiffOp::single(
        lf.powi(alpha as i32 - 1),
        1,
        (mu + 1..=mu + alpha).map(|nu| params.betabar(nu)).collect(),
        0,
    );
    let jminus = DiffOp::single(
        lf.powi((lambda - alpha) as i32 - 1),
        0,
        (1..=mu)
            .map(|nu| params.betabar(nu) + 1.0)
            .chain((mu + alpha + 1..lambda).map(|nu| params.betabar(nu)))
            .collect(),
        1,
    );
    let j0 = DiffOp::single(1.0, 0, vec![0.5 * (params.betabar(mu) + params.betabar(mu + 1))], 0);
    Ok((jplus, jminus, j0))
}

/// Largest mismatches of the grade-μ Bargmann generators against Fock matrix elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SgaBargmannReport {
    pub mu: usize,
    pub alpha: usize,
    pub kmax: usize,
    pub jplus: f64,
    pub jminus: f64,
    pub j0: f64,
    /// [𝒥₀, 𝒥±] ∓ 𝒥± by sequential application.
    pub commutators: f64,
}

impl SgaBargmannReport {
    pub fn max_mismatch(&self) -> f64 {
        [self.jplus, self.jminus, self.j0, self.commutators]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Column-wise comparison of a subspace operator with the Fock matrix `x`.
///
/// For each k ≤ kmax the image of c'_k z^k yields ⟨k'λ+μ|X|kλ+μ⟩ = [z^{k'}] / c'_{k'};
/// the column error is divided by the largest Fock entry of that column.
fn subspace_mismatch(
    op: &DiffOp,
    x: &ndarray::Array2<num_complex::Complex64>,
    lambda: usize,
    mu: usize,
    ln_c: &[f64],
    kmax: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..=kmax {
        // Coefficients are carried as ratios c'_k / c'_kp so that neither factor under- or overflows.
        let image = op.apply(&monomial(k, 1.0))?;
        let col = subspace_index(lambda, mu, k);
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for kp in 0..ln_c.len() {
            let fock = x[(subspace_index(lambda, mu, kp), col)];
            let gamma = coeff_at(&image, kp);
            let barg = if gamma == 0.0 {
                0.0
            } else {
                gamma * (ln_c[k] - ln_c[kp]).exp()
            };
            diff = diff.max((fock - barg).norm());
            scale = scale.max(fock.norm());
        }
        if image.len() > ln_c.len() {
            let stray = image[ln_c.len()..].iter().map(|c| c.abs()).fold(0.0, f64::max);
            diff = diff.max(stray);
        }
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(worst)
}

fn poly_sub(a: &[f64], b: &[f64]) -> Poly {
    let mut out = a.to_vec();
    add_into(&mut out, b, -1.0);
    out
}

fn poly_max(p: &[f64]) -> f64 {
    p.iter().map(|c| c.abs()).fold(0.0, f64::max)
}

/// Checks 𝒥₊, 𝒥₋, 𝒥₀ against a prebuilt Fock representation for degrees k ≤ kmax.
pub fn verify_sga_bargmann_on(rep: &FockRep, mu: usize, alpha: usize, kmax: usize) -> Result<SgaBargmannReport> {
    let params = &rep.params;
    let lambda = params.lambda();
    let required = (kmax + 2) * lambda;
    if rep.dim < required {
        return Err(Error::InsufficientDimension { dim: rep.dim, required });
    }
    let (jp, jm, j0) = sga_diffops(params, mu, alpha)?;
    let ln_c = cs_log_coefficients(params, mu, alpha, kmax + 1)?;

    let mut commutators: f64 = 0.0;
    for k in 0..=kmax.saturating_sub(lambda) {
        let e = monomial(k, 1.0);
        for (op, sign) in [(&jp, 1.0), (&jm, -1.0)] {
            let x = op.apply(&e)?;
            let mut c = poly_sub(&j0.apply(&x)?, &op.apply(&j0.apply(&e)?)?);
            add_into(&mut c, &x, -sign);
            let scale = poly_max(&x);
            let dev = poly_max(&c);
            commutators = commutators.max(if scale > 0.0 { dev / scale } else { dev });
        }
    }

    Ok(SgaBargmannReport {
        mu,
        alpha,
        kmax,
        jplus: subspace_mismatch(&jp, &rep.jplus, lambda, mu, &ln_c, kmax)?,
        jminus: subspace_mismatch(&jm, &rep.jminus, lambda, mu, &ln_c, kmax)?,
        j0: subspace_mismatch(&j0, &rep.j0, lambda, mu, &ln_c, kmax)?,
        commutators,
    })
}

/// Builds a Fock representation of dimension (kmax+2)λ and runs [`verify_sga_bargmann_on`].
pub fn verify_sga_bargmann(params: &AlgebraParams, mu: usize, alpha: usize, kmax: usize) -> Result<SgaBargmannReport> {
    let rep = FockRep::new(params, (kmax + 2) * params.lambda())?;
    verify_sga_bargmann_on(&rep, mu, alpha, kmax)
}

/// 𝒩, 𝒜†, 𝒜 on λ-vectors: 𝒩 = z∂ on every component; 𝒜† carries component μ to μ+1
/// (cyclically) by z; 𝒜 carries component ν to ν−1 by ∂ + β_ν/z for ν = 1..λ−1 and
/// component 0 to λ−1 by ∂.
///
/// ∂ + β_ν/z is stored in the normal-ordered form z^{-1}(z∂ + β_ν), which acts the same
/// way on every z^n with n ≥ 1.
pub fn vector_bargmann_ops(params: &AlgebraParams) -> (VectorDiffOp, VectorDiffOp, VectorDiffOp) {
    let lambda = params.lambda();
    let mut nop = VectorDiffOp::empty(lambda);
    let mut adag = VectorDiffOp::empty(lambda);
    let mut aop = VectorDiffOp::empty(lambda);
    for mu in 0..lambda {
        nop.set(mu, mu, DiffOp::euler());
        adag.set((mu + 1) % lambda, mu, DiffOp::single(1.0, 1, Vec::new(), 0));
    }
    for nu in 1..lambda {
        aop.set(nu - 1, nu, DiffOp::single(1.0, -1, vec![params.beta()[nu]], 0));
    }
    aop.set(lambda - 1, 0, DiffOp::single(1.0, 0, Vec::new(), 1));
    (nop, adag, aop)
}

/// Largest mismatches of the vector realization against Fock matrix elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorBargmannReport {
    pub kmax: usize,
    pub nop: f64,
    pub adag: f64,
    pub aop: f64,
    /// [𝒜, 𝒜†] − (1 + α_μ) on each component, relative to the size of the products.
    pub commutator: f64,
}

impl VectorBargmannReport {
    pub fn max_mismatch(&self) -> f64 {
        [self.nop, self.adag, self.aop, self.commutator]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn basis_vector(lambda: usize, n: usize, weight: f64) -> Vec<Poly> {
    let (component, degree) = vector_position(lambda, n);
    let mut v = vec![Poly::new(); lambda];
    v[component] = monomial(degree, weight);
    v
}

fn vector_mismatch(
    op: &VectorDiffOp,
    x: &ndarray::Array2<num_complex::Complex64>,
    weights: &[f64],
    kmax: usize,
) -> Result<f64> {
    let lambda = op.lambda;
    let mut worst: f64 = 0.0;
    for n in 0..=kmax {
        let image = op.apply(&basis_vector(lambda, n, weights[n]))?;
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (component, p) in image.iter().enumerate() {
            for (m, &c) in p.iter().enumerate() {
                if m % lambda != component || m >= weights.len() {
                    // a coefficient outside the image of the Fock basis
                    diff = diff.max(c.abs());
                }
            }
        }
        for np in 0..weights.len() {
            let (component, degree) = vector_position(lambda, np);
            let barg = coeff_at(&image[component], degree) / weights[np];
            let fock = x[(np, n)];
            diff = diff.max((fock - barg).norm());
            scale = scale.max(fock.norm());
        }
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(worst)
}

/// Checks 𝒩, 𝒜†, 𝒜 against N, a†, a for Fock states of degree n ≤ kmax, and
/// [𝒜, 𝒜†] against I + Σ α_μ P_μ.
pub fn verify_vector_bargmann(params: &AlgebraParams, kmax: usize) -> Result<VectorBargmannReport> {
    let lambda = params.lambda();
    let rep = FockRep::new(params, (kmax + 2).max(2 * lambda))?;
    let weights = eigen_weights(params, kmax + 1);
    let (nop, adag, aop) = vector_bargmann_ops(params);

    let mut commutator: f64 = 0.0;
    for n in 0..=kmax {
        let v = basis_vector(lambda, n, 1.0);
        let up_down = aop.apply(&adag.apply(&v)?)?;
        let down_up = adag.apply(&aop.apply(&v)?)?;
        let mu = n % lambda;
        let scale = (n as f64).max(1.0) + params.beta().iter().map(|b| b.abs()).fold(0.0, f64::max);
        for c in 0..lambda {
            let mut d = poly_sub(&up_down[c], &down_up[c]);
            if c == mu {
                add_into(&mut d, &monomial(n, 1.0 + params.alpha()[mu]), -1.0);
            }
            commutator = commutator.max(poly_max(&d) / scale);
        }
    }

    Ok(VectorBargmannReport {
        kmax,
        nop: vector_mismatch(&nop, &rep.num, &weights, kmax)?,
        adag: vector_mismatch(&adag, &rep.adag, &weights, kmax)?,
        aop: vector_mismatch(&aop, &rep.a, &weights, kmax)?,
        commutator,
    })
}
