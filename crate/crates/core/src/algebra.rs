//! Algebra parameters and the structure function.
//!
//! The C_λ-extended oscillator is fixed by λ real numbers α_0..α_{λ-1} summing
//! to zero. Everything downstream is expressed through
//!
//! - the partial sums β_μ = α_0 + … + α_{μ-1} (β_0 = β_λ = 0),
//! - the shifted and scaled values β̄_μ = (β_μ + μ)/λ,
//! - the structure function F(n) = n + β_{n mod λ}, the eigenvalue of a†a on |n⟩.
//!
//! For n = kλ + μ one has F(n) = λ(k + β̄_μ), so the representation is unitary
//! with positive norms exactly when every β̄_μ (μ = 1..λ-1) is positive.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |Σ α_μ| accepted by [`AlgebraParams::new`].
pub const ALPHA_SUM_TOL: f64 = 1e-12;

/// Default global numeric tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Validated parameters of the C_λ-extended oscillator algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraParams {
    lambda: usize,
    alpha: Vec<f64>,
    /// β_0..β_λ
    beta: Vec<f64>,
    /// β̄_0..β̄_λ with β̄_0 = 0, β̄_λ = 1.
    betabar: Vec<f64>,
    tol: f64,
}

impl AlgebraParams {
    /// Validates `alpha` and derives β, β̄.
    pub fn new(lambda: usize, alpha: &[f64], tol: f64) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::LambdaTooSmall(lambda));
        }
        if alpha.len() != lambda {
            return Err(Error::AlphaLength {
                expected: lambda,
                got: alpha.len(),
            });
        }
        if let Some(i) = alpha.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let sum: f64 = alpha.iter().sum();
        if sum.abs() > ALPHA_SUM_TOL {
            return Err(Error::AlphaSum { sum });
        }

        let mut beta = Vec::with_capacity(lambda + 1);
        let mut acc = 0.0;
        beta.push(0.0);
        for a in &alpha[..lambda - 1] {
            acc += a;
            beta.push(acc);
        }
        beta.push(0.0);

        let lf = lambda as f64;
        let mut betabar: Vec<f64> = (0..=lambda).map(|mu| (beta[mu] + mu as f64) / lf).collect();
        betabar[0] = 0.0;
        betabar[lambda] = 1.0;

        for (mu, &bb) in betabar.iter().enumerate().take(lambda).skip(1) {
            if bb <= 0.0 {
                return Err(Error::NotAdmissible { index: mu, value: bb });
            }
        }

        Ok(Self {
            lambda,
            alpha: alpha.to_vec(),
            beta,
            betabar,
            tol,
        })
    }

    /// Same as [`AlgebraParams::new`] with the default tolerance.
    pub fn with_alpha(lambda: usize, alpha: &[f64]) -> Result<Self> {
        Self::new(lambda, alpha, DEFAULT_TOL)
    }

    /// The undeformed boson algebra realised with grading λ (all α_μ = 0).
    pub fn boson(lambda: usize) -> Result<Self> {
        Self::with_alpha(lambda, &vec![0.0; lambda])
    }

    /// The λ = 2 Calogero-Vasiliev algebra [a, a†] = I + α_0 K.
    pub fn calogero_vasiliev(alpha0: f64) -> Result<Self> {
        Self::with_alpha(2, &[alpha0, -alpha0])
    }

    /// Back-solves α from β̄_1..β̄_{λ-1}; `betabar.len()` must be λ - 1.
    pub fn from_betabar(lambda: usize, betabar: &[f64], tol: f64) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::LambdaTooSmall(lambda));
        }
        if betabar.len() != lambda - 1 {
            return Err(Error::AlphaLength {
                expected: lambda - 1,
                got: betabar.len(),
            });
        }
        let lf = lambda as f64;
        let mut beta = vec![0.0; lambda + 1];
        for (mu, bb) in betabar.iter().enumerate() {
            beta[mu + 1] = lf * bb - (mu + 1) as f64;
        }
        let alpha: Vec<f64> = (0..lambda).map(|mu| beta[mu + 1] - beta[mu]).collect();
        Self::new(lambda, &alpha, tol)
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// β_0..β_λ.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// β̄_ν for any ν ≥ 0, using β̄_{ν+λ} = β̄_ν + 1.
    pub fn betabar(&self, nu: usize) -> f64 {
        let (k, mu) = (nu / self.lambda, nu % self.lambda);
        self.betabar[mu] + k as f64
    }

    /// β̄_1..β̄_{λ-1}.
    pub fn betabar_interior(&self) -> &[f64] {
        &self.betabar[1..self.lambda]
    }

    /// Grade of the number state |n⟩.
    pub fn grade(&self, n: usize) -> usize {
        n % self.lambda
    }

    /// F(n) = n + β_{n mod λ}; zero at n = 0 and positive beyond.
    pub fn structure(&self, n: usize) -> f64 {
        n as f64 + self.beta[n % self.lambda]
    }

    /// ln F(n) evaluated as ln λ + ln(k + β̄_μ), avoiding cancellation in n + β_μ.
    pub(crate) fn ln_structure(&self, n: usize) -> f64 {
        let (k, mu) = (n / self.lambda, n % self.lambda);
        (self.lambda as f64).ln() + (k as f64 + self.betabar[mu]).ln()
    }

    /// κ_ν = (1/λ) Σ_μ α_μ e^{-2πiμν/λ}, the coefficients of T^ν in Σ α_μ P_μ.
    pub fn kappa(&self) -> Vec<Complex64> {
        let lf = self.lambda as f64;
        (0..self.lambda)
            .map(|nu| {
                self.alpha
                    .iter()
                    .enumerate()
                    .map(|(mu, &a)| Complex64::from_polar(a, -2.0 * PI * (mu * nu) as f64 / lf))
                    .sum::<Complex64>()
                    / lf
            })
            .collect()
    }
}

/// Functional alias for [`AlgebraParams::new`].
pub fn validate_params(lambda: usize, alpha: &[f64], tol: f64) -> Result<AlgebraParams> {
    AlgebraParams::new(lambda, alpha, tol)
}

/// Functional alias for [`AlgebraParams::structure`].
pub fn structure_function(params: &AlgebraParams, n: usize) -> f64 {
    params.structure(n)
}

/// Functional alias for [`AlgebraParams::kappa`].
pub fn kappa_from_alpha(params: &AlgebraParams) -> Vec<Complex64> {
    params.kappa()
}

/// Inverse transform α_μ = Σ_ν κ_ν e^{2πiμν/λ} (real part).
pub fn alpha_from_kappa(kappa: &[Complex64]) -> Vec<f64> {
    let lambda = kappa.len();
    let lf = lambda as f64;
    (0..lambda)
        .map(|mu| {
            kappa
                .iter()
                .enumerate()
                .map(|(nu, k)| k * Complex64::from_polar(1.0, 2.0 * PI * (mu * nu) as f64 / lf))
                .sum::<Complex64>()
                .re
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Dense [a, a†] built directly from F values, compared with I + Σ α_μ P_μ.
    fn commutator_oracle(p: &AlgebraParams, dim: usize) -> f64 {
        let f: Vec<f64> = (0..=dim).map(|n| p.structure(n)).collect();
        let mut worst = 0.0f64;
        for n in 0..dim - 1 {
            // a a† |n> = F(n+1)|n>, a† a |n> = F(n)|n>
            let comm = f[n + 1] - f[n];
            let expected = 1.0 + p.alpha()[n % p.lambda()];
            worst = worst.max((comm - expected).abs());
        }
        worst
    }

    #[test]
    fn boson_betabar() {
        let p = AlgebraParams::with_alpha(2, &[0.0, 0.0]).unwrap();
        assert_eq!(p.betabar(1), 0.5);
        assert_eq!(p.structure(5), 5.0);
    }

    #[test]
    fn calogero_partial_sums() {
        let p = AlgebraParams::with_alpha(2, &[1.0, -1.0]).unwrap();
        assert_eq!(p.beta()[1], 1.0);
        assert_eq!(p.betabar(1), 1.0);
        assert_eq!(p.structure(3), 4.0);
        assert_eq!(p.structure(4), 4.0);
        assert!(commutator_oracle(&p, 40) == 0.0);
    }

    #[test]
    fn rejects_vanishing_betabar() {
        // brute-force positivity oracle: F(1) = 1 + β_1 = 0
        let alpha = [-1.0, 2.0, -1.0];
        let f1 = 1.0 + alpha[0];
        assert_eq!(f1, 0.0);
        let err = AlgebraParams::with_alpha(3, &alpha).unwrap_err();
        assert_eq!(err, Error::NotAdmissible { index: 1, value: 0.0 });
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            AlgebraParams::with_alpha(1, &[0.0]),
            Err(Error::LambdaTooSmall(1))
        ));
        assert!(matches!(
            AlgebraParams::with_alpha(3, &[0.0, 0.0]),
            Err(Error::AlphaLength { .. })
        ));
        assert!(matches!(
            AlgebraParams::with_alpha(2, &[0.5, -0.4]),
            Err(Error::AlphaSum { .. })
        ));
        assert!(matches!(
            AlgebraParams::with_alpha(2, &[f64::NAN, 0.0]),
            Err(Error::NonFinite(0))
        ));
    }

    #[test]
    fn extended_betabar_convention() {
        let p = AlgebraParams::with_alpha(3, &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(p.betabar(0), 0.0);
        assert_eq!(p.betabar(3), 1.0);
        assert_relative_eq!(p.betabar(4), p.betabar(1) + 1.0);
        assert_relative_eq!(p.betabar(8), p.betabar(2) + 2.0);
    }

    #[test]
    fn kappa_examples() {
        let p = AlgebraParams::with_alpha(2, &[0.0, 0.0]).unwrap();
        assert!(p.kappa().iter().all(|k| k.norm() == 0.0));

        let p = AlgebraParams::with_alpha(2, &[1.0, -1.0]).unwrap();
        let k = p.kappa();
        assert!(k[0].norm() < 1e-15);
        assert!((k[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let p = AlgebraParams::with_alpha(3, &[2.0, -1.0, -1.0]).unwrap();
        let k = p.kappa();
        assert!((k[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((k[2] - k[1].conj()).norm() < 1e-14);
    }

    /// Expands Σ α_μ P_μ over powers of T on one period of diagonal entries and
    /// extracts the coefficient of T^ν by orthogonality of the characters.
    fn kappa_matrix_oracle(p: &AlgebraParams) -> Vec<Complex64> {
        let l = p.lambda();
        let lf = l as f64;
        let t = |n: usize, pow: usize| Complex64::from_polar(1.0, 2.0 * PI * (n * pow) as f64 / lf);
        // diagonal of Σ α_μ P_μ with P_μ = (1/λ) Σ_ν e^{-2πiμν/λ} T^ν
        let diag: Vec<Complex64> = (0..l)
            .map(|n| {
                (0..l)
                    .map(|mu| {
                        let proj: Complex64 = (0..l)
                            .map(|nu| Complex64::from_polar(1.0, -2.0 * PI * (mu * nu) as f64 / lf) * t(n, nu))
                            .sum::<Complex64>()
                            / lf;
                        proj * p.alpha()[mu]
                    })
                    .sum()
            })
            .collect();
        (0..l)
            .map(|nu| (0..l).map(|n| diag[n] * t(n, nu).conj()).sum::<Complex64>() / lf)
            .collect()
    }

    fn admissible() -> impl Strategy<Value = AlgebraParams> {
        (2usize..=7).prop_flat_map(|l| {
            proptest::collection::vec(0.1f64..3.0, l - 1)
                .prop_map(move |bb| AlgebraParams::from_betabar(l, &bb, DEFAULT_TOL).unwrap())
        })
    }

    proptest! {
        #[test]
        fn structure_positive_and_periodic(p in admissible(), n in 0usize..500) {
            let l = p.lambda();
            if n >= 1 {
                prop_assert!(p.structure(n) > 0.0);
            }
            let step = p.structure(n + 1) - p.structure(n);
            prop_assert!((step - 1.0 - p.alpha()[n % l]).abs() < 1e-12);
            prop_assert!((p.structure(n + l) - p.structure(n) - l as f64).abs() < 1e-12);
            let (k, mu) = (n / l, n % l);
            prop_assert!((p.structure(n) - l as f64 * (k as f64 + p.betabar(mu))).abs() < 1e-11);
        }

        #[test]
        fn kappa_round_trip(p in admissible()) {
            let k = p.kappa();
            prop_assert!(k[0].norm() < 1e-12);
            let l = p.lambda();
            for mu in 1..l {
                prop_assert!((k[mu].conj() - k[l - mu]).norm() < 1e-12);
            }
            let back = alpha_from_kappa(&k);
            for (a, b) in back.iter().zip(p.alpha()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let oracle = kappa_matrix_oracle(&p);
            for (a, b) in k.iter().zip(&oracle) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn commutator_from_structure(p in admissible()) {
            prop_assert!(commutator_oracle(&p, 60) < 1e-12);
        }

        #[test]
        fn paraboson_ladder(order in 0.05f64..6.0, k in 0usize..200) {
            let p = AlgebraParams::calogero_vasiliev(order - 1.0).unwrap();
            let kf = k as f64;
            prop_assert!((p.structure(2 * k + 1) - (2.0 * kf + order)).abs() < 1e-12);
            prop_assert_eq!(p.structure(2 * k), 2.0 * kf);
        }
    }
}
