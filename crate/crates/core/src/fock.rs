//! Truncated Fock-space representations.
//!
//! `FockRep` holds dense D×D complex matrices for a, a†, N, T, P_μ, H₀ and the
//! spectrum generating algebra J₊ = (a†)^λ/λ, J₋ = a^λ/λ, J₀ = H₀/λ.
//! Truncation breaks a a† = F(N+1) in the last row, so every operator identity
//! is checked on an interior block that stays clear of the edge.
//!
//! The banded helpers [`lower`] and [`raise`] apply the same truncated a, a† to
//! state vectors in O(D), for dimensions where dense storage is wasteful.

use std::f64::consts::PI;

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::error::{Error, Result};

type CMat = Array2<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone)]
pub struct FockRep {
    pub params: AlgebraParams,
    pub dim: usize,
    pub a: CMat,
    pub adag: CMat,
    pub num: CMat,
    pub t: CMat,
    pub proj: Vec<CMat>,
    pub h0: CMat,
    pub jplus: CMat,
    pub jminus: CMat,
    pub j0: CMat,
}

/// One line of an operator-identity report.
///
/// Degree-one relations are reported as absolute entrywise deviations. The SGA
/// relations involve entries of size ~D^{λ/2}, so their deviations are divided by
/// the largest |entry| of the generator under test (`relative = true`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub name: String,
    pub max_deviation: f64,
    pub relative: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AlgebraReport {
    pub checks: Vec<Deviation>,
}

impl AlgebraReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|d| d.max_deviation).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|d| d.name == name).map(|d| d.max_deviation)
    }
}

fn diag(values: impl Iterator<Item = Complex64>, dim: usize) -> CMat {
    let mut m = CMat::zeros((dim, dim));
    for (i, v) in values.enumerate().take(dim) {
        m[(i, i)] = v;
    }
    m
}

fn power(m: &CMat, exp: usize) -> CMat {
    let mut out = CMat::eye(m.nrows());
    for _ in 0..exp {
        out = out.dot(m);
    }
    out
}

fn commutator(x: &CMat, y: &CMat) -> CMat {
    x.dot(y) - y.dot(x)
}

/// Largest |entry| of `m` on the leading `size`×`size` block.
fn block_max(m: &CMat, size: usize) -> f64 {
    m.slice(s![..size, ..size]).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl FockRep {
    pub fn new(params: &AlgebraParams, dim: usize) -> Result<Self> {
        let lambda = params.lambda();
        if dim < 2 * lambda {
            return Err(Error::DimensionTooSmall { dim, min: 2 * lambda });
        }
        let lf = lambda as f64;

        let mut a = CMat::zeros((dim, dim));
        for n in 1..dim {
            a[(n - 1, n)] = Complex64::new(params.structure(n).sqrt(), 0.0);
        }
        let adag = a.t().mapv(|z| z.conj());
        let num = diag((0..dim).map(|n| Complex64::new(n as f64, 0.0)), dim);
        let t = diag(
            (0..dim).map(|n| Complex64::from_polar(1.0, 2.0 * PI * n as f64 / lf)),
            dim,
        );
        let proj = (0..lambda)
            .map(|mu| diag((0..dim).map(|n| if n % lambda == mu { ONE } else { ZERO }), dim))
            .collect();
        let h0 = (a.dot(&adag) + adag.dot(&a)).mapv(|z| z * 0.5);
        let scale = Complex64::new(1.0 / lf, 0.0);
        let jplus = power(&adag, lambda).mapv(|z| z * scale);
        let jminus = power(&a, lambda).mapv(|z| z * scale);
        let j0 = h0.mapv(|z| z * scale);

        Ok(Self {
            params: params.clone(),
            dim,
            a,
            adag,
            num,
            t,
            proj,
            h0,
            jplus,
            jminus,
            j0,
        })
    }

    /// Side of the interior block used for single-step identities.
    pub fn interior(&self) -> usize {
        self.dim - self.params.lambda() - 1
    }

    /// Max entrywise deviations of the defining relations on the interior block.
    pub fn check_algebra(&self) -> AlgebraReport {
        let lambda = self.params.lambda();
        let lf = lambda as f64;
        let inner = self.interior();
        let sga = self.dim - 2 * lambda;
        let eye = CMat::eye(self.dim);
        let mut checks = Vec::new();
        let mut push = |name: &str, m: CMat, size: usize| {
            checks.push(Deviation {
                name: name.to_string(),
                max_deviation: block_max(&m, size),
                relative: false,
            });
        };

        let adjoint = &self.adag - &self.a.t().mapv(|z| z.conj());
        push("adag_is_adjoint", adjoint, self.dim);

        let mut rhs = eye.clone();
        for (mu, p) in self.proj.iter().enumerate() {
            rhs = rhs + p.mapv(|z| z * self.params.alpha()[mu]);
        }
        push("commutator_a_adag", commutator(&self.a, &self.adag) - rhs, inner);

        let phase = Complex64::from_polar(1.0, -2.0 * PI / lf);
        push(
            "grading_adag_t",
            self.adag.dot(&self.t) - self.t.dot(&self.adag).mapv(|z| z * phase),
            inner,
        );

        let worst_proj = (0..lambda)
            .map(|mu| {
                let m = self.adag.dot(&self.proj[mu]) - self.proj[(mu + 1) % lambda].dot(&self.adag);
                block_max(&m, inner)
            })
            .fold(0.0, f64::max);
        checks.push(Deviation {
            name: "grading_adag_projectors".into(),
            max_deviation: worst_proj,
            relative: false,
        });
        checks.push(Deviation {
            name: "number_adag".into(),
            max_deviation: block_max(&(commutator(&self.num, &self.adag) - &self.adag), inner),
            relative: false,
        });
        checks.push(Deviation {
            name: "number_t".into(),
            max_deviation: block_max(&commutator(&self.num, &self.t), inner),
            relative: false,
        });

        let jscale = block_max(&self.jplus, sga).max(f64::MIN_POSITIVE);
        let mut push_rel = |name: &str, m: CMat, scale: f64| {
            checks.push(Deviation {
                name: name.to_string(),
                max_deviation: block_max(&m, sga) / scale,
                relative: true,
            });
        };
        push_rel("sga_j0_jplus", commutator(&self.j0, &self.jplus) - &self.jplus, jscale);
        push_rel(
            "sga_j0_jminus",
            commutator(&self.j0, &self.jminus) + &self.jminus,
            jscale,
        );
        push_rel(
            "jplus_is_adjoint_of_jminus",
            &self.jplus - &self.jminus.t().mapv(|z| z.conj()),
            jscale,
        );
        if lambda == 2 {
            // su(1,1): [J₋, J₊] = 2 J₀
            push_rel(
                "sga_su11_closure",
                commutator(&self.jminus, &self.jplus) - self.j0.mapv(|z| z * 2.0),
                jscale * jscale,
            );
        }
        AlgebraReport { checks }
    }

    /// Diagonal of [J₋, J₊] on the interior block.
    ///
    /// For λ > 2 this is a polynomial in J₀ whose form is not asserted; the values are
    /// exported for inspection only.
    pub fn sga_closure_diagonal(&self) -> Vec<f64> {
        let size = self.dim - 2 * self.params.lambda();
        let c = commutator(&self.jminus, &self.jplus);
        (0..size).map(|n| c[(n, n)].re).collect()
    }
}

/// Functional alias for [`FockRep::new`].
pub fn build_fock(params: &AlgebraParams, dim: usize) -> Result<FockRep> {
    FockRep::new(params, dim)
}

/// Functional alias for [`FockRep::check_algebra`].
pub fn check_algebra(rep: &FockRep) -> AlgebraReport {
    rep.check_algebra()
}

/// E_n = (F(n) + F(n+1))/2 for n = 0..=nmax, the diagonal of H₀.
pub fn spectrum(params: &AlgebraParams, nmax: usize) -> Vec<f64> {
    (0..=nmax)
        .map(|n| 0.5 * (params.structure(n) + params.structure(n + 1)))
        .collect()
}

/// Truncated a applied to `v`: (a v)_{n-1} = √F(n) v_n.
pub fn lower(params: &AlgebraParams, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for n in 1..v.len() {
        out[n - 1] = v[n] * params.structure(n).sqrt();
    }
    out
}

/// Truncated a† applied to `v`: (a† v)_{n+1} = √F(n+1) v_n, dropping the top component.
pub fn raise(params: &AlgebraParams, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for n in 0..v.len().saturating_sub(1) {
        out[n + 1] = v[n] * params.structure(n + 1).sqrt();
    }
    out
}

pub fn lower_pow(params: &AlgebraParams, v: &[Complex64], times: usize) -> Vec<Complex64> {
    (0..times).fold(v.to_vec(), |acc, _| lower(params, &acc))
}

pub fn raise_pow(params: &AlgebraParams, v: &[Complex64], times: usize) -> Vec<Complex64> {
    (0..times).fold(v.to_vec(), |acc, _| raise(params, &acc))
}
