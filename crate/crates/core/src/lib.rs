//! Numerics for the C_λ-extended oscillator.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: parameters α_μ, their partial sums β_μ, β̄_μ and the structure function.
//! - [`fock`]: truncated matrix representations and operator-identity checks.
//! - [`specfun`]: log-Gamma, positive-term ₚF_q series, Meijer-G Mellin moments and residue series.
//! - [`cstates`]: the coherent-state families |z; μ; α⟩ and the a-eigenstates |z⟩.
//! - [`measure`]: moment-level verification of the diagonal and nondiagonal resolutions of unity.
//! - [`bargmann`]: differential-operator realizations checked against Fock matrix elements.

pub mod algebra;
pub mod bargmann;
pub mod cstates;
pub mod error;
pub mod fock;
pub mod measure;
pub mod specfun;

pub use algebra::AlgebraParams;
pub use error::{Error, Result};
pub use num_complex::Complex64;
