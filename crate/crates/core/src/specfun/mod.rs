//! Special-function kernels.
//!
//! Everything here works on real arguments in double precision. Gamma products
//! are carried in log space with explicit sign tracking; the Meijer-G residue
//! series is summed in double-double arithmetic because its branches cancel.

mod dd;
mod gamma;
mod hypergeometric;
mod meijer;

pub use gamma::{ln_gamma_signed, log_gamma, sin_pi};
pub(crate) use hypergeometric::ratio_bound_from;
pub use hypergeometric::{pfq, PFQ_TERM_CAP};
pub use meijer::{meijer_g_residue_series, mellin_meijer_g, MeijerParams, RESIDUE_TARGET, RESIDUE_TERM_CAP};
