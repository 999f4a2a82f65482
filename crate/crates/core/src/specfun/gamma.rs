use std::f64::consts::PI;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this the argument is shifted upward before the asymptotic series is used.
const STIRLING_MIN: f64 = 10.0;

/// B_{2k} / (2k(2k-1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr * inv
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(x, "log_gamma"));
    }
    Ok(ln_gamma_positive(x))
}

/// (ln|Γ(x)|, sign Γ(x)) for any real x; at the poles the sign is 0 and the log is +∞,
/// so that 1/Γ can be formed as `sign * exp(-log)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma_positive(x), 1.0);
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let value = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    (value, s.signum())
}
