//! Seeded random parameter sets for sweeps.

use clox_core::AlgebraParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// β̄ values are drawn from this open interval.
pub const BETABAR_RANGE: (f64, f64) = (0.1, 3.0);

/// Draws are rounded to multiples of 2^-16 so that α and β̄ are exact in binary.
const GRID: f64 = 65536.0;

/// `count` admissible parameter sets for `lambda`, reproducible from `seed`.
///
/// Sampling β̄ and back-solving α makes every set admissible by construction.
pub fn random_params(lambda: usize, count: usize, seed: u64, tol: f64) -> clox_core::Result<Vec<AlgebraParams>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = BETABAR_RANGE;
    let steps = ((lo * GRID) as u64 + 1, (hi * GRID) as u64);
    (0..count)
        .map(|_| {
            let bb: Vec<f64> = (1..lambda)
                .map(|_| rng.gen_range(steps.0..steps.1) as f64 / GRID)
                .collect();
            AlgebraParams::from_betabar(lambda, &bb, tol)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_admissible() {
        let a = random_params(5, 4, 7, 1e-10).unwrap();
        let b = random_params(5, 4, 7, 1e-10).unwrap();
        assert_eq!(a, b);
        for p in &a {
            for nu in 1..5 {
                let bb = p.betabar(nu);
                assert!(bb > BETABAR_RANGE.0 && bb < BETABAR_RANGE.1);
                assert_eq!((bb * GRID).fract(), 0.0);
            }
            assert_eq!(p.alpha().iter().sum::<f64>(), 0.0);
        }
        assert_ne!(random_params(5, 1, 8, 1e-10).unwrap()[0], a[0]);
    }
}
