use crate::error::{Error, Result};

/// Iteration cap for [`pfq`].
pub const PFQ_TERM_CAP: usize = 100_000;

const REL_EPS: f64 = 1e-16;

/// ₚF_q(a; b; y) = Σ_k [∏(a)_k / ∏(b)_k] y^k / k! for positive parameters and y ≥ 0.
///
/// All terms are positive, so the sum is accumulated with Neumaier compensation and
/// stopped once the geometric tail implied by the current term ratio falls below
/// 1e-16 of the running sum. When p = q + 1 the series only converges for y < 1.
pub fn pfq(a: &[f64], b: &[f64], y: f64) -> Result<f64> {
    if let Some(&x) = a.iter().find(|&&x| x.is_nan() || x <= 0.0) {
        return Err(Error::Domain(x, "pfq upper parameter"));
    }
    if let Some(&x) = b.iter().find(|&&x| x.is_nan() || x <= 0.0) {
        return Err(Error::Domain(x, "pfq lower parameter"));
    }
    if y < 0.0 || !y.is_finite() {
        return Err(Error::Domain(y, "pfq argument"));
    }
    let (p, q) = (a.len(), b.len());
    if y == 0.0 {
        return Ok(1.0);
    }
    if p > q + 1 || (p == q + 1 && y >= 1.0) {
        return Err(Error::Divergent { p, q, y });
    }

    let ratio_at =
        |k: f64| a.iter().map(|x| x + k).product::<f64>() / (b.iter().map(|x| x + k).product::<f64>() * (k + 1.0)) * y;
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    for k in 0..PFQ_TERM_CAP {
        term *= ratio_at(k as f64);
        let t = sum + term;
        comp += if sum >= term {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;

        let bound = ratio_bound_from(a, b, y, k as f64 + 1.0);
        if bound < 1.0 && term * bound / (1.0 - bound) <= REL_EPS * sum {
            return Ok(sum + comp);
        }
    }
    Err(Error::NoConvergence {
        what: "pfq",
        cap: PFQ_TERM_CAP,
    })
}

/// Upper bound on every term ratio t_{k+1}/t_k of the pFq series for k ≥ j.
///
/// Each a_i is paired with b_i (or with the k! factor for the unpaired upper parameter
/// when p = q + 1); every paired factor is monotone in k, so max(factor, 1) bounds it.
pub(crate) fn ratio_bound_from(a: &[f64], b: &[f64], y: f64, j: f64) -> f64 {
    let mut r = y;
    let mut lowers = b.iter().map(|x| x + j).chain(std::iter::once(j + 1.0));
    for x in a {
        let den = lowers.next().unwrap_or(1.0);
        r *= ((x + j) / den).max(1.0);
    }
    for den in lowers {
        r /= den;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain forward sum of a fixed number of terms.
    fn direct_series(a: &[f64], b: &[f64], y: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..terms {
            sum += term;
            let kf = k as f64;
            term *=
                a.iter().map(|x| x + kf).product::<f64>() / b.iter().map(|x| x + kf).product::<f64>() * y / (kf + 1.0);
        }
        sum
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(pfq(&[], &[1.0], 0.0).unwrap(), 1.0);
        assert_eq!(pfq(&[0.3, 2.0], &[0.7], 0.0).unwrap(), 1.0);
    }

    #[test]
    fn cosh_identity() {
        // ₀F₁(; 1/2; y) = cosh(2√y)
        let got = pfq(&[], &[0.5], 0.25).unwrap();
        assert!((got - 1f64.cosh()).abs() < 1e-15);
        assert!((got - 1.5430806348152437).abs() < 1e-15);
        for y in [0.01, 0.7, 3.0, 12.5] {
            let want = (2.0 * f64::sqrt(y)).cosh();
            assert!((pfq(&[], &[0.5], y).unwrap() / want - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bessel_i0_identity() {
        // ₀F₁(; 1; y) = I₀(2√y)
        let got = pfq(&[], &[1.0], 1.0).unwrap();
        let oracle = direct_series(&[], &[1.0], 1.0, 200);
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 2.2795853023360673).abs() < 1e-14);
    }

    #[test]
    fn binomial_on_unit_disc() {
        // ₁F₀(a;;y) = (1-y)^{-a}
        for y in [0.1, 0.5, 0.81, 0.95] {
            let got = pfq(&[0.75], &[], y).unwrap();
            assert!((got / (1.0 - y).powf(-0.75) - 1.0).abs() < 1e-13, "y={y}");
        }
    }

    #[test]
    fn divergence_is_rejected() {
        assert!(matches!(pfq(&[0.5], &[], 1.0), Err(Error::Divergent { .. })));
        assert!(matches!(pfq(&[0.5, 1.0], &[], 0.1), Err(Error::Divergent { .. })));
        assert!(matches!(pfq(&[], &[-0.5], 0.1), Err(Error::Domain(..))));
    }

    #[test]
    fn iteration_cap_is_an_error() {
        // terms decay like y^k with y extremely close to 1
        let err = pfq(&[1.0], &[], 1.0 - 1e-9).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn partial_sums_monotone() {
        let a = [0.3, 1.7];
        let b = [0.4, 2.2, 0.9];
        let mut prev = 0.0;
        for terms in 1..60 {
            let s = direct_series(&a, &b, 4.0, terms);
            assert!(s >= prev);
            prev = s;
        }
        assert!((pfq(&a, &b, 4.0).unwrap() / prev - 1.0).abs() < 1e-14);
    }
}
