use clox_core::bargmann::{verify_sga_bargmann, verify_vector_bargmann};
use clox_core::cstates::{cs_norm, cs_norm_by_recursion, cs_residual, CoherentState, EigenCs};
use clox_core::fock::{spectrum, FockRep};
use clox_core::measure::{verify_nondiagonal, verify_resolution};
use clox_core::{AlgebraParams, Complex64};
use proptest::prelude::*;

/// β̄ on a 1/64 grid inside (0.1, 3).
fn betabar_strategy(lambda: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(7u32..192, lambda - 1).prop_map(|v| v.into_iter().map(|x| x as f64 / 64.0).collect())
}

fn params_strategy() -> impl Strategy<Value = AlgebraParams> {
    (2usize..=5)
        .prop_flat_map(|l| betabar_strategy(l).prop_map(move |bb| AlgebraParams::from_betabar(l, &bb, 1e-10).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norms_agree(p in params_strategy(), absz in 0.05f64..2.0) {
        let l = p.lambda();
        for alpha in 0..=(l - 1) / 2 {
            for mu in 0..l - alpha {
                let closed = cs_norm(&p, mu, alpha, absz).unwrap();
                let summed = cs_norm_by_recursion(&p, mu, alpha, absz).unwrap();
                prop_assert!((summed / closed - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn states_solve_their_equation(p in params_strategy(), absz in 0.0f64..2.0, arg in 0.0f64..6.3) {
        let l = p.lambda();
        let z = Complex64::from_polar(absz, arg);
        for alpha in 0..=l / 2 {
            let z = if 2 * alpha == l { z * 0.45 } else { z };
            for mu in 0..l - alpha {
                let cs = CoherentState::new(&p, z, mu, alpha).unwrap();
                let v = cs.vector(cs.required_dim()).unwrap();
                prop_assert!(cs_residual(&p, &v, z, alpha) < 1e-10);
            }
        }
    }

    #[test]
    fn moments_match(p in params_strategy()) {
        let l = p.lambda();
        for alpha in 0..=l / 2 {
            for mu in 0..l - alpha {
                prop_assert!(verify_resolution(&p, mu, alpha, 50).unwrap().passed());
            }
        }
        prop_assert!(verify_nondiagonal(&p, 30).unwrap().passed());
    }

    #[test]
    fn dyadic_spectrum_spacing_is_exact(p in params_strategy()) {
        let l = p.lambda();
        let e = spectrum(&p, 100 + l);
        for n in 0..=100 {
            prop_assert_eq!(e[n + l] - e[n], l as f64);
        }
    }
}

#[test]
fn eigenstates_and_bargmann_agree_with_fock() {
    let p = AlgebraParams::from_betabar(4, &[0.3, 0.75, 0.625], 1e-10).unwrap();
    let z = Complex64::new(1.1, -0.6);
    let cs = EigenCs::new(&p, z).unwrap();
    let dim = cs.required_dim();
    let v = ndarray::Array1::from(cs.vector(dim).unwrap());
    let rep = FockRep::new(&p, dim).unwrap();
    let r = rep.a.dot(&v) - v.mapv(|x| x * z);
    let worst = r.iter().take(dim - 1).map(|x| x.norm()).fold(0.0, f64::max);
    assert!(worst < 1e-12);

    for (mu, alpha) in [(0, 0), (1, 1), (1, 2), (3, 0)] {
        let rep = verify_sga_bargmann(&p, mu, alpha, 20).unwrap();
        assert!(rep.max_mismatch() < 1e-12);
    }
    assert!(verify_vector_bargmann(&p, 30).unwrap().max_mismatch() < 1e-12);
}
