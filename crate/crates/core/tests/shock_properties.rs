use bhshock_core::shock::{
    jump_matrix, pbar_from_constraint, rankine_hugoniot_residual, rhobar_from_constraint, shock_normal,
    shock_normal_via_jacobian, v_from_u, MatchedState,
};
use proptest::prelude::*;

fn state(sigma: f64, rho: f64, ratio: f64, n: f64, h: f64) -> MatchedState {
    let p = sigma * rho;
    let rhobar = ratio * rho;
    let pbar = pbar_from_constraint(rho, p, rhobar, n).unwrap();
    MatchedState {
        rho,
        p,
        rhobar,
        pbar,
        n,
        h,
        rbar: n.sqrt() / h,
    }
}

fn psi_strategy() -> impl Strategy<Value = f64> {
    (0.05..20.0f64, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn constraint_zeroes_det_and_contractions(
        sigma in 0.001..0.999f64, rho in 0.01..10.0f64, ratio in 0.001..0.999f64,
        n in 1.000001..100.0f64, h in 0.1..10.0f64, psi in psi_strategy(),
    ) {
        let res = rankine_hugoniot_residual(&state(sigma, rho, ratio, n, h), psi).unwrap();
        let (det, c0, c1) = res.relative();
        prop_assert!(det.abs() < 1e-10);
        prop_assert!(c0.abs() < 1e-10);
        prop_assert!(c1.abs() < 1e-10);
    }

    #[test]
    fn violation_shows_in_det_but_not_in_mu1(
        sigma in 0.001..0.999f64, rho in 0.01..10.0f64, ratio in 0.001..0.999f64,
        n in 1.01..100.0f64, h in 0.1..10.0f64, psi in psi_strategy(),
        delta in 1e-6..1e-1f64, up in any::<bool>(),
    ) {
        let s = state(sigma, rho, ratio, n, h);
        let shift = if up { delta } else { -delta } * s.p.max(s.pbar.abs());
        let broken = MatchedState { pbar: s.pbar + shift, ..s };
        let res = rankine_hugoniot_residual(&broken, psi).unwrap();
        let (det, _, c1) = res.relative();
        prop_assert!(c1.abs() < 1e-13);
        prop_assert!(det.abs() > 1e-13);
    }

    #[test]
    fn det_zero_survives_psi_rescaling(
        sigma in 0.001..0.999f64, ratio in 0.001..0.999f64, n in 1.000001..100.0f64,
        psi in psi_strategy(), k in 0.01..100.0f64,
    ) {
        let s = state(sigma, 1.0, ratio, n, 1.0);
        let a = jump_matrix(&s, psi).unwrap();
        let b = jump_matrix(&s, k * psi).unwrap();
        prop_assert!(a.det().abs() / (a.max_abs() * a.max_abs()) < 1e-10);
        prop_assert!(b.det().abs() / (b.max_abs() * b.max_abs()) < 1e-10);
        prop_assert!(b.is_symmetric());
    }

    #[test]
    fn v_matches_rhobar(sigma in 0.001..0.999f64, frac in 0.0..1.0f64, n in 1.0001..100.0f64, rho in 0.01..10.0f64) {
        let u = frac * sigma;
        let v = v_from_u(u, sigma, n).unwrap();
        let rhobar = rhobar_from_constraint(rho, sigma * rho, u * rho, n).unwrap();
        prop_assert!((v * rho - rhobar).abs() <= 1e-13 * rho);
    }

    #[test]
    fn constraint_round_trip(sigma in 0.001..0.999f64, rho in 0.01..10.0f64, ratio in 0.001..0.999f64, n in 1.0001..100.0f64) {
        let s = state(sigma, rho, ratio, n, 1.0);
        let back = rhobar_from_constraint(rho, s.p, s.pbar, n).unwrap();
        prop_assert!((back - s.rhobar).abs() <= 1e-12 * rho);
    }

    #[test]
    fn compression_lowers_pressure(sigma in 0.001..0.999f64, rho in 0.01..10.0f64, ratio in 0.001..0.999f64, n in 1.0001..100.0f64) {
        let s = state(sigma, rho, ratio, n, 1.0);
        prop_assert!(s.pbar < s.p);
    }

    #[test]
    fn jacobian_normal_is_the_direct_normal(
        sigma in 0.001..0.999f64, ratio in 0.001..0.999f64, n in 1.0001..100.0f64,
        psi in psi_strategy(), scale in 0.01..100.0f64,
    ) {
        let s = state(sigma, 1.0, ratio, n, 1.0);
        let a = shock_normal(&s, psi).unwrap();
        let b = shock_normal_via_jacobian(&s, psi, scale).unwrap();
        prop_assert!((a.n0 - b.n0).abs() <= 1e-12 * a.max_abs());
        prop_assert!((a.n1 - b.n1).abs() <= 1e-12 * a.max_abs());
    }
}
