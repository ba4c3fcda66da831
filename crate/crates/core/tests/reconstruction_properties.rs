use bhshock_core::estimates::{numeric_report, os_report, sqrt_n0_bounds, tcrit_ratio_bounds, visibility_product};
use bhshock_core::os::{
    characteristic_vs_interface, horizon_crossing_time, horizon_crossing_time_numeric, Orientation, OsConfig,
};
use bhshock_core::phase::integrate_orbit;
use bhshock_core::reconstruct::{assemble, AssembleOptions};
use bhshock_core::KAPPA;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[test]
fn rows_satisfy_the_matching_identities() {
    for sigma in [0.01, 0.1, 0.3, 1.0 / 3.0] {
        for h0 in [0.5, 1.0, 3.0] {
            let orbit = integrate_orbit(sigma, 1e-9, 1e-10).unwrap();
            let sol = assemble(&orbit, h0, &AssembleOptions::default()).unwrap();
            let rows = &sol.rows;
            for (i, row) in rows.iter().enumerate() {
                assert!(rel(row.n, (row.h * row.rbar).powi(2)) < 1e-10);
                assert!(rel(row.rbar, row.scale_factor * row.r) < 1e-10);
                assert!(rel(row.mass_frw(), row.mass_tov()) < 1e-10);
                if i > 0 {
                    assert!(row.t > rows[i - 1].t && row.n < rows[i - 1].n);
                    assert!(row.mass_tov() < rows[i - 1].mass_tov());
                }
                if i + 1 < rows.len() {
                    assert!(row.pbar > 0.0 && row.pbar < row.p, "sigma {sigma}: S {}", row.s);
                    assert!(row.rhobar > 0.0 && row.rhobar < row.rho);
                } else {
                    assert_eq!((row.s, row.pbar, row.rhobar), (1.0, 0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn visibility_product_is_exact() {
    for sigma in [0.001, 0.1, 0.2, 1.0 / 3.0] {
        let orbit = integrate_orbit(sigma, 1e-9, 1e-10).unwrap();
        let sol = assemble(&orbit, 1.0, &AssembleOptions::default()).unwrap();
        let report = numeric_report(&sol).unwrap();
        assert!(rel(report.h0_r_star, 2.0 / (1.0 + 3.0 * sigma)) < 1e-15);
        assert!(report.sqrt_n0_within_bounds(1e-9));
        assert!(rel(report.s0 * report.sqrt_n0_numeric.powi(2), 1.0) < 1e-12);
    }
}

#[test]
fn observability_approaches_the_dust_limit() {
    let os = os_report().unwrap();
    let mut last_gap = 0.0;
    for sigma in [0.05, 0.01, 0.001] {
        let orbit = integrate_orbit(sigma, 1e-9, 1e-10).unwrap();
        let sol = assemble(&orbit, 1.0, &AssembleOptions::default()).unwrap();
        let report = numeric_report(&sol).unwrap();
        let gap = (report.sqrt_n0_numeric - os.sqrt_n0_numeric).abs();
        assert!(last_gap == 0.0 || gap < last_gap, "sigma {sigma}: {gap}");
        last_gap = gap;
    }
    assert!(last_gap < 0.05 * 2.0);
}

#[test]
fn bounds_are_continuous_in_sigma() {
    let at = |sigma: f64| (sqrt_n0_bounds(sigma).unwrap(), tcrit_ratio_bounds(sigma).unwrap().1);
    let mut prev = at(0.0);
    for i in 1..=100_000 {
        let sigma = (1.0 / 3.0) * i as f64 / 100_000.0;
        let now = at(sigma);
        assert!((now.0 .0 - prev.0 .0).abs() < 1e-4, "sigma {sigma}");
        assert!((now.0 .1 - prev.0 .1).abs() < 0.02, "sigma {sigma}");
        assert!((now.1 - prev.1).abs() < 0.02, "sigma {sigma}");
        prev = now;
    }
    let zero = at(0.0);
    for k in 4..12 {
        let gap = at(10f64.powi(-k));
        assert!((gap.0 .1 - zero.0 .1).abs() < 20.0 * 10f64.powf(-k as f64 / 2.0));
        assert!((gap.1 - zero.1).abs() < 20.0 * 10f64.powf(-k as f64 / 2.0));
    }
    assert_eq!(visibility_product(0.0).unwrap(), 2.0);
}

#[test]
fn horizon_crossing_closed_form_matches_root() {
    for mass in [1e-3, 0.7, 1.0, 250.0] {
        let exact = horizon_crossing_time(mass).unwrap();
        let numeric = horizon_crossing_time_numeric(mass, exact * 1e-14).unwrap();
        assert!(rel(exact, numeric) < 1e-10);
    }
}

proptest! {
    #[test]
    fn os_interface_keeps_its_mass(mass in 0.01..100.0f64, rho0 in 0.01..10.0f64, lt in -3.0..3.0f64) {
        let cfg = OsConfig::new(mass, rho0, Orientation::Expanding).unwrap();
        let bg = cfg.background();
        let t = bg.t0 * 10f64.powf(lt);
        let s = bg.state_at(t).unwrap();
        let rbar = cfg.rbar_at(t).unwrap();
        prop_assert!(rel(KAPPA / 6.0 * s.rho * rbar.powi(3), mass) < 1e-14);
    }

    #[test]
    fn os_interface_is_never_characteristic(mass in 0.01..100.0f64, lt in -3.0..3.0f64, collapsing in any::<bool>()) {
        let orientation = if collapsing { Orientation::Collapsing } else { Orientation::Expanding };
        let cfg = OsConfig::new(mass, 1.0, orientation).unwrap();
        let bg = cfg.background();
        let t = bg.t0 * 10f64.powf(lt);
        let s = bg.state_at(t).unwrap();
        let rbar = cfg.rbar_at(t).unwrap();
        if (s.h * rbar - 1.0).abs() > 1e-9 {
            let (c, i) = characteristic_vs_interface(s.h, rbar, orientation, cfg.r0(), bg.scale_factor(t) * s.h).unwrap();
            prop_assert!(((c - i).abs() - 1.0).abs() < 1e-9);
        }
    }
}
