//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use bhshock::config::RunConfig;
use bhshock::run::solve;
use bhshock::verify::{run_checks, VerifyConfig};
use bhshock_core::estimates::{numeric_report, ObservabilityReport};
use bhshock_core::frw::{mass_decay_exponent, FrwBackground};
use bhshock_core::os::{horizon_crossing_time, horizon_crossing_time_numeric};
use bhshock_core::phase::{
    entropy_boundary_e, fit_m_star, integrate_orbit, invariant_q, isocline_h, speed_along_orbit, Orbit,
};
use bhshock_core::reconstruct::{assemble, AssembleOptions, ShockSolution};
use bhshock_core::shock::{pbar_from_constraint, rankine_hugoniot_residual, MatchedState};
use bhshock_core::KAPPA;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THIRD: f64 = 1.0 / 3.0;
const S_MIN: f64 = 1e-9;
const REL_TOL: f64 = 1e-10;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn orbit(sigma: f64) -> Orbit {
    integrate_orbit(sigma, S_MIN, REL_TOL).expect("orbit")
}

fn solution(sigma: f64) -> ShockSolution {
    assemble(&orbit(sigma), 1.0, &AssembleOptions::default()).expect("assembly")
}

fn report(sigma: f64) -> ObservabilityReport {
    numeric_report(&solution(sigma)).expect("report")
}

fn m_star() -> Verdict {
    let start = Instant::now();
    let m = fit_m_star(&orbit(THIRD)).expect("fit");
    let secs = start.elapsed().as_secs_f64();
    let err = rel(m, 4.0 / 3.0);
    verdict(
        err < 0.02 && secs < 5.0,
        format!("m* = {m:.6}, error {:.3}%, {secs:.3}s", 100.0 * err),
    )
}

fn speed_limits() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for sigma in [0.05, 0.1, 0.2, 0.3] {
        let max = speed_along_orbit(&orbit(sigma)).into_iter().fold(0.0, f64::max);
        let bound = (3.0 * sigma).sqrt();
        ok &= max <= bound + 1e-9;
        parts.push(format!("{sigma}: {max:.4} <= {bound:.4}"));
    }
    let o = orbit(THIRD);
    let sup = speed_along_orbit(&o).into_iter().fold(0.0, f64::max);
    let at = o.eval(1e-8).expect("eval");
    let s8 = at.w / ((1.0 + at.u) * at.s.sqrt());
    ok &= sup < 1.0 && (0.98..=1.0).contains(&s8);
    parts.push(format!("1/3: sup {sup:.6}, s(1e-8) {s8:.6}"));
    let max = speed_along_orbit(&orbit(0.4)).into_iter().fold(0.0, f64::max);
    ok &= max > 1.0;
    parts.push(format!("0.4: max {max:.3e}"));
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    verdict(ok, format!("{}; {secs:.3}s", parts.join(", ")))
}

fn entropy_region() -> Verdict {
    let mut count = 0;
    for sigma in [0.01, 0.05, 0.1, 0.2, 0.3, THIRD] {
        let o = orbit(sigma);
        let p = o.samples();
        for q in &p[1..p.len() - 1] {
            if q.s >= entropy_boundary_e(q.u, sigma) {
                return verdict(false, format!("sigma {sigma}: S = {} >= E(u) at u = {}", q.s, q.u));
            }
            count += 1;
        }
    }
    verdict(true, format!("S < E(u) at all {count} interior samples"))
}

fn sandwich() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for sigma in [0.01, 0.05, 0.1, 0.2, 0.3, THIRD] {
        let o = orbit(sigma);
        let a = 1.0 / (3.0 * sigma).sqrt();
        for q in o.samples() {
            let lower = invariant_q(q.u, sigma, a);
            let upper = if q.u == 0.0 {
                1.0
            } else {
                isocline_h(q.u, sigma).expect("h").min(1.0)
            };
            worst = worst.max(lower - q.s).max(q.s - upper);
        }
    }
    verdict(worst <= 1e-9, format!("largest excursion {worst:.2e} (slack 1e-9)"))
}

fn rankine_hugoniot() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut det, mut c0, mut c1, mut mu1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let sigma = rng.gen_range(0.001..0.999);
        let rho = rng.gen_range(0.01..10.0);
        let rhobar = rng.gen_range(0.001..0.999) * rho;
        let n = rng.gen_range(1.0..100.0f64).max(1.0 + 1e-12);
        let p = sigma * rho;
        let pbar = pbar_from_constraint(rho, p, rhobar, n).expect("constraint");
        let h = rng.gen_range(0.1..10.0);
        let state = MatchedState {
            rho,
            p,
            rhobar,
            pbar,
            n,
            h,
            rbar: n.sqrt() / h,
        };
        let psi = rng.gen_range(0.1..10.0);
        let (d, a, b) = rankine_hugoniot_residual(&state, psi).expect("residual").relative();
        det = det.max(d.abs());
        c0 = c0.max(a.abs());
        c1 = c1.max(b.abs());
        let broken = MatchedState {
            pbar: pbar + rng.gen_range(0.01..1.0) * p,
            ..state
        };
        let (_, _, b) = rankine_hugoniot_residual(&broken, psi).expect("residual").relative();
        mu1 = mu1.max(b.abs());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        det < 1e-10 && c0 < 1e-10 && c1 < 1e-10 && mu1 < 1e-13 && secs < 1.0,
        format!("det {det:.1e}, contractions {c0:.1e} {c1:.1e}, mu1 off-constraint {mu1:.1e}, {secs:.3}s"),
    )
}

fn bracketing() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for sigma in [0.001, 0.01, 0.05, 0.1, 0.2, 0.3, THIRD] {
        let r = report(sigma);
        let n0 = r.sqrt_n0_within_bounds(1e-9);
        let tc = r.tcrit_within_bounds(1e-9);
        ok &= n0 && tc;
        parts.push(format!(
            "{sigma:.3}: sqrtN0 {:.4}{} tcrit {:.4} in [{:.4}, {:.4}]{}",
            r.sqrt_n0_numeric,
            if n0 { "" } else { "(out)" },
            r.tcrit_ratio_numeric,
            r.tcrit_ratio_lower,
            r.tcrit_ratio_upper,
            if tc { "" } else { "(out)" }
        ));
    }
    let r = report(THIRD);
    ok &= (1.8446..=4.4817).contains(&r.tcrit_ratio_numeric);
    verdict(ok, parts.join("; "))
}

fn os_limit() -> Verdict {
    let r = report(1e-3);
    let e_n0 = rel(r.sqrt_n0_numeric, 2.0);
    let e_t = rel(r.tcrit_ratio_numeric, 2.0);
    let mut worst = 0.0f64;
    for mass in [0.01, 1.0, 100.0] {
        let exact = horizon_crossing_time(mass).expect("t_s");
        worst = worst.max(rel(
            exact,
            horizon_crossing_time_numeric(mass, exact * 1e-14).expect("root"),
        ));
    }
    verdict(
        e_n0 < 0.05 && e_t < 0.05 && worst < 1e-10,
        format!(
            "sqrtN0 {:.5} ({:.2}%), tcrit/t0 {:.5} ({:.2}%), t_s root {worst:.1e}",
            r.sqrt_n0_numeric,
            100.0 * e_n0,
            r.tcrit_ratio_numeric,
            100.0 * e_t
        ),
    )
}

fn background() -> Verdict {
    let (mut fr, mut cont, mut slope_err) = (0.0f64, 0.0f64, 0.0f64);
    for sigma in [0.0, 0.01, 0.1, 0.2, THIRD, 0.7] {
        let bg = FrwBackground::from_h0(sigma, 1.0).expect("background");
        let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..=60 {
            let t = 10f64.powf(-3.0 + 0.1 * i as f64);
            let s = bg.state_at(t).expect("state");
            fr = fr.max((s.h * s.h - KAPPA * s.rho / 3.0).abs() / (s.h * s.h));
            let dl: f64 = 1e-3;
            let lo = bg.state_at(t * (-dl).exp()).expect("state").rho.ln();
            let hi = bg.state_at(t * dl.exp()).expect("state").rho.ln();
            let rho_dot = s.rho * (hi - lo) / (2.0 * dl) / t;
            cont = cont.max((rho_dot + 3.0 * (s.rho + s.p) * s.h).abs() / rho_dot.abs());
            let m = s.mass_inside(s.r).expect("mass");
            let (x, y) = (t.ln(), m.ln());
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        slope_err = slope_err.max((slope - mass_decay_exponent(sigma)).abs());
    }
    verdict(
        fr < 1e-10 && cont < 1e-10 && slope_err < 1e-6,
        format!("friedmann {fr:.1e}, continuity {cont:.1e}, mass exponent {slope_err:.1e}"),
    )
}

fn reconstruction() -> Verdict {
    let (mut id, mut speed, mut compared) = (0.0f64, 0.0f64, 0);
    for sigma in [0.05, 0.1, 0.2, THIRD] {
        let sol = solution(sigma);
        let rows = &sol.rows;
        for row in rows {
            id = id
                .max(rel(row.n, (row.h * row.rbar).powi(2)))
                .max(rel(row.rbar, row.scale_factor * row.r))
                .max(rel(row.mass_frw(), row.mass_tov()));
        }
        let tau: Vec<f64> = rows.iter().map(|r| r.s.ln()).collect();
        let d = |f: &dyn Fn(usize) -> f64, i: usize, h: f64| {
            (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h)
        };
        for i in 2..rows.len() - 2 {
            let h = tau[i + 1] - tau[i];
            if (i - 2..i + 2).any(|j| ((tau[j + 1] - tau[j]) - h).abs() > 1e-9 * h.abs()) {
                continue;
            }
            let rdot = d(&|j| rows[j].r, i, h) / d(&|j| rows[j].t, i, h);
            speed = speed.max(rel(rows[i].scale_factor * rdot, rows[i].speed));
            compared += 1;
        }
    }
    verdict(
        id < 1e-10 && speed < 1e-4 && compared > 0,
        format!("identities {id:.1e}; speed routes {speed:.1e} over {compared} interior rows"),
    )
}

fn runtime() -> Verdict {
    let start = Instant::now();
    let outcomes = run_checks(&VerifyConfig::default()).expect("verify");
    let verify_secs = start.elapsed().as_secs_f64();
    let start = Instant::now();
    solve(&RunConfig::default()).expect("run");
    let run_secs = start.elapsed().as_secs_f64();
    verdict(
        verify_secs < 60.0 && run_secs < 5.0,
        format!(
            "verify {verify_secs:.2}s ({} checks, {} failing), run {run_secs:.3}s",
            outcomes.len(),
            outcomes.iter().filter(|o| !o.passed).count()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("m* asymptotic", m_star),
        ("speed limits", speed_limits),
        ("entropy region", entropy_region),
        ("invariant-region sandwich", sandwich),
        ("Rankine-Hugoniot battery", rankine_hugoniot),
        ("observability bracketing", bracketing),
        ("dust limit", os_limit),
        ("background identities", background),
        ("reconstruction consistency", reconstruction),
        ("runtime", runtime),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<27} {}  {}",
            i + 1,
            name,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
