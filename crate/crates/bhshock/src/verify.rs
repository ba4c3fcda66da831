//! The `verify` subcommand: named property checks with a pass/fail table.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::bail;
use bhshock_core::estimates::{numeric_report, ObservabilityReport};
use bhshock_core::frw::{infinite_redshift_radius, mass_decay_exponent, present_age, FrwBackground};
use bhshock_core::ode::{Options, Sdirk4};
use bhshock_core::os::{
    characteristic_vs_interface, horizon_crossing_time, horizon_crossing_time_numeric, transform_b, transform_phi,
    Orientation, OsConfig,
};
use bhshock_core::phase::{
    classify_limit_speed, fit_m_star, integrate_orbit_with, sample_regions, speed_along_orbit,
    verify_invariant_regions, Orbit, SpeedClass, M_STAR,
};
use bhshock_core::reconstruct::{assemble, ShockSolution};
use bhshock_core::shock::{
    jump_matrix, pbar_from_constraint, rankine_hugoniot_residual, rhobar_from_constraint, v_from_u, MatchedState,
};
use bhshock_core::tov::{metric_log_b, tov_rhs, tov_rhs_a_form, BSample, BVariant};
use bhshock_core::KAPPA;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::output::BOUND_SLACK;

const THIRD: f64 = 1.0 / 3.0;
const ORBIT_GRID: [f64; 6] = [0.01, 0.05, 0.1, 0.2, 0.3, THIRD];
const BRACKET_GRID: [f64; 7] = [0.001, 0.01, 0.05, 0.1, 0.2, 0.3, THIRD];
const BATTERY_SIZE: usize = 1000;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub run: RunConfig,
    /// Run only these checks; empty means all.
    pub only: Vec<String>,
    /// Largest `|ln B − ln B_exact|` accepted on the vacuum profile.
    pub b_mismatch_tol: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            run: RunConfig::default(),
            only: Vec::new(),
            b_mismatch_tol: 1e-6,
            seed: 20240917,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<String, String>;

trait OrFail<T> {
    fn or_fail(self, what: &str) -> Result<T, String>;
}

impl<T, E: std::fmt::Display> OrFail<T> for Result<T, E> {
    fn or_fail(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    orbits: HashMap<u64, Result<Orbit, String>>,
    solutions: HashMap<u64, Result<ShockSolution, String>>,
}

impl Ctx<'_> {
    fn orbit(&mut self, sigma: f64) -> Result<Orbit, String> {
        let opts = self.cfg.run.orbit_options();
        self.orbits
            .entry(sigma.to_bits())
            .or_insert_with(|| integrate_orbit_with(sigma, &opts).map_err(|e| format!("orbit at sigma = {sigma}: {e}")))
            .clone()
    }

    fn solution(&mut self, sigma: f64) -> Result<ShockSolution, String> {
        if let Some(s) = self.solutions.get(&sigma.to_bits()) {
            return s.clone();
        }
        let opts = self.cfg.run.assemble_options();
        let h0 = self.cfg.run.h0;
        let sol = self
            .orbit(sigma)
            .and_then(|o| assemble(&o, h0, &opts).map_err(|e| format!("assembly at sigma = {sigma}: {e}")));
        self.solutions.insert(sigma.to_bits(), sol.clone());
        sol
    }

    fn report(&mut self, sigma: f64) -> Result<ObservabilityReport, String> {
        numeric_report(&self.solution(sigma)?).or_fail(&format!("report at sigma = {sigma}"))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        rng
    }
}

type CheckFn = fn(&mut Ctx) -> Outcome;

pub const CHECK_NAMES: [&str; 18] = [
    "friedmann",
    "age-bounds",
    "mass-decay",
    "tov-forms",
    "tov-vacuum",
    "det-jump",
    "constraint-roundtrip",
    "orbit-shape",
    "entropy-region",
    "sandwich",
    "speed-limits",
    "m-star",
    "reconstruction",
    "os-horizon",
    "visibility-sqrtn0",
    "emergence-tcrit",
    "os-limit",
    "b-variants",
];

fn check_fn(name: &str) -> Option<CheckFn> {
    let f: CheckFn = match name {
        "friedmann" => friedmann,
        "age-bounds" => age_bounds,
        "mass-decay" => mass_decay,
        "tov-forms" => tov_forms,
        "tov-vacuum" => tov_vacuum,
        "det-jump" => det_jump,
        "constraint-roundtrip" => constraint_roundtrip,
        "orbit-shape" => orbit_shape,
        "entropy-region" => entropy_region,
        "sandwich" => sandwich,
        "speed-limits" => speed_limits,
        "m-star" => m_star,
        "reconstruction" => reconstruction,
        "os-horizon" => os_horizon,
        "visibility-sqrtn0" => visibility_sqrt_n0,
        "emergence-tcrit" => emergence_tcrit,
        "os-limit" => os_limit,
        "b-variants" => b_variants,
        _ => return None,
    };
    Some(f)
}

/// Run the selected checks in their fixed order.
pub fn run_checks(cfg: &VerifyConfig) -> anyhow::Result<Vec<CheckOutcome>> {
    let names = CHECK_NAMES;
    for name in &cfg.only {
        if !names.contains(&name.as_str()) {
            bail!("unknown check {name:?}; known checks: {}", names.join(", "));
        }
    }
    let mut ctx = Ctx {
        cfg,
        orbits: HashMap::new(),
        solutions: HashMap::new(),
    };
    let mut outcomes = Vec::new();
    for name in names {
        if !cfg.only.is_empty() && !cfg.only.iter().any(|o| o == name) {
            continue;
        }
        let f = check_fn(name).expect("every listed check has a function");
        let start = Instant::now();
        let result = f(&mut ctx);
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        outcomes.push(CheckOutcome {
            name,
            passed,
            detail,
            seconds,
        });
    }
    Ok(outcomes)
}

pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}  {:<width$}  {:>8.3}s  {}", o.name, o.seconds, o.detail);
    }
    out
}

fn log_space(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn friedmann(_: &mut Ctx) -> Outcome {
    let mut worst_f = 0.0f64;
    let mut worst_c = 0.0f64;
    let mut worst_h = 0.0f64;
    let dl: f64 = 1e-3;
    for sigma in [0.0, 0.01, 0.1, 0.2, THIRD, 0.6, 0.95] {
        let bg = FrwBackground::from_h0(sigma, 1.0).or_fail("background")?;
        for t in log_space(1e-3, 1e3, 61) {
            let s = bg.state_at(t).or_fail("state")?;
            worst_f = worst_f.max((s.h * s.h - KAPPA * s.rho / 3.0).abs() / (s.h * s.h));
            // ln ρ and ln R are affine in ln t, so centred differences in
            // ln t carry no truncation error.
            let (lo, hi) = (t * (-dl).exp(), t * dl.exp());
            let (slo, shi) = (bg.state_at(lo).or_fail("state")?, bg.state_at(hi).or_fail("state")?);
            let dln_rho = (shi.rho.ln() - slo.rho.ln()) / (2.0 * dl);
            let rho_dot = s.rho * dln_rho / t;
            worst_c = worst_c.max((rho_dot + 3.0 * (s.p + s.rho) * s.h).abs() / rho_dot.abs());
            let dln_r = (bg.scale_factor(hi).ln() - bg.scale_factor(lo).ln()) / (2.0 * dl);
            worst_h = worst_h.max(rel(dln_r / t, s.h));
        }
    }
    let detail = format!("friedmann {worst_f:.1e}, continuity {worst_c:.1e}, H = R'/R {worst_h:.1e}");
    if worst_f < 1e-12 && worst_c < 1e-10 && worst_h < 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn age_bounds(_: &mut Ctx) -> Outcome {
    for h0 in [0.5, 1.0, 70.0] {
        for i in 0..=300 {
            let sigma = THIRD * i as f64 / 300.0;
            let t0 = present_age(sigma, h0) * h0;
            let r_inf = infinite_redshift_radius(sigma, h0) * h0;
            let eps = 1e-15;
            if !(t0 >= 0.5 - eps && t0 <= 2.0 / 3.0 + eps) {
                return Err(format!("H0 t0 = {t0} outside [1/2, 2/3] at sigma = {sigma}"));
            }
            if !(r_inf >= 1.0 - eps && r_inf <= 2.0 + eps) {
                return Err(format!("H0 r_inf = {r_inf} outside [1, 2] at sigma = {sigma}"));
            }
        }
    }
    Ok("H0 t0 in [1/2, 2/3] and H0 r_inf in [1, 2] on 301 sigma x 3 H0".into())
}

fn mass_decay(_: &mut Ctx) -> Outcome {
    let mut worst_slope = 0.0f64;
    let mut worst_identity = 0.0f64;
    for sigma in [0.01, 0.1, 0.2, THIRD, 0.5] {
        let bg = FrwBackground::from_h0(sigma, 1.0).or_fail("background")?;
        let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for t in log_space(1e-3, 1e3, 25) {
            let s = bg.state_at(t).or_fail("state")?;
            let rbar = s.r;
            let m = s.mass_inside(rbar).or_fail("mass")?;
            // 1 − A cancels when H r̄ is small, so the identity is tested
            // at radii of order the Hubble length.
            for c in [0.5, 1.0, 2.0] {
                let x = c / s.h;
                let mx = s.mass_inside(x).or_fail("mass")?;
                worst_identity = worst_identity.max(rel(2.0 * mx / x, 1.0 - s.schwarzschild_a(x)));
            }
            let (x, y) = (t.ln(), m.ln());
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let expected = -2.0 * sigma / (1.0 + sigma);
        worst_slope = worst_slope.max((slope - expected).abs());
        if mass_decay_exponent(sigma) != expected {
            return Err(format!("mass_decay_exponent({sigma}) = {}", mass_decay_exponent(sigma)));
        }
    }
    let detail = format!("slope error {worst_slope:.1e}, 2M/rbar = 1 - A to {worst_identity:.1e}");
    if worst_slope < 1e-6 && worst_identity < 1e-14 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tov_forms(ctx: &mut Ctx) -> Outcome {
    let mut rng = ctx.rng(1);
    let mut worst = 0.0f64;
    for _ in 0..BATTERY_SIZE {
        let rbar = rng.gen_range(0.05..20.0);
        let n = rng.gen_range(1.001..100.0);
        let rhobar = rng.gen_range(1e-4..1.0);
        let pbar = rng.gen_range(1e-6..1.0) * rhobar;
        let (dp, dn) = tov_rhs(rbar, pbar, n, rhobar).or_fail("tov_rhs")?;
        let (dp_a, da) = tov_rhs_a_form(rbar, pbar, 1.0 - n, rhobar).or_fail("tov_rhs_a_form")?;
        worst = worst.max(rel(dp, dp_a)).max(rel(dn, -da));
        if !(dn < 0.0) {
            return Err(format!("dN/drbar = {dn} is not negative at rbar = {rbar}, N = {n}"));
        }
    }
    let detail = format!("{BATTERY_SIZE} states, N and A forms agree to {worst:.1e}, dN/drbar < 0");
    if worst < 1e-13 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tov_vacuum(_: &mut Ctx) -> Outcome {
    let rhs = |rbar: f64, y: &[f64; 2]| {
        let (dp, dn) = tov_rhs(rbar, y[0], y[1], 0.0)?;
        Ok([dp, dn])
    };
    let opts = Options {
        rel_tol: 1e-12,
        abs_tol: [1e-14, 0.0],
        ..Options::default()
    };
    let (r0, n0) = (0.1, 40.0);
    let mut ode = Sdirk4::new(rhs, r0, [0.0, n0], opts);
    let mut worst = 0.0f64;
    for r in log_space(r0, 1.0, 11).skip(1) {
        let y = ode.advance_to(r).or_fail("vacuum integration")?;
        worst = worst.max(rel(y[1] * r, n0 * r0));
        if y[0] != 0.0 {
            return Err(format!("pressure left zero: {}", y[0]));
        }
    }
    let detail = format!("N rbar conserved to {worst:.1e} over a decade");
    if worst < 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> Result<(MatchedState, f64, f64), String> {
    let sigma = rng.gen_range(0.001..0.999);
    let rho = rng.gen_range(0.01..10.0);
    let rhobar = rng.gen_range(0.001..0.999) * rho;
    let n = rng.gen_range(1.0..100.0f64).max(1.0 + 1e-9);
    let p = sigma * rho;
    let pbar = pbar_from_constraint(rho, p, rhobar, n).or_fail("constraint")?;
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
    let psi = rng.gen_range(0.1..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Ok((state, psi, sigma))
}

fn det_jump(ctx: &mut Ctx) -> Outcome {
    let mut rng = ctx.rng(2);
    let (mut det, mut c0, mut c1, mut mu1_violated, mut min_violated_det) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..BATTERY_SIZE {
        let (state, psi, _) = random_state(&mut rng)?;
        let res = rankine_hugoniot_residual(&state, psi).or_fail("residual")?;
        let (d, a, b) = res.relative();
        det = det.max(d.abs());
        c0 = c0.max(a.abs());
        c1 = c1.max(b.abs());

        let delta = rng.gen_range(1e-6..1e-1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let broken = MatchedState {
            pbar: state.pbar + delta * state.p.max(state.pbar.abs()),
            ..state
        };
        let res = rankine_hugoniot_residual(&broken, psi).or_fail("residual")?;
        let (d, _, b) = res.relative();
        mu1_violated = mu1_violated.max(b.abs());
        min_violated_det = min_violated_det.min(d.abs());

        let scaled = jump_matrix(&state, 3.0 * psi).or_fail("jump matrix")?;
        if !(scaled.det().abs() / (scaled.max_abs() * scaled.max_abs()) < 1e-10) {
            return Err(format!("det stops vanishing when psi is rescaled, N = {}", state.n));
        }
    }
    let detail = format!(
        "{BATTERY_SIZE} states: det {det:.1e}, n.T^0 {c0:.1e}, n.T^1 {c1:.1e}; violated: n.T^1 {mu1_violated:.1e}, min det {min_violated_det:.1e}"
    );
    if det < 1e-10 && c0 < 1e-10 && c1 < 1e-10 && mu1_violated < 1e-13 && min_violated_det > 1e-13 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn constraint_roundtrip(ctx: &mut Ctx) -> Outcome {
    let mut rng = ctx.rng(3);
    let (mut worst_v, mut worst_trip) = (0.0f64, 0.0f64);
    for _ in 0..BATTERY_SIZE {
        let sigma = rng.gen_range(0.001..0.999);
        let u = rng.gen_range(0.0..sigma);
        let n = rng.gen_range(1.001..100.0);
        let rho = rng.gen_range(0.01..10.0);
        let v = v_from_u(u, sigma, n).or_fail("v(u)")?;
        let rhobar = rhobar_from_constraint(rho, sigma * rho, u * rho, n).or_fail("rhobar")?;
        worst_v = worst_v.max((v * rho - rhobar).abs() / rho);
        if rhobar > 0.0 && rhobar < rho {
            let pbar = pbar_from_constraint(rho, sigma * rho, rhobar, n).or_fail("pbar")?;
            worst_trip = worst_trip.max((pbar - u * rho).abs() / rho);
            if !(pbar < sigma * rho) {
                return Err(format!(
                    "pbar = {pbar} not below p = {} with rho > rhobar > 0",
                    sigma * rho
                ));
            }
        }
    }
    let detail = format!("v rho = rhobar to {worst_v:.1e} of rho, pbar round trip {worst_trip:.1e}, pbar < p");
    if worst_v < 1e-13 && worst_trip < 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn orbit_shape(ctx: &mut Ctx) -> Outcome {
    let mut worst_law = 0.0f64;
    for sigma in ORBIT_GRID {
        let orbit = ctx.orbit(sigma)?;
        let samples = orbit.samples();
        let w = orbit.deficit();
        for i in 1..samples.len() {
            if !(samples[i].s < samples[i - 1].s && w[i] < w[i - 1]) {
                return Err(format!("not monotone at sigma = {sigma}, S = {}", samples[i].s));
            }
        }
        let last = samples[samples.len() - 1];
        let w_end = w[w.len() - 1];
        let u_bar = sigma.min(THIRD);
        let bound = (3.0 * sigma * last.s).sqrt() * (1.0 + u_bar);
        let dist = (u_bar - sigma) + w_end;
        worst_law = worst_law.max(dist.abs() / bound);
        if dist.abs() > bound {
            return Err(format!(
                "|u(Smin) - ubar| = {dist:e} exceeds {bound:e} at sigma = {sigma}"
            ));
        }
    }
    Ok(format!(
        "S decreasing and u increasing; limit law used {:.4}% of its bound",
        worst_law * 100.0
    ))
}

fn entropy_region(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for sigma in ORBIT_GRID {
        let orbit = ctx.orbit(sigma)?;
        let samples = orbit.samples();
        for (i, (p, w)) in samples.iter().zip(orbit.deficit()).enumerate() {
            if i == 0 || i + 1 == samples.len() {
                continue;
            }
            if !sample_regions(sigma, *p, *w).entropy {
                return Err(format!("S >= E(u) at sigma = {sigma}, S = {}, u = {}", p.s, p.u));
            }
            count += 1;
        }
    }
    Ok(format!("S < E(u) at {count} interior samples"))
}

fn sandwich(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    let mut worst_flux = f64::INFINITY;
    for sigma in ORBIT_GRID {
        let orbit = ctx.orbit(sigma)?;
        let report = verify_invariant_regions(&orbit).or_fail("invariant regions")?;
        if let Some((i, _)) = report
            .samples
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.in_r_sigma && r.above_q))
        {
            let p = orbit.samples()[i];
            return Err(format!(
                "sample outside the sandwich at sigma = {sigma}, S = {}, u = {}",
                p.s, p.u
            ));
        }
        if let Some(u) = report.flux.first_violation {
            return Err(format!("boundary flux points inward at sigma = {sigma}, u = {u}"));
        }
        worst_flux = worst_flux.min(report.flux.worst_margin);
        count += report.samples.len();
    }
    Ok(format!(
        "Q <= S <= min(1, h) at {count} samples; smallest flux margin {worst_flux:.2e}"
    ))
}

fn speed_limits(ctx: &mut Ctx) -> Outcome {
    let mut notes = Vec::new();
    for sigma in [0.05, 0.1, 0.2, 0.3] {
        let orbit = ctx.orbit(sigma)?;
        let max = speed_along_orbit(&orbit).into_iter().fold(0.0, f64::max);
        let bound = (3.0 * sigma).sqrt();
        if !(max <= bound + 1e-9) {
            return Err(format!(
                "max s = {max} exceeds sqrt(3 sigma) = {bound} at sigma = {sigma}"
            ));
        }
        let class = classify_limit_speed(sigma, &orbit).or_fail("speed class")?;
        if class != SpeedClass::Zero {
            return Err(format!("limit speed at sigma = {sigma} classified {}", class.name()));
        }
    }
    notes.push("s <= sqrt(3 sigma) and s -> 0 for sigma < 1/3".to_string());

    let orbit = ctx.orbit(THIRD)?;
    let sup = speed_along_orbit(&orbit).into_iter().fold(0.0, f64::max);
    let at = orbit.eval(1e-8).or_fail("orbit at S = 1e-8")?;
    let s8 = at.w / ((1.0 + at.u) * at.s.sqrt());
    if !(sup < 1.0) || !(0.98..=1.0).contains(&s8) {
        return Err(format!("sigma = 1/3: sup s = {sup}, s(1e-8) = {s8}"));
    }
    notes.push(format!("sigma = 1/3: sup s = {sup:.6}, s(1e-8) = {s8:.6}"));

    let orbit = ctx.orbit(0.4)?;
    let max = speed_along_orbit(&orbit).into_iter().fold(0.0, f64::max);
    let class = classify_limit_speed(0.4, &orbit).or_fail("speed class")?;
    if !(max > 1.0) || class != SpeedClass::Divergent {
        return Err(format!("sigma = 0.4: max s = {max}, class {}", class.name()));
    }
    notes.push(format!("sigma = 0.4: max s = {max:.3e}"));
    Ok(notes.join("; "))
}

fn m_star(ctx: &mut Ctx) -> Outcome {
    let orbit = ctx.orbit(THIRD)?;
    let m = fit_m_star(&orbit).or_fail("m* fit")?;
    let err = rel(m, M_STAR);
    let detail = format!("m* = {m:.6} vs 4/3, relative error {err:.1e}");
    if err < 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Five-point centred derivative at `i` on a uniform grid of spacing `h`.
fn five_point(f: &[f64], i: usize, h: f64) -> f64 {
    (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
}

fn reconstruction(ctx: &mut Ctx) -> Outcome {
    let (mut worst_id, mut worst_speed, mut compared) = (0.0f64, 0.0f64, 0usize);
    for sigma in [0.05, 0.1, 0.2, THIRD] {
        let sol = ctx.solution(sigma)?;
        let rows = &sol.rows;
        for (i, row) in rows.iter().enumerate() {
            let n_id = rel(row.n, (row.h * row.rbar).powi(2));
            let r_id = rel(row.rbar, row.scale_factor * row.r);
            let m_id = rel(row.mass_frw(), row.mass_tov());
            worst_id = worst_id.max(n_id).max(r_id).max(m_id);
            let interior = i > 0 && i + 1 < rows.len();
            if interior && !row.entropy_ok {
                return Err(format!("entropy ordering fails at sigma = {sigma}, S = {}", row.s));
            }
            if i > 0 && !(row.mass_tov() < rows[i - 1].mass_tov()) {
                return Err(format!(
                    "shock mass not decreasing in t at sigma = {sigma}, S = {}",
                    row.s
                ));
            }
        }

        let tau: Vec<f64> = rows.iter().map(|r| r.s.ln()).collect();
        let r: Vec<f64> = rows.iter().map(|r| r.r).collect();
        let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
        for i in 2..rows.len().saturating_sub(2) {
            let h = tau[i + 1] - tau[i];
            let uniform = (i - 2..i + 2).all(|j| ((tau[j + 1] - tau[j]) - h).abs() < 1e-9 * h.abs());
            if !uniform || rows[i - 2].asymptotic || rows[i + 2].asymptotic {
                continue;
            }
            let rdot = five_point(&r, i, h) / five_point(&t, i, h);
            worst_speed = worst_speed.max(rel(rows[i].scale_factor * rdot, rows[i].speed));
            compared += 1;
        }
    }
    let detail = format!("row identities to {worst_id:.1e}; R dr/dt vs s to {worst_speed:.1e} at {compared} rows");
    if worst_id < 1e-10 && worst_speed < 1e-4 && compared > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn os_horizon(_: &mut Ctx) -> Outcome {
    let mut worst_t = 0.0f64;
    let (mut worst_m, mut worst_gap, mut worst_phi) = (0.0f64, 0.0f64, 0.0f64);
    for mass in [0.01, 1.0, 37.5] {
        let exact = horizon_crossing_time(mass).or_fail("t_s")?;
        let numeric = horizon_crossing_time_numeric(mass, exact * 1e-14).or_fail("t_s root")?;
        worst_t = worst_t.max(rel(exact, numeric));

        let rho0 = 0.2;
        let cfg = OsConfig::new(mass, rho0, Orientation::Expanding).or_fail("OS config")?;
        let bg = cfg.background();
        for t in log_space(bg.t0 * 1e-3, bg.t0 * 1e3, 31) {
            let state = bg.state_at(t).or_fail("state")?;
            let rbar = cfg.rbar_at(t).or_fail("rbar")?;
            worst_m = worst_m.max(rel(KAPPA / 6.0 * state.rho * rbar.powi(3), mass));
            for orientation in [Orientation::Expanding, Orientation::Collapsing] {
                let rdot = bg.scale_factor(t) * state.h;
                let (c, i) =
                    characteristic_vs_interface(state.h, rbar, orientation, cfg.r0(), rdot).or_fail("speeds")?;
                worst_gap = worst_gap.max(((c - i).abs() - 1.0).abs());
                let b = transform_b(state.h, rbar, orientation).or_fail("b")?;
                worst_phi = worst_phi.max((transform_phi(state.h, rbar, b) + orientation.sign()).abs());
            }
        }
    }
    let detail = format!(
        "t_s = 4M/3 vs root {worst_t:.1e}; mass constant to {worst_m:.1e}; |speed gap| - 1 {worst_gap:.1e}; phi = -/+1 to {worst_phi:.1e}"
    );
    if worst_t < 1e-10 && worst_m < 1e-14 && worst_gap < 1e-12 && worst_phi < 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn visibility_sqrt_n0(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for sigma in BRACKET_GRID {
        let r = ctx.report(sigma)?;
        parts.push(format!("{sigma:.3}:{:.4}", r.sqrt_n0_numeric));
        if !r.sqrt_n0_within_bounds(BOUND_SLACK) {
            failed.push(format!(
                "sigma = {sigma}: sqrt(N0) = {} not in [{}, {}]",
                r.sqrt_n0_numeric, r.sqrt_n0_lower, r.sqrt_n0_upper
            ));
        }
    }
    if failed.is_empty() {
        Ok(format!("sqrt(N0) within bounds: {}", parts.join(" ")))
    } else {
        Err(failed.join("; "))
    }
}

fn emergence_tcrit(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for sigma in BRACKET_GRID {
        let r = ctx.report(sigma)?;
        parts.push(format!("{sigma:.3}:{:.4}", r.tcrit_ratio_numeric));
        if !r.tcrit_within_bounds(BOUND_SLACK) {
            failed.push(format!(
                "sigma = {sigma}: t_crit/t0 = {:.4} not in [{:.4}, {:.4}] (H0 r(1) = {:.4})",
                r.tcrit_ratio_numeric, r.tcrit_ratio_lower, r.tcrit_ratio_upper, r.h0_r_emergence
            ));
        }
    }
    if failed.is_empty() {
        Ok(format!("t_crit/t0 within bounds: {}", parts.join(" ")))
    } else {
        Err(failed.join("; "))
    }
}

fn os_limit(ctx: &mut Ctx) -> Outcome {
    let sigma = 1e-3;
    let r = ctx.report(sigma)?;
    let sol = ctx.solution(sigma)?;
    let r1 = sol.emergence_row().map(|row| row.r).ok_or("no emergence row")?;
    let e_n0 = rel(r.sqrt_n0_numeric, 2.0);
    let e_t = rel(r.tcrit_ratio_numeric, 2.0);
    let e_r1 = rel(r1, 1.0);
    let detail = format!(
        "sigma = 1e-3: sqrt(N0) = {:.5} ({:.2}%), t_crit/t0 = {:.5} ({:.2}%), r(1)/r* = {r1:.5}, H0 r(1) = {:.5}",
        r.sqrt_n0_numeric,
        100.0 * e_n0,
        r.tcrit_ratio_numeric,
        100.0 * e_t,
        r.h0_r_emergence
    );
    if e_n0 < 0.05 && e_t < 0.05 && e_r1 < 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// `ln B` of the configured variant on a vacuum profile `N = 2M/r̄`, where
/// the metric has `B ∝ N − 1`.
fn b_variants(ctx: &mut Ctx) -> Outcome {
    let mass = 1.0;
    let samples: Vec<BSample> = (0..=4000)
        .map(|i| {
            let rbar = 0.2 + 1.6 * i as f64 / 4000.0;
            BSample {
                n: 2.0 * mass / rbar,
                rbar,
                rhobar: 0.0,
            }
        })
        .collect();
    let exact: Vec<f64> = samples
        .iter()
        .map(|s| ((s.n - 1.0) / (samples[0].n - 1.0)).ln())
        .collect();
    let horizon = ctx.cfg.run.horizon_eps;
    let mismatch = |variant: BVariant| -> Result<f64, String> {
        let log_b = metric_log_b(&samples, 1.0, variant, horizon).or_fail("ln B")?;
        Ok(log_b.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    };
    let mut parts = Vec::new();
    for v in BVariant::ALL {
        parts.push(format!("{} {:.1e}", v.name(), mismatch(v)?));
    }
    let chosen = ctx.cfg.run.b_variant;
    let m = mismatch(chosen)?;
    let detail = format!(
        "{} mismatch {m:.1e} (tol {:.1e}); {}",
        chosen.name(),
        ctx.cfg.b_mismatch_tol,
        parts.join(", ")
    );
    if m <= ctx.cfg.b_mismatch_tol {
        Ok(detail)
    } else {
        Err(detail)
    }
}
