//! The shock equation in the `(S, u)` phase plane.
//!
//! With `S = 1/N` and `u = p̄/ρ` the matching conditions reduce to
//!
//! ```text
//! du/dS = (1+u)/(2(1+3u)S) · ((3u−1)(σ−u) + 6u(1+u)S) / ((σ−u) + (1+u)S),
//! ```
//!
//! equivalently the autonomous field `(F, G)` with `dS/dξ = F`, `du/dξ = G`.
//! The physical orbit starts at `(S, u) = (1, 0)` and runs backward in time
//! (decreasing `S`) into the rest point `(0, ū)`, `ū = min{σ, 1/3}`.
//!
//! Orbits are integrated in `τ = ln S` for the deficit `w = σ − u`, which
//! keeps full relative precision as `u → σ`. Below `σ = 1/3` the approach is
//! along the isocline `G = 0` and the system is stiff (relaxation rate `~1/S`),
//! so the implicit [`crate::ode::Sdirk4`] scheme is used. A second component
//! carries `ln r`, the log of the FRW shock coordinate, normalized to zero at
//! `S = 1`.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::math::{exp, ln, sqrt};
use crate::ode::{self, Sdirk4};

/// Smallest `σ` accepted by the phase plane; smaller values are served by
/// the Oppenheimer–Snyder limit.
pub const SIGMA_MIN: f64 = 1e-4;

/// Distance from `1/3` within which `σ` is treated as radiation for the
/// `m*` fit and the asymptotic continuation.
pub const RADIATION_TOL: f64 = 1e-6;

/// Absolute slack for the invariant-region sandwich.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// The coefficient of `√S` in `u ~ 1/3 − m*√S` for `σ = 1/3`.
pub const M_STAR: f64 = 4.0 / 3.0;

/// Whether `σ` is within [`RADIATION_TOL`] of `1/3`.
pub fn is_radiation(sigma: f64) -> bool {
    (sigma - 1.0 / 3.0).abs() <= RADIATION_TOL
}

/// A point of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub s: f64,
    pub u: f64,
}

/// `du/dS` along the shock, grouped as written above.
pub fn du_ds(s: f64, u: f64, sigma: f64) -> Result<f64> {
    ensure(s > 0.0, "S", s, "must be positive")?;
    let den = (sigma - u) + (1.0 + u) * s;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "shock equation denominator (σ−u) + (1+u)S",
        });
    }
    let num = (3.0 * u - 1.0) * (sigma - u) + 6.0 * u * (1.0 + u) * s;
    Ok((1.0 + u) / (2.0 * (1.0 + 3.0 * u) * s) * (num / den))
}

/// `(F, G)` with `F = 2S(1+3u)((σ−u) + (1+u)S)` and
/// `G = (1+u)(−(1−3u)(σ−u) + 6u(1+u)S)`.
pub fn autonomous_field(s: f64, u: f64, sigma: f64) -> (f64, f64) {
    let f = 2.0 * s * (1.0 + 3.0 * u) * ((sigma - u) + (1.0 + u) * s);
    let g = (1.0 + u) * (-(1.0 - 3.0 * u) * (sigma - u) + 6.0 * u * (1.0 + u) * s);
    (f, g)
}

/// The isocline `G = 0`: `h(u) = (σ−u)(1/3−u)/(2u(1+u))`.
pub fn isocline_h(u: f64, sigma: f64) -> Result<f64> {
    if u == 0.0 {
        return Err(Error::Singular {
            what: "isocline h(u) at u = 0",
        });
    }
    Ok((sigma - u) * (1.0 / 3.0 - u) / (2.0 * u * (1.0 + u)))
}

/// Boundary of the entropy region, `E(u) = ((1−u)/(1+u))((σ−u)/(σ+u))`.
pub fn entropy_boundary_e(u: f64, sigma: f64) -> f64 {
    (1.0 - u) / (1.0 + u) * ((sigma - u) / (sigma + u))
}

/// Lower invariant curve `Q_a(u) = a²(σ−u)²/(1+u)²`.
pub fn invariant_q(u: f64, sigma: f64, a: f64) -> f64 {
    let r = (sigma - u) / (1.0 + u);
    a * a * r * r
}

/// `Q_a'(u) = −2a²(1+σ)(σ−u)/(1+u)³`.
pub fn invariant_q_slope(u: f64, sigma: f64, a_squared: f64) -> f64 {
    -2.0 * a_squared * (1.0 + sigma) * (sigma - u) / ((1.0 + u) * (1.0 + u) * (1.0 + u))
}

/// Fluid-relative shock speed `s = (σ−u)/((1+u)√S)` written with the
/// deficit `w = σ − u`.
fn speed(s: f64, u: f64, w: f64) -> f64 {
    w / ((1.0 + u) * sqrt(s))
}

/// Settings for [`integrate_orbit_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    pub s_min: f64,
    /// Relative tolerance on the deficit `σ − u`.
    pub rel_tol: f64,
    /// Absolute tolerance on `ln r`.
    pub abs_tol: f64,
    /// Output samples per decade of `S`.
    pub points_per_decade: usize,
    pub max_steps: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            s_min: 1e-9,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            points_per_decade: 20,
            max_steps: 2_000_000,
        }
    }
}

/// Whether an orbit's samples were checked against the region inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitMode {
    /// `σ ≤ 1/3`: entropy and invariant-region inequalities were checked.
    Certified,
    /// `σ > 1/3`: integrated without certification.
    Exploratory,
}

/// An integrated trajectory from `(1, 0)` toward the rest point.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    sigma: f64,
    samples: Vec<PhasePoint>,
    deficit: Vec<f64>,
    ln_r: Vec<f64>,
    asymptotic_from: Option<usize>,
    mode: OrbitMode,
    options: OrbitOptions,
    stats: ode::Stats,
}

impl Orbit {
    /// Build an orbit from externally supplied samples (e.g. model curves).
    ///
    /// `ln r` is recovered by trapezoid quadrature in `ln S`, normalized to
    /// zero at the first sample. No certification is attempted.
    pub fn from_samples(sigma: f64, samples: Vec<PhasePoint>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        for (i, pair) in samples.windows(2).enumerate() {
            if !(pair[1].s < pair[0].s) {
                return Err(Error::NotMonotone { index: i + 1 });
            }
        }
        let deficit: Vec<f64> = samples.iter().map(|p| sigma - p.u).collect();
        let tau: Vec<f64> = samples.iter().map(|p| ln(p.s)).collect();
        let integrand: Vec<f64> = samples
            .iter()
            .zip(&deficit)
            .map(|(p, w)| ln_r_rate(p.u, *w, sigma))
            .collect();
        let ln_r = crate::quadrature::cumulative_trapezoid(&tau, &integrand)?;
        Ok(Self {
            sigma,
            samples,
            deficit,
            ln_r,
            asymptotic_from: None,
            mode: if sigma <= 1.0 / 3.0 {
                OrbitMode::Certified
            } else {
                OrbitMode::Exploratory
            },
            options: OrbitOptions::default(),
            stats: ode::Stats::default(),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Samples ordered by decreasing `S`, starting at `(1, 0)`.
    pub fn samples(&self) -> &[PhasePoint] {
        &self.samples
    }

    /// `σ − u` per sample, at full relative precision.
    pub fn deficit(&self) -> &[f64] {
        &self.deficit
    }

    /// `ln(r(S)/r(1))` per sample.
    pub fn ln_r(&self) -> &[f64] {
        &self.ln_r
    }

    /// Index of the first sample taken from the `σ = 1/3` asymptotic law
    /// rather than the integrator, if any.
    pub fn asymptotic_from(&self) -> Option<usize> {
        self.asymptotic_from
    }

    pub fn mode(&self) -> OrbitMode {
        self.mode
    }

    pub fn is_exploratory(&self) -> bool {
        self.mode == OrbitMode::Exploratory
    }

    pub fn options(&self) -> &OrbitOptions {
        &self.options
    }

    pub fn stats(&self) -> ode::Stats {
        self.stats
    }

    pub fn s_min(&self) -> f64 {
        self.samples.last().map_or(1.0, |p| p.s)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Orbit state at an arbitrary `S` in `[s_min, 1]`, obtained by
    /// re-integrating from the nearest sample above `S`.
    pub fn eval(&self, s: f64) -> Result<OrbitState> {
        let s_min = self.s_min();
        ensure(
            s <= 1.0 && s >= s_min,
            "S",
            s,
            "outside the integrated range of the orbit",
        )?;
        let i = self.samples.partition_point(|p| p.s > s);
        if i < self.samples.len() && self.samples[i].s == s {
            return Ok(self.state(i));
        }
        let start = i - 1;
        if let Some(a) = self.asymptotic_from {
            if start + 1 >= a {
                let from = self.state(a - 1);
                return Ok(radiation_asymptote(from, s));
            }
        }
        let from = self.state(start);
        let system = OrbitSystem { sigma: self.sigma };
        let mut ode = Sdirk4::new(system, ln(from.s), [from.w, from.ln_r], ode_options(&self.options));
        let [w, ln_r] = ode.advance_to(ln(s))?;
        Ok(OrbitState {
            s,
            u: self.sigma - w,
            w,
            ln_r,
        })
    }

    fn state(&self, i: usize) -> OrbitState {
        OrbitState {
            s: self.samples[i].s,
            u: self.samples[i].u,
            w: self.deficit[i],
            ln_r: self.ln_r[i],
        }
    }
}

/// Full orbit state at one `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub s: f64,
    pub u: f64,
    /// `σ − u`.
    pub w: f64,
    /// `ln(r(S)/r(1))`.
    pub ln_r: f64,
}

/// `d ln r / dτ = (σ−u)/((1+3u)(1+σ))`.
fn ln_r_rate(u: f64, w: f64, sigma: f64) -> f64 {
    w / ((1.0 + 3.0 * u) * (1.0 + sigma))
}

/// `σ = 1/3` continuation `u = 1/3 − (4/3)√S`, matched in `ln r` at `from`.
fn radiation_asymptote(from: OrbitState, s: f64) -> OrbitState {
    let w = M_STAR * sqrt(s);
    // d ln r/dτ → √S/2, so ln r changes by √S − √S_from.
    OrbitState {
        s,
        u: 1.0 / 3.0 - w,
        w,
        ln_r: from.ln_r + (sqrt(s) - sqrt(from.s)),
    }
}

struct OrbitSystem {
    sigma: f64,
}

impl OrbitSystem {
    fn denominator(&self, s: f64, w: f64) -> f64 {
        let u = self.sigma - w;
        w + (1.0 + u) * s
    }

    fn below_cancellation_floor(&self, s: f64, w: f64) -> bool {
        self.denominator(s, w) < 1e3 * f64::EPSILON * (self.sigma + s)
    }
}

impl ode::System<2> for OrbitSystem {
    fn rhs(&self, tau: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        let sigma = self.sigma;
        let s = exp(tau);
        let w = y[0];
        let u = sigma - w;
        let den = w + (1.0 + u) * s;
        if !(den > 0.0) {
            // Off the physical branch; let the integrator reject the step.
            return Ok([f64::NAN; 2]);
        }
        let num = (3.0 * u - 1.0) * w + 6.0 * u * (1.0 + u) * s;
        let dw = -(1.0 + u) / (2.0 * (1.0 + 3.0 * u)) * (num / den);
        Ok([dw, ln_r_rate(u, w, sigma)])
    }
}

fn ode_options(opts: &OrbitOptions) -> ode::Options<2> {
    ode::Options {
        rel_tol: opts.rel_tol,
        abs_tol: [0.0, opts.abs_tol],
        initial_step: 1e-3,
        max_step: 0.5,
        max_steps: opts.max_steps,
    }
}

/// Integrate the orbit through `(1, 0)` down to `s_min` with default
/// settings otherwise.
pub fn integrate_orbit(sigma: f64, s_min: f64, rel_tol: f64) -> Result<Orbit> {
    integrate_orbit_with(
        sigma,
        &OrbitOptions {
            s_min,
            rel_tol,
            ..OrbitOptions::default()
        },
    )
}

/// Integrate the orbit through `(1, 0)` down to `opts.s_min`.
///
/// For `σ ≤ 1/3` every sample is checked against monotonicity, the entropy
/// region `S < E(u)` and the sandwich `Q_a(u) ≤ S ≤ min{1, h(u)}` with
/// `a² = 1/(3σ)`; a violation is returned as [`Error::Certification`].
///
/// If the denominator of the shock equation drops below its cancellation
/// floor, radiation orbits continue on the asymptotic law
/// `u = 1/3 − (4/3)√S` (see [`Orbit::asymptotic_from`]); other orbits
/// return [`Error::Cancellation`].
pub fn integrate_orbit_with(sigma: f64, opts: &OrbitOptions) -> Result<Orbit> {
    ensure(
        (SIGMA_MIN..1.0).contains(&sigma),
        "sigma",
        sigma,
        "phase-plane orbits need 1e-4 <= sigma < 1",
    )?;
    ensure(
        opts.s_min > 0.0 && opts.s_min < 1.0,
        "s_min",
        opts.s_min,
        "must lie in (0, 1)",
    )?;
    ensure(
        opts.rel_tol > 0.0 && opts.rel_tol < 1e-2,
        "rel_tol",
        opts.rel_tol,
        "must lie in (0, 1e-2)",
    )?;
    ensure(
        opts.points_per_decade > 0,
        "points_per_decade",
        opts.points_per_decade as f64,
        "must be positive",
    )?;

    let system = OrbitSystem { sigma };
    let mut ode = Sdirk4::new(system, 0.0, [sigma, 0.0], ode_options(opts));

    let mut samples = alloc::vec![PhasePoint { s: 1.0, u: 0.0 }];
    let mut deficit = alloc::vec![sigma];
    let mut ln_r = alloc::vec![0.0];
    let mut asymptotic_from = None;

    let tau_end = ln(opts.s_min);
    let dtau = -core::f64::consts::LN_10 / opts.points_per_decade as f64;
    let mut k = 1usize;
    loop {
        let mut tau = k as f64 * dtau;
        let last = tau <= tau_end * (1.0 - 1e-12);
        if last {
            tau = tau_end;
        }
        let s = exp(tau);
        let step = ode.advance_to(tau);
        let cancelled = match step {
            Ok([w, _]) => ode.system().below_cancellation_floor(s, w),
            Err(Error::Integration { .. }) if is_radiation(sigma) => {
                let w_prev = *deficit.last().unwrap_or(&sigma);
                let s_prev = samples.last().map_or(1.0, |p| p.s);
                // Step-size collapse right above the floor is cancellation too.
                ode.system().below_cancellation_floor(s_prev, w_prev * 1e-3)
            }
            Err(e) => return Err(e),
        };
        if cancelled {
            if !is_radiation(sigma) {
                return Err(Error::Cancellation { s });
            }
            asymptotic_from = Some(samples.len());
            let anchor = OrbitState {
                s: samples.last().map_or(1.0, |p| p.s),
                u: samples.last().map_or(0.0, |p| p.u),
                w: *deficit.last().unwrap_or(&sigma),
                ln_r: *ln_r.last().unwrap_or(&0.0),
            };
            let mut j = k;
            loop {
                let mut tau = j as f64 * dtau;
                let last = tau <= tau_end * (1.0 - 1e-12);
                if last {
                    tau = tau_end;
                }
                let st = radiation_asymptote(anchor, exp(tau));
                samples.push(PhasePoint { s: st.s, u: st.u });
                deficit.push(st.w);
                ln_r.push(st.ln_r);
                if last {
                    break;
                }
                j += 1;
            }
            break;
        }
        let [w, lr] = step?;
        samples.push(PhasePoint { s, u: sigma - w });
        deficit.push(w);
        ln_r.push(lr);
        if last {
            break;
        }
        k += 1;
    }

    let orbit = Orbit {
        sigma,
        samples,
        deficit,
        ln_r,
        asymptotic_from,
        mode: if sigma <= 1.0 / 3.0 {
            OrbitMode::Certified
        } else {
            OrbitMode::Exploratory
        },
        options: *opts,
        stats: ode.stats(),
    };
    if orbit.mode == OrbitMode::Certified {
        certify(&orbit)?;
    }
    Ok(orbit)
}

fn certify(orbit: &Orbit) -> Result<()> {
    let n = orbit.samples.len();
    for (i, p) in orbit.samples.iter().enumerate() {
        let fail = |check| Err(Error::Certification { check, s: p.s, u: p.u });
        if i > 0 {
            // Judged on the deficit: near the rest point consecutive u
            // values can round to the same double.
            if !(p.s < orbit.samples[i - 1].s && orbit.deficit[i] < orbit.deficit[i - 1]) {
                return fail("monotonicity");
            }
        }
        let regions = sample_regions(orbit.sigma, *p, orbit.deficit[i]);
        if i > 0 && i + 1 < n && !regions.entropy {
            return fail("entropy region S < E(u)");
        }
        if !regions.in_r_sigma {
            return fail("upper invariant region S <= min{1, h(u)}");
        }
        if !regions.above_q {
            return fail("lower invariant curve S >= Q_a(u)");
        }
    }
    Ok(())
}

/// Region membership of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRegions {
    /// `S < E(u)`.
    pub entropy: bool,
    /// `S ≤ min{1, h(u)}` (the `h` test is skipped at `u = 0`).
    pub in_r_sigma: bool,
    /// `S ≥ Q_a(u)` with `a² = 1/(3σ)`.
    pub above_q: bool,
}

/// Entropy and sandwich membership for a sample with deficit `w = σ − u`,
/// with [`SANDWICH_SLACK`] on the sandwich.
pub fn sample_regions(sigma: f64, p: PhasePoint, w: f64) -> SampleRegions {
    let PhasePoint { s, u } = p;
    let e = (1.0 - u) / (1.0 + u) * (w / (sigma + u));
    let upper = if u == 0.0 {
        1.0
    } else {
        (w * (1.0 / 3.0 - u) / (2.0 * u * (1.0 + u))).min(1.0)
    };
    let r = w / (1.0 + u);
    let q = r * r / (3.0 * sigma);
    SampleRegions {
        entropy: s < e,
        in_r_sigma: s <= upper + SANDWICH_SLACK,
        above_q: q <= s + SANDWICH_SLACK,
    }
}

/// Fluid-relative shock speed at every sample.
pub fn speed_along_orbit(orbit: &Orbit) -> Vec<f64> {
    orbit
        .samples
        .iter()
        .zip(&orbit.deficit)
        .map(|(p, w)| speed(p.s, p.u, *w))
        .collect()
}

/// Limit of the shock speed as `S → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedClass {
    Zero,
    Luminal,
    Divergent,
    Inconclusive,
}

impl SpeedClass {
    pub fn name(self) -> &'static str {
        match self {
            SpeedClass::Zero => "zero",
            SpeedClass::Luminal => "luminal",
            SpeedClass::Divergent => "divergent",
            SpeedClass::Inconclusive => "inconclusive",
        }
    }
}

/// Classify `lim s` from the log-log slope `q` of `s(S)` over the last
/// decade of samples: `q > 1/4` is zero, `q < −1/4` divergent, and
/// `|q| < 0.1` with `|s − 1| < 0.05` luminal. Anything else is reported as
/// inconclusive.
pub fn classify_limit_speed(sigma: f64, orbit: &Orbit) -> Result<SpeedClass> {
    ensure(orbit.sigma == sigma, "sigma", sigma, "does not match the orbit")?;
    let s_min = orbit.s_min();
    ensure(
        s_min <= 1e-8,
        "s_min",
        s_min,
        "classification needs an orbit reaching S <= 1e-8",
    )?;
    let speeds = speed_along_orbit(orbit);
    let (slope, last) = log_log_slope(orbit, &speeds, 10.0 * s_min)?;
    let class = if slope > 0.25 {
        SpeedClass::Zero
    } else if slope < -0.25 {
        SpeedClass::Divergent
    } else if slope.abs() < 0.1 && (last - 1.0).abs() < 0.05 {
        SpeedClass::Luminal
    } else {
        SpeedClass::Inconclusive
    };
    Ok(class)
}

fn log_log_slope(orbit: &Orbit, speeds: &[f64], s_from: f64) -> Result<(f64, f64)> {
    let mut n = 0.0;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (p, v) in orbit.samples.iter().zip(speeds) {
        if p.s <= s_from * (1.0 + 1e-12) && *v > 0.0 {
            let x = ln(p.s);
            let y = ln(*v);
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
    }
    if n < 3.0 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: n as usize,
        });
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok((slope, *speeds.last().unwrap_or(&0.0)))
}

/// Least-squares `m` in `1/3 − u = m√S` over `S ∈ [1e−8, 1e−6]`.
pub fn fit_m_star(orbit: &Orbit) -> Result<f64> {
    ensure(
        is_radiation(orbit.sigma),
        "sigma",
        orbit.sigma,
        "the m* fit applies to sigma = 1/3",
    )?;
    let (mut sxx, mut sxy, mut count) = (0.0, 0.0, 0usize);
    for p in &orbit.samples {
        if p.s >= 1e-8 * (1.0 - 1e-9) && p.s <= 1e-6 * (1.0 + 1e-9) {
            let x = sqrt(p.s);
            let y = 1.0 / 3.0 - p.u;
            sxx += x * x;
            sxy += x * y;
            count += 1;
        }
    }
    if count < 2 {
        return Err(Error::InsufficientData { needed: 2, got: count });
    }
    Ok(sxy / sxx)
}

/// Outcome of the boundary-flux test on `S = Q_a(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    pub a_squared: f64,
    pub points: usize,
    /// Smallest `|Q_a'| − |dS/du|` seen.
    pub worst_margin: f64,
    /// First `u` where the inequality failed.
    pub first_violation: Option<f64>,
}

impl FluxReport {
    pub fn ok(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Check `|Q_a'(u)| ≥ |dS/du|` on the curve `S = Q_a(u)` at `points`
/// equally spaced `u ∈ [0, ū)`.
pub fn flux_check(sigma: f64, a_squared: f64, points: usize) -> FluxReport {
    let u_bar = sigma.min(1.0 / 3.0);
    let mut worst = f64::INFINITY;
    let mut first = None;
    for i in 0..points {
        let u = u_bar * i as f64 / points as f64;
        let r = (sigma - u) / (1.0 + u);
        let q = a_squared * r * r;
        let (f, g) = autonomous_field(q, u, sigma);
        let margin = invariant_q_slope(u, sigma, a_squared).abs() - (f / g).abs();
        if margin < worst {
            worst = margin;
        }
        if first.is_none() && !(margin >= 0.0) {
            first = Some(u);
        }
    }
    FluxReport {
        a_squared,
        points,
        worst_margin: worst,
        first_violation: first,
    }
}

/// Per-sample region membership and the flux test for `a² = 1/(3σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub samples: Vec<SampleRegions>,
    pub flux: FluxReport,
}

impl InvariantReport {
    /// Every sample inside both regions and the flux test passed.
    pub fn all_ok(&self) -> bool {
        self.flux.ok() && self.samples.iter().all(|r| r.in_r_sigma && r.above_q)
    }
}

/// Region membership of every orbit sample plus the boundary-flux test.
pub fn verify_invariant_regions(orbit: &Orbit) -> Result<InvariantReport> {
    ensure(
        orbit.sigma <= 1.0 / 3.0,
        "sigma",
        orbit.sigma,
        "invariant regions are established for sigma <= 1/3",
    )?;
    let samples = orbit
        .samples
        .iter()
        .zip(&orbit.deficit)
        .map(|(p, w)| sample_regions(orbit.sigma, *p, *w))
        .collect();
    Ok(InvariantReport {
        samples,
        flux: flux_check(orbit.sigma, 1.0 / (3.0 * orbit.sigma), 2000),
    })
}
