//! Assembly of the full shock-wave solution along an orbit.
//!
//! Given the orbit `u(S)` and the FRW shock coordinate `r(S)`, the remaining
//! quantities follow algebraically. The shock sits at `√N = H r̄ = H R r`,
//! and with `H = H₀t₀/t`, `R = (t/t₀)^{2/(3(1+σ))}` this fixes the time:
//!
//! ```text
//! t/t₀ = (H₀ r / √N)^{3(1+σ)/(1+3σ)}.
//! ```
//!
//! The background then supplies `ρ`, `H` and `R`, the constraint supplies
//! `p̄ = uρ` and `ρ̄ = vρ`, and `B` comes from quadrature along the shock.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::frw::FrwBackground;
use crate::math::{exp, ln, powf, sqrt};
use crate::phase::{sample_regions, Orbit, PhasePoint};
use crate::tov::{metric_log_b, BSample, BVariant, DEFAULT_HORIZON_EPS};

pub use crate::frw::time_of_density;

/// `dr/dS = ((σ−u)/((1+σ)(1+3u))) · r/S`.
pub fn dr_ds(s: f64, u: f64, r: f64, sigma: f64) -> Result<f64> {
    ensure(s > 0.0, "S", s, "must be positive")?;
    Ok((sigma - u) / ((1.0 + sigma) * (1.0 + 3.0 * u)) * r / s)
}

/// `r(S)/r*` along an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct RProfile {
    /// `r/r*` per orbit sample, in orbit order (decreasing `S`).
    pub r: Vec<f64>,
    /// `ln r*` in the orbit's `ln r` normalization (`ln r(1) = 0`).
    pub ln_r_star: f64,
    /// Estimated `ln(r(S_min)/r*)`, the part of the integral below the
    /// last sample.
    pub tail: f64,
    /// Upper bound on `r(S_min)/r* − 1`, `exp(2√(3σS_min)/(1+σ)) − 1`.
    pub tail_bound: f64,
}

/// Normalize `r` by its Big Bang limit `r* = lim_{S→0} r(S)`.
///
/// `ln(r(S)/r*) = ∫₀^S ((σ−u)/(1+3u)) dS′/((1+σ)S′)`. The orbit carries the
/// integral from `S = 1`; the piece below `S_min` is estimated from the
/// local power law of the integrand over the last decade, and bounded by
/// `(σ−u)/(1+3u) ≤ √(3σS)`.
pub fn integrate_r(orbit: &Orbit) -> Result<RProfile> {
    ensure(
        !orbit.is_exploratory(),
        "sigma",
        orbit.sigma(),
        "r* exists only for certified orbits (sigma <= 1/3)",
    )?;
    let sigma = orbit.sigma();
    let samples = orbit.samples();
    let deficit = orbit.deficit();
    for (p, w) in samples.iter().zip(deficit) {
        let bound = sqrt(3.0 * sigma * p.s);
        if w / (1.0 + 3.0 * p.u) > bound * (1.0 + 1e-9) + 1e-15 {
            return Err(Error::Certification {
                check: "r integrand bound (σ−u)/(1+3u) <= √(3σS)",
                s: p.s,
                u: p.u,
            });
        }
    }
    let s_min = orbit.s_min();
    let ln_tail_bound = 2.0 * sqrt(3.0 * sigma * s_min) / (1.0 + sigma);
    let tail_bound = exp(ln_tail_bound) - 1.0;
    let tail = tail_estimate(orbit).unwrap_or(ln_tail_bound);
    let ln_r_star = orbit.ln_r().last().copied().unwrap_or(0.0) - tail;
    Ok(RProfile {
        r: orbit.ln_r().iter().map(|l| exp(l - ln_r_star)).collect(),
        ln_r_star,
        tail,
        tail_bound,
    })
}

/// `∫₀^{S_min} g dS/S ≈ g(S_min)/p` for `g ∝ S^p` fitted over the last decade.
fn tail_estimate(orbit: &Orbit) -> Option<f64> {
    let sigma = orbit.sigma();
    let samples = orbit.samples();
    let g = |i: usize| orbit.deficit()[i] / ((1.0 + 3.0 * samples[i].u) * (1.0 + sigma));
    let last = samples.len().checked_sub(1)?;
    let s_min = samples[last].s;
    let first = samples.iter().position(|p| p.s <= 10.0 * s_min * (1.0 + 1e-12))?;
    if first >= last {
        return None;
    }
    let (g0, g1) = (g(first), g(last));
    if !(g0 > 0.0 && g1 > 0.0) {
        return None;
    }
    let p = ln(g1 / g0) / ln(s_min / samples[first].s);
    (p > 0.0).then(|| g1 / p)
}

/// Settings for [`assemble`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssembleOptions {
    pub b_variant: BVariant,
    pub horizon_eps: f64,
    /// `B` at the first row (smallest `S`) that clears the horizon guard.
    pub b0: f64,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            b_variant: BVariant::default(),
            horizon_eps: DEFAULT_HORIZON_EPS,
            b0: 1.0,
        }
    }
}

/// One reconstructed shock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSolutionRow {
    pub s: f64,
    pub n: f64,
    pub u: f64,
    pub v: f64,
    pub rbar: f64,
    pub r: f64,
    pub t: f64,
    pub rho: f64,
    pub p: f64,
    pub pbar: f64,
    pub rhobar: f64,
    /// Fluid-relative shock speed.
    pub speed: f64,
    /// Scale factor at `t`.
    pub scale_factor: f64,
    /// Hubble parameter at `t`.
    pub h: f64,
    /// `ln B`, absent within the horizon guard.
    pub log_b: Option<f64>,
    /// `0 < p̄ < p`, `0 < ρ̄ < ρ` and `S < E(u)`; at `S = 1` instead
    /// `p̄ = ρ̄ = 0`.
    pub entropy_ok: bool,
    /// `Q_a(u) ≤ S ≤ min{1, h(u)}`.
    pub invariant_ok: bool,
    /// Taken from the `σ = 1/3` asymptotic law instead of the integrator.
    pub asymptotic: bool,
}

impl ShockSolutionRow {
    /// `B = exp(ln B)` when it is a positive finite number.
    pub fn b(&self) -> Option<f64> {
        self.log_b.map(exp).filter(|b| *b > 0.0 && b.is_finite())
    }

    pub fn b_valid(&self) -> bool {
        self.b().is_some()
    }

    /// Mass at the shock from the FRW side, `(κ/6) ρ r̄³`.
    pub fn mass_frw(&self) -> f64 {
        crate::KAPPA / 6.0 * self.rho * self.rbar * self.rbar * self.rbar
    }

    /// Mass at the shock from the TOV side, `N r̄/2`.
    pub fn mass_tov(&self) -> f64 {
        0.5 * self.n * self.rbar
    }
}

/// How `r` is normalized in a [`ShockSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RNormalization {
    /// `r* = 1`.
    RStar,
    /// `r(1) = 1`; used for exploratory orbits, whose `r(S) → 0`.
    Emergence,
}

/// A reconstructed shock-wave solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockSolution {
    pub sigma: f64,
    pub h0: f64,
    /// Rows ordered by increasing `S` (increasing `t`, decreasing `N`).
    pub rows: Vec<ShockSolutionRow>,
    pub r_star: f64,
    pub normalization: RNormalization,
    /// Upper bound on the relative error of `r*` from the unsampled tail.
    pub r_star_error_bar: f64,
    pub background: FrwBackground,
    pub options: AssembleOptions,
    pub orbit: Orbit,
    /// `ln r*` in the orbit's `ln r` normalization.
    pub ln_r_star: f64,
}

impl ShockSolution {
    /// `r(S)/r*` anywhere in the orbit's range.
    pub fn r_at(&self, s: f64) -> Result<f64> {
        Ok(exp(self.orbit.eval(s)?.ln_r - self.ln_r_star))
    }

    /// The row at `S = 1`, where the shock emerges from the black hole.
    pub fn emergence_row(&self) -> Option<&ShockSolutionRow> {
        self.rows.last().filter(|r| r.s == 1.0)
    }
}

/// `t = t₀ (H₀ r/√N)^{3(1+σ)/(1+3σ)}` on the shock.
pub fn time_on_shock(bg: &FrwBackground, r: f64, n: f64) -> f64 {
    let sigma = bg.sigma;
    bg.t0 * powf(bg.h0 * r / sqrt(n), 3.0 * (1.0 + sigma) / (1.0 + 3.0 * sigma))
}

/// Build every row of the shock solution from an orbit.
pub fn assemble(orbit: &Orbit, h0: f64, opts: &AssembleOptions) -> Result<ShockSolution> {
    let sigma = orbit.sigma();
    let bg = FrwBackground::from_h0(sigma, h0)?;
    let (r_of, normalization, ln_r_star, error_bar) = if orbit.is_exploratory() {
        let r: Vec<f64> = orbit.ln_r().iter().map(|l| exp(*l)).collect();
        (r, RNormalization::Emergence, 0.0, 0.0)
    } else {
        let prof = integrate_r(orbit)?;
        (prof.r, RNormalization::RStar, prof.ln_r_star, prof.tail_bound)
    };

    let samples = orbit.samples();
    let deficit = orbit.deficit();
    let asymptotic_from = orbit.asymptotic_from().unwrap_or(usize::MAX);
    let mut rows = Vec::with_capacity(samples.len());
    for i in (0..samples.len()).rev() {
        let PhasePoint { s, u } = samples[i];
        let w = deficit[i];
        let n = 1.0 / s;
        let r = r_of[i];
        let t = time_on_shock(&bg, r, n);
        let state = bg.state_at(t)?;
        let rbar = sqrt(n) / state.h;
        let one_u = 1.0 + u;
        let v = (-sigma * one_u + w * n) / (one_u + w * n);
        let rho = state.rho;
        let regions = sample_regions(sigma, samples[i], w);
        let row_entropy = if s == 1.0 {
            u == 0.0 && v == 0.0
        } else {
            u > 0.0 && w > 0.0 && v > 0.0 && v < 1.0 && regions.entropy
        };
        rows.push(ShockSolutionRow {
            s,
            n,
            u,
            v,
            rbar,
            r,
            t,
            rho,
            p: sigma * rho,
            pbar: u * rho,
            rhobar: v * rho,
            speed: sqrt(n) * w / one_u,
            scale_factor: state.r,
            h: state.h,
            log_b: None,
            entropy_ok: row_entropy,
            invariant_ok: regions.in_r_sigma && regions.above_q,
            asymptotic: i >= asymptotic_from,
        });
    }

    let guarded: Vec<usize> = (0..rows.len())
        .filter(|&i| rows[i].n > 1.0 + opts.horizon_eps)
        .collect();
    if !guarded.is_empty() {
        let b_samples: Vec<BSample> = guarded
            .iter()
            .map(|&i| BSample {
                n: rows[i].n,
                rbar: rows[i].rbar,
                rhobar: rows[i].rhobar,
            })
            .collect();
        let log_b = metric_log_b(&b_samples, opts.b0, opts.b_variant, opts.horizon_eps)?;
        for (&i, lb) in guarded.iter().zip(log_b) {
            rows[i].log_b = Some(lb);
        }
    }

    Ok(ShockSolution {
        sigma,
        h0,
        rows,
        r_star: 1.0,
        normalization,
        r_star_error_bar: error_bar,
        background: bg,
        options: *opts,
        orbit: orbit.clone(),
        ln_r_star,
    })
}
