//! Bounds on the shock position and when the shock becomes observable.
//!
//! Normalize the FRW coordinate so the shock tends to `r*` at the Big Bang.
//! The shock is first visible from the FRW center once `r*` reaches the
//! infinite-redshift radius, i.e. at `H₀ r* = 2/(1+3σ)`. At that time it lies
//! `√N₀` Hubble lengths out, with `S₀ = 1/N₀` solving `S (H₀ r(S))² = 1`. It
//! emerges from the black hole (`N = 1`) at `t_crit`, and eliminating
//! `R_crit` from `H_crit r̄_crit = 1`, `r̄_crit = R_crit r(1)` and
//! `H = H₀ R^{−3(1+σ)/2}` gives
//!
//! ```text
//! t_crit/t₀ = (H₀ r(1))^{3(1+σ)/(1+3σ)}.
//! ```

use crate::error::{ensure, Error, Result};
use crate::math::{exp, powf, sqrt};
use crate::os::{horizon_crossing_time, Orientation, OsConfig};
use crate::phase::is_radiation;
use crate::reconstruct::{RNormalization, ShockSolution};
use crate::roots::bisect;
use crate::units::KAPPA;

/// Numeric observability quantities next to their analytic bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservabilityReport {
    pub sigma: f64,
    /// `H₀ r*` at first visibility.
    pub h0_r_star: f64,
    /// `S₀ = 1/N₀` at first visibility.
    pub s0: f64,
    pub sqrt_n0_numeric: f64,
    pub sqrt_n0_lower: f64,
    pub sqrt_n0_upper: f64,
    pub tcrit_ratio_numeric: f64,
    pub tcrit_ratio_lower: f64,
    pub tcrit_ratio_upper: f64,
    /// `H₀ r(1)`, the emergence coordinate in units of the Hubble length
    /// at first visibility.
    pub h0_r_emergence: f64,
}

impl ObservabilityReport {
    pub fn sqrt_n0_within_bounds(&self, slack: f64) -> bool {
        within(self.sqrt_n0_numeric, self.sqrt_n0_lower, self.sqrt_n0_upper, slack)
    }

    pub fn tcrit_within_bounds(&self, slack: f64) -> bool {
        within(
            self.tcrit_ratio_numeric,
            self.tcrit_ratio_lower,
            self.tcrit_ratio_upper,
            slack,
        )
    }

    /// Whether `H₀ r(1)` lies in the `t_crit/t₀` bracket.
    pub fn h0_r_emergence_within_tcrit_bounds(&self, slack: f64) -> bool {
        within(
            self.h0_r_emergence,
            self.tcrit_ratio_lower,
            self.tcrit_ratio_upper,
            slack,
        )
    }
}

fn within(x: f64, lo: f64, hi: f64, slack: f64) -> bool {
    x >= lo - slack && x <= hi + slack
}

fn check_sigma(sigma: f64) -> Result<()> {
    ensure(
        (0.0..=1.0 / 3.0).contains(&sigma),
        "sigma",
        sigma,
        "estimates hold for 0 <= sigma <= 1/3",
    )
}

/// `H₀ r* = 2/(1+3σ)`.
pub fn visibility_product(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(2.0 / (1.0 + 3.0 * sigma))
}

/// `√N₀ ∈ [2/(1+3σ), (2/(1+3σ)) e^{√(3σ)(1+3σ)/(1+σ)}]`.
pub fn sqrt_n0_bounds(sigma: f64) -> Result<(f64, f64)> {
    let lower = visibility_product(sigma)?;
    let upper = lower * exp(sqrt(3.0 * sigma) * (1.0 + 3.0 * sigma) / (1.0 + sigma));
    Ok((lower, upper))
}

/// `t_crit/t₀ ∈ (2/(1+3σ)) [e^{σ/4}, e^{2√(3σ)/(1+σ)}]`, with the sharper
/// `[e^{√6/4}, e^{3/2}]` for radiation.
pub fn tcrit_ratio_bounds(sigma: f64) -> Result<(f64, f64)> {
    check_sigma(sigma)?;
    if is_radiation(sigma) {
        return Ok((exp(sqrt(6.0) / 4.0), exp(1.5)));
    }
    let k = visibility_product(sigma)?;
    Ok((k * exp(sigma / 4.0), k * exp(2.0 * sqrt(3.0 * sigma) / (1.0 + sigma))))
}

/// Bounds on `r(S₀)/r*`: `[e^{σS₀/4}, e^{2√(3σ)√S₀/(1+σ)}]`, or
/// `[e^{√6√S₀/4}, e^{3√S₀/2}]` for radiation.
pub fn position_bounds(sigma: f64, s0: f64) -> Result<(f64, f64)> {
    ensure(sigma > 0.0, "sigma", sigma, "must be positive")?;
    check_sigma(sigma)?;
    ensure(s0 > 0.0 && s0 <= 1.0, "S0", s0, "must lie in (0, 1]")?;
    let root = sqrt(s0);
    if is_radiation(sigma) {
        return Ok((exp(sqrt(6.0) * root / 4.0), exp(1.5 * root)));
    }
    Ok((
        exp(sigma * s0 / 4.0),
        exp(2.0 * sqrt(3.0 * sigma) * root / (1.0 + sigma)),
    ))
}

/// `t_crit/t₀ = (H₀ r(1))^{3(1+σ)/(1+3σ)}`.
pub fn tcrit_ratio_from_emergence(sigma: f64, h0_r1: f64) -> f64 {
    powf(h0_r1, 3.0 * (1.0 + sigma) / (1.0 + 3.0 * sigma))
}

/// Observability numbers for a reconstructed solution with `r* = 1`.
///
/// `H₀` is set by the visibility condition, independent of the `H₀` the
/// solution was assembled with. `S₀` is found by bisection (to `1e−12`) on
/// `S (H₀ r(S))² − 1`, which is monotone along the orbit.
pub fn numeric_report(solution: &ShockSolution) -> Result<ObservabilityReport> {
    let sigma = solution.sigma;
    check_sigma(sigma)?;
    if solution.normalization != RNormalization::RStar {
        return Err(Error::InvalidParameter {
            name: "solution",
            value: sigma,
            reason: "needs r normalized by r*",
        });
    }
    let h0 = visibility_product(sigma)?;
    let r1 = solution
        .emergence_row()
        .map(|row| row.r)
        .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
    let s_min = solution.orbit.s_min();
    let mismatch = |s: f64| {
        let hr = h0 * solution.r_at(s)?;
        Ok(s * hr * hr - 1.0)
    };
    let s0 = bisect(mismatch, s_min, 1.0, 1e-12)?;
    let (sqrt_n0_lower, sqrt_n0_upper) = sqrt_n0_bounds(sigma)?;
    let (tcrit_ratio_lower, tcrit_ratio_upper) = tcrit_ratio_bounds(sigma)?;
    let h0_r_emergence = h0 * r1;
    Ok(ObservabilityReport {
        sigma,
        h0_r_star: h0,
        s0,
        sqrt_n0_numeric: 1.0 / sqrt(s0),
        sqrt_n0_lower,
        sqrt_n0_upper,
        tcrit_ratio_numeric: tcrit_ratio_from_emergence(sigma, h0_r_emergence),
        tcrit_ratio_lower,
        tcrit_ratio_upper,
        h0_r_emergence,
    })
}

/// The `σ = 0` report from the Oppenheimer–Snyder interface.
///
/// The interface is comoving, so `r(S) = r*` and `√N₀ = H₀ r* = 2`. The
/// emergence time is the horizon crossing `t_s = 4M/3` with
/// `M = (κ/6) ρ₀ r*³`.
pub fn os_report() -> Result<ObservabilityReport> {
    let h0 = visibility_product(0.0)?;
    let r_star = 1.0;
    let rho0 = 3.0 * h0 * h0 / KAPPA;
    let cfg = OsConfig::new(
        KAPPA / 6.0 * rho0 * r_star * r_star * r_star,
        rho0,
        Orientation::Expanding,
    )?;
    let t0 = cfg.background().t0;
    let t_s = horizon_crossing_time(cfg.mass)?;
    let (sqrt_n0_lower, sqrt_n0_upper) = sqrt_n0_bounds(0.0)?;
    let (tcrit_ratio_lower, tcrit_ratio_upper) = tcrit_ratio_bounds(0.0)?;
    let sqrt_n0 = h0 * r_star;
    Ok(ObservabilityReport {
        sigma: 0.0,
        h0_r_star: h0,
        s0: 1.0 / (sqrt_n0 * sqrt_n0),
        sqrt_n0_numeric: sqrt_n0,
        sqrt_n0_lower,
        sqrt_n0_upper,
        tcrit_ratio_numeric: t_s / t0,
        tcrit_ratio_lower,
        tcrit_ratio_upper,
        h0_r_emergence: h0 * r_star,
    })
}
