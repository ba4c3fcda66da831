//! TOV equations inside the black hole.
//!
//! With `A = 1 − N < 0` the areal radius `r̄` is timelike and the comoving
//! perfect-fluid equations become
//!
//! ```text
//! p̄' = ((p̄ + ρ̄)/2) N'/(N − 1),   N' = −(N/r̄ + κ p̄ r̄),
//! ```
//!
//! with primes denoting `d/dr̄`. The lapse coefficient `B` then follows by
//! quadrature once `N` and `ρ̄` are known along the shock.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::math::{exp, ln};
use crate::units::KAPPA;

/// Default guard on `N − 1` below which `B` is not integrated.
pub const DEFAULT_HORIZON_EPS: f64 = 1e-6;

/// TOV-side state at one value of `r̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TovState {
    pub rbar: f64,
    pub pbar: f64,
    pub rhobar: f64,
    /// Mass aspect `2M/r̄ = 1 − A`.
    pub n: f64,
    pub b: f64,
}

impl TovState {
    pub fn a(&self) -> f64 {
        1.0 - self.n
    }

    pub fn mass(&self) -> f64 {
        0.5 * self.n * self.rbar
    }

    pub fn is_inside_horizon(&self) -> bool {
        self.n > 1.0 && self.b > 0.0
    }
}

/// `(dp̄/dr̄, dN/dr̄)`.
pub fn tov_rhs(rbar: f64, pbar: f64, n: f64, rhobar: f64) -> Result<(f64, f64)> {
    ensure(rbar > 0.0, "rbar", rbar, "must be positive")?;
    if n == 1.0 {
        return Err(Error::Singular {
            what: "TOV system at the horizon N = 1",
        });
    }
    let dn = -(n / rbar + KAPPA * pbar * rbar);
    Ok((0.5 * (pbar + rhobar) * dn / (n - 1.0), dn))
}

/// `(dp̄/dr̄, dA/dr̄)` in terms of `A = 1 − N`.
pub fn tov_rhs_a_form(rbar: f64, pbar: f64, a: f64, rhobar: f64) -> Result<(f64, f64)> {
    ensure(rbar > 0.0, "rbar", rbar, "must be positive")?;
    if a == 0.0 {
        return Err(Error::Singular {
            what: "TOV system at the horizon A = 0",
        });
    }
    let da = (1.0 - a) / rbar + KAPPA * pbar * rbar;
    Ok((0.5 * (pbar + rhobar) * da / a, da))
}

/// How the density term enters the `B` quadrature.
///
/// Integrating `(N/r̄ + κρ̄)/(N − 1)` against `dN` mixes units. The three
/// variants make the choice explicit:
///
/// - `PaperLiteral`: `(ξ/r̄ + κρ̄)/(ξ − 1) dξ` over `N`.
/// - `Dimensional`: `(ξ/r̄ + κρ̄r̄)/(ξ − 1) dξ` over `N`.
/// - `Radial`: `(N/r̄ + κρ̄r̄)/(N − 1) dr̄` over `r̄`, which is the
///   dimensionally consistent `B'/B` of the TOV system. In vacuum it gives
///   `B ∝ N − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BVariant {
    PaperLiteral,
    Dimensional,
    #[default]
    Radial,
}

impl BVariant {
    pub const ALL: [BVariant; 3] = [BVariant::PaperLiteral, BVariant::Dimensional, BVariant::Radial];

    pub fn name(self) -> &'static str {
        match self {
            BVariant::PaperLiteral => "paper-literal",
            BVariant::Dimensional => "dimensional",
            BVariant::Radial => "radial",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// One sample of the shock data needed for `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BSample {
    pub n: f64,
    pub rbar: f64,
    pub rhobar: f64,
}

/// Integrand of `−ln B` for the chosen variant, per unit of the
/// variant's integration variable.
pub fn b_integrand(sample: &BSample, variant: BVariant) -> f64 {
    let BSample { n, rbar, rhobar } = *sample;
    let density = match variant {
        BVariant::PaperLiteral => KAPPA * rhobar,
        BVariant::Dimensional | BVariant::Radial => KAPPA * rhobar * rbar,
    };
    (n / rbar + density) / (n - 1.0)
}

/// `ln B` at every sample, with `B = b0` at the first sample.
///
/// `N` must be strictly monotone and stay above `1 + horizon_eps`; the
/// `Radial` variant also needs `r̄` strictly monotone.
pub fn metric_log_b(samples: &[BSample], b0: f64, variant: BVariant, horizon_eps: f64) -> Result<Vec<f64>> {
    ensure(b0 > 0.0, "b0", b0, "must be positive")?;
    ensure(horizon_eps >= 0.0, "horizon_eps", horizon_eps, "must be non-negative")?;
    for s in samples {
        if !(s.n > 1.0 + horizon_eps) {
            return Err(Error::Horizon {
                n: s.n,
                eps: horizon_eps,
            });
        }
    }
    check_monotone(samples.iter().map(|s| s.n))?;
    let x: Vec<f64> = match variant {
        BVariant::Radial => {
            check_monotone(samples.iter().map(|s| s.rbar))?;
            samples.iter().map(|s| s.rbar).collect()
        }
        _ => samples.iter().map(|s| s.n).collect(),
    };
    let y: Vec<f64> = samples.iter().map(|s| b_integrand(s, variant)).collect();
    let integral = crate::quadrature::cumulative_trapezoid(&x, &y)?;
    let log_b0 = ln(b0);
    Ok(integral.into_iter().map(|i| log_b0 - i).collect())
}

/// `B` at every sample; see [`metric_log_b`].
pub fn metric_b(samples: &[BSample], b0: f64, variant: BVariant, horizon_eps: f64) -> Result<Vec<f64>> {
    Ok(metric_log_b(samples, b0, variant, horizon_eps)?
        .into_iter()
        .map(exp)
        .collect())
}

fn check_monotone(values: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev: Option<f64> = None;
    let mut sign = 0.0;
    for (i, v) in values.enumerate() {
        if let Some(p) = prev {
            let d = v - p;
            if d == 0.0 || !d.is_finite() || (sign != 0.0 && d * sign < 0.0) {
                return Err(Error::NotMonotone { index: i });
            }
            sign = d.signum();
        }
        prev = Some(v);
    }
    Ok(())
}
