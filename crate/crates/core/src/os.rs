//! The Oppenheimer–Snyder interface inside the black hole.
//!
//! With `p = 0` the FRW ball and the Schwarzschild exterior meet along a
//! comoving surface `r = r₀`, so the interface is `r̄(t) = R(t) r₀` and the
//! enclosed mass `M = (κ/6) ρ r̄³` is constant. This is the `σ → 0` limit of
//! the shock solutions.

use crate::error::{ensure, Error, Result};
use crate::frw::FrwBackground;
use crate::math::{cbrt, sqrt};
use crate::roots::bisect;
use crate::units::KAPPA;

/// Direction of the FRW expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `Ṙ > 0`: white hole, the cosmological orientation.
    #[default]
    Expanding,
    /// `Ṙ < 0`: black hole collapse.
    Collapsing,
}

impl Orientation {
    /// The `±` in `−1/b = H r̄ ± 1`.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Expanding => 1.0,
            Orientation::Collapsing => -1.0,
        }
    }
}

/// Mass, present density and orientation of an OS interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsConfig {
    pub mass: f64,
    pub rho0: f64,
    pub orientation: Orientation,
}

impl OsConfig {
    pub fn new(mass: f64, rho0: f64, orientation: Orientation) -> Result<Self> {
        ensure(mass > 0.0, "M", mass, "must be positive")?;
        ensure(rho0 > 0.0, "rho0", rho0, "must be positive")?;
        Ok(Self {
            mass,
            rho0,
            orientation,
        })
    }

    pub fn r0(&self) -> f64 {
        cbrt(6.0 * self.mass / (KAPPA * self.rho0))
    }

    /// The `σ = 0` background with density `rho0` at `t₀`.
    pub fn background(&self) -> FrwBackground {
        let h0 = sqrt(KAPPA * self.rho0 / 3.0);
        // rho0 > 0 makes h0 positive, so this cannot fail.
        FrwBackground::from_h0(0.0, h0).expect("positive Hubble constant")
    }

    /// Interface radius `r̄(t) = R(t) r₀`.
    pub fn rbar_at(&self, t: f64) -> Result<f64> {
        let bg = self.background();
        ensure(t > 0.0, "t", t, "must be positive")?;
        Ok(bg.scale_factor(t) * self.r0())
    }
}

/// Comoving interface coordinate `r₀ = (6M/(κρ₀))^{1/3}`.
pub fn interface_r0(mass: f64, rho0: f64) -> Result<f64> {
    Ok(OsConfig::new(mass, rho0, Orientation::Expanding)?.r0())
}

/// Interface radius `r̄ = (6M/(κρ))^{1/3}` at density `ρ`.
pub fn shock_surface_rbar(mass: f64, rho: f64) -> Result<f64> {
    ensure(mass > 0.0, "M", mass, "must be positive")?;
    ensure(rho > 0.0, "rho", rho, "must be positive")?;
    Ok(cbrt(6.0 * mass / (KAPPA * rho)))
}

/// Time at which the interface crosses the event horizon `r̄ = 2M`:
/// `t_s = 4M/3`.
pub fn horizon_crossing_time(mass: f64) -> Result<f64> {
    ensure(mass > 0.0, "M", mass, "must be positive")?;
    Ok(4.0 * mass / 3.0)
}

/// Solve `r̄(t) = 2M` by bisection, with `ρ = 4/(3κt²)`.
pub fn horizon_crossing_time_numeric(mass: f64, t_tol: f64) -> Result<f64> {
    ensure(mass > 0.0, "M", mass, "must be positive")?;
    let gap = |t: f64| {
        let rho = 4.0 / (3.0 * KAPPA * t * t);
        Ok(shock_surface_rbar(mass, rho)? - 2.0 * mass)
    };
    let mut hi = mass;
    while gap(hi)? < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoBracket { lo: 0.0, hi });
        }
    }
    bisect(gap, hi * 1e-6, hi, t_tol)
}

/// `b = −1/(H r̄ + 1)` when expanding, `b = −1/(H r̄ − 1)` when collapsing.
pub fn transform_b(h: f64, rbar: f64, orientation: Orientation) -> Result<f64> {
    let den = h * rbar + orientation.sign();
    if den == 0.0 {
        return Err(Error::Singular {
            what: "OS transformation b at H r̄ = ∓1",
        });
    }
    Ok(-1.0 / den)
}

/// `φ = H r̄ + 1/b`, which is `−1` expanding and `+1` collapsing.
pub fn transform_phi(h: f64, rbar: f64, b: f64) -> f64 {
    h * rbar + 1.0 / b
}

/// `(−1/b, Ṙ r₀)`: the characteristic slope and the interface slope.
/// They differ by exactly `±1`, so the interface is never characteristic.
pub fn characteristic_vs_interface(
    h: f64,
    rbar: f64,
    orientation: Orientation,
    r0: f64,
    rdot: f64,
) -> Result<(f64, f64)> {
    let b = transform_b(h, rbar, orientation)?;
    Ok((-1.0 / b, rdot * r0))
}
