//! Spatially flat FRW backgrounds with `p = σρ`.
//!
//! With `R(t₀) = 1` the solution is
//!
//! ```text
//! ρ(t) = 4 / (3κ(1+σ)² t²),   R(t) = (t/t₀)^{2/(3(1+σ))},   H(t) = H₀ t₀ / t,
//! ```
//!
//! and `t₀ = 2 / (3(1+σ) H₀)`. Writing the metric in Schwarzschild form gives
//! `A = 1 − (H r̄)²` and mass function `M = (κ/6) ρ r̄³`, so `2M/r̄ = (H r̄)²`
//! and the Hubble length `1/H` is where `2M/r̄ = 1`.

use crate::error::{ensure, Error, Result};
use crate::math::powf;
use crate::units::KAPPA;

/// Pressure-to-density ratio `σ` in `p = σρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationOfState {
    pub sigma: f64,
}

impl EquationOfState {
    /// Accepts `0 ≤ σ < 1`. The phase plane further requires `σ > 0`.
    pub fn new(sigma: f64) -> Result<Self> {
        ensure((0.0..1.0).contains(&sigma), "sigma", sigma, "must lie in [0, 1)")?;
        Ok(Self { sigma })
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.sigma * rho
    }

    /// Limit of `u = p̄/ρ` at the Big Bang, `ū = min{σ, 1/3}`.
    pub fn u_bar(&self) -> f64 {
        self.sigma.min(1.0 / 3.0)
    }

    /// `a² = 1/(3σ)`, the parameter of the lower invariant curve `Q_a`.
    pub fn a_squared(&self) -> f64 {
        1.0 / (3.0 * self.sigma)
    }
}

/// The closed-form background fixed by `σ` and the present Hubble constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrwBackground {
    pub sigma: f64,
    pub h0: f64,
    pub t0: f64,
    pub rho0: f64,
}

/// Background quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrwState {
    pub t: f64,
    /// Scale factor, normalized to 1 at `t₀`.
    pub r: f64,
    pub h: f64,
    pub rho: f64,
    pub p: f64,
}

impl FrwBackground {
    pub fn from_h0(sigma: f64, h0: f64) -> Result<Self> {
        let eos = EquationOfState::new(sigma)?;
        ensure(h0 > 0.0 && h0.is_finite(), "h0", h0, "must be positive")?;
        let t0 = present_age(eos.sigma, h0);
        Ok(Self {
            sigma,
            h0,
            t0,
            rho0: density(sigma, t0),
        })
    }

    pub fn eos(&self) -> EquationOfState {
        EquationOfState { sigma: self.sigma }
    }

    pub fn state_at(&self, t: f64) -> Result<FrwState> {
        ensure(t > 0.0, "t", t, "must be positive (t = 0 is the Big Bang)")?;
        let rho = density(self.sigma, t);
        Ok(FrwState {
            t,
            r: self.scale_factor(t),
            h: self.h0 * self.t0 / t,
            rho,
            p: self.sigma * rho,
        })
    }

    pub fn scale_factor(&self, t: f64) -> f64 {
        powf(t / self.t0, 2.0 / (3.0 * (1.0 + self.sigma)))
    }

    /// `r_∞ = 2 / ((1+3σ) H₀)`, the comoving radius of infinite redshift.
    pub fn infinite_redshift_radius(&self) -> f64 {
        infinite_redshift_radius(self.sigma, self.h0)
    }
}

/// `t₀ = 2 / (3(1+σ) H₀)`. Valid for any `σ > −1`, including the stiff
/// endpoint `σ = 1` that [`FrwBackground`] excludes.
pub fn present_age(sigma: f64, h0: f64) -> f64 {
    2.0 / (3.0 * (1.0 + sigma) * h0)
}

/// `r_∞ = 2 / ((1+3σ) H₀)`.
pub fn infinite_redshift_radius(sigma: f64, h0: f64) -> f64 {
    2.0 / ((1.0 + 3.0 * sigma) * h0)
}

/// `ρ(t) = 4 / (3κ(1+σ)² t²)`.
pub fn density(sigma: f64, t: f64) -> f64 {
    4.0 / (3.0 * KAPPA * (1.0 + sigma) * (1.0 + sigma) * t * t)
}

/// Inverse of [`density`]: `t = √(4 / (3κ(1+σ)² ρ))`.
pub fn time_of_density(rho: f64, sigma: f64) -> Result<f64> {
    ensure(rho > 0.0, "rho", rho, "must be positive")?;
    Ok(crate::math::sqrt(
        4.0 / (3.0 * KAPPA * (1.0 + sigma) * (1.0 + sigma) * rho),
    ))
}

/// Exponent of `M ∝ t^α` inside a comoving ball: `α = −2σ/(1+σ)`.
pub fn mass_decay_exponent(sigma: f64) -> f64 {
    -2.0 * sigma / (1.0 + sigma)
}

impl FrwState {
    /// `M = (κ/6) ρ r̄³`, the mass inside areal radius `r̄`.
    pub fn mass_inside(&self, rbar: f64) -> Result<f64> {
        ensure(rbar >= 0.0, "rbar", rbar, "must be non-negative")?;
        Ok(KAPPA / 6.0 * self.rho * rbar * rbar * rbar)
    }

    /// Schwarzschild-form metric coefficient `A = 1 − (H r̄)²`.
    pub fn schwarzschild_a(&self, rbar: f64) -> f64 {
        let hr = self.h * rbar;
        1.0 - hr * hr
    }

    /// Slope `dr̄/dt = (−1 + H²r̄²)/(H r̄)` of the characteristics.
    pub fn characteristic_speed(&self, rbar: f64) -> Result<f64> {
        if rbar == 0.0 || self.h == 0.0 {
            return Err(Error::Singular {
                what: "characteristic speed at H r̄ = 0",
            });
        }
        let hr = self.h * rbar;
        Ok((hr * hr - 1.0) / hr)
    }

    /// Rate `dr̄/dt = H r̄ − 1` of an inward light ray at areal radius `r̄`.
    pub fn light_ray_drift(&self, rbar: f64) -> f64 {
        self.h * rbar - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn bg(sigma: f64, h0: f64) -> FrwBackground {
        FrwBackground::from_h0(sigma, h0).unwrap()
    }

    #[test]
    fn present_age_examples() {
        assert_relative_eq!(bg(0.0, 1.0).t0, 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(bg(1.0 / 3.0, 1.0).t0, 0.5, max_relative = 1e-15);
        assert!(FrwBackground::from_h0(1.0, 1.0).is_err());
        assert!(FrwBackground::from_h0(-0.1, 1.0).is_err());
        assert!(FrwBackground::from_h0(0.2, 0.0).is_err());
    }

    #[test]
    fn stiff_fluid_closed_forms() {
        assert_relative_eq!(present_age(1.0, 1.0), 1.0 / 3.0);
        assert_relative_eq!(infinite_redshift_radius(1.0, 1.0), 0.5);
    }

    #[test]
    fn friedmann_at_present() {
        let b = bg(0.2, 3.0);
        assert_relative_eq!(KAPPA / 3.0 * b.rho0, b.h0 * b.h0, max_relative = 1e-14);
    }

    #[test]
    fn state_examples() {
        let b = bg(1.0 / 3.0, 1.0);
        let s = b.state_at(b.t0).unwrap();
        assert_relative_eq!(s.r, 1.0, max_relative = 1e-15);
        assert_relative_eq!(s.h, 1.0, max_relative = 1e-15);
        assert_relative_eq!(b.state_at(b.t0 / 4.0).unwrap().h, 4.0, max_relative = 1e-15);
        assert_relative_eq!(b.state_at(1.0).unwrap().rho, 3.0 / (32.0 * PI), max_relative = 1e-15);
        assert!(b.state_at(0.0).is_err());
    }

    #[test]
    fn mass_examples() {
        let b = bg(1.0 / 3.0, 1.0);
        let s = b.state_at(0.7).unwrap();
        assert_eq!(s.mass_inside(0.0).unwrap(), 0.0);
        let rbar = 1.0 / s.h;
        assert_relative_eq!(2.0 * s.mass_inside(rbar).unwrap() / rbar, 1.0, max_relative = 1e-14);
        assert!(s.mass_inside(-1.0).is_err());
    }

    #[test]
    fn comoving_mass_decays_like_inverse_square_root_for_radiation() {
        let b = bg(1.0 / 3.0, 1.0);
        let m = |t: f64| {
            let s = b.state_at(t).unwrap();
            s.mass_inside(s.r * 1.3).unwrap()
        };
        assert_relative_eq!(m(4.0) / m(1.0), 0.5, max_relative = 1e-13);
    }

    #[test]
    fn decay_exponents() {
        assert_eq!(mass_decay_exponent(0.0), 0.0);
        assert_relative_eq!(mass_decay_exponent(1.0 / 3.0), -0.5);
        assert_relative_eq!(mass_decay_exponent(1.0), -1.0);
    }

    #[test]
    fn redshift_radius() {
        assert_relative_eq!(bg(1.0 / 3.0, 1.0).infinite_redshift_radius(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(bg(0.0, 1.0).infinite_redshift_radius(), 2.0);
    }

    fn state_with_h(h: f64) -> FrwState {
        FrwState {
            t: 1.0,
            r: 1.0,
            h,
            rho: 3.0 * h * h / KAPPA,
            p: 0.0,
        }
    }

    #[test]
    fn schwarzschild_a() {
        let s = state_with_h(2.0);
        assert_eq!(s.schwarzschild_a(0.5), 0.0);
        assert_eq!(s.schwarzschild_a(0.0), 1.0);
        assert_eq!(s.schwarzschild_a(1.0), -3.0);
    }

    #[test]
    fn characteristic_speed_examples() {
        let s = state_with_h(1.0);
        assert_eq!(s.characteristic_speed(1.0).unwrap(), 0.0);
        assert_relative_eq!(s.characteristic_speed(2.0).unwrap(), 1.5);
        assert_relative_eq!(s.characteristic_speed(0.5).unwrap(), -1.5);
        assert!(s.characteristic_speed(0.0).is_err());
        assert!(state_with_h(0.0).characteristic_speed(1.0).is_err());
    }

    #[test]
    fn light_ray_examples() {
        let s = state_with_h(1.0);
        assert_eq!(s.light_ray_drift(1.0), 0.0);
        assert_eq!(s.light_ray_drift(2.0), 1.0);
        assert_eq!(s.light_ray_drift(0.5), -0.5);
    }

    #[test]
    fn density_time_round_trip() {
        for &sigma in &[0.0, 0.1, 1.0 / 3.0, 0.9] {
            for &t in &[1e-6, 0.3, 1.0, 1e5] {
                let back = time_of_density(density(sigma, t), sigma).unwrap();
                assert_relative_eq!(back, t, max_relative = 1e-14);
            }
        }
        assert_relative_eq!(
            time_of_density(3.0 / (32.0 * PI), 1.0 / 3.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert!(time_of_density(0.0, 0.2).is_err());
    }

    #[test]
    fn eos_helpers() {
        let e = EquationOfState::new(0.2).unwrap();
        assert_relative_eq!(e.pressure(5.0), 1.0);
        assert_eq!(e.u_bar(), 0.2);
        assert_relative_eq!(EquationOfState::new(0.5).unwrap().u_bar(), 1.0 / 3.0);
        assert_relative_eq!(e.a_squared(), 1.0 / 0.6);
        assert!(EquationOfState::new(1.0).is_err());
    }
}
