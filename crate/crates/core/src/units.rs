//! Geometric units.

use core::f64::consts::PI;

/// Einstein coupling constant `κ = 8πG/c⁴` with `c = G = 1`.
pub const KAPPA: f64 = 8.0 * PI;

/// The physical constants fixed by the unit convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Coupling constant, units of 1/length².
    pub kappa: f64,
    pub c: f64,
    pub g: f64,
}

impl Constants {
    pub const GEOMETRIC: Constants = Constants {
        kappa: KAPPA,
        c: 1.0,
        g: 1.0,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::GEOMETRIC
    }
}
