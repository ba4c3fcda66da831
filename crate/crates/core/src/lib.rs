//! Exact shock-wave cosmology inside a black hole.
//!
//! A spatially flat FRW interior with equation of state `p = σρ` is matched
//! across a spherical shock to a TOV metric whose radial coordinate is
//! timelike (`2M/r̄ > 1`). This crate provides the pieces needed to build and
//! check that solution:
//!
//! - [`frw`]: closed-form `k = 0` FRW backgrounds, mass function, Hubble-length
//!   relations and the infinite-redshift radius.
//! - [`tov`]: right-hand sides of the TOV system inside the black hole and the
//!   quadrature for the lapse coefficient `B`.
//! - [`shock`]: conservation constraint, stress-tensor jump, shock normal,
//!   Rankine–Hugoniot residuals and shock speeds.
//! - [`phase`]: the scalar shock equation in `(S, u)`, its entropy and invariant
//!   regions, orbit integration and the `σ = 1/3` asymptotics.
//! - [`reconstruct`]: assembly of the full shock solution along an orbit.
//! - [`os`]: the zero-pressure Oppenheimer–Snyder interface.
//! - [`estimates`]: analytic bounds on the shock position and observability
//!   quantities, with numeric counterparts.
//!
//! Geometric units are used throughout (`c = G = 1`, `κ = 8π`).
//!
//! The crate is `no_std` and only needs `alloc`; elementary functions come
//! from `libm`, so results are bit-for-bit reproducible across platforms.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod estimates;
pub mod frw;
pub mod ode;
pub mod os;
pub mod phase;
pub mod quadrature;
pub mod reconstruct;
pub mod roots;
pub mod shock;
pub mod tov;
pub mod units;

pub use error::{Error, Result};
pub use units::{Constants, KAPPA};
