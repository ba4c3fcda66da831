use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A formula would divide by zero (or an equivalent degeneracy).
    Singular { what: &'static str },
    /// A sample sits on or inside the horizon guard `N ≤ 1 + ε`.
    Horizon { n: f64, eps: f64 },
    /// Input samples are not strictly monotone.
    NotMonotone { index: usize },
    /// Too few samples for the requested operation.
    InsufficientData { needed: usize, got: usize },
    /// The ODE integrator could not continue.
    Integration { reason: &'static str, at: f64 },
    /// An orbit sample violates a certified inequality beyond tolerance.
    Certification { check: &'static str, s: f64, u: f64 },
    /// The shock-equation denominator fell below its cancellation floor.
    Cancellation { s: f64 },
    /// A root was not bracketed by the search interval.
    NoBracket { lo: f64, hi: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value, reason } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::Singular { what } => write!(f, "singular expression: {what}"),
            Error::Horizon { n, eps } => {
                write!(f, "sample at N = {n} lies within {eps} of the horizon N = 1")
            }
            Error::NotMonotone { index } => {
                write!(f, "samples are not strictly monotone at index {index}")
            }
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} samples, got {got}")
            }
            Error::Integration { reason, at } => {
                write!(f, "integration failed at {at}: {reason}")
            }
            Error::Certification { check, s, u } => {
                write!(f, "orbit sample (S = {s}, u = {u}) violates {check}")
            }
            Error::Cancellation { s } => write!(f, "shock equation denominator below cancellation floor at S = {s}"),
            Error::NoBracket { lo, hi } => write!(f, "root not bracketed in [{lo}, {hi}]"),
        }
    }
}

impl core::error::Error for Error {}

/// Reject a value unless `ok` holds.
pub(crate) fn ensure(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}
