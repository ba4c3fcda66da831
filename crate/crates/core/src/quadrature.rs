//! Quadrature on caller-supplied grids.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Running composite trapezoid integral of `y` over the nonuniform grid `x`.
///
/// Element `i` is `∫_{x[0]}^{x[i]} y`, so the first element is zero. The grid
/// may run in either direction.
pub fn cumulative_trapezoid(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData {
            needed: x.len(),
            got: y.len(),
        });
    }
    let mut out = Vec::with_capacity(x.len());
    if x.is_empty() {
        return Ok(out);
    }
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..x.len() {
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        out.push(acc);
    }
    Ok(out)
}

/// Composite trapezoid integral of `y` over `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(cumulative_trapezoid(x, y)?.last().copied().unwrap_or(0.0))
}
