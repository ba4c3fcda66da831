//! Adaptive L-stable SDIRK integrator for small stiff systems.
//!
//! The method is the five-stage, order-4 singly diagonally implicit
//! Runge–Kutta scheme with `γ = 1/4` and an embedded order-3 solution used
//! for step-size control. It is stiffly accurate (the last stage is the
//! solution), so it damps fast transients in either integration direction.
//! Stage equations are solved with simplified Newton iterations on a
//! finite-difference Jacobian frozen over each step; the error estimate is
//! filtered through `(I - hγJ)⁻¹` so it stays meaningful for stiff components.
//!
//! Systems are fixed-size (`[f64; N]`) since every use in this crate has one
//! or two components.

use crate::error::{Error, Result};
use crate::math::sqrt;

const GAMMA: f64 = 0.25;
const STAGES: usize = 5;
const A: [[f64; STAGES]; STAGES] = [
    [0.25, 0.0, 0.0, 0.0, 0.0],
    [0.5, 0.25, 0.0, 0.0, 0.0],
    [17.0 / 50.0, -1.0 / 25.0, 0.25, 0.0, 0.0],
    [371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.25, 0.0],
    [25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 0.25],
];
const C: [f64; STAGES] = [0.25, 0.75, 11.0 / 20.0, 0.5, 1.0];
// b equals the last row of A; the difference b - b̂ drives the error estimate.
const B_MINUS_BHAT: [f64; STAGES] = [
    25.0 / 24.0 - 59.0 / 48.0,
    -49.0 / 48.0 + 17.0 / 96.0,
    125.0 / 16.0 - 225.0 / 32.0,
    0.0,
    0.25,
];

const NEWTON_MAX_ITER: usize = 10;
const NEWTON_TOL: f64 = 1e-3;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Right-hand side `y' = f(t, y)` of an `N`-dimensional system.
pub trait System<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;
}

impl<F, const N: usize> System<N> for F
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        self(t, y)
    }
}

/// Error-control and step limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options<const N: usize> {
    pub rel_tol: f64,
    /// Absolute tolerance per component. A zero entry gives pure relative
    /// control for that component, which is fine when it never crosses zero.
    pub abs_tol: [f64; N],
    /// Magnitude of the first trial step.
    pub initial_step: f64,
    /// Largest step magnitude allowed.
    pub max_step: f64,
    pub max_steps: usize,
}

impl<const N: usize> Default for Options<N> {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: [1e-12; N],
            initial_step: 1e-3,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

/// Work counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub newton_failures: usize,
}

/// Integrator state: the current point `(t, y)` and the step size to try next.
#[derive(Debug, Clone)]
pub struct Sdirk4<S, const N: usize> {
    system: S,
    opts: Options<N>,
    t: f64,
    y: [f64; N],
    h: f64,
    stats: Stats,
}

impl<S: System<N>, const N: usize> Sdirk4<S, N> {
    pub fn new(system: S, t0: f64, y0: [f64; N], opts: Options<N>) -> Self {
        Self {
            system,
            opts,
            t: t0,
            y: y0,
            h: opts.initial_step.abs(),
            stats: Stats::default(),
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; N] {
        self.y
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn system(&self) -> &S {
        &self.system
    }

    /// Advance until `t == target` exactly (forward or backward in `t`).
    pub fn advance_to(&mut self, target: f64) -> Result<[f64; N]> {
        let dir = if target >= self.t { 1.0 } else { -1.0 };
        while (target - self.t) * dir > 0.0 {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::Integration {
                    reason: "maximum number of steps exceeded",
                    at: self.t,
                });
            }
            let remaining = (target - self.t).abs();
            let mut h = self.h.min(self.opts.max_step);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) && !last {
                return Err(Error::Integration {
                    reason: "step size underflow",
                    at: self.t,
                });
            }
            match self.try_step(dir * h)? {
                StepOutcome::Accepted { y_new, factor } => {
                    self.t = if last { target } else { self.t + dir * h };
                    self.y = y_new;
                    self.stats.accepted += 1;
                    // A clipped final step says nothing about the natural step size.
                    if !last || factor < 1.0 {
                        self.h = h * factor;
                    }
                }
                StepOutcome::Rejected { factor } => {
                    self.stats.rejected += 1;
                    self.h = h * factor;
                }
            }
        }
        Ok(self.y)
    }

    fn try_step(&mut self, h: f64) -> Result<StepOutcome<N>> {
        let t = self.t;
        let y = self.y;
        let f0 = self.eval(t, &y)?;
        let jac = self.jacobian(t, &y, &f0)?;

        // Newton matrix M = I - hγJ, shared by every stage.
        let mut m = [[0.0; N]; N];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if i == j { 1.0 } else { 0.0 } - h * GAMMA * jac[i][j];
            }
        }
        let lu = Lu::factor(m)?;

        let mut k = [[0.0; N]; STAGES];
        let mut z = y;
        for stage in 0..STAGES {
            let mut base = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for c in 0..N {
                        base[c] += h * a * kj[c];
                    }
                }
            }
            let ts = t + C[stage] * h;
            let mut converged = false;
            let mut prev_norm = f64::INFINITY;
            for iter in 0..NEWTON_MAX_ITER {
                let fz = self.eval(ts, &z)?;
                let mut resid = [0.0; N];
                for c in 0..N {
                    resid[c] = -(z[c] - base[c] - h * GAMMA * fz[c]);
                }
                let delta = lu.solve(resid);
                for c in 0..N {
                    z[c] += delta[c];
                }
                let norm = self.weighted_norm(&delta, &y, &z);
                if !norm.is_finite() || (iter > 1 && norm > 2.0 * prev_norm) {
                    break;
                }
                if norm <= NEWTON_TOL {
                    converged = true;
                    break;
                }
                prev_norm = norm;
            }
            if !converged || z.iter().any(|v| !v.is_finite()) {
                self.stats.newton_failures += 1;
                return Ok(StepOutcome::Rejected { factor: 0.25 });
            }
            for c in 0..N {
                k[stage][c] = (z[c] - base[c]) / (h * GAMMA);
            }
        }
        let y_new = z;

        let mut err = [0.0; N];
        for (s, ks) in k.iter().enumerate() {
            for c in 0..N {
                err[c] += h * B_MINUS_BHAT[s] * ks[c];
            }
        }
        let err = lu.solve(err);
        let norm = self.weighted_norm(&err, &y, &y_new);
        if !norm.is_finite() {
            return Ok(StepOutcome::Rejected { factor: MIN_FACTOR });
        }
        let factor = if norm == 0.0 {
            MAX_FACTOR
        } else {
            // err^(-1/4): the embedded solution has order 3.
            (SAFETY / sqrt(sqrt(norm))).clamp(MIN_FACTOR, MAX_FACTOR)
        };
        if norm <= 1.0 {
            Ok(StepOutcome::Accepted { y_new, factor })
        } else {
            Ok(StepOutcome::Rejected {
                factor: factor.min(SAFETY),
            })
        }
    }

    fn eval(&mut self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        self.stats.rhs_evals += 1;
        self.system.rhs(t, y)
    }

    fn jacobian(&mut self, t: f64, y: &[f64; N], f0: &[f64; N]) -> Result<[[f64; N]; N]> {
        let sqrt_eps = sqrt(f64::EPSILON);
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let mut delta = sqrt_eps * y[j].abs().max(self.opts.abs_tol[j]);
            if delta == 0.0 {
                delta = sqrt_eps;
            }
            let mut yp = *y;
            yp[j] += delta;
            let fp = self.eval(t, &yp)?;
            for i in 0..N {
                jac[i][j] = (fp[i] - f0[i]) / delta;
            }
        }
        Ok(jac)
    }

    fn weighted_norm(&self, v: &[f64; N], y0: &[f64; N], y1: &[f64; N]) -> f64 {
        let mut sum = 0.0;
        for c in 0..N {
            let scale = self.opts.abs_tol[c] + self.opts.rel_tol * y0[c].abs().max(y1[c].abs());
            let r = v[c] / scale;
            sum += r * r;
        }
        sqrt(sum / N as f64)
    }
}

enum StepOutcome<const N: usize> {
    Accepted { y_new: [f64; N], factor: f64 },
    Rejected { factor: f64 },
}

/// LU factorization with partial pivoting of a small dense matrix.
#[derive(Debug, Clone, Copy)]
struct Lu<const N: usize> {
    lu: [[f64; N]; N],
    perm: [usize; N],
}

impl<const N: usize> Lu<N> {
    fn factor(mut a: [[f64; N]; N]) -> Result<Self> {
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        for col in 0..N {
            let mut pivot = col;
            for row in col + 1..N {
                if a[row][col].abs() > a[pivot][col].abs() {
                    pivot = row;
                }
            }
            if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
                return Err(Error::Singular {
                    what: "Newton matrix of the implicit stage equations",
                });
            }
            a.swap(col, pivot);
            perm.swap(col, pivot);
            let pivot_row = a[col];
            for row in a.iter_mut().skip(col + 1) {
                let factor = row[col] / pivot_row[col];
                row[col] = factor;
                for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col + 1) {
                    *x -= factor * p;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    fn solve(&self, b: [f64; N]) -> [f64; N] {
        let mut x = [0.0; N];
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for k in 0..i {
                x[i] -= self.lu[i][k] * x[k];
            }
        }
        for i in (0..N).rev() {
            for k in i + 1..N {
                x[i] -= self.lu[i][k] * x[k];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn exponential_growth_matches_closed_form() {
        let sys = |_t: f64, y: &[f64; 1]| Ok([y[0]]);
        let mut ode = Sdirk4::new(sys, 0.0, [1.0], Options::default());
        let y = ode.advance_to(2.0).unwrap();
        assert!((y[0] - exp(2.0)).abs() < 1e-8 * exp(2.0));
    }

    #[test]
    fn backward_integration_recovers_initial_value() {
        let sys = |t: f64, y: &[f64; 1]| Ok([-2.0 * t * y[0]]);
        let mut ode = Sdirk4::new(sys, 1.5, [exp(-2.25)], Options::default());
        let y = ode.advance_to(0.0).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8);
        assert_eq!(ode.t(), 0.0);
    }

    #[test]
    fn stiff_relaxation_takes_large_steps() {
        // y' = -1e8 (y - cos t) - sin t has the smooth solution y = cos t.
        let sys = |t: f64, y: &[f64; 1]| Ok([-1e8 * (y[0] - libm::cos(t)) - libm::sin(t)]);
        let mut ode = Sdirk4::new(sys, 0.0, [1.0], Options::default());
        let y = ode.advance_to(10.0).unwrap();
        assert!((y[0] - libm::cos(10.0)).abs() < 1e-8);
        assert!(ode.stats().accepted < 5_000, "{:?}", ode.stats());
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let sys = |_t: f64, y: &[f64; 2]| Ok([y[1], -y[0]]);
        let opts = Options {
            rel_tol: 1e-11,
            abs_tol: [1e-13; 2],
            ..Options::default()
        };
        let mut ode = Sdirk4::new(sys, 0.0, [1.0, 0.0], opts);
        let y = ode.advance_to(core::f64::consts::TAU).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8, "{y:?}");
        assert!(y[1].abs() < 1e-8, "{y:?}");
    }

    #[test]
    fn rhs_errors_propagate() {
        let sys = |t: f64, _y: &[f64; 1]| {
            if t > 0.5 {
                Err(Error::Singular { what: "test" })
            } else {
                Ok([1.0])
            }
        };
        let mut ode = Sdirk4::new(sys, 0.0, [0.0], Options::default());
        assert_eq!(ode.advance_to(1.0), Err(Error::Singular { what: "test" }));
    }

    #[test]
    fn step_budget_is_enforced() {
        let sys = |_t: f64, y: &[f64; 1]| Ok([y[0]]);
        let opts = Options {
            max_steps: 3,
            initial_step: 1e-6,
            ..Options::default()
        };
        let mut ode = Sdirk4::new(sys, 0.0, [1.0], opts);
        assert!(matches!(ode.advance_to(1.0), Err(Error::Integration { .. })));
    }

    #[test]
    fn lu_solves_pivoting_system() {
        let lu = Lu::factor([[0.0, 2.0], [3.0, 1.0]]).unwrap();
        let x = lu.solve([4.0, 5.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(Lu::factor([[1.0, 2.0], [2.0, 4.0]]).is_err());
    }
}
