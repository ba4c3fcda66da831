//! Matching an FRW interior to a TOV exterior across a shock.
//!
//! At the interface the Rankine–Hugoniot conditions `[T]^{μν} n̄_μ = 0` reduce
//! to one algebraic relation among `ρ, p, ρ̄, p̄` and `N = (H r̄)²`, the
//! conservation constraint. Everything here is pure algebra in `(r̄, t̄)`
//! coordinates; `ψ` enters only through its boundary value `±(AB)^{−1/2}`.

use crate::error::{Error, Result};
use crate::frw::FrwState;
use crate::math::sqrt;

/// Fluid and geometric data on both sides of the shock at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedState {
    pub rho: f64,
    pub p: f64,
    pub rhobar: f64,
    pub pbar: f64,
    pub n: f64,
    pub h: f64,
    pub rbar: f64,
}

impl MatchedState {
    /// Take `ρ, p, H` from the FRW side and set `N = (H r̄)²`.
    pub fn from_frw(state: &FrwState, rbar: f64, rhobar: f64, pbar: f64) -> Self {
        let hr = state.h * rbar;
        Self {
            rho: state.rho,
            p: state.p,
            rhobar,
            pbar,
            n: hr * hr,
            h: state.h,
            rbar,
        }
    }

    pub fn a(&self) -> f64 {
        1.0 - self.n
    }
}

/// The stress-tensor jump `[T]^{μν} = T_FRW − T_TOV` in `(r̄, t̄)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMatrix {
    pub t: [[f64; 2]; 2],
    pub psi: f64,
}

impl JumpMatrix {
    pub fn det(&self) -> f64 {
        self.t[0][0] * self.t[1][1] - self.t[0][1] * self.t[1][0]
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.t.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.t[0][1] == self.t[1][0]
    }
}

/// Covariant shock normal `(n̄₀, n̄₁)` in `(r̄, t̄)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockNormal {
    pub n0: f64,
    pub n1: f64,
}

impl ShockNormal {
    pub fn max_abs(&self) -> f64 {
        self.n0.abs().max(self.n1.abs())
    }
}

/// Sign choice for `ψ = ±(AB)^{−1/2}`.
///
/// `Forward` makes `t̄` increase with FRW time on the expanding (white hole)
/// branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeOrientation {
    #[default]
    Forward,
    Backward,
}

impl TimeOrientation {
    pub fn sign(self) -> f64 {
        match self {
            TimeOrientation::Forward => 1.0,
            TimeOrientation::Backward => -1.0,
        }
    }
}

/// Rankine–Hugoniot residuals with the scales needed to judge them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhResidual {
    pub det: f64,
    /// `n̄_μ [T]^{μ0}`.
    pub contraction0: f64,
    /// `n̄_μ [T]^{μ1}`.
    pub contraction1: f64,
    pub jump_norm: f64,
    pub normal_norm: f64,
}

impl RhResidual {
    /// `(|det|/‖T‖², |c₀|/(‖T‖‖n‖), |c₁|/(‖T‖‖n‖))` with max-abs norms.
    pub fn relative(&self) -> (f64, f64, f64) {
        let t = self.jump_norm;
        let tn = t * self.normal_norm;
        (
            self.det.abs() / (t * t),
            self.contraction0.abs() / tn,
            self.contraction1.abs() / tn,
        )
    }
}

/// TOV pressure from the conservation constraint,
/// `p̄ = (p − Xρ/N)/(1 + X/N)` with `X = (ρ̄ + p)/(ρ − ρ̄)`.
pub fn pbar_from_constraint(rho: f64, p: f64, rhobar: f64, n: f64) -> Result<f64> {
    if rho == rhobar {
        return Err(Error::Singular {
            what: "conservation constraint with rho == rhobar",
        });
    }
    let x = (rhobar + p) / (rho - rhobar);
    let den = 1.0 + x / n;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular {
            what: "conservation constraint denominator",
        });
    }
    Ok((p - x * rho / n) / den)
}

/// TOV density from the conservation constraint,
/// `ρ̄ = (−(ρ + p̄)p + (p − p̄)Nρ)/((ρ + p̄) + (p − p̄)N)`.
pub fn rhobar_from_constraint(rho: f64, p: f64, pbar: f64, n: f64) -> Result<f64> {
    let den = (rho + pbar) + (p - pbar) * n;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "conservation constraint denominator",
        });
    }
    Ok((-(rho + pbar) * p + (p - pbar) * n * rho) / den)
}

/// The constraint in ratios `u = p̄/ρ`, `v = ρ̄/ρ`:
/// `v = (−σ(1+u) + (σ−u)N)/((1+u) + (σ−u)N)`.
pub fn v_from_u(u: f64, sigma: f64, n: f64) -> Result<f64> {
    let den = (1.0 + u) + (sigma - u) * n;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "constraint denominator in v(u)",
        });
    }
    Ok((-sigma * (1.0 + u) + (sigma - u) * n) / den)
}

/// `[T]^{μν}` at the shock for the given `ψ`.
pub fn jump_matrix(state: &MatchedState, psi: f64) -> Result<JumpMatrix> {
    let MatchedState {
        rho,
        p,
        rhobar,
        pbar,
        n,
        ..
    } = *state;
    if !(n > 1.0) {
        return Err(Error::InvalidParameter {
            name: "N",
            value: n,
            reason: "the jump matrix is defined inside the black hole, N > 1",
        });
    }
    if psi == 0.0 {
        return Err(Error::InvalidParameter {
            name: "psi",
            value: psi,
            reason: "must be nonzero",
        });
    }
    let off = psi * sqrt(n) * (rho + p);
    Ok(JumpMatrix {
        t: [
            [(rho + p) * n + (rhobar + p) * (1.0 - n), off],
            [off, psi * psi * ((rho + pbar) + (p - pbar) * n)],
        ],
        psi,
    })
}

/// `n̄₀ = ψ(N(p − p̄)/(ρ + p̄) + 1)`, `n̄₁ = −√N(ρ + p)/(ρ + p̄)`.
pub fn shock_normal(state: &MatchedState, psi: f64) -> Result<ShockNormal> {
    let den = state.rho + state.pbar;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "shock normal with rho + pbar == 0",
        });
    }
    Ok(ShockNormal {
        n0: psi * (state.n * (state.p - state.pbar) / den + 1.0),
        n1: -sqrt(state.n) * (state.rho + state.p) / den,
    })
}

/// Jacobian `∂x̄^μ/∂x^α = [[√N, R], [ψ, ψR√N]]` of `(t, r) ↦ (r̄, t̄)` on a
/// flat FRW background, with `R` the scale factor.
pub fn coordinate_jacobian(n: f64, scale_factor: f64, psi: f64) -> [[f64; 2]; 2] {
    let sn = sqrt(n);
    [[sn, scale_factor], [psi, psi * scale_factor * sn]]
}

/// `R ṙ = √N (p − p̄)/(ρ + p̄)`, the FRW-coordinate shock speed times `R`.
pub fn comoving_shock_rate(state: &MatchedState) -> Result<f64> {
    let den = state.rho + state.pbar;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "shock rate with rho + pbar == 0",
        });
    }
    Ok(sqrt(state.n) * (state.p - state.pbar) / den)
}

/// Transform the FRW normal `(−ṙ, 1)` of `r = r(t)` with the inverse of
/// `jacobian`, dropping the determinant and flipping the overall sign.
pub fn normal_from_jacobian(jacobian: &[[f64; 2]; 2], rdot: f64) -> ShockNormal {
    // adj(J)^α_μ with α as the row index.
    let adj = [[jacobian[1][1], -jacobian[0][1]], [-jacobian[1][0], jacobian[0][0]]];
    let n = [-rdot, 1.0];
    ShockNormal {
        n0: -(adj[0][0] * n[0] + adj[1][0] * n[1]),
        n1: -(adj[0][1] * n[0] + adj[1][1] * n[1]),
    }
}

/// The shock normal obtained through [`coordinate_jacobian`]; agrees with
/// [`shock_normal`] for any positive scale factor.
pub fn shock_normal_via_jacobian(state: &MatchedState, psi: f64, scale_factor: f64) -> Result<ShockNormal> {
    let rdot = comoving_shock_rate(state)? / scale_factor;
    let jac = coordinate_jacobian(state.n, scale_factor, psi);
    Ok(normal_from_jacobian(&jac, rdot))
}

/// `det[T]` and both contractions `n̄_μ[T]^{μν}`.
pub fn rankine_hugoniot_residual(state: &MatchedState, psi: f64) -> Result<RhResidual> {
    let t = jump_matrix(state, psi)?;
    let n = shock_normal(state, psi)?;
    Ok(RhResidual {
        det: t.det(),
        contraction0: n.n0 * t.t[0][0] + n.n1 * t.t[1][0],
        contraction1: n.n0 * t.t[0][1] + n.n1 * t.t[1][1],
        jump_norm: t.max_abs(),
        normal_norm: n.max_abs(),
    })
}

/// True unless `A = (ρ + p)/(p − p̄)`, in which case the shock surface would
/// be characteristic. Equality is judged to `1e−12` relative.
pub fn noncharacteristic_check(state: &MatchedState) -> bool {
    if state.p == state.pbar {
        return true;
    }
    let a = state.a();
    let ratio = (state.rho + state.p) / (state.p - state.pbar);
    (a - ratio).abs() > 1e-12 * a.abs().max(ratio.abs())
}

/// `dr̄/dt = ((ρ + p)/(ρ + p̄)) H r̄`.
pub fn shock_speed_coordinate(state: &MatchedState) -> Result<f64> {
    let den = state.rho + state.pbar;
    if den == 0.0 {
        return Err(Error::Singular {
            what: "shock speed with rho + pbar == 0",
        });
    }
    Ok((state.rho + state.p) / den * state.h * state.rbar)
}

/// Shock speed relative to the comoving fluid, `s = √N (σ − u)/(1 + u)`.
pub fn shock_speed_fluid(u: f64, sigma: f64, n: f64) -> Result<f64> {
    if u == -1.0 {
        return Err(Error::Singular {
            what: "fluid shock speed at u = -1",
        });
    }
    Ok(sqrt(n) * (sigma - u) / (1.0 + u))
}

/// Boundary value of the integrating factor, `ψ = ±(AB)^{−1/2}`.
pub fn psi_boundary(a: f64, b: f64, orientation: TimeOrientation) -> Result<f64> {
    let ab = a * b;
    if !(ab > 0.0) {
        return Err(Error::InvalidParameter {
            name: "A*B",
            value: ab,
            reason: "must be positive",
        });
    }
    Ok(orientation.sign() / sqrt(ab))
}
