//! Perfect-gas thermodynamics, characteristic speeds and sonic classification.

use crate::error::CoreError;
use crate::math;

/// Constant physical parameters of the gas.
///
/// `p = R θ / v = A v^{-γ} exp((γ-1) s / R)` and `e = R θ / (γ-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    /// Gas constant, > 0.
    pub r: f64,
    /// Adiabatic exponent, > 1.
    pub gamma: f64,
    /// Entropy-pressure constant, > 0.
    pub a: f64,
    /// Viscosity, > 0.
    pub mu: f64,
    /// Heat conduction coefficient, > 0.
    pub kappa: f64,
}

impl GasModel {
    /// Validating constructor. `a` defaults to `r` when `None`, which
    /// normalizes the entropy to vanish at `v = θ = 1`.
    pub fn new(r: f64, gamma: f64, a: Option<f64>, mu: f64, kappa: f64) -> Result<Self, CoreError> {
        let a = a.unwrap_or(r);
        if !(r > 0.0) {
            return Err(CoreError::InvalidParameter("R must be positive"));
        }
        if !(gamma > 1.0) {
            return Err(CoreError::InvalidParameter("gamma must exceed 1"));
        }
        if !(a > 0.0) {
            return Err(CoreError::InvalidParameter("A must be positive"));
        }
        if !(mu > 0.0) {
            return Err(CoreError::InvalidParameter("mu must be positive"));
        }
        if !(kappa > 0.0) {
            return Err(CoreError::InvalidParameter("kappa must be positive"));
        }
        Ok(GasModel { r, gamma, a, mu, kappa })
    }

    /// Monatomic test gas: R = A = μ = κ = 1, γ = 5/3.
    pub fn monatomic() -> Self {
        GasModel { r: 1.0, gamma: 5.0 / 3.0, a: 1.0, mu: 1.0, kappa: 1.0 }
    }
}

/// A point (v, u, θ) of the phase space, v > 0 and θ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    /// Specific volume.
    pub v: f64,
    /// Velocity (signed).
    pub u: f64,
    /// Absolute temperature.
    pub theta: f64,
}

impl State {
    pub fn new(v: f64, u: f64, theta: f64) -> Result<Self, CoreError> {
        if !(v > 0.0) {
            return Err(CoreError::InvalidParameter("v must be positive"));
        }
        if !(theta > 0.0) {
            return Err(CoreError::InvalidParameter("theta must be positive"));
        }
        if !u.is_finite() {
            return Err(CoreError::InvalidParameter("u must be finite"));
        }
        Ok(State { v, u, theta })
    }
}

/// Sonic classification of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SonicTag {
    Subsonic,
    Transonic,
    Supersonic,
}

/// Sign of the velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum USign {
    Positive,
    Zero,
    Negative,
}

/// Sonic tag plus velocity sign; together they select one of the six
/// connected phase-space regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub tag: SonicTag,
    pub u_sign: USign,
}

/// Pressure p = R θ / v.
pub fn pressure(s: &State, g: &GasModel) -> f64 {
    g.r * s.theta / s.v
}

/// Entropy from the perfect-gas relation, s = R/(γ-1) · ln(R θ v^{γ-1} / A).
pub fn entropy(s: &State, g: &GasModel) -> f64 {
    g.r / (g.gamma - 1.0) * math::ln(g.r * s.theta * math::powf(s.v, g.gamma - 1.0) / g.a)
}

/// Pressure recovered from (v, s): p = A v^{-γ} exp((γ-1) s / R).
pub fn pressure_from_entropy(v: f64, s: f64, g: &GasModel) -> f64 {
    g.a * math::powf(v, -g.gamma) * math::exp((g.gamma - 1.0) * s / g.r)
}

/// Temperature on the isentrope through `(v_ref, theta_ref)` at volume `v`.
pub fn isentropic_theta(v_ref: f64, theta_ref: f64, v: f64, g: &GasModel) -> f64 {
    theta_ref * math::powf(v_ref / v, g.gamma - 1.0)
}

/// Sound speed c = √(R γ θ).
pub fn sound_speed(s: &State, g: &GasModel) -> f64 {
    math::sqrt(g.r * g.gamma * s.theta)
}

/// The three characteristic speeds (λ₁, λ₂, λ₃) = (-√(γp/v), 0, √(γp/v)).
pub fn characteristic_speeds(s: &State, g: &GasModel) -> (f64, f64, f64) {
    let lam3 = math::sqrt(g.gamma * pressure(s, g) / s.v);
    (-lam3, 0.0, lam3)
}

/// Third characteristic speed as a function of (v, s):
/// λ₃ = √(γ A e^{(γ-1)s/R}) · v^{-(γ+1)/2}.
pub fn lambda3_of_vs(v: f64, s: f64, g: &GasModel) -> f64 {
    lambda3_coefficient(s, g) * math::powf(v, -(g.gamma + 1.0) / 2.0)
}

/// The coefficient K in λ₃(v, s) = K v^{-(γ+1)/2}.
pub fn lambda3_coefficient(s: f64, g: &GasModel) -> f64 {
    math::sqrt(g.gamma * g.a * math::exp((g.gamma - 1.0) * s / g.r))
}

/// Inverse of v ↦ λ₃(v, s) along a fixed isentrope.
pub fn lambda3_inverse(w: f64, s: f64, g: &GasModel) -> f64 {
    math::powf(lambda3_coefficient(s, g) / w, 2.0 / (g.gamma + 1.0))
}

/// Mach number M = |u| / √(R γ θ).
pub fn mach(s: &State, g: &GasModel) -> f64 {
    math::abs(s.u) / sound_speed(s, g)
}

/// Classify a state as subsonic / transonic / supersonic with a tolerance
/// band |M - 1| ≤ tol for the transonic set, and record the velocity sign.
pub fn classify_regime(s: &State, g: &GasModel, tol: f64) -> Regime {
    let m = mach(s, g);
    let tag = if math::abs(m - 1.0) <= tol {
        SonicTag::Transonic
    } else if m < 1.0 {
        SonicTag::Subsonic
    } else {
        SonicTag::Supersonic
    };
    let u_sign = if s.u > 0.0 {
        USign::Positive
    } else if s.u < 0.0 {
        USign::Negative
    } else {
        USign::Zero
    };
    Regime { tag, u_sign }
}

/// Default tolerance for transonic detection.
pub const TRANSONIC_TOL: f64 = 1e-10;
