//! Viscous contact wave from the self-similar nonlinear diffusion profile.
//!
//! The temperature of the wave is `Θ^CD(t, x) = Θ^Sim(x / √(1+t))` where
//! `Θ^Sim` solves the two-point problem
//!
//! ```text
//! -(η/2) Θ' = a (Θ'/Θ)',    a = κ p₊ (γ-1) / (R² γ),    Θ(-∞) = θ₋, Θ(+∞) = θ₊
//! ```
//!
//! truncated to a symmetric interval (the tails are Gaussian, so moderate
//! truncation is harmless). Volume and velocity follow from constant
//! pressure and the heat-flux relation:
//!
//! ```text
//! V^CD = R Θ^CD / p₊,    U^CD = u₊ + κ(γ-1) Θ^CD_x / (R γ Θ^CD).
//! ```
//!
//! Derivatives up to third order are expressed through (Θ^Sim, Θ^Sim')
//! using the profile ODE, which keeps the mass and energy identities of the
//! wave exact up to rounding and makes the momentum/energy error terms
//! scale as exact powers of (1+t).

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::fit::linear_fit;
use crate::interp::MonotoneCubic;
use crate::math;
use crate::thermo::GasModel;

/// Tabulated self-similar temperature profile on a symmetric η-grid.
#[derive(Debug, Clone)]
pub struct SelfSimilarProfile {
    pub eta: Vec<f64>,
    pub theta: Vec<f64>,
    /// Nodal dΘ/dη (fourth-order differences of the solved values).
    pub dtheta: Vec<f64>,
    pub theta_minus: f64,
    pub theta_plus: f64,
    /// a = κ p₊ (γ-1) / (R² γ).
    pub diffusivity: f64,
    /// Gaussian tail rate from the construction-time fit (0 when the
    /// profile is constant).
    pub fitted_c0: f64,
    /// Sup-norm of the discrete nonlinear system at the solution, scaled by
    /// h²/a so the value is grid-independent (units of temperature).
    pub newton_residual: f64,
    interp_t: MonotoneCubic,
    interp_d: MonotoneCubic,
}

impl SelfSimilarProfile {
    /// (Θ^Sim, dΘ^Sim/dη) at η, clamped to the constant tails outside the
    /// tabulated range.
    pub fn eval(&self, eta: f64) -> (f64, f64) {
        let n = self.eta.len();
        if eta <= self.eta[0] {
            return (self.theta_minus, 0.0);
        }
        if eta >= self.eta[n - 1] {
            return (self.theta_plus, 0.0);
        }
        (self.interp_t.eval(eta), self.interp_d.eval(eta))
    }

    /// Second derivative through the profile ODE:
    /// Θ'' = (Θ')²/Θ - η Θ Θ' / (2a).
    pub fn second_derivative(&self, eta: f64, t: f64, d: f64) -> f64 {
        d * d / t - eta * t * d / (2.0 * self.diffusivity)
    }

    /// Third derivative by differentiating the ODE relation once more.
    pub fn third_derivative(&self, eta: f64, t: f64, d: f64) -> f64 {
        let a = self.diffusivity;
        let e = self.second_derivative(eta, t, d);
        2.0 * d * e / t - d * d * d / (t * t) - (t * d + eta * d * d + eta * t * e) / (2.0 * a)
    }

    pub fn h(&self) -> f64 {
        self.eta[1] - self.eta[0]
    }
}

/// Solve the self-similar two-point problem by damped Newton on a
/// second-order conservative discretization, with continuation ramping the
/// left temperature from `theta_plus` to `theta_minus` in ten steps.
pub fn solve_selfsimilar(
    theta_minus: f64,
    theta_plus: f64,
    p_plus: f64,
    g: &GasModel,
    l_eta: f64,
    n: usize,
) -> Result<SelfSimilarProfile, CoreError> {
    if !(theta_minus > 0.0) || !(theta_plus > 0.0) {
        return Err(CoreError::InvalidParameter("end temperatures must be positive"));
    }
    if !(p_plus > 0.0) {
        return Err(CoreError::InvalidParameter("p_+ must be positive"));
    }
    if n < 5 {
        return Err(CoreError::GridTooCoarse { needed: 5, got: n });
    }
    let a = g.kappa * p_plus * (g.gamma - 1.0) / (g.r * g.r * g.gamma);
    let h = 2.0 * l_eta / (n - 1) as f64;
    let eta: Vec<f64> = (0..n).map(|i| -l_eta + h * i as f64).collect();
    let mut theta = alloc::vec![theta_plus; n];
    let mut residual = 0.0;
    if theta_minus != theta_plus {
        let steps = 10;
        for k in 1..=steps {
            let ramped = theta_plus + (theta_minus - theta_plus) * k as f64 / steps as f64;
            residual = newton_solve(&mut theta, &eta, ramped, theta_plus, a, h)? * h * h / a;
        }
    }
    let dtheta = crate::boundary_layer::fd_derivative(&theta, h);
    let interp_t = MonotoneCubic::new(eta.clone(), theta.clone());
    let interp_d = MonotoneCubic::new(eta.clone(), dtheta.clone());
    let delta = math::abs(theta_plus - theta_minus);
    let fitted_c0 = if delta == 0.0 {
        0.0
    } else {
        let (c_left, c_right) = tail_rates(&eta, &theta, theta_minus, theta_plus, delta);
        math::min(c_left, c_right)
    };
    Ok(SelfSimilarProfile {
        eta,
        theta,
        dtheta,
        theta_minus,
        theta_plus,
        diffusivity: a,
        fitted_c0,
        newton_residual: residual,
        interp_t,
        interp_d,
    })
}

/// Newton loop; returns the final sup-norm residual.
fn newton_solve(
    theta: &mut [f64],
    eta: &[f64],
    th_left: f64,
    th_right: f64,
    a: f64,
    h: f64,
) -> Result<f64, CoreError> {
    let n = theta.len();
    theta[0] = th_left;
    theta[n - 1] = th_right;
    let mut f = alloc::vec![0.0; n];
    let mut lower = alloc::vec![0.0; n];
    let mut diag = alloc::vec![0.0; n];
    let mut upper = alloc::vec![0.0; n];
    let scale = (a / (h * h)) * th_right.max(th_left);
    let mut last_norm = f64::INFINITY;
    for _iter in 0..60 {
        let norm = assemble(theta, eta, a, h, &mut f, &mut lower, &mut diag, &mut upper);
        if norm < 1e-13 * scale {
            return Ok(norm);
        }
        if !norm.is_finite() {
            return Err(CoreError::NewtonDiverged { residual: norm });
        }
        // Solve J δ = -F (Thomas algorithm).
        let mut c_star = alloc::vec![0.0; n];
        let mut d_star = alloc::vec![0.0; n];
        c_star[0] = upper[0] / diag[0];
        d_star[0] = -f[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - lower[i] * c_star[i - 1];
            c_star[i] = upper[i] / m;
            d_star[i] = (-f[i] - lower[i] * d_star[i - 1]) / m;
        }
        let mut delta = alloc::vec![0.0; n];
        delta[n - 1] = d_star[n - 1];
        for i in (0..n - 1).rev() {
            delta[i] = d_star[i] - c_star[i] * delta[i + 1];
        }
        // Damped update: largest step keeping positivity and descent.
        let base: Vec<f64> = theta.to_vec();
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..30 {
            let mut positive = true;
            for i in 0..n {
                let v = base[i] + lambda * delta[i];
                if !(v > 0.0) {
                    positive = false;
                    break;
                }
                theta[i] = v;
            }
            if positive {
                let new_norm =
                    assemble(theta, eta, a, h, &mut f, &mut lower, &mut diag, &mut upper);
                if new_norm < norm * (1.0 - 0.25 * lambda) || new_norm < 1e-13 * scale {
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            theta.copy_from_slice(&base);
            return Err(CoreError::NewtonDiverged { residual: norm });
        }
        last_norm = norm;
    }
    Err(CoreError::NewtonDiverged { residual: last_norm })
}

/// Assemble the residual and tridiagonal Jacobian; returns sup|F|.
fn assemble(
    theta: &[f64],
    eta: &[f64],
    a: f64,
    h: f64,
    f: &mut [f64],
    lower: &mut [f64],
    diag: &mut [f64],
    upper: &mut [f64],
) -> f64 {
    let n = theta.len();
    // Dirichlet rows carry zero residual by construction.
    f[0] = 0.0;
    lower[0] = 0.0;
    diag[0] = 1.0;
    upper[0] = 0.0;
    f[n - 1] = 0.0;
    lower[n - 1] = 0.0;
    diag[n - 1] = 1.0;
    upper[n - 1] = 0.0;
    let mut norm = 0.0f64;
    for i in 1..n - 1 {
        let m_plus = 0.5 * (theta[i] + theta[i + 1]);
        let m_minus = 0.5 * (theta[i - 1] + theta[i]);
        let flux_plus = (theta[i + 1] - theta[i]) / m_plus;
        let flux_minus = (theta[i] - theta[i - 1]) / m_minus;
        let fi = a * (flux_plus - flux_minus) / (h * h)
            + eta[i] * (theta[i + 1] - theta[i - 1]) / (4.0 * h);
        f[i] = fi;
        norm = math::max(norm, math::abs(fi));
        let dfp_dnext = (1.0 - 0.5 * flux_plus) / m_plus;
        let dfp_dself = (-1.0 - 0.5 * flux_plus) / m_plus;
        let dfm_dself = (1.0 - 0.5 * flux_minus) / m_minus;
        let dfm_dprev = (-1.0 - 0.5 * flux_minus) / m_minus;
        lower[i] = -a * dfm_dprev / (h * h) - eta[i] / (4.0 * h);
        diag[i] = a * (dfp_dself - dfm_dself) / (h * h);
        upper[i] = a * dfp_dnext / (h * h) + eta[i] / (4.0 * h);
    }
    norm
}

/// Per-tail Gaussian rates: slope of -ln|Θ - θ_end| against η².
fn tail_rates(eta: &[f64], theta: &[f64], th_minus: f64, th_plus: f64, delta: f64) -> (f64, f64) {
    let n = eta.len();
    let fit_tail = |indices: Vec<usize>, end: f64| -> f64 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in indices {
            let gap = math::abs(theta[i] - end);
            // Resolvable window: above roundoff, inside the genuine tail.
            if gap > 1e-12 * delta && gap < 3e-2 * delta {
                xs.push(eta[i] * eta[i]);
                ys.push(math::ln(gap));
            }
        }
        if xs.len() < 8 {
            return 0.0;
        }
        -linear_fit(&xs, &ys).0
    };
    let left = fit_tail((0..n / 2).collect(), th_minus);
    let right = fit_tail((n / 2..n).collect(), th_plus);
    (left, right)
}

/// The viscous contact wave: self-similar profile plus the shared pressure
/// and velocity, with the gas-derived coefficients frozen at construction.
#[derive(Debug, Clone)]
pub struct ContactWave {
    pub profile: SelfSimilarProfile,
    /// Common pressure p₊ = p₋.
    pub p_plus: f64,
    /// Common far-field velocity u₊ = u₋.
    pub u_plus: f64,
    /// Amplitude |θ₊ - θ₋|.
    pub delta_cd: f64,
    /// R / p₊, so V^CD = r_over_p · Θ^CD.
    r_over_p: f64,
    /// κ(γ-1)/(Rγ), the heat-flux coefficient in U^CD.
    ucoef: f64,
    mu: f64,
    kappa: f64,
    r_over_gm1: f64,
}

impl ContactWave {
    pub fn new(profile: SelfSimilarProfile, p_plus: f64, u_plus: f64, g: &GasModel) -> Self {
        let delta_cd = math::abs(profile.theta_plus - profile.theta_minus);
        ContactWave {
            profile,
            p_plus,
            u_plus,
            delta_cd,
            r_over_p: g.r / p_plus,
            ucoef: g.kappa * (g.gamma - 1.0) / (g.r * g.gamma),
            mu: g.mu,
            kappa: g.kappa,
            r_over_gm1: g.r / (g.gamma - 1.0),
        }
    }

    /// Build the wave connecting temperatures θ₋ → θ₊ at pressure p₊ and
    /// velocity u₊.
    pub fn build(
        theta_minus: f64,
        theta_plus: f64,
        p_plus: f64,
        u_plus: f64,
        g: &GasModel,
        l_eta: f64,
        n: usize,
    ) -> Result<Self, CoreError> {
        let profile = solve_selfsimilar(theta_minus, theta_plus, p_plus, g, l_eta, n)?;
        Ok(ContactWave::new(profile, p_plus, u_plus, g))
    }
}

/// Wave values (V^CD, U^CD, Θ^CD) at half-line coordinates (t, ξ) with
/// boundary speed σ₋, through η = (ξ + σ₋ t)/√(1+t).
pub fn evaluate_contact(cw: &ContactWave, t: f64, xi: f64, sigma_minus: f64) -> (f64, f64, f64) {
    let p = &cw.profile;
    let s = 1.0 + t;
    let rs = math::sqrt(s);
    let eta = (xi + sigma_minus * t) / rs;
    let (tt, dd) = p.eval(eta);
    let theta_x = dd / rs;
    let v = cw.r_over_p * tt;
    let u = cw.u_plus + cw.ucoef * theta_x / tt;
    (v, u, tt)
}

/// Fields and ξ-frame derivatives of the contact wave; `*_t` entries are
/// time derivatives at fixed ξ.
#[derive(Debug, Clone, Copy)]
pub struct ContactDerivs {
    pub eta: f64,
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub v_xi: f64,
    pub u_xi: f64,
    pub theta_xi: f64,
    pub v_t: f64,
    pub u_t: f64,
    pub theta_t: f64,
    pub u_xixi: f64,
    pub theta_xixi: f64,
    pub theta_xixixi: f64,
    /// (U_ξ/V)_ξ by the quotient rule.
    pub du_over_v_xi: f64,
    /// (Θ_ξ/V)_ξ by the quotient rule.
    pub dtheta_over_v_xi: f64,
}

/// Evaluate the wave together with every derivative the defect formulas
/// need, all reduced to (Θ^Sim, Θ^Sim') and the profile ODE.
pub fn contact_derivatives(cw: &ContactWave, t: f64, xi: f64, sigma_minus: f64) -> ContactDerivs {
    let p = &cw.profile;
    let s = 1.0 + t;
    let rs = math::sqrt(s);
    let eta = (xi + sigma_minus * t) / rs;
    let (tt, dd) = p.eval(eta);
    let ee = p.second_derivative(eta, tt, dd);
    let ff = p.third_derivative(eta, tt, dd);
    let theta = tt;
    let theta_x = dd / rs;
    let theta_xx = ee / s;
    let theta_xxx = ff / (s * rs);
    let u = cw.u_plus + cw.ucoef * theta_x / theta;
    let n_quot = theta_xx * theta - theta_x * theta_x;
    let u_x = cw.ucoef * n_quot / (theta * theta);
    let n_quot_x = theta_xxx * theta - theta_x * theta_xx;
    let u_xx = cw.ucoef * (n_quot_x * theta - 2.0 * n_quot * theta_x) / (theta * theta * theta);
    let v = cw.r_over_p * theta;
    let v_x = cw.r_over_p * theta_x;
    // x-frame time derivatives, then shifted into the ξ frame.
    let g_prime = (ee * tt - dd * dd) / (tt * tt);
    let theta_t_x = dd * (-eta / (2.0 * s));
    let u_t_x = cw.ucoef * (-0.5 * (dd / tt) / (s * rs) + g_prime / rs * (-eta / (2.0 * s)));
    let theta_t = theta_t_x + sigma_minus * theta_x;
    let u_t = u_t_x + sigma_minus * u_x;
    let v_t = cw.r_over_p * theta_t;
    let du_over_v_xi = (u_xx * v - u_x * v_x) / (v * v);
    let dtheta_over_v_xi = (theta_xx * v - theta_x * v_x) / (v * v);
    ContactDerivs {
        eta,
        v,
        u,
        theta,
        v_xi: v_x,
        u_xi: u_x,
        theta_xi: theta_x,
        v_t,
        u_t,
        theta_t,
        u_xixi: u_xx,
        theta_xixi: theta_xx,
        theta_xixixi: theta_xxx,
        du_over_v_xi,
        dtheta_over_v_xi,
    }
}

/// Error terms (Q̄₁, Q̄₂) of the wave's momentum and energy equations,
/// computed in collapsed self-similar form: exact powers of (1+t) times
/// shapes in η alone.
pub fn contact_defect(cw: &ContactWave, t: f64, xi: f64, sigma_minus: f64) -> (f64, f64) {
    let p = &cw.profile;
    let a = p.diffusivity;
    let s = 1.0 + t;
    let rs = math::sqrt(s);
    let eta = (xi + sigma_minus * t) / rs;
    let (tt, dd) = p.eval(eta);
    let ee = p.second_derivative(eta, tt, dd);
    // (Θ'/Θ)' collapses to -ηΘ'/(2a) through the ODE.
    let g_prime = -eta * dd / (2.0 * a);
    let u_t_frame = cw.ucoef / (s * rs) * (-0.5 * (dd / tt) - 0.5 * eta * g_prime);
    let dshape = (dd + eta * ee) / tt - eta * dd * dd / (tt * tt);
    let du_over_v_xi = -(cw.ucoef / cw.r_over_p) / (2.0 * a) * dshape / (s * rs);
    let q1 = u_t_frame - cw.mu * du_over_v_xi;
    let u_x = cw.ucoef / s * g_prime;
    let v = cw.r_over_p * tt;
    let q2 = -cw.mu * u_x * u_x / v;
    (q1, q2)
}

/// Defects of the wave's mass and energy identities, computed from the
/// quotient-rule derivative fields (an independent route from the collapsed
/// forms in [`contact_defect`]). Both vanish to rounding by construction.
pub fn contact_identity_defects(cw: &ContactWave, t: f64, xi: f64, sigma_minus: f64) -> (f64, f64) {
    let d = contact_derivatives(cw, t, xi, sigma_minus);
    let mass = d.v_t - sigma_minus * d.v_xi - d.u_xi;
    let (_, q2) = contact_defect(cw, t, xi, sigma_minus);
    let energy = cw.r_over_gm1 * (d.theta_t - sigma_minus * d.theta_xi) + cw.p_plus * d.u_xi
        - cw.kappa * d.dtheta_over_v_xi
        - cw.mu * d.u_xi * d.u_xi / d.v
        - q2;
    (mass, energy)
}

/// Momentum-equation defect from the derivative fields; equals Q̄₁ up to the
/// rounding of the pressure-gradient evaluation.
pub fn contact_momentum_defect(cw: &ContactWave, t: f64, xi: f64, sigma_minus: f64) -> f64 {
    let d = contact_derivatives(cw, t, xi, sigma_minus);
    // P = RΘ/V with V = RΘ/p₊; evaluate the gradient by the quotient rule
    // rather than assuming it vanishes.
    let r = cw.r_over_p * cw.p_plus;
    let p_xi = r * (d.theta_xi * d.v - d.theta * d.v_xi) / (d.v * d.v);
    d.u_t - sigma_minus * d.u_xi + p_xi - cw.mu * d.du_over_v_xi
}
