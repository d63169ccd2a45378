//! Stationary boundary-layer profiles of the half-line problem.
//!
//! In the frame moving with the boundary, a boundary-layer solution is a
//! stationary orbit of the planar system obtained after integrating the
//! traveling-wave equations once:
//!
//! ```text
//! U' = -(σ₋/μ) V (U - u₊) + (R/μ) (Θ - (θ₊/v₊) V)
//! Θ' = -(R σ₋ V)/(κ(γ-1)) (Θ - θ₊) + (p₊/κ) V (U - u₊) + (σ₋ V)/(2κ) (U - u₊)²
//! ```
//!
//! with `V = v₊ + (U - u₊)/(-σ₋)` and `σ₋ = -u₊/v₊`. The far-field state is
//! an equilibrium whose linearization decides existence: a saddle when the
//! right state is strictly subsonic (profiles decay exponentially along the
//! one-dimensional stable manifold), a saddle-node when it is exactly sonic
//! (algebraic `1/ξ` decay along the center direction), and no orbit at all
//! in the supersonic half or when `u₊ ≤ 0`.
//!
//! Profiles are constructed by backward integration from a small offset
//! along the stable (resp. center) eigendirection, which traces the manifold
//! stably: transversal errors contract in the backward direction.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::fit::linear_fit;
use crate::interp::MonotoneCubic;
use crate::math;
use crate::ode::{AdaptiveRk, Trajectory, V2};
use crate::thermo::{self, GasModel, SonicTag, State, USign};

/// End states of a boundary-layer connection and the boundary speed.
#[derive(Debug, Clone, Copy)]
pub struct EndStates {
    pub left: State,
    pub right: State,
    /// σ₋ = -u₋/v₋ < 0.
    pub sigma_minus: f64,
}

impl EndStates {
    /// Requires inflow data (u₋ > 0). For boundary-layer use the end states
    /// must also satisfy the mass relation u₋/v₋ = u₊/v₊.
    pub fn new(left: State, right: State) -> Result<Self, CoreError> {
        if !(left.u > 0.0) {
            return Err(CoreError::InvalidParameter("u_- must be positive (inflow)"));
        }
        Ok(EndStates { left, right, sigma_minus: -left.u / left.v })
    }

    /// Validating constructor for boundary-layer end states: enforces the
    /// traveling-wave mass relation to relative 1e-10.
    pub fn for_boundary_layer(left: State, right: State) -> Result<Self, CoreError> {
        let es = Self::new(left, right)?;
        let lhs = left.u / left.v;
        let rhs = right.u / right.v;
        if math::abs(lhs - rhs) > 1e-10 * math::abs(rhs) {
            return Err(CoreError::InvalidParameter(
                "end states violate u/v compatibility",
            ));
        }
        Ok(es)
    }
}

/// Linearization of the planar system at the far-field equilibrium.
#[derive(Debug, Clone, Copy)]
pub struct BlLinearization {
    /// The 2x2 matrix acting on (U - u₊, Θ - θ₊).
    pub j: [[f64; 2]; 2],
    pub det_j: f64,
    /// Eigenvalues; `lam1 + lam2 = tr J` exactly by construction.
    pub lam1: f64,
    pub lam2: f64,
    /// Roots of the reduction quadratic, c1 < 0 < c2.
    pub c1: f64,
    pub c2: f64,
    /// Shear coefficients of the two-step change of basis.
    pub a1: f64,
    pub a2: f64,
    /// Change of basis with P⁻¹ J P = diag(lam1, lam2); det P = 1.
    pub p: [[f64; 2]; 2],
    pub p_inv: [[f64; 2]; 2],
    pub mach_plus: f64,
}

impl BlLinearization {
    /// Column of `p` spanning the lam2 eigendirection (stable for subsonic,
    /// center for transonic states).
    pub fn slow_eigenvector(&self) -> V2 {
        [self.p[0][1], self.p[1][1]]
    }

    /// Coordinates W = P⁻¹ (U - u₊, Θ - θ₊).
    pub fn to_w(&self, x: V2) -> V2 {
        [
            self.p_inv[0][0] * x[0] + self.p_inv[0][1] * x[1],
            self.p_inv[1][0] * x[0] + self.p_inv[1][1] * x[1],
        ]
    }

    pub fn from_w(&self, w: V2) -> V2 {
        [
            self.p[0][0] * w[0] + self.p[0][1] * w[1],
            self.p[1][0] * w[0] + self.p[1][1] * w[1],
        ]
    }
}

/// Assemble the equilibrium linearization and its diagonalizing basis.
///
/// The quadratic solved for the basis shear is
/// `y² + ((M₊²γ-1)/(M₊²Rγ) - μ/(κ(γ-1))) y - μ/(M₊²Rγκ) = 0`,
/// whose roots straddle zero; the positive root also spans the unstable
/// eigendirection in the transonic limit.
pub fn build_linearization(right: &State, g: &GasModel) -> Result<BlLinearization, CoreError> {
    if !(right.u > 0.0) {
        return Err(CoreError::NoBoundaryLayer("u_+ must be positive"));
    }
    let (r, gamma, mu, kappa) = (g.r, g.gamma, g.mu, g.kappa);
    let (u, theta) = (right.u, right.theta);
    let j = [
        [(u * u - r * theta) / (mu * u), r / mu],
        [r * theta / kappa, r * u / (kappa * (gamma - 1.0))],
    ];
    let det_j = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let m2 = mach(right, g) * mach(right, g);
    let b = (m2 * gamma - 1.0) / (m2 * r * gamma) - mu / (kappa * (gamma - 1.0));
    let c = mu / (m2 * r * gamma * kappa);
    let c2 = 0.5 * (-b + math::sqrt(b * b + 4.0 * c));
    let c1 = -c / c2;
    let a1 = c2 * u;
    let lam1 = j[0][0] + a1 * j[0][1];
    let lam2 = j[1][1] - a1 * j[0][1];
    let a2 = -r / (mu * (lam1 - lam2));
    let p = [[1.0, a2], [a1, 1.0 + a2 * a1]];
    let p_inv = [[1.0 + a2 * a1, -a2], [-a1, 1.0]];
    Ok(BlLinearization {
        j,
        det_j,
        lam1,
        lam2,
        c1,
        c2,
        a1,
        a2,
        p,
        p_inv,
        mach_plus: math::sqrt(m2),
    })
}

fn mach(s: &State, g: &GasModel) -> f64 {
    thermo::mach(s, g)
}

/// Existence trichotomy for the boundary layer at a given right state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlCase {
    /// u₊ ≤ 0: no solution.
    NoneUNonpositive,
    /// M₊ > 1: both eigenvalues unstable, no solution.
    NoneSupersonic,
    /// M₊ = 1: saddle-node, algebraically decaying profiles.
    TransonicSaddleNode,
    /// M₊ < 1: saddle, exponentially decaying profiles.
    SubsonicSaddle,
}

/// Classify existence of a boundary layer by the sonic regime of the right
/// state, with `tol` as the transonic detection band in Mach number.
pub fn classify_bl_existence(right: &State, g: &GasModel, tol: f64) -> BlCase {
    let regime = thermo::classify_regime(right, g, tol);
    if regime.u_sign != USign::Positive {
        return BlCase::NoneUNonpositive;
    }
    match regime.tag {
        SonicTag::Supersonic => BlCase::NoneSupersonic,
        SonicTag::Transonic => BlCase::TransonicSaddleNode,
        SonicTag::Subsonic => BlCase::SubsonicSaddle,
    }
}

/// Decay class of a constructed profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayKind {
    /// |profile - endstate| ~ e^{-cξ} (subsonic saddle).
    Exponential,
    /// |profile - endstate| ~ 1/(1 + δξ) (transonic saddle-node).
    Algebraic,
}

/// Which of the two manifold branches to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Grid request for a profile; when `xi_max` is `None` the domain length is
/// chosen from the decay rate (exponential case) or the tail factor
/// (algebraic case).
#[derive(Debug, Clone, Copy)]
pub struct XiGridSpec {
    pub n: usize,
    pub xi_max: Option<f64>,
}

impl Default for XiGridSpec {
    fn default() -> Self {
        XiGridSpec { n: 2001, xi_max: None }
    }
}

/// Tunables of the manifold construction.
#[derive(Debug, Clone, Copy)]
pub struct BlConfig {
    /// Offset along the eigendirection, relative to the amplitude.
    pub eps_off_rel: f64,
    /// Largest admissible amplitude δ^B.
    pub smallness: f64,
    /// Integrator relative tolerance.
    pub rtol: f64,
    /// Algebraic-case domain length in units of 1/δ^B.
    pub tail_factor: f64,
}

impl Default for BlConfig {
    fn default() -> Self {
        BlConfig { eps_off_rel: 1e-6, smallness: 1e-2, rtol: 1e-12, tail_factor: 100.0 }
    }
}

/// A tabulated boundary-layer profile on a uniform ξ-grid starting at 0.
#[derive(Debug, Clone)]
pub struct BlProfile {
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    /// Amplitude |(u₊ - u₋, θ₊ - θ₋)| actually achieved.
    pub delta_b: f64,
    pub decay: DecayKind,
    /// Fitted exponential rate (positive) or algebraic log-log slope.
    pub fitted_rate: f64,
    pub right: State,
    pub sigma_minus: f64,
    interp_u: MonotoneCubic,
    interp_theta: MonotoneCubic,
}

impl BlProfile {
    /// Left boundary data (v₋, u₋, θ₋) implied by the profile.
    pub fn left_data(&self) -> State {
        State { v: self.v[0], u: self.u[0], theta: self.theta[0] }
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        self.xi[1] - self.xi[0]
    }

    /// Profile values at arbitrary ξ ≥ 0; beyond the grid the far-field
    /// state is returned. V is recovered from the mass relation so that
    /// U/V = u₊/v₊ holds identically.
    pub fn evaluate(&self, xi: f64) -> (f64, f64, f64) {
        let u = self.interp_u.eval(xi);
        let theta = self.interp_theta.eval(xi);
        let v = self.right.v + (u - self.right.u) / (-self.sigma_minus);
        (v, u, theta)
    }

    /// First derivatives (V', U', Θ') at ξ, evaluated through the profile
    /// ODE so that the integrated relations hold as identities.
    pub fn derivative(&self, xi: f64, g: &GasModel) -> (f64, f64, f64) {
        let (_, u, theta) = self.evaluate(xi);
        let [du, dtheta] = rhs(u, theta, &self.right, self.sigma_minus, g);
        (du / (-self.sigma_minus), du, dtheta)
    }

    /// Second derivatives (V'', U'', Θ'') at ξ by the chain rule on the
    /// profile ODE.
    pub fn second_derivative(&self, xi: f64, g: &GasModel) -> (f64, f64, f64) {
        let (_, u, theta) = self.evaluate(xi);
        let [du, dtheta] = rhs(u, theta, &self.right, self.sigma_minus, g);
        let jac = rhs_jacobian(u, theta, &self.right, self.sigma_minus, g);
        let ddu = jac[0][0] * du + jac[0][1] * dtheta;
        let ddtheta = jac[1][0] * du + jac[1][1] * dtheta;
        (ddu / (-self.sigma_minus), ddu, ddtheta)
    }
}

/// Right-hand side of the planar profile system in (U, Θ) variables.
fn rhs(u: f64, theta: f64, right: &State, sigma: f64, g: &GasModel) -> V2 {
    let p_plus = g.r * right.theta / right.v;
    let v = right.v + (u - right.u) / (-sigma);
    let du = -sigma / g.mu * v * (u - right.u)
        + g.r / g.mu * (theta - right.theta / right.v * v);
    let dtheta = -g.r * sigma * v / (g.kappa * (g.gamma - 1.0)) * (theta - right.theta)
        + p_plus / g.kappa * v * (u - right.u)
        + sigma * v / (2.0 * g.kappa) * (u - right.u) * (u - right.u);
    [du, dtheta]
}

/// Jacobian of [`rhs`] with respect to (U, Θ).
fn rhs_jacobian(u: f64, theta: f64, right: &State, sigma: f64, g: &GasModel) -> [[f64; 2]; 2] {
    let p_plus = g.r * right.theta / right.v;
    let v = right.v + (u - right.u) / (-sigma);
    let dv_du = 1.0 / (-sigma);
    let ubar = u - right.u;
    let d_du_du = -sigma / g.mu * (dv_du * ubar + v) + g.r / g.mu * (-right.theta / right.v * dv_du);
    let d_du_dtheta = g.r / g.mu;
    let d_dtheta_du = -g.r * sigma / (g.kappa * (g.gamma - 1.0)) * dv_du * (theta - right.theta)
        + p_plus / g.kappa * (dv_du * ubar + v)
        + sigma / (2.0 * g.kappa) * (dv_du * ubar * ubar + 2.0 * v * ubar);
    let d_dtheta_dtheta = -g.r * sigma * v / (g.kappa * (g.gamma - 1.0));
    [[d_du_du, d_du_dtheta], [d_dtheta_du, d_dtheta_dtheta]]
}

/// Quadratic coefficient of the center-coordinate flow W₂' = q₂ W₂² + ...
/// restricted to the lam2 eigendirection.
fn center_quadratic_coefficient(lin: &BlLinearization, right: &State, g: &GasModel) -> f64 {
    let vc = lin.slow_eigenvector();
    let x1 = vc[0];
    let x2 = vc[1];
    let k1 = g.r * right.theta / (g.kappa * right.u) - right.u / (2.0 * g.kappa);
    let k2 = g.r / (g.kappa * (g.gamma - 1.0));
    let f1 = x1 * x1 / g.mu;
    let f2 = k1 * x1 * x1 + k2 * x1 * x2;
    lin.p_inv[1][0] * f1 + lin.p_inv[1][1] * f2
}

struct BackwardRun {
    traj: Trajectory,
    /// Backward arc length from the offset point to the amplitude crossing.
    len: f64,
}

/// Integrate backward from `w_start` until |P W| reaches `delta_target`,
/// then locate the crossing by bisection on the dense output.
fn backward_to_amplitude(
    lin: &BlLinearization,
    right: &State,
    sigma: f64,
    g: &GasModel,
    w_start: V2,
    delta_target: f64,
    s_max: f64,
    rtol: f64,
) -> Result<BackwardRun, CoreError> {
    let field = |w: V2| -> V2 {
        let x = lin.from_w(w);
        let f = rhs(right.u + x[0], right.theta + x[1], right, sigma, g);
        // dW/ds = -P⁻¹ f(P W + equilibrium), backward sweep.
        [
            -(lin.p_inv[0][0] * f[0] + lin.p_inv[0][1] * f[1]),
            -(lin.p_inv[1][0] * f[0] + lin.p_inv[1][1] * f[1]),
        ]
    };
    let amp = |w: V2| -> f64 {
        let x = lin.from_w(w);
        math::norm2(x[0], x[1])
    };
    let rk = AdaptiveRk { rtol, atol: 1e-18 * delta_target.max(1e-30) };
    let (traj, stopped) = rk.integrate(field, w_start, s_max, |w| amp(w) >= delta_target);
    if !stopped {
        return Err(CoreError::NoBoundaryLayer(
            "backward sweep left the validity neighborhood before reaching the amplitude",
        ));
    }
    // Bisect the crossing inside the last step.
    let n = traj.nodes.len();
    let (mut lo, mut hi) = (traj.nodes[n - 2].s, traj.nodes[n - 1].s);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if amp(traj.sample(mid)) >= delta_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BackwardRun { traj, len: 0.5 * (lo + hi) })
}

fn build_profile(
    xi: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    right: State,
    sigma: f64,
    decay: DecayKind,
    fitted_rate: f64,
) -> BlProfile {
    let h = xi[1] - xi[0];
    let v: Vec<f64> = u.iter().map(|&ui| right.v + (ui - right.u) / (-sigma)).collect();
    let delta_b = math::norm2(u[0] - right.u, theta[0] - right.theta);
    let interp_u = MonotoneCubic::on_uniform(0.0, h, u.clone());
    let interp_theta = MonotoneCubic::on_uniform(0.0, h, theta.clone());
    BlProfile {
        xi,
        v,
        u,
        theta,
        delta_b,
        decay,
        fitted_rate,
        right,
        sigma_minus: sigma,
        interp_u,
        interp_theta,
    }
}

fn constant_profile(right: State, sigma: f64, grid: &XiGridSpec, decay: DecayKind) -> BlProfile {
    let xi_max = grid.xi_max.unwrap_or(10.0);
    let n = grid.n.max(2);
    let h = xi_max / (n - 1) as f64;
    let xi: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let u = alloc::vec![right.u; n];
    let theta = alloc::vec![right.theta; n];
    build_profile(xi, u, theta, right, sigma, decay, 0.0)
}

/// Construct the subsonic boundary layer of amplitude `delta_target` on the
/// requested branch, together with the implied left boundary data
/// (read off with [`BlProfile::left_data`]).
///
/// The stable manifold is traced by integrating backward from the offset
/// `eps_off_rel · δ^B` along the stable eigendirection; beyond the offset
/// point the tail is continued with the exact linearized decay, which keeps
/// the residual at the O(ε_off²) nonlinear level.
pub fn solve_subsonic_bl(
    right: &State,
    g: &GasModel,
    delta_target: f64,
    branch: Branch,
    grid: &XiGridSpec,
    cfg: &BlConfig,
) -> Result<BlProfile, CoreError> {
    if classify_bl_existence(right, g, thermo::TRANSONIC_TOL) != BlCase::SubsonicSaddle {
        return Err(CoreError::NoBoundaryLayer("right state is not strictly subsonic"));
    }
    if !(delta_target >= 0.0) || delta_target > cfg.smallness {
        return Err(CoreError::InvalidParameter(
            "delta_target must lie in [0, smallness]",
        ));
    }
    let sigma = -right.u / right.v;
    if delta_target == 0.0 {
        return Ok(constant_profile(*right, sigma, grid, DecayKind::Exponential));
    }
    let lin = build_linearization(right, g)?;
    let rate = -lin.lam2; // positive decay rate
    let v2 = lin.slow_eigenvector();
    let v2_norm = math::norm2(v2[0], v2[1]);
    let eps_off = cfg.eps_off_rel * delta_target;
    let w_start = [0.0, branch.sign() * eps_off / v2_norm];
    let s_max = 8.0 * math::ln(delta_target / eps_off) / rate + 100.0 / rate;
    let run = backward_to_amplitude(&lin, right, sigma, g, w_start, delta_target, s_max, cfg.rtol)?;
    let len = run.len;

    // Uniform grid: integrated part on [0, len], linearized tail beyond.
    let tail_len = math::ln(1e3) / rate;
    let xi_max = grid.xi_max.unwrap_or(len + tail_len);
    let n = grid.n.max(8);
    let h = xi_max / (n - 1) as f64;
    let mut xi = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for j in 0..n {
        let x_j = j as f64 * h;
        xi.push(x_j);
        let w = if x_j <= len {
            run.traj.sample(len - x_j)
        } else {
            [0.0, w_start[1] * math::exp(lin.lam2 * (x_j - len))]
        };
        let x = lin.from_w(w);
        u.push(right.u + x[0]);
        theta.push(right.theta + x[1]);
    }

    // Decay-rate fit on the integrated half of the grid, away from both the
    // nonlinear head and the spliced tail.
    let mut fit_x = Vec::new();
    let mut fit_y = Vec::new();
    for j in 0..n {
        let x_j = xi[j];
        if x_j >= 0.5 * len && x_j <= len {
            let du = math::abs(u[j] - right.u);
            if du > 1e-300 {
                fit_x.push(x_j);
                fit_y.push(math::ln(du));
            }
        }
    }
    let fitted_rate = if fit_x.len() >= 2 {
        -linear_fit(&fit_x, &fit_y).0
    } else {
        rate
    };
    Ok(build_profile(xi, u, theta, *right, sigma, DecayKind::Exponential, fitted_rate))
}

/// Construct the transonic boundary layer of amplitude `delta_target`.
///
/// The attracting side of the saddle-node is found from the sign of the
/// quadratic coefficient of the center flow; the profile decays like
/// `1/(1 + δ^B ξ)` and the domain extends to `tail_factor / δ^B` by default.
pub fn solve_transonic_bl(
    right: &State,
    g: &GasModel,
    delta_target: f64,
    grid: &XiGridSpec,
    cfg: &BlConfig,
) -> Result<BlProfile, CoreError> {
    if classify_bl_existence(right, g, thermo::TRANSONIC_TOL) != BlCase::TransonicSaddleNode {
        return Err(CoreError::NoBoundaryLayer("right state is not transonic"));
    }
    if !(delta_target >= 0.0) || delta_target > cfg.smallness {
        return Err(CoreError::InvalidParameter(
            "delta_target must lie in [0, smallness]",
        ));
    }
    let sigma = -right.u / right.v;
    if delta_target == 0.0 {
        return Ok(constant_profile(*right, sigma, grid, DecayKind::Algebraic));
    }
    let lin = build_linearization(right, g)?;
    let q2 = center_quadratic_coefficient(&lin, right, g);
    if q2 == 0.0 {
        return Err(CoreError::NoBoundaryLayer("degenerate center flow"));
    }
    let branch_sign = if q2 > 0.0 { -1.0 } else { 1.0 };
    let v2 = lin.slow_eigenvector();
    let v2_norm = math::norm2(v2[0], v2[1]);
    let xi_max = grid.xi_max.unwrap_or(cfg.tail_factor / delta_target);

    // Start far enough down the center manifold that the backward sweep
    // covers [0, xi_max] before hitting the target amplitude.
    let c_bar = math::abs(q2) / v2_norm;
    let mut a_start = delta_target / (3.0 * (1.0 + c_bar * delta_target * xi_max));
    for _ in 0..4 {
        let w_start = [0.0, branch_sign * a_start / v2_norm];
        let s_max = 8.0 * (xi_max + 1.0 / (c_bar * a_start));
        let run =
            backward_to_amplitude(&lin, right, sigma, g, w_start, delta_target, s_max, cfg.rtol)?;
        if run.len < xi_max {
            a_start /= 10.0;
            continue;
        }
        let len = run.len;
        let n = grid.n.max(8);
        let h = xi_max / (n - 1) as f64;
        let mut xi = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        let mut w2_abs = Vec::with_capacity(n);
        for j in 0..n {
            let x_j = j as f64 * h;
            xi.push(x_j);
            let w = run.traj.sample(len - x_j);
            w2_abs.push(math::abs(w[1]));
            let x = lin.from_w(w);
            u.push(right.u + x[0]);
            theta.push(right.theta + x[1]);
        }
        // Log-log slope of |W₂| over the decade δξ in [10, 100].
        let mut fit_x = Vec::new();
        let mut fit_y = Vec::new();
        for j in 1..n {
            let dxi = delta_target * xi[j];
            if dxi >= 10.0 && dxi <= 100.0 && w2_abs[j] > 1e-300 {
                fit_x.push(math::ln(xi[j]));
                fit_y.push(math::ln(w2_abs[j]));
            }
        }
        let fitted_rate = if fit_x.len() >= 2 {
            linear_fit(&fit_x, &fit_y).0
        } else {
            -1.0
        };
        return Ok(build_profile(xi, u, theta, *right, sigma, DecayKind::Algebraic, fitted_rate));
    }
    Err(CoreError::NoBoundaryLayer(
        "could not cover the requested domain from the center manifold",
    ))
}

/// Signed membership defect of a boundary datum (u₋, θ₋) with respect to
/// the stable manifold of `right`: the θ-offset between the datum and the
/// manifold branch at matching U, normalized by the datum amplitude.
///
/// Errors when the datum amplitude exceeds the smallness threshold or no
/// manifold exists. For transonic states a datum on the repelling side is
/// reported as nonexistence.
pub fn manifold_defect(
    right: &State,
    g: &GasModel,
    u_minus: f64,
    theta_minus: f64,
    cfg: &BlConfig,
) -> Result<f64, CoreError> {
    let datum = [u_minus - right.u, theta_minus - right.theta];
    let amplitude = math::norm2(datum[0], datum[1]);
    if amplitude == 0.0 {
        return Ok(0.0);
    }
    if amplitude > cfg.smallness {
        return Err(CoreError::InvalidParameter("datum amplitude above smallness"));
    }
    let case = classify_bl_existence(right, g, thermo::TRANSONIC_TOL);
    let lin = build_linearization(right, g)?;
    let sigma = -right.u / right.v;
    let v2 = lin.slow_eigenvector();
    let v2_norm = math::norm2(v2[0], v2[1]);
    let w_datum = lin.to_w(datum);
    let (branch_sign, eps_rel) = match case {
        BlCase::SubsonicSaddle => {
            // Walk the branch whose velocity offset has the datum's sign, so
            // the U-crossing below always exists; for a pure temperature
            // offset fall back to the θ-component.
            let sign = if datum[0] != 0.0 {
                datum[0].signum() * v2[0].signum()
            } else {
                datum[1].signum() * v2[1].signum()
            };
            (sign, cfg.eps_off_rel)
        }
        BlCase::TransonicSaddleNode => {
            let q2 = center_quadratic_coefficient(&lin, right, g);
            let attracting = if q2 > 0.0 { -1.0 } else { 1.0 };
            if w_datum[1] * attracting <= 0.0 {
                return Err(CoreError::NoBoundaryLayer(
                    "datum lies on the repelling side of the saddle-node",
                ));
            }
            // Offset chosen relative to the target amplitude but far enough
            // down the algebraic tail to converge onto the manifold.
            (attracting, 1e-3)
        }
        _ => return Err(CoreError::NoBoundaryLayer("no manifold in this regime")),
    };
    let target_u = datum[0];
    if target_u == 0.0 {
        // The branch passes through the equilibrium, where Θ̄ = 0.
        return Ok(datum[1] / amplitude);
    }
    let eps_off = eps_rel * amplitude;
    let w_start = [0.0, branch_sign * eps_off / v2_norm];
    let rate_guess = math::max(math::abs(lin.lam2), 1e-3 * lin.lam1);
    let s_max = match case {
        BlCase::SubsonicSaddle => {
            40.0 * math::ln(amplitude / eps_off) / rate_guess + 100.0 / rate_guess
        }
        _ => {
            let q2 = center_quadratic_coefficient(&lin, right, g);
            8.0 / (math::abs(q2) / v2_norm * eps_off)
        }
    };
    // Integrate backward until the trajectory's velocity offset reaches the
    // datum's, or escapes far beyond the datum amplitude.
    let field = |w: V2| -> V2 {
        let x = lin.from_w(w);
        let f = rhs(right.u + x[0], right.theta + x[1], right, sigma, g);
        [
            -(lin.p_inv[0][0] * f[0] + lin.p_inv[0][1] * f[1]),
            -(lin.p_inv[1][0] * f[0] + lin.p_inv[1][1] * f[1]),
        ]
    };
    let dir = target_u.signum();
    let crossed = |w: V2| -> bool {
        let x = lin.from_w(w);
        (x[0] - target_u) * dir >= 0.0
    };
    let escaped = |w: V2| -> bool {
        let x = lin.from_w(w);
        math::norm2(x[0], x[1]) > 50.0 * amplitude
    };
    let rk = AdaptiveRk { rtol: cfg.rtol, atol: 1e-18 * amplitude };
    let (traj, stopped) = rk.integrate(field, w_start, s_max, |w| crossed(w) || escaped(w));
    let last = traj.nodes.last().unwrap().y;
    if !stopped || !crossed(last) {
        return Err(CoreError::NotOnWaveCurve(
            "manifold branch never reaches the datum velocity",
        ));
    }
    // Bisect the crossing arc inside the final step.
    let n = traj.nodes.len();
    let (mut lo, mut hi) = (traj.nodes[n.saturating_sub(2)].s, traj.nodes[n - 1].s);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if crossed(traj.sample(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = lin.from_w(traj.sample(0.5 * (lo + hi)));
    Ok(((theta_minus - right.theta) - x[1]) / amplitude)
}

/// Whether a boundary datum lies on the stable manifold, at relative
/// tolerance `tol` (distance / amplitude).
pub fn datum_on_manifold(
    right: &State,
    g: &GasModel,
    u_minus: f64,
    theta_minus: f64,
    tol: f64,
    cfg: &BlConfig,
) -> Result<bool, CoreError> {
    match manifold_defect(right, g, u_minus, theta_minus, cfg) {
        Ok(defect) => Ok(math::abs(defect) <= tol),
        Err(CoreError::NotOnWaveCurve(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Sup and L² norms of the defect of the two profile equations, computed
/// with fourth-order finite differences of the tabulated values.
#[derive(Debug, Clone, Copy)]
pub struct BlResidual {
    pub sup: [f64; 2],
    pub l2: [f64; 2],
}

pub fn bl_residual(p: &BlProfile, g: &GasModel) -> Result<BlResidual, CoreError> {
    let n = p.xi.len();
    if n < 5 {
        return Err(CoreError::GridTooCoarse { needed: 5, got: n });
    }
    let h = p.h();
    let du = fd_derivative(&p.u, h);
    let dtheta = fd_derivative(&p.theta, h);
    let mut sup = [0.0f64; 2];
    let mut sumsq = [0.0f64; 2];
    for j in 0..n {
        let f = rhs(p.u[j], p.theta[j], &p.right, p.sigma_minus, g);
        let r1 = du[j] - f[0];
        let r2 = dtheta[j] - f[1];
        sup[0] = math::max(sup[0], math::abs(r1));
        sup[1] = math::max(sup[1], math::abs(r2));
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        sumsq[0] += w * r1 * r1 * h;
        sumsq[1] += w * r2 * r2 * h;
    }
    Ok(BlResidual { sup, l2: [math::sqrt(sumsq[0]), math::sqrt(sumsq[1])] })
}

/// Fourth-order first derivative on a uniform grid (5-point stencils,
/// one-sided at the ends).
pub(crate) fn fd_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    debug_assert!(n >= 5);
    let mut d = Vec::with_capacity(n);
    d.resize(n, 0.0);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for j in 2..n - 2 {
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
        / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / (12.0 * h);
    d
}
