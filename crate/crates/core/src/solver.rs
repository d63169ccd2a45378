//! Explicit finite-difference solver for the half-line problem in the
//! moving-boundary frame:
//!
//! ```text
//! v_t - σ₋ v_ξ - u_ξ = 0
//! u_t - σ₋ u_ξ + p_ξ = μ (u_ξ/v)_ξ
//! θ_t - σ₋ θ_ξ = (γ-1)/R [ -p u_ξ + κ (θ_ξ/v)_ξ + μ u_ξ²/v ]
//! ```
//!
//! Spatial derivatives: the σ₋ drift uses a second-order upwind-biased
//! stencil (σ₋ < 0, so the stencil leans right), pressure and velocity
//! gradients are centered, and the diffusion operators use conservative
//! flux differences with interface-averaged 1/v. Time stepping is
//! three-stage SSP Runge-Kutta with an advective/parabolic step-size bound;
//! the inflow node is reset after every stage.

use alloc::vec::Vec;

use crate::composition::{evaluate_superposition, SuperpositionWave};
use crate::contact::{evaluate_contact, ContactWave};
use crate::error::CoreError;
use crate::math;
use crate::thermo::{GasModel, State};

/// Uniform half-line grid with node 0 on the boundary.
#[derive(Debug, Clone, Copy)]
pub struct Grid1D {
    pub xi_max: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(xi_max: f64, n: usize) -> Result<Self, CoreError> {
        if n < 16 {
            return Err(CoreError::GridTooCoarse { needed: 16, got: n });
        }
        if !(xi_max > 0.0) {
            return Err(CoreError::InvalidParameter("xi_max must be positive"));
        }
        Ok(Grid1D { xi_max, n, h: xi_max / (n - 1) as f64 })
    }

    pub fn node(&self, j: usize) -> f64 {
        self.h * j as f64
    }
}

/// Discrete unknowns on the grid at one time.
#[derive(Debug, Clone)]
pub struct Field {
    pub t: f64,
    pub grid: Grid1D,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Field {
    pub fn constant(grid: Grid1D, state: &State, t: f64) -> Self {
        Field {
            t,
            grid,
            v: alloc::vec![state.v; grid.n],
            u: alloc::vec![state.u; grid.n],
            theta: alloc::vec![state.theta; grid.n],
        }
    }

    /// Sample a wave pattern at time `t` onto the grid.
    pub fn from_wave(wave: &dyn WavePattern, grid: Grid1D, t: f64) -> Self {
        let mut f = Field::constant(grid, &State { v: 1.0, u: 0.0, theta: 1.0 }, t);
        for j in 0..grid.n {
            let (v, u, th) = wave.eval(t, grid.node(j));
            f.v[j] = v;
            f.u[j] = u;
            f.theta[j] = th;
        }
        f
    }

    fn check_positive(&self) -> Result<(), CoreError> {
        for j in 0..self.grid.n {
            if !(self.v[j] > 0.0) || !(self.theta[j] > 0.0) {
                return Err(CoreError::PositivityLoss {
                    t: self.t,
                    xi: self.grid.node(j),
                    v: self.v[j],
                    theta: self.theta[j],
                });
            }
        }
        Ok(())
    }
}

/// Far-field treatment at the last node.
#[derive(Debug, Clone, Copy)]
pub enum FarField {
    /// Zero-gradient extrapolation (default).
    Extrapolation,
    /// Pin the last node to the given state.
    DirichletPlusState(State),
}

/// Time-stepping parameters.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Safety factor in (0, 1].
    pub cfl: f64,
    pub dt_max: f64,
    pub end_time: f64,
    pub far_field: FarField,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(CoreError::InvalidParameter("cfl must lie in (0, 1]"));
        }
        if !(self.dt_max > 0.0) {
            return Err(CoreError::InvalidParameter("dt_max must be positive"));
        }
        Ok(())
    }
}

/// A target wave pattern the solver can measure perturbations against.
pub trait WavePattern {
    fn eval(&self, t: f64, xi: f64) -> (f64, f64, f64);
}

impl WavePattern for SuperpositionWave {
    fn eval(&self, t: f64, xi: f64) -> (f64, f64, f64) {
        evaluate_superposition(self, t, xi)
    }
}

/// A contact wave placed in the moving-boundary frame.
#[derive(Debug, Clone)]
pub struct ContactFrame {
    pub cw: ContactWave,
    pub sigma_minus: f64,
}

impl WavePattern for ContactFrame {
    fn eval(&self, t: f64, xi: f64) -> (f64, f64, f64) {
        evaluate_contact(&self.cw, t, xi, self.sigma_minus)
    }
}

/// Constant far-field pattern (useful for perturbation-decay experiments).
#[derive(Debug, Clone, Copy)]
pub struct ConstantWave(pub State);

impl WavePattern for ConstantWave {
    fn eval(&self, _t: f64, _xi: f64) -> (f64, f64, f64) {
        (self.0.v, self.0.u, self.0.theta)
    }
}

/// Time-dependent boundary data and optional forcing for manufactured runs.
pub struct BoundaryFns<'a> {
    /// (v, u, θ) at ξ = 0.
    pub left: &'a dyn Fn(f64) -> (f64, f64, f64),
    /// Far-field values; `None` means zero-gradient extrapolation.
    pub right: Option<&'a dyn Fn(f64) -> (f64, f64, f64)>,
}

/// Extra right-hand side (t, ξ) → (f_v, f_u, f_θ).
pub type Forcing<'a> = &'a dyn Fn(f64, f64) -> (f64, f64, f64);

/// Stable time step: advective and parabolic restrictions.
pub fn stable_dt(f: &Field, g: &GasModel, sigma: f64, cfg: &SolverConfig) -> f64 {
    let mut lam_max = 0.0f64;
    let mut v_min = f64::INFINITY;
    for j in 0..f.grid.n {
        let p = g.r * f.theta[j] / f.v[j];
        lam_max = math::max(lam_max, math::sqrt(g.gamma * p / f.v[j]));
        v_min = math::min(v_min, f.v[j]);
    }
    let h = f.grid.h;
    let dt_adv = h / (math::abs(sigma) + lam_max);
    let dt_par = h * h * v_min / (2.0 * math::max(g.mu, g.kappa * (g.gamma - 1.0) / g.r));
    math::min(cfg.dt_max, cfg.cfl * math::min(dt_adv, dt_par))
}

/// Semi-discrete right-hand side into (dv, du, dtheta).
#[allow(clippy::too_many_arguments)]
fn rhs(
    f: &Field,
    g: &GasModel,
    sigma: f64,
    t_stage: f64,
    forcing: Option<Forcing<'_>>,
    dv: &mut [f64],
    du: &mut [f64],
    dth: &mut [f64],
) {
    let n = f.grid.n;
    let h = f.grid.h;
    let inv2h = 1.0 / (2.0 * h);
    let invh2 = 1.0 / (h * h);
    let gm1_over_r = (g.gamma - 1.0) / g.r;
    dv[0] = 0.0;
    du[0] = 0.0;
    dth[0] = 0.0;
    dv[n - 1] = 0.0;
    du[n - 1] = 0.0;
    dth[n - 1] = 0.0;
    for j in 1..n - 1 {
        // Drift derivatives: the transport speed -σ₋ is positive, so the
        // second-order upwind stencil leans left; the node next to the
        // inflow boundary falls back to centered.
        let (v_drift, u_drift, th_drift) = if j >= 2 {
            (
                (3.0 * f.v[j] - 4.0 * f.v[j - 1] + f.v[j - 2]) * inv2h,
                (3.0 * f.u[j] - 4.0 * f.u[j - 1] + f.u[j - 2]) * inv2h,
                (3.0 * f.theta[j] - 4.0 * f.theta[j - 1] + f.theta[j - 2]) * inv2h,
            )
        } else {
            (
                (f.v[j + 1] - f.v[j - 1]) * inv2h,
                (f.u[j + 1] - f.u[j - 1]) * inv2h,
                (f.theta[j + 1] - f.theta[j - 1]) * inv2h,
            )
        };
        let u_xi = (f.u[j + 1] - f.u[j - 1]) * inv2h;
        let p_prev = g.r * f.theta[j - 1] / f.v[j - 1];
        let p_next = g.r * f.theta[j + 1] / f.v[j + 1];
        let p_here = g.r * f.theta[j] / f.v[j];
        let p_xi = (p_next - p_prev) * inv2h;
        let v_plus = 0.5 * (f.v[j] + f.v[j + 1]);
        let v_minus = 0.5 * (f.v[j - 1] + f.v[j]);
        let visc = g.mu
            * ((f.u[j + 1] - f.u[j]) / v_plus - (f.u[j] - f.u[j - 1]) / v_minus)
            * invh2;
        let heat = g.kappa
            * ((f.theta[j + 1] - f.theta[j]) / v_plus - (f.theta[j] - f.theta[j - 1]) / v_minus)
            * invh2;
        dv[j] = sigma * v_drift + u_xi;
        du[j] = sigma * u_drift - p_xi + visc;
        dth[j] = sigma * th_drift
            + gm1_over_r * (-p_here * u_xi + heat + g.mu * u_xi * u_xi / f.v[j]);
        if let Some(fc) = forcing {
            let (fv, fu, fth) = fc(t_stage, f.grid.node(j));
            dv[j] += fv;
            du[j] += fu;
            dth[j] += fth;
        }
    }
}

fn apply_boundary(f: &mut Field, t: f64, bc: &BoundaryFns<'_>) {
    let n = f.grid.n;
    let (v0, u0, th0) = (bc.left)(t);
    f.v[0] = v0;
    f.u[0] = u0;
    f.theta[0] = th0;
    match bc.right {
        Some(right) => {
            let (v, u, th) = right(t);
            f.v[n - 1] = v;
            f.u[n - 1] = u;
            f.theta[n - 1] = th;
        }
        None => {
            f.v[n - 1] = f.v[n - 2];
            f.u[n - 1] = f.u[n - 2];
            f.theta[n - 1] = f.theta[n - 2];
        }
    }
}

/// One SSP-RK3 step with explicit boundary functions and optional forcing;
/// returns the step size taken. The drift speed σ₋ is a fixed coefficient
/// of the moving-frame equations.
pub fn step_custom(
    f: &mut Field,
    g: &GasModel,
    sigma: f64,
    cfg: &SolverConfig,
    bc: &BoundaryFns<'_>,
    forcing: Option<Forcing<'_>>,
    dt_cap: Option<f64>,
) -> Result<f64, CoreError> {
    cfg.validate()?;
    f.check_positive()?;
    let mut dt = stable_dt(f, g, sigma, cfg);
    if let Some(cap) = dt_cap {
        dt = math::min(dt, cap);
    }
    if !(dt > 1e-13 * math::max(1.0, f.t)) {
        return Err(CoreError::TimeStepUnderflow { t: f.t, dt });
    }
    let n = f.grid.n;
    let t0 = f.t;
    let mut dv = alloc::vec![0.0; n];
    let mut du = alloc::vec![0.0; n];
    let mut dth = alloc::vec![0.0; n];

    // Stage 1: y1 = y + dt L(y, t0), boundary at t0 + dt.
    let base = f.clone();
    rhs(&base, g, sigma, t0, forcing, &mut dv, &mut du, &mut dth);
    for j in 0..n {
        f.v[j] = base.v[j] + dt * dv[j];
        f.u[j] = base.u[j] + dt * du[j];
        f.theta[j] = base.theta[j] + dt * dth[j];
    }
    f.t = t0 + dt;
    apply_boundary(f, f.t, bc);
    f.check_positive()?;

    // Stage 2: y2 = 3/4 y + 1/4 (y1 + dt L(y1, t0 + dt)), boundary at t0 + dt/2.
    rhs(f, g, sigma, t0 + dt, forcing, &mut dv, &mut du, &mut dth);
    for j in 0..n {
        f.v[j] = 0.75 * base.v[j] + 0.25 * (f.v[j] + dt * dv[j]);
        f.u[j] = 0.75 * base.u[j] + 0.25 * (f.u[j] + dt * du[j]);
        f.theta[j] = 0.75 * base.theta[j] + 0.25 * (f.theta[j] + dt * dth[j]);
    }
    f.t = t0 + 0.5 * dt;
    apply_boundary(f, f.t, bc);
    f.check_positive()?;

    // Stage 3: y = 1/3 y + 2/3 (y2 + dt L(y2, t0 + dt/2)), boundary at t0 + dt.
    rhs(f, g, sigma, t0 + 0.5 * dt, forcing, &mut dv, &mut du, &mut dth);
    for j in 0..n {
        f.v[j] = base.v[j] / 3.0 + 2.0 / 3.0 * (f.v[j] + dt * dv[j]);
        f.u[j] = base.u[j] / 3.0 + 2.0 / 3.0 * (f.u[j] + dt * du[j]);
        f.theta[j] = base.theta[j] / 3.0 + 2.0 / 3.0 * (f.theta[j] + dt * dth[j]);
    }
    f.t = t0 + dt;
    apply_boundary(f, f.t, bc);
    f.check_positive()?;
    Ok(dt)
}

/// One step of the inflow problem with constant boundary data `minus` and
/// the configured far-field treatment.
pub fn step(
    f: &mut Field,
    g: &GasModel,
    minus: &State,
    cfg: &SolverConfig,
) -> Result<f64, CoreError> {
    let sigma = -minus.u / minus.v;
    let left = move |_t: f64| (minus.v, minus.u, minus.theta);
    match cfg.far_field {
        FarField::Extrapolation => {
            let bc = BoundaryFns { left: &left, right: None };
            step_custom(f, g, sigma, cfg, &bc, None, None)
        }
        FarField::DirichletPlusState(plus) => {
            let right = move |_t: f64| (plus.v, plus.u, plus.theta);
            let bc = BoundaryFns { left: &left, right: Some(&right) };
            step_custom(f, g, sigma, cfg, &bc, None, None)
        }
    }
}

/// Pointwise perturbation (φ, ψ, ζ) = field - wave and its discrete norms.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub l2: f64,
    pub h1: f64,
    pub sup: f64,
    /// |(φ, ψ, ζ)| at the boundary node.
    pub boundary: f64,
}

/// One entry of the norm time series.
#[derive(Debug, Clone, Copy)]
pub struct NormSample {
    pub t: f64,
    pub l2: f64,
    pub h1: f64,
    pub sup: f64,
    /// Running sup over time of the squared H¹ norm.
    pub n_running: f64,
    pub boundary: f64,
}

/// Time series of perturbation norms with the running sup functional.
#[derive(Debug, Clone, Default)]
pub struct NormSeries {
    pub samples: Vec<NormSample>,
}

impl NormSeries {
    pub fn push(&mut self, t: f64, p: &Perturbation) {
        let prev = self.samples.last().map(|s| s.n_running).unwrap_or(0.0);
        self.samples.push(NormSample {
            t,
            l2: p.l2,
            h1: p.h1,
            sup: p.sup,
            n_running: math::max(prev, p.h1 * p.h1),
            boundary: p.boundary,
        });
    }
}

/// Difference between a field and the wave pattern at the field's time,
/// with trapezoid L², H¹ (one-sided differences at the ends) and sup norms.
pub fn compute_perturbation(f: &Field, wave: &dyn WavePattern) -> Perturbation {
    let n = f.grid.n;
    let h = f.grid.h;
    let mut phi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    let mut zeta = Vec::with_capacity(n);
    for j in 0..n {
        let (v, u, th) = wave.eval(f.t, f.grid.node(j));
        phi.push(f.v[j] - v);
        psi.push(f.u[j] - u);
        zeta.push(f.theta[j] - th);
    }
    let mut sq_value = 0.0;
    let mut sq_deriv = 0.0;
    let mut sup = 0.0f64;
    let deriv = |w: &[f64], j: usize| -> f64 {
        if j == 0 {
            (w[1] - w[0]) / h
        } else if j == n - 1 {
            (w[n - 1] - w[n - 2]) / h
        } else {
            (w[j + 1] - w[j - 1]) / (2.0 * h)
        }
    };
    for j in 0..n {
        let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        let val2 = phi[j] * phi[j] + psi[j] * psi[j] + zeta[j] * zeta[j];
        let der2 = {
            let dp = deriv(&phi, j);
            let ds = deriv(&psi, j);
            let dz = deriv(&zeta, j);
            dp * dp + ds * ds + dz * dz
        };
        sq_value += wt * val2 * h;
        sq_deriv += wt * der2 * h;
        sup = math::max(sup, math::abs(phi[j]));
        sup = math::max(sup, math::abs(psi[j]));
        sup = math::max(sup, math::abs(zeta[j]));
    }
    let l2 = math::sqrt(sq_value);
    let h1 = math::sqrt(sq_value + sq_deriv);
    let boundary = math::sqrt(phi[0] * phi[0] + psi[0] * psi[0] + zeta[0] * zeta[0]);
    Perturbation { phi, psi, zeta, l2, h1, sup, boundary }
}

/// A stored snapshot of a run.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub field: Field,
    pub perturbation: Perturbation,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub snapshots: Vec<Snapshot>,
    pub norms: NormSeries,
}

/// Integrate the inflow problem from `initial` to `cfg.end_time`, sampling
/// the perturbation against `wave` at the given times (which must be
/// nondecreasing; the end time is always sampled).
pub fn run(
    mut field: Field,
    wave: &dyn WavePattern,
    g: &GasModel,
    minus: &State,
    cfg: &SolverConfig,
    sample_times: &[f64],
) -> Result<RunResult, CoreError> {
    cfg.validate()?;
    // Corner compatibility of the initial data.
    let scale = minus.v.max(minus.u.abs()).max(minus.theta);
    if (field.v[0] - minus.v).abs() > 1e-9 * scale
        || (field.u[0] - minus.u).abs() > 1e-9 * scale
        || (field.theta[0] - minus.theta).abs() > 1e-9 * scale
    {
        return Err(CoreError::InvalidParameter(
            "initial data incompatible with the boundary state at xi = 0",
        ));
    }
    let sigma = -minus.u / minus.v;
    let left = move |_t: f64| (minus.v, minus.u, minus.theta);
    let right_state = match cfg.far_field {
        FarField::DirichletPlusState(p) => Some(p),
        FarField::Extrapolation => None,
    };
    let mut result = RunResult { snapshots: Vec::new(), norms: NormSeries::default() };
    let record = |f: &Field, res: &mut RunResult| {
        let p = compute_perturbation(f, wave);
        res.norms.push(f.t, &p);
        res.snapshots.push(Snapshot { field: f.clone(), perturbation: p });
    };
    let mut targets: Vec<f64> = sample_times
        .iter()
        .cloned()
        .filter(|&t| t > field.t && t <= cfg.end_time)
        .collect();
    targets.push(cfg.end_time);
    record(&field, &mut result);
    for &target in &targets {
        while field.t < target - 1e-12 {
            let cap = target - field.t;
            let dt = {
                let bc_right_holder;
                let bc = match right_state {
                    Some(p) => {
                        bc_right_holder = move |_t: f64| (p.v, p.u, p.theta);
                        BoundaryFns { left: &left, right: Some(&bc_right_holder) }
                    }
                    None => BoundaryFns { left: &left, right: None },
                };
                step_custom(&mut field, g, sigma, cfg, &bc, None, Some(cap))?
            };
            let _ = dt;
        }
        record(&field, &mut result);
    }
    Ok(result)
}
