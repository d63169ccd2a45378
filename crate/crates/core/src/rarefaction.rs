//! Smoothed 3-rarefaction built from an exact Burgers solution.
//!
//! The Burgers problem
//!
//! ```text
//! w_t + w w_x = 0,   w(0, x) = w₋  (x < 0),
//!                    w(0, x) = w₋ + C_q δ^r ∫₀^{εx} y^q e^{-y} dy  (x ≥ 0)
//! ```
//!
//! has a global smooth solution because the datum is nondecreasing; it is
//! evaluated pointwise by solving the characteristic relation
//! `w = w₀(x - w t)` with a monotone root find. The gas-dynamic wave reads
//! the volume from `w(1+t, x) = λ₃(V^R, s₊)` along the isentrope through
//! the right state, with velocity from the closed-form integral of λ₃, so
//! the 3-Riemann invariant is constant to rounding.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::special;
use crate::thermo::{self, GasModel, State};

/// Smoothed nondecreasing Burgers datum connecting w₋ to w₊.
#[derive(Debug, Clone, Copy)]
pub struct BurgersData {
    pub w_minus: f64,
    pub w_plus: f64,
    /// δ^r = w₊ - w₋ ≥ 0.
    pub delta_r: f64,
    /// Smoothing parameter ε ∈ (0, 1].
    pub eps: f64,
    /// Integer exponent q ≥ 16 of the mollified step.
    pub q: u32,
    ln_gamma_q1: f64,
}

/// Default smoothing parameters.
pub const DEFAULT_Q: u32 = 16;
pub const DEFAULT_EPS: f64 = 0.1;

impl BurgersData {
    pub fn new(w_minus: f64, w_plus: f64, eps: f64, q: u32) -> Result<Self, CoreError> {
        if !(w_minus > 0.0) || w_plus < w_minus {
            return Err(CoreError::InvalidParameter("need 0 < w_- <= w_+"));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CoreError::InvalidParameter("eps must lie in (0, 1]"));
        }
        if q < 16 {
            return Err(CoreError::InvalidParameter("q must be at least 16"));
        }
        Ok(BurgersData {
            w_minus,
            w_plus,
            delta_r: w_plus - w_minus,
            eps,
            q,
            ln_gamma_q1: special::ln_factorial(q),
        })
    }

    /// The initial datum w₀(x).
    pub fn w0(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.w_minus;
        }
        let p = special::reg_lower_gamma((self.q + 1) as f64, self.ln_gamma_q1, self.eps * x);
        self.w_minus + self.delta_r * p
    }

    /// w₀'(x) = C_q δ^r ε (εx)^q e^{-εx}.
    pub fn w0_prime(&self, x: f64) -> f64 {
        if x <= 0.0 || self.delta_r == 0.0 {
            return 0.0;
        }
        let y = self.eps * x;
        self.delta_r
            * self.eps
            * math::exp(self.q as f64 * math::ln(y) - y - self.ln_gamma_q1)
    }

    /// w₀''(x).
    pub fn w0_second(&self, x: f64) -> f64 {
        if x <= 0.0 || self.delta_r == 0.0 {
            return 0.0;
        }
        let y = self.eps * x;
        self.delta_r
            * self.eps
            * self.eps
            * math::exp((self.q as f64 - 1.0) * math::ln(y) - y - self.ln_gamma_q1)
            * (self.q as f64 - y)
    }

    /// Datum abscissa beyond which 1 - P(q+1, εx) is below roundoff.
    pub fn head_x(&self) -> f64 {
        (self.q as f64 + 46.0 + 10.0 * math::sqrt(self.q as f64)) / self.eps
    }
}

/// Exact smooth Burgers solution at time `t ≥ 0` (the Burgers time itself;
/// the gas wave evaluates at 1 + t), by the characteristic relation.
pub fn solve_burgers(d: &BurgersData, t: f64, x: f64) -> f64 {
    solve_characteristic(d, t, x).0
}

/// Returns (w, x₀) with w = w₀(x₀) and x₀ + w₀(x₀) t = x.
fn solve_characteristic(d: &BurgersData, t: f64, x: f64) -> (f64, f64) {
    debug_assert!(t >= 0.0);
    if t == 0.0 || d.delta_r == 0.0 {
        return (d.w0(x), x);
    }
    // Constant region ahead of the foot: exact.
    if x <= d.w_minus * t {
        return (d.w_minus, x - d.w_minus * t);
    }
    let mut lo = x - d.w_plus * t;
    let mut hi = x - d.w_minus * t;
    let scale = math::abs(x) + d.w_plus * t + 1.0;
    let g = |x0: f64| x0 + d.w0(x0) * t - x;
    // Bisection, then Newton polish on the strictly increasing map.
    for _ in 0..60 {
        if hi - lo <= 1e-13 * scale {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x0 = 0.5 * (lo + hi);
    for _ in 0..2 {
        let slope = 1.0 + d.w0_prime(x0) * t;
        x0 -= g(x0) / slope;
    }
    (d.w0(x0), x0)
}

/// w and its (x, t) derivatives from the characteristic geometry:
/// w_x = w₀'/(1 + t w₀'), w_xx = w₀''/(1 + t w₀')³, w_t = -w w_x.
pub fn burgers_derivatives(d: &BurgersData, t: f64, x: f64) -> (f64, f64, f64) {
    let (w, x0) = solve_characteristic(d, t, x);
    let wp = d.w0_prime(x0);
    let denom = 1.0 + wp * t;
    let w_x = wp / denom;
    let w_xx = d.w0_second(x0) / (denom * denom * denom);
    (w, w_x, w_xx)
}

/// The smoothed 3-rarefaction wave: Burgers data plus the isentrope maps.
#[derive(Debug, Clone)]
pub struct RarefactionWave {
    pub burgers: BurgersData,
    pub right: State,
    pub s_plus: f64,
    /// State at the left edge of the fan (the wave-curve anchor).
    pub left_star: State,
    /// K with λ₃(v, s₊) = K v^{-(γ+1)/2}.
    lambda_coef: f64,
    gamma: f64,
}

impl RarefactionWave {
    /// Wave joining the state of volume `v_left ≥ v₊` on the isentrope of
    /// `right` (its left edge) to `right` itself.
    pub fn build(
        v_left: f64,
        right: State,
        g: &GasModel,
        eps: f64,
        q: u32,
    ) -> Result<Self, CoreError> {
        if v_left < right.v {
            return Err(CoreError::NotOnWaveCurve("left volume must exceed v_+"));
        }
        let s_plus = thermo::entropy(&right, g);
        let lambda_coef = thermo::lambda3_coefficient(s_plus, g);
        let w_plus = thermo::lambda3_of_vs(right.v, s_plus, g);
        let w_minus = thermo::lambda3_of_vs(v_left, s_plus, g);
        let burgers = BurgersData::new(w_minus, w_plus, eps, q)?;
        let mut wave = RarefactionWave {
            burgers,
            right,
            s_plus,
            left_star: right,
            lambda_coef,
            gamma: g.gamma,
        };
        let (v, u, theta) = wave.state_from_w(w_minus);
        wave.left_star = State { v, u, theta };
        Ok(wave)
    }

    /// Amplitude |(v₊,u₊,θ₊) - (v*,u*,θ*)|.
    pub fn delta_big_r(&self) -> f64 {
        let dv = self.right.v - self.left_star.v;
        let du = self.right.u - self.left_star.u;
        let dth = self.right.theta - self.left_star.theta;
        math::sqrt(dv * dv + du * du + dth * dth)
    }

    /// Map a characteristic speed w ∈ [w₋, w₊] to (V, U, Θ) along the
    /// isentrope; the velocity uses the closed-form integral of λ₃, so
    /// U - 2c/(γ-1) is constant to rounding.
    pub fn state_from_w(&self, w: f64) -> (f64, f64, f64) {
        let gamma = self.gamma;
        let v = math::powf(self.lambda_coef / w, 2.0 / (gamma + 1.0));
        let theta = self.right.theta * math::powf(self.right.v / v, gamma - 1.0);
        // Sound speed c = v λ₃.
        let c_here = w * v;
        let c_plus = self.burgers.w_plus * self.right.v;
        let u = self.right.u + 2.0 / (gamma - 1.0) * (c_here - c_plus);
        (v, u, theta)
    }
}

/// Wave values (V^R, U^R, Θ^R) at half-line coordinates (t, ξ), with
/// x = ξ + σ₋ t and the Burgers solution taken at time 1 + t.
pub fn rarefaction_state(
    r: &RarefactionWave,
    t: f64,
    xi: f64,
    sigma_minus: f64,
    _g: &GasModel,
) -> (f64, f64, f64) {
    let x = xi + sigma_minus * t;
    let w = solve_burgers(&r.burgers, 1.0 + t, x);
    r.state_from_w(w)
}

/// Fields and ξ-frame derivatives of the rarefaction, all in closed form
/// through the characteristic geometry and the isentrope maps.
#[derive(Debug, Clone, Copy)]
pub struct RarefactionDerivs {
    pub w: f64,
    pub w_xi: f64,
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub v_xi: f64,
    pub u_xi: f64,
    pub theta_xi: f64,
    pub v_t: f64,
    pub u_t: f64,
    pub theta_t: f64,
    pub v_xixi: f64,
    pub u_xixi: f64,
    pub theta_xixi: f64,
    pub p: f64,
    pub p_xi: f64,
}

pub fn rarefaction_derivatives(
    r: &RarefactionWave,
    t: f64,
    xi: f64,
    sigma_minus: f64,
    g: &GasModel,
) -> RarefactionDerivs {
    let x = xi + sigma_minus * t;
    let big_t = 1.0 + t;
    let (w, w_x, w_xx) = burgers_derivatives(&r.burgers, big_t, x);
    let (v, u, theta) = r.state_from_w(w);
    let b = 2.0 / (r.gamma + 1.0);
    let v_w = -b * v / w;
    let v_ww = b * (b + 1.0) * v / (w * w);
    let v_xi = v_w * w_x;
    let v_xixi = v_ww * w_x * w_x + v_w * w_xx;
    let u_xi = -w * v_xi;
    let u_xixi = -w_x * v_xi - w * v_xixi;
    let th_over_v = (1.0 - r.gamma) * theta / v;
    let theta_xi = th_over_v * v_xi;
    let theta_xixi = (1.0 - r.gamma) * ((theta_xi * v - theta * v_xi) / (v * v)) * v_xi
        + th_over_v * v_xixi;
    // ξ-frame time derivative of w: w_T + σ w_x with w_T = -w w_x.
    let w_t = (sigma_minus - w) * w_x;
    let v_t = v_w * w_t;
    let u_t = -w * v_t;
    let theta_t = th_over_v * v_t;
    let p = g.r * theta / v;
    let p_xi = g.r * (theta_xi * v - theta * v_xi) / (v * v);
    RarefactionDerivs {
        w,
        w_xi: w_x,
        v,
        u,
        theta,
        v_xi,
        u_xi,
        theta_xi,
        v_t,
        u_t,
        theta_t,
        v_xixi,
        u_xixi,
        theta_xixi,
        p,
        p_xi,
    }
}

/// Measured L¹/L²/L∞ norms of the first and second ξ-derivative magnitudes
/// at one time, with the theoretical envelopes.
#[derive(Debug, Clone, Copy)]
pub struct BoundsSample {
    pub t: f64,
    /// ‖ |(V_ξ, U_ξ, Θ_ξ)| ‖ for p = 1, 2, ∞.
    pub first: [f64; 3],
    /// ‖ |(V_ξξ, U_ξξ, Θ_ξξ)| ‖ for p = 1, 2, ∞.
    pub second: [f64; 3],
    /// min{δ ε^{1-1/p}, δ^{1/p} (1+t)^{-1+1/p}} per p.
    pub envelope_first: [f64; 3],
    /// min{δ ε^{2-1/p}, (δ^{1/p} + δ^{1/q}) (1+t)^{-1+1/q}} per p.
    pub envelope_second: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct RarefactionBoundsReport {
    pub samples: Vec<BoundsSample>,
    /// Largest measured/envelope ratio per p over the sampled times.
    pub fitted_first: [f64; 3],
    pub fitted_second: [f64; 3],
    /// Whether measured/envelope drifted upward by more than 2x per p.
    pub drift_flag_first: [bool; 3],
    pub drift_flag_second: [bool; 3],
}

/// Measure the derivative norms of the wave at the given times against the
/// q-smoothing/time-decay envelopes and flag upward ratio drift.
pub fn verify_rarefaction_bounds(
    r: &RarefactionWave,
    times: &[f64],
    sigma_minus: f64,
    g: &GasModel,
) -> RarefactionBoundsReport {
    let d = &r.burgers;
    let delta = d.delta_r.max(1e-300);
    let q = d.q as f64;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let big_t = 1.0 + t;
        // Cover the wave support in ξ: x from the foot to the datum head
        // plus the fastest characteristic.
        let x_lo = d.w_minus * big_t - 1.0;
        let x_hi = d.head_x() + d.w_plus * big_t + 1.0;
        let n = 4001;
        let h = (x_hi - x_lo) / (n - 1) as f64;
        let mut first = [0.0f64; 3];
        let mut second = [0.0f64; 3];
        for i in 0..n {
            let x = x_lo + h * i as f64;
            let xi = x - sigma_minus * t;
            let dv = rarefaction_derivatives(r, t, xi, sigma_minus, g);
            let g1 = math::sqrt(
                dv.v_xi * dv.v_xi + dv.u_xi * dv.u_xi + dv.theta_xi * dv.theta_xi,
            );
            let g2 = math::sqrt(
                dv.v_xixi * dv.v_xixi + dv.u_xixi * dv.u_xixi + dv.theta_xixi * dv.theta_xixi,
            );
            let wt = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            first[0] += wt * g1 * h;
            first[1] += wt * g1 * g1 * h;
            first[2] = math::max(first[2], g1);
            second[0] += wt * g2 * h;
            second[1] += wt * g2 * g2 * h;
            second[2] = math::max(second[2], g2);
        }
        first[1] = math::sqrt(first[1]);
        second[1] = math::sqrt(second[1]);
        let envelope = |p_inv: f64| -> f64 {
            math::min(
                delta * math::powf(d.eps, 1.0 - p_inv),
                math::powf(delta, p_inv) * math::powf(big_t, -1.0 + p_inv),
            )
        };
        let envelope2 = |p_inv: f64| -> f64 {
            math::min(
                delta * math::powf(d.eps, 2.0 - p_inv),
                (math::powf(delta, p_inv) + math::powf(delta, 1.0 / q))
                    * math::powf(big_t, -1.0 + 1.0 / q),
            )
        };
        samples.push(BoundsSample {
            t,
            first,
            second,
            envelope_first: [envelope(1.0), envelope(0.5), envelope(0.0)],
            envelope_second: [envelope2(1.0), envelope2(0.5), envelope2(0.0)],
        });
    }
    let mut fitted_first = [0.0f64; 3];
    let mut fitted_second = [0.0f64; 3];
    let mut drift_flag_first = [false; 3];
    let mut drift_flag_second = [false; 3];
    for p in 0..3 {
        let ratios_1: Vec<f64> =
            samples.iter().map(|s| s.first[p] / s.envelope_first[p]).collect();
        let ratios_2: Vec<f64> =
            samples.iter().map(|s| s.second[p] / s.envelope_second[p]).collect();
        fitted_first[p] = ratios_1.iter().cloned().fold(0.0, math::max);
        fitted_second[p] = ratios_2.iter().cloned().fold(0.0, math::max);
        drift_flag_first[p] = drifts_upward(&ratios_1);
        drift_flag_second[p] = drifts_upward(&ratios_2);
    }
    RarefactionBoundsReport {
        samples,
        fitted_first,
        fitted_second,
        drift_flag_first,
        drift_flag_second,
    }
}

/// True when later ratios exceed twice an earlier ratio.
fn drifts_upward(ratios: &[f64]) -> bool {
    let mut min_seen = f64::INFINITY;
    for &r in ratios {
        if r > 2.0 * min_seen {
            return true;
        }
        min_seen = math::min(min_seen, r);
    }
    false
}
