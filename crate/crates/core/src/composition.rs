//! Wave-curve algebra and the superposition wave.
//!
//! Boundary data (v₋, u₋, θ₋) decompose as boundary layer + contact +
//! 3-rarefaction when there are intermediate states
//!
//! ```text
//! (v₋,u₋,θ₋) ∈ BL(v_*,u_*,θ_*),  (v_*,u_*,θ_*) ∈ CD(v*,u*,θ*),
//! (v*,u*,θ*) ∈ R₃(v₊,u₊,θ₊)
//! ```
//!
//! with u_* = u*, p_* = p*. Given u_*, every other quantity is determined
//! in closed form along the wave curves; u_* itself is pinned by requiring
//! the boundary datum to lie on the stable manifold of the star state,
//! which reduces the decomposition to a one-dimensional root find.
//!
//! The intermediate volumes v* and θ* are computed from the primitive curve
//! relations (entropy and the λ₃ integral), not from a pre-expanded display
//! formula; `star_upper_volume_display` exposes the alternative expression
//! for cross-checking.

use crate::boundary_layer::{
    manifold_defect, solve_subsonic_bl, BlConfig, BlProfile, Branch, XiGridSpec,
};
use crate::contact::{contact_defect, contact_derivatives, ContactWave};
use crate::error::CoreError;
use crate::math;
use crate::rarefaction::{rarefaction_derivatives, rarefaction_state, RarefactionWave};
use crate::thermo::{self, GasModel, SonicTag, State, USign};

/// The constant states joining the three wave pieces.
#[derive(Debug, Clone, Copy)]
pub struct IntermediateStates {
    /// (v_*, u_*, θ_*): right state of the boundary layer.
    pub star: State,
    /// (v*, u*, θ*): left edge of the rarefaction.
    pub star_upper: State,
    /// Velocity of the intersection of the BL mass line with the R₃ curve;
    /// u_* = ũ means no contact wave.
    pub u_tilde: f64,
}

/// Tunables of the decomposition solve.
#[derive(Debug, Clone, Copy)]
pub struct DecompositionConfig {
    pub bl: BlConfig,
    /// Tolerance on the (relative) manifold defect at the root.
    pub tol: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        DecompositionConfig { bl: BlConfig::default(), tol: 1e-9 }
    }
}

/// Velocity ũ where the line u = -σ₋ v meets the 3-rarefaction curve of
/// `plus` (in the v ≥ v₊ range), together with the volume there.
pub fn intersection_velocity(
    sigma_minus: f64,
    plus: &State,
    g: &GasModel,
) -> Result<(f64, f64), CoreError> {
    let c_plus = thermo::sound_speed(plus, g);
    let line_at_vplus = -sigma_minus * plus.v;
    if plus.u < line_at_vplus - 1e-14 * plus.u.abs().max(1.0) {
        return Err(CoreError::NoDecomposition(
            "plus state lies below the boundary mass line",
        ));
    }
    // f(v) = -σ₋ v - u(v) is strictly increasing with f(v₊) ≤ 0.
    let u_of = |v: f64| -> f64 {
        let c = c_plus * math::powf(plus.v / v, (g.gamma - 1.0) / 2.0);
        plus.u + 2.0 / (g.gamma - 1.0) * (c - c_plus)
    };
    let f = |v: f64| -sigma_minus * v - u_of(v);
    let mut lo = plus.v;
    let mut hi = plus.v * 2.0;
    let mut guard = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(CoreError::NoDecomposition("mass line never meets the R3 curve"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let v_tilde = 0.5 * (lo + hi);
    Ok((-sigma_minus * v_tilde, v_tilde))
}

/// Closed-form intermediate states for a prescribed u_* (the star volume
/// from the mass line, the upper-star from the primitive R₃ relations, and
/// θ_* from pressure matching).
pub fn intermediates_for_ustar(
    u_star: f64,
    sigma_minus: f64,
    plus: &State,
    g: &GasModel,
) -> Result<IntermediateStates, CoreError> {
    let c_plus = thermo::sound_speed(plus, g);
    let v_star = u_star / (-sigma_minus);
    let c_upper = c_plus + (g.gamma - 1.0) / 2.0 * (u_star - plus.u);
    if !(c_upper > 0.0) {
        return Err(CoreError::NoDecomposition("rarefaction exhausts the sound speed"));
    }
    let v_upper = plus.v * math::powf(c_upper / c_plus, -2.0 / (g.gamma - 1.0));
    let theta_upper = plus.theta * math::powf(plus.v / v_upper, g.gamma - 1.0);
    let p_upper = g.r * theta_upper / v_upper;
    let theta_star = p_upper * v_star / g.r;
    if !(v_star > 0.0) || !(theta_star > 0.0) {
        return Err(CoreError::NoDecomposition("intermediate state left the phase space"));
    }
    Ok(IntermediateStates {
        star: State { v: v_star, u: u_star, theta: theta_star },
        star_upper: State { v: v_upper, u: u_star, theta: theta_upper },
        u_tilde: f64::NAN,
    })
}

/// The paper-style expanded expression for the upper-star volume; kept as a
/// cross-check against the primitive-relation route (they differ unless the
/// entropy constant A equals 1).
pub fn star_upper_volume_display(u_star: f64, plus: &State, g: &GasModel) -> f64 {
    let bracket =
        (g.gamma - 1.0) / (2.0 * g.a * thermo::sound_speed(plus, g)) * (u_star - plus.u) + 1.0;
    plus.v * math::powf(bracket, 2.0 / (1.0 - g.gamma))
}

/// Solve for the intermediate states of the BL-CD-R₃ decomposition of the
/// boundary datum `minus` against the far field `plus`.
///
/// u_* is found by bisection of the manifold-membership defect over the
/// admissible velocities below u₊ (the no-contact point ũ sits inside this
/// interval, on either side of the root depending on the contact
/// orientation). The degenerate endpoints — no rarefaction at u_* = u₊, no
/// contact at u_* = ũ — are accepted exactly when the datum already sits on
/// the corresponding manifold.
pub fn solve_intermediates(
    minus: &State,
    plus: &State,
    g: &GasModel,
    cfg: &DecompositionConfig,
) -> Result<IntermediateStates, CoreError> {
    if !(minus.u > 0.0) {
        return Err(CoreError::InvalidParameter("u_- must be positive (inflow)"));
    }
    let sigma = -minus.u / minus.v;
    // ũ exists only when the plus state lies above the mass line; without a
    // rarefaction piece it is not needed.
    let u_tilde = intersection_velocity(sigma, plus, g).map(|x| x.0).unwrap_or(f64::NAN);
    // Membership scan needs amplitudes beyond the final wave strength.
    let scan_cfg = BlConfig { smallness: f64::MAX, ..cfg.bl };
    let defect_at = |u_star: f64| -> Result<(f64, IntermediateStates), CoreError> {
        let mut inter = intermediates_for_ustar(u_star, sigma, plus, g)?;
        inter.u_tilde = u_tilde;
        let regime = thermo::classify_regime(&inter.star, g, thermo::TRANSONIC_TOL);
        if regime.tag != SonicTag::Subsonic || regime.u_sign != USign::Positive {
            return Err(CoreError::NoDecomposition("star state is not subsonic inflow"));
        }
        let d = manifold_defect(&inter.star, g, minus.u, minus.theta, &scan_cfg)?;
        Ok((d, inter))
    };
    // Degenerate endpoints first: no rarefaction (u_* = u₊), no contact
    // (u_* = ũ).
    for endpoint in [plus.u, u_tilde] {
        if !endpoint.is_finite() {
            continue;
        }
        if let Ok((d, inter)) = defect_at(endpoint) {
            if math::abs(d) <= cfg.tol {
                return Ok(inter);
            }
        }
    }
    let mut hi = plus.u * (1.0 - 1e-6);
    // Below this velocity the rarefaction exhausts the sound speed.
    let u_exhaust = plus.u - 2.0 * thermo::sound_speed(plus, g) / (g.gamma - 1.0);
    let mut lo = math::max(u_exhaust + 1e-9 * plus.u, 1e-6 * plus.u);
    let d_hi = match defect_at(hi) {
        Ok((d, _)) => d,
        Err(_) => {
            return Err(CoreError::NoDecomposition(
                "membership defect undefined at the upper bracket end",
            ))
        }
    };
    // Walk the lower end up until the star state is admissible there.
    let mut d_lo = None;
    for _ in 0..60 {
        match defect_at(lo) {
            Ok((d, _)) => {
                d_lo = Some(d);
                break;
            }
            Err(_) => lo = 0.5 * (lo + hi),
        }
    }
    let mut d_lo = d_lo.ok_or(CoreError::NoDecomposition(
        "no admissible subsonic star velocity below u_+",
    ))?;
    if d_lo * d_hi > 0.0 {
        return Err(CoreError::NoDecomposition(
            "no sign change of the membership defect in the admissible interval",
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (d_mid, inter) = defect_at(mid).map_err(|_| {
            CoreError::NoDecomposition("membership defect undefined inside the bracket")
        })?;
        if math::abs(d_mid) <= cfg.tol || hi - lo <= 1e-15 * math::abs(hi) {
            return Ok(inter);
        }
        if d_lo * d_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            d_lo = d_mid;
        }
    }
    Err(CoreError::NoDecomposition("bisection on u_* failed to converge"))
}

/// Which wave curve to test membership against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveCurve {
    Contact,
    BoundaryLayer,
    Rarefaction3,
}

/// Outcome of a curve-membership test.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub member: bool,
    /// The raw defect that was compared against the tolerance.
    pub defect: f64,
}

/// Membership of `candidate` on the wave curve anchored at `anchor`.
pub fn curve_membership(
    candidate: &State,
    anchor: &State,
    curve: WaveCurve,
    g: &GasModel,
    tol: f64,
) -> Result<Membership, CoreError> {
    match curve {
        WaveCurve::Contact => {
            let du = math::abs(candidate.u - anchor.u);
            let dp = math::abs(thermo::pressure(candidate, g) - thermo::pressure(anchor, g));
            let defect = math::max(du, dp);
            let member = defect <= tol && candidate.v != anchor.v;
            Ok(Membership { member, defect })
        }
        WaveCurve::BoundaryLayer => {
            let ratio_anchor = anchor.u / anchor.v;
            let mass = math::abs(candidate.u / candidate.v - ratio_anchor)
                / math::abs(ratio_anchor);
            let cfg = BlConfig { smallness: f64::MAX, ..BlConfig::default() };
            let manifold = match manifold_defect(anchor, g, candidate.u, candidate.theta, &cfg) {
                Ok(d) => math::abs(d),
                Err(CoreError::NotOnWaveCurve(_)) | Err(CoreError::NoBoundaryLayer(_)) => {
                    f64::INFINITY
                }
                Err(e) => return Err(e),
            };
            let defect = math::max(mass, manifold);
            Ok(Membership { member: defect <= tol, defect })
        }
        WaveCurve::Rarefaction3 => {
            let s_plus = thermo::entropy(anchor, g);
            let s_cand = thermo::entropy(candidate, g);
            let c_anchor = thermo::sound_speed(anchor, g);
            let c_cand = thermo::sound_speed(candidate, g);
            let u_curve = anchor.u + 2.0 / (g.gamma - 1.0) * (c_cand - c_anchor);
            let defect = math::max(math::abs(s_cand - s_plus), math::abs(candidate.u - u_curve));
            let member = defect <= tol && candidate.v > anchor.v;
            Ok(Membership { member, defect })
        }
    }
}

/// Parameters of the forward superposition construction.
#[derive(Debug, Clone, Copy)]
pub struct SuperpositionDesign {
    /// The BL right state (v_*, u_*, θ_*); must be subsonic with u_* > 0.
    pub star: State,
    /// θ*; the contact amplitude is |θ* - θ_*|.
    pub theta_upper: f64,
    /// v*/v₊ ≥ 1; controls the rarefaction strength.
    pub expansion_ratio: f64,
    /// Boundary-layer amplitude δ^B.
    pub delta_b: f64,
    pub branch: Branch,
    /// Burgers smoothing parameters.
    pub eps: f64,
    pub q: u32,
    /// Self-similar profile resolution.
    pub l_eta: f64,
    pub n_eta: usize,
    pub bl_grid: XiGridSpec,
    pub bl_config: BlConfig,
}

/// The superposition wave: the three components built on shared
/// intermediate states, evaluated as sum minus the doubly counted
/// constants.
#[derive(Debug, Clone)]
pub struct SuperpositionWave {
    pub bl: BlProfile,
    pub cd: ContactWave,
    pub rr: RarefactionWave,
    pub inter: IntermediateStates,
    pub sigma_minus: f64,
    /// Boundary data achieved by the BL construction.
    pub minus: State,
    pub plus: State,
    gas: GasModel,
}

/// Build the superposition from design parameters (star state outward).
pub fn build_superposition(
    design: &SuperpositionDesign,
    g: &GasModel,
) -> Result<SuperpositionWave, CoreError> {
    let star = design.star;
    if !(star.u > 0.0) {
        return Err(CoreError::InvalidParameter("u_* must be positive"));
    }
    if thermo::classify_regime(&star, g, thermo::TRANSONIC_TOL).tag != SonicTag::Subsonic {
        return Err(CoreError::InvalidParameter("star state must be subsonic"));
    }
    if !(design.expansion_ratio >= 1.0) {
        return Err(CoreError::InvalidParameter("expansion ratio must be at least 1"));
    }
    let sigma = -star.u / star.v;
    let p_star = thermo::pressure(&star, g);
    // Contact: equal pressure and velocity across the jump.
    let v_upper = star.v * design.theta_upper / star.theta;
    let star_upper = State { v: v_upper, u: star.u, theta: design.theta_upper };
    // Rarefaction: plus state down the isentrope from the upper star.
    let v_plus = v_upper / design.expansion_ratio;
    let theta_plus =
        design.theta_upper * math::powf(design.expansion_ratio, g.gamma - 1.0);
    let c_plus = math::sqrt(g.r * g.gamma * theta_plus);
    let c_upper = math::sqrt(g.r * g.gamma * design.theta_upper);
    let u_plus = star.u + 2.0 / (g.gamma - 1.0) * (c_plus - c_upper);
    let plus = State::new(v_plus, u_plus, theta_plus)?;

    let bl = solve_subsonic_bl(&star, g, design.delta_b, design.branch, &design.bl_grid, &design.bl_config)?;
    let cd = ContactWave::build(
        star.theta,
        design.theta_upper,
        p_star,
        star.u,
        g,
        design.l_eta,
        design.n_eta,
    )?;
    let rr = RarefactionWave::build(v_upper, plus, g, design.eps, design.q)?;
    // Cross-component consistency: the rarefaction's left edge must be the
    // upper star state.
    let edge = rr.left_star;
    let scale = star_upper.theta.max(star_upper.u.max(star_upper.v));
    if math::abs(edge.v - star_upper.v) > 1e-9 * scale
        || math::abs(edge.u - star_upper.u) > 1e-9 * scale
        || math::abs(edge.theta - star_upper.theta) > 1e-9 * scale
    {
        return Err(CoreError::InvalidParameter(
            "intermediate states disagree across components",
        ));
    }
    let u_tilde = intersection_velocity(sigma, &plus, g).map(|x| x.0).unwrap_or(f64::NAN);
    let minus = bl.left_data();
    Ok(SuperpositionWave {
        bl,
        cd,
        rr,
        inter: IntermediateStates { star, star_upper, u_tilde },
        sigma_minus: sigma,
        minus,
        plus,
        gas: *g,
    })
}

/// Recover the superposition from boundary data and the far field, via
/// [`solve_intermediates`].
pub fn build_superposition_from_data(
    minus: &State,
    plus: &State,
    g: &GasModel,
    cfg: &DecompositionConfig,
    bl_grid: &XiGridSpec,
    eps: f64,
    q: u32,
    l_eta: f64,
    n_eta: usize,
) -> Result<SuperpositionWave, CoreError> {
    let inter = solve_intermediates(minus, plus, g, cfg)?;
    let star = inter.star;
    let sigma = -minus.u / minus.v;
    let delta_b = math::norm2(minus.u - star.u, minus.theta - star.theta);
    // Pick the manifold branch pointing toward the datum.
    let lin = crate::boundary_layer::build_linearization(&star, g)?;
    let v2 = lin.slow_eigenvector();
    let along = (minus.u - star.u) * v2[0] + (minus.theta - star.theta) * v2[1];
    let branch = if along >= 0.0 { Branch::Plus } else { Branch::Minus };
    let bl_cfg = BlConfig { smallness: cfg.bl.smallness.max(2.0 * delta_b), ..cfg.bl };
    let bl = solve_subsonic_bl(&star, g, delta_b, branch, bl_grid, &bl_cfg)?;
    let achieved = bl.left_data();
    let tol = 1e-6 * delta_b.max(1e-12);
    if math::abs(achieved.u - minus.u) > tol || math::abs(achieved.theta - minus.theta) > tol {
        return Err(CoreError::NoDecomposition(
            "boundary-layer construction missed the boundary datum",
        ));
    }
    let p_star = thermo::pressure(&star, g);
    let cd = ContactWave::build(
        star.theta,
        inter.star_upper.theta,
        p_star,
        star.u,
        g,
        l_eta,
        n_eta,
    )?;
    let rr = RarefactionWave::build(inter.star_upper.v, *plus, g, eps, q)?;
    Ok(SuperpositionWave {
        bl,
        cd,
        rr,
        inter,
        sigma_minus: sigma,
        minus: achieved,
        plus: *plus,
        gas: *g,
    })
}

impl SuperpositionWave {
    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    /// Total contact amplitude |θ* - θ_*|.
    pub fn delta_cd(&self) -> f64 {
        self.cd.delta_cd
    }

    pub fn delta_b(&self) -> f64 {
        self.bl.delta_b
    }
}

/// Superposition values: componentwise sum minus (v_* + v*, u_* + u*,
/// θ_* + θ*).
pub fn evaluate_superposition(w: &SuperpositionWave, t: f64, xi: f64) -> (f64, f64, f64) {
    let (vb, ub, thb) = w.bl.evaluate(xi);
    let (vc, uc, thc) = crate::contact::evaluate_contact(&w.cd, t, xi, w.sigma_minus);
    let (vr, ur, thr) = rarefaction_state(&w.rr, t, xi, w.sigma_minus, &w.gas);
    let dv = w.inter.star.v + w.inter.star_upper.v;
    let du = w.inter.star.u + w.inter.star_upper.u;
    let dth = w.inter.star.theta + w.inter.star_upper.theta;
    (vb + vc + vr - dv, ub + uc + ur - du, thb + thc + thr - dth)
}

/// Error terms of the superposition and their diagnostic decomposition.
#[derive(Debug, Clone, Copy)]
pub struct ErrorTerms {
    pub q1: f64,
    pub q2: f64,
    /// Contact-wave contributions.
    pub q1_bar: f64,
    pub q2_bar: f64,
    /// Pointwise rarefaction bound |U^R_ξξ| + |(U^R_ξ, V^R_ξ)|².
    pub rare_q1_bound: f64,
    /// Pointwise rarefaction bound |Θ^R_ξξ| + |(Θ^R_ξ, V^R_ξ, U^R_ξ)|².
    pub rare_q2_bound: f64,
}

struct ComponentDerivs {
    // Composite fields.
    v: f64,
    theta: f64,
    v_xi: f64,
    u_xi: f64,
    theta_xi: f64,
    u_t: f64,
    theta_t: f64,
    v_t: f64,
    u_xixi: f64,
    theta_xixi: f64,
    // Per-component pieces needed by the error-term formulas.
    p_b_xi: f64,
    p_cd_xi: f64,
    p_r_xi: f64,
    du_over_v_b: f64,
    du_over_v_cd: f64,
    dth_over_v_b: f64,
    dth_over_v_cd: f64,
    pb_ub_xi: f64,
    pcd_ucd_xi: f64,
    pr_ur_xi: f64,
    visc_b: f64,
    visc_cd: f64,
    q1_bar: f64,
    q2_bar: f64,
    rare: crate::rarefaction::RarefactionDerivs,
}

fn component_derivatives(w: &SuperpositionWave, t: f64, xi: f64) -> ComponentDerivs {
    let g = &w.gas;
    let sigma = w.sigma_minus;
    // Boundary layer (stationary in ξ).
    let (vb, _ub, thb) = w.bl.evaluate(xi);
    let (vb_xi, ub_xi, thb_xi) = w.bl.derivative(xi, g);
    let (_, ub_xixi, thb_xixi) = w.bl.second_derivative(xi, g);
    // Contact wave.
    let cd = contact_derivatives(&w.cd, t, xi, sigma);
    let (q1_bar, q2_bar) = contact_defect(&w.cd, t, xi, sigma);
    // Rarefaction.
    let rr = rarefaction_derivatives(&w.rr, t, xi, sigma, g);

    let dv = w.inter.star.v + w.inter.star_upper.v;
    let dth = w.inter.star.theta + w.inter.star_upper.theta;

    let p_b_xi = g.r * (thb_xi * vb - thb * vb_xi) / (vb * vb);
    let p_cd_xi = g.r * (cd.theta_xi * cd.v - cd.theta * cd.v_xi) / (cd.v * cd.v);
    let p_b = g.r * thb / vb;
    let p_cd = g.r * cd.theta / cd.v;
    let du_over_v_b = (ub_xixi * vb - ub_xi * vb_xi) / (vb * vb);
    let dth_over_v_b = (thb_xixi * vb - thb_xi * vb_xi) / (vb * vb);

    ComponentDerivs {
        v: vb + cd.v + rr.v - dv,
        theta: thb + cd.theta + rr.theta - dth,
        v_xi: vb_xi + cd.v_xi + rr.v_xi,
        u_xi: ub_xi + cd.u_xi + rr.u_xi,
        theta_xi: thb_xi + cd.theta_xi + rr.theta_xi,
        u_t: cd.u_t + rr.u_t,
        theta_t: cd.theta_t + rr.theta_t,
        v_t: cd.v_t + rr.v_t,
        u_xixi: ub_xixi + cd.u_xixi + rr.u_xixi,
        theta_xixi: thb_xixi + cd.theta_xixi + rr.theta_xixi,
        p_b_xi,
        p_cd_xi,
        p_r_xi: rr.p_xi,
        du_over_v_b,
        du_over_v_cd: cd.du_over_v_xi,
        dth_over_v_b,
        dth_over_v_cd: cd.dtheta_over_v_xi,
        pb_ub_xi: p_b * ub_xi,
        pcd_ucd_xi: p_cd * cd.u_xi,
        pr_ur_xi: rr.p * rr.u_xi,
        visc_b: ub_xi * ub_xi / vb,
        visc_cd: cd.u_xi * cd.u_xi / cd.v,
        q1_bar,
        q2_bar,
        rare: rr,
    }
}

/// Error terms (Q₁, Q₂) of the superposition, assembled directly from the
/// component derivatives, with the diagnostic pieces of their expected
/// decomposition.
pub fn superposition_error_terms(w: &SuperpositionWave, t: f64, xi: f64) -> ErrorTerms {
    let g = &w.gas;
    let c = component_derivatives(w, t, xi);
    let p_xi = g.r * (c.theta_xi * c.v - c.theta * c.v_xi) / (c.v * c.v);
    let du_over_v = (c.u_xixi * c.v - c.u_xi * c.v_xi) / (c.v * c.v);
    let dth_over_v = (c.theta_xixi * c.v - c.theta_xi * c.v_xi) / (c.v * c.v);
    let p = g.r * c.theta / c.v;
    let q1 = (p_xi - c.p_b_xi - c.p_cd_xi - c.p_r_xi)
        - g.mu * (du_over_v - c.du_over_v_b - c.du_over_v_cd)
        + c.q1_bar;
    let q2 = (p * c.u_xi - c.pb_ub_xi - c.pcd_ucd_xi - c.pr_ur_xi)
        - g.kappa * (dth_over_v - c.dth_over_v_b - c.dth_over_v_cd)
        - g.mu * (c.u_xi * c.u_xi / c.v - c.visc_b - c.visc_cd)
        + c.q2_bar;
    let r1 = math::abs(c.rare.u_xixi)
        + c.rare.u_xi * c.rare.u_xi
        + c.rare.v_xi * c.rare.v_xi;
    let r2 = math::abs(c.rare.theta_xixi)
        + c.rare.theta_xi * c.rare.theta_xi
        + c.rare.v_xi * c.rare.v_xi
        + c.rare.u_xi * c.rare.u_xi;
    ErrorTerms {
        q1,
        q2,
        q1_bar: c.q1_bar,
        q2_bar: c.q2_bar,
        rare_q1_bound: r1,
        rare_q2_bound: r2,
    }
}

/// Defects of the superposition in the mass, momentum and energy equations
/// (the latter two should reproduce Q₁ and Q₂; the mass defect vanishes).
pub fn superposition_defects(w: &SuperpositionWave, t: f64, xi: f64) -> (f64, f64, f64) {
    let g = &w.gas;
    let sigma = w.sigma_minus;
    let c = component_derivatives(w, t, xi);
    let p_xi = g.r * (c.theta_xi * c.v - c.theta * c.v_xi) / (c.v * c.v);
    let du_over_v = (c.u_xixi * c.v - c.u_xi * c.v_xi) / (c.v * c.v);
    let dth_over_v = (c.theta_xixi * c.v - c.theta_xi * c.v_xi) / (c.v * c.v);
    let p = g.r * c.theta / c.v;
    let d0 = c.v_t - sigma * c.v_xi - c.u_xi;
    let d1 = c.u_t - sigma * c.u_xi + p_xi - g.mu * du_over_v;
    let d2 = g.r / (g.gamma - 1.0) * (c.theta_t - sigma * c.theta_xi) + p * c.u_xi
        - g.kappa * dth_over_v
        - g.mu * c.u_xi * c.u_xi / c.v;
    (d0, d1, d2)
}

/// Exact centered-fan state of the limiting inviscid rarefaction at
/// similarity coordinate x/(1+t).
pub fn centered_fan_state(
    rr: &RarefactionWave,
    t: f64,
    xi: f64,
    sigma_minus: f64,
) -> (f64, f64, f64) {
    let y = (xi + sigma_minus * t) / (1.0 + t);
    let w = if y <= rr.burgers.w_minus {
        rr.burgers.w_minus
    } else if y >= rr.burgers.w_plus {
        rr.burgers.w_plus
    } else {
        y
    };
    rr.state_from_w(w)
}
