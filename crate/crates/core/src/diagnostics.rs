//! Energy-functional and decay-rate measurements.
//!
//! The entropy-type convex weight is `Φ(z) = z - 1 - ln z`, and the local
//! energy density of a perturbed field against a wave pattern is
//!
//! ```text
//! I₁ = R Θ Φ(v/V) + ψ²/2 + R Θ/(γ-1) Φ(θ/Θ).
//! ```
//!
//! These are measured quantities here, not proof devices: the reports carry
//! the trapezoid integral of I₁ and the observed quadratic-equivalence
//! ratios between Φ and the squared perturbations.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::fit::linear_fit;
use crate::math;
use crate::solver::{compute_perturbation, Field, WavePattern};
use crate::thermo::GasModel;

/// Φ(z) = z - 1 - ln z; nonnegative, vanishing only at z = 1.
pub fn phi(z: f64) -> f64 {
    z - 1.0 - math::ln(z)
}

/// Energy measurement at one time.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub t: f64,
    /// Trapezoid integral of I₁ over the grid.
    pub i1_integral: f64,
    /// Largest pointwise I₁.
    pub i1_sup: f64,
    /// Measured bounds C in C⁻¹ φ² ≤ R Θ Φ(v/V) ≤ C φ²-type equivalences:
    /// (min, max) over nodes of Φ(v/V)/(v/V - 1)².
    pub phi_v_ratio: (f64, f64),
    /// Same for Φ(θ/Θ).
    pub phi_theta_ratio: (f64, f64),
}

/// Evaluate Φ-based energy of the field against the wave. Errors when the
/// field leaves the positivity region relative to the wave.
pub fn energy_functional(
    f: &Field,
    wave: &dyn WavePattern,
    g: &GasModel,
) -> Result<EnergyReport, CoreError> {
    let n = f.grid.n;
    let h = f.grid.h;
    let p = compute_perturbation(f, wave);
    let mut integral = 0.0;
    let mut sup = 0.0f64;
    let mut ratio_v = (f64::INFINITY, 0.0f64);
    let mut ratio_th = (f64::INFINITY, 0.0f64);
    for j in 0..n {
        let (vw, _, thw) = wave.eval(f.t, f.grid.node(j));
        let zv = f.v[j] / vw;
        let zt = f.theta[j] / thw;
        if !(zv > 0.0) || !(zt > 0.0) {
            return Err(CoreError::PositivityLoss {
                t: f.t,
                xi: f.grid.node(j),
                v: f.v[j],
                theta: f.theta[j],
            });
        }
        let i1 = g.r * thw * phi(zv) + 0.5 * p.psi[j] * p.psi[j]
            + g.r * thw / (g.gamma - 1.0) * phi(zt);
        let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        integral += wt * i1 * h;
        sup = math::max(sup, i1);
        if math::abs(zv - 1.0) > 1e-13 {
            let r = phi(zv) / ((zv - 1.0) * (zv - 1.0));
            ratio_v = (math::min(ratio_v.0, r), math::max(ratio_v.1, r));
        }
        if math::abs(zt - 1.0) > 1e-13 {
            let r = phi(zt) / ((zt - 1.0) * (zt - 1.0));
            ratio_th = (math::min(ratio_th.0, r), math::max(ratio_th.1, r));
        }
    }
    Ok(EnergyReport {
        t: f.t,
        i1_integral: integral,
        i1_sup: sup,
        phi_v_ratio: ratio_v,
        phi_theta_ratio: ratio_th,
    })
}

/// Decay models the fitter understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// y ~ C e^{-rate · x}; returns rate > 0 for decay.
    Exponential,
    /// y ~ C (1+x)^{exponent}; returns the (signed) exponent.
    Algebraic,
    /// y ~ C e^{-c₀ x²}; returns c₀.
    GaussianTail,
}

/// Result of a decay fit: the rate/exponent/coefficient and the rms
/// residual of the fit in log coordinates.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub value: f64,
    pub residual: f64,
}

/// Least-squares fit of a positive series against a decay model in the
/// appropriate log coordinates. Requires at least 8 samples spanning at
/// least one decade of the independent variable, all above the 1e-13 floor.
pub fn decay_fit(xs: &[f64], ys: &[f64], model: DecayModel) -> Result<DecayFit, CoreError> {
    if xs.len() != ys.len() || xs.len() < 8 {
        return Err(CoreError::UnfittableSeries("need at least 8 samples"));
    }
    if ys.iter().any(|&y| !(y > 1e-13)) {
        return Err(CoreError::UnfittableSeries("series at or below the 1e-13 floor"));
    }
    let span_ok = match model {
        DecayModel::Exponential => {
            let (lo, hi) = min_max(xs);
            hi - lo > 0.0
        }
        DecayModel::Algebraic => {
            let (lo, hi) = min_max(xs);
            (1.0 + hi) / (1.0 + lo) >= 10.0
        }
        DecayModel::GaussianTail => {
            let (lo, hi) = min_max(xs);
            hi * hi - lo * lo > 0.0
        }
    };
    if !span_ok {
        return Err(CoreError::UnfittableSeries("independent variable span too small"));
    }
    let logs: Vec<f64> = ys.iter().map(|&y| math::ln(y)).collect();
    let (abscissa, flip): (Vec<f64>, f64) = match model {
        DecayModel::Exponential => (xs.to_vec(), -1.0),
        DecayModel::Algebraic => (xs.iter().map(|&x| math::ln(1.0 + x)).collect(), 1.0),
        DecayModel::GaussianTail => (xs.iter().map(|&x| x * x).collect(), -1.0),
    };
    let (slope, _, residual) = linear_fit(&abscissa, &logs);
    Ok(DecayFit { value: flip * slope, residual })
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        lo = math::min(lo, x);
        hi = math::max(hi, x);
    }
    (lo, hi)
}
