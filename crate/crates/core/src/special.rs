//! Regularized incomplete gamma function for the smoothed rarefaction datum.

use crate::math;

/// ln(n!) by direct summation; exact enough (relative ~1e-15) for the
/// exponent range used here.
pub(crate) fn ln_factorial(n: u32) -> f64 {
    let mut acc = 0.0;
    for k in 2..=n {
        acc += math::ln(k as f64);
    }
    acc
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a) for a ≥ 1,
/// x ≥ 0, by the usual series / continued-fraction split.
pub(crate) fn reg_lower_gamma(a: f64, ln_gamma_a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, ln_gamma_a, x)
    } else {
        1.0 - gamma_cf(a, ln_gamma_a, x)
    }
}

fn gamma_series(a: f64, ln_gamma_a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if math::abs(del) < math::abs(sum) * 1e-17 {
            break;
        }
    }
    sum * math::exp(-x + a * math::ln(x) - ln_gamma_a)
}

/// Upper tail Q(a, x) by modified Lentz continued fraction.
fn gamma_cf(a: f64, ln_gamma_a: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if math::abs(d) < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if math::abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if math::abs(delta - 1.0) < 1e-16 {
            break;
        }
    }
    math::exp(-x + a * math::ln(x) - ln_gamma_a) * h
}
