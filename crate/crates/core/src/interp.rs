//! Monotone-preserving cubic interpolation (Fritsch-Carlson slopes).

use alloc::vec::Vec;

use crate::math;

/// C¹ piecewise-cubic interpolant that preserves monotonicity of the data.
/// Evaluation outside the abscissa range clamps to the end values.
#[derive(Debug, Clone)]
pub(crate) struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` strictly increasing, `x.len() == y.len() >= 2`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && n == y.len());
        let mut secant = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            secant.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
        }
        let mut d = Vec::with_capacity(n);
        d.resize(n, 0.0);
        if n == 2 {
            d[0] = secant[0];
            d[1] = secant[0];
            return MonotoneCubic { x, y, d };
        }
        for i in 1..n - 1 {
            let (s0, s1) = (secant[i - 1], secant[i]);
            if s0 * s1 <= 0.0 {
                d[i] = 0.0;
            } else {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                d[i] = (w1 + w2) / (w1 / s0 + w2 / s1);
            }
        }
        d[0] = endpoint_slope(x[1] - x[0], x[2] - x[1], secant[0], secant[1]);
        d[n - 1] = endpoint_slope(
            x[n - 1] - x[n - 2],
            x[n - 2] - x[n - 3],
            secant[n - 2],
            secant[n - 3],
        );
        MonotoneCubic { x, y, d }
    }

    /// Uniform-grid convenience constructor.
    pub fn on_uniform(x0: f64, h: f64, y: Vec<f64>) -> Self {
        let x = (0..y.len()).map(|i| x0 + h * i as f64).collect();
        Self::new(x, y)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let n = self.x.len();
        if x <= self.x[0] {
            return (self.y[0], 0.0);
        }
        if x >= self.x[n - 1] {
            return (self.y[n - 1], 0.0);
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        hermite(self.y[i], self.d[i] * h, self.y[i + 1], self.d[i + 1] * h, t, h)
    }
}

/// Non-centered three-point slope with the usual monotonicity clamp;
/// `h0`, `s0` belong to the boundary interval, `h1`, `s1` to its neighbor.
fn endpoint_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 <= 0.0 && math::abs(d) > 3.0 * math::abs(s0) {
        3.0 * s0
    } else {
        d
    }
}

/// Cubic Hermite on a unit interval; slopes pre-scaled by h.
#[inline]
pub(crate) fn hermite(y0: f64, m0: f64, y1: f64, m1: f64, t: f64, h: f64) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1;
    let deriv = ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * m1)
        / h;
    (value, deriv)
}
