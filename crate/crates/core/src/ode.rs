//! Adaptive Dormand-Prince 4(5) integrator for planar autonomous systems,
//! with dense output through cubic Hermite interpolation of accepted steps.

use alloc::vec::Vec;

use crate::math;

pub(crate) type V2 = [f64; 2];

#[inline]
fn axpy(y: V2, pairs: &[(f64, V2)], h: f64) -> V2 {
    let mut out = y;
    for &(c, k) in pairs {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One accepted integration step: abscissa, state, derivative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub s: f64,
    pub y: V2,
    pub dy: V2,
}

/// Recorded solution of a single integration sweep on [0, s_end].
#[derive(Debug, Clone)]
pub(crate) struct Trajectory {
    pub nodes: Vec<Node>,
}

impl Trajectory {
    /// Hermite sample at `s` inside the covered range (clamped at the ends).
    pub fn sample(&self, s: f64) -> V2 {
        let nodes = &self.nodes;
        let last = nodes.len() - 1;
        if s <= nodes[0].s {
            return nodes[0].y;
        }
        if s >= nodes[last].s {
            return nodes[last].y;
        }
        let mut lo = 0usize;
        let mut hi = last;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if nodes[mid].s <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (a, b) = (&nodes[lo], &nodes[hi]);
        let h = b.s - a.s;
        let t = (s - a.s) / h;
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = crate::interp::hermite(a.y[c], a.dy[c] * h, b.y[c], b.dy[c] * h, t, h).0;
        }
        out
    }
}

pub(crate) struct AdaptiveRk {
    pub rtol: f64,
    pub atol: f64,
}

impl AdaptiveRk {
    /// Integrate dy/ds = f(y) from y0 over s in [0, s_max], recording every
    /// accepted step. Stops early (returning `true`) as soon as
    /// `stop(y)` holds at an accepted node.
    pub fn integrate<F, S>(&self, f: F, y0: V2, s_max: f64, mut stop: S) -> (Trajectory, bool)
    where
        F: Fn(V2) -> V2,
        S: FnMut(V2) -> bool,
    {
        let mut nodes = Vec::new();
        let mut s = 0.0;
        let mut y = y0;
        let mut k1 = f(y);
        nodes.push(Node { s, y, dy: k1 });
        if stop(y) {
            return (Trajectory { nodes }, true);
        }
        let mut h = self.initial_step(y, k1);
        let mut stopped = false;
        // Generous cap; adaptive rejection keeps the count far below it.
        let max_steps = 80_000_000usize;
        for _ in 0..max_steps {
            if s >= s_max {
                break;
            }
            if s + h > s_max {
                h = s_max - s;
            }
            let k2 = f(axpy(y, &[(1.0 / 5.0, k1)], h));
            let k3 = f(axpy(y, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)], h));
            let k4 = f(axpy(
                y,
                &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)],
                h,
            ));
            let k5 = f(axpy(
                y,
                &[
                    (19372.0 / 6561.0, k1),
                    (-25360.0 / 2187.0, k2),
                    (64448.0 / 6561.0, k3),
                    (-212.0 / 729.0, k4),
                ],
                h,
            ));
            let k6 = f(axpy(
                y,
                &[
                    (9017.0 / 3168.0, k1),
                    (-355.0 / 33.0, k2),
                    (46732.0 / 5247.0, k3),
                    (49.0 / 176.0, k4),
                    (-5103.0 / 18656.0, k5),
                ],
                h,
            ));
            let y_new = axpy(
                y,
                &[
                    (35.0 / 384.0, k1),
                    (500.0 / 1113.0, k3),
                    (125.0 / 192.0, k4),
                    (-2187.0 / 6784.0, k5),
                    (11.0 / 84.0, k6),
                ],
                h,
            );
            let k7 = f(y_new);
            // Difference of the embedded 4th-order weights.
            let err_v = axpy(
                [0.0, 0.0],
                &[
                    (71.0 / 57600.0, k1),
                    (-71.0 / 16695.0, k3),
                    (71.0 / 1920.0, k4),
                    (-17253.0 / 339200.0, k5),
                    (22.0 / 525.0, k6),
                    (-1.0 / 40.0, k7),
                ],
                h,
            );
            let mut err = 0.0f64;
            for c in 0..2 {
                let scale = self.atol + self.rtol * math::max(math::abs(y[c]), math::abs(y_new[c]));
                err = math::max(err, math::abs(err_v[c]) / scale);
            }
            if err <= 1.0 {
                s += h;
                y = y_new;
                k1 = k7;
                nodes.push(Node { s, y, dy: k1 });
                if stop(y) {
                    stopped = true;
                    break;
                }
            }
            let factor = if err > 0.0 {
                0.9 * math::powf(err, -0.2)
            } else {
                5.0
            };
            h *= math::min(5.0, math::max(0.2, factor));
            if !(h > 1e-14 * math::max(1.0, s)) {
                break;
            }
        }
        (Trajectory { nodes }, stopped)
    }

    fn initial_step(&self, y: V2, dy: V2) -> f64 {
        let ny = math::norm2(y[0], y[1]);
        let nd = math::norm2(dy[0], dy[1]);
        if nd > 0.0 && ny > 0.0 {
            1e-3 * ny / nd
        } else {
            1e-6
        }
    }
}
