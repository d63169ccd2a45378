//! Error type shared by the construction and evolution routines.

use core::fmt;

/// Failure modes of wave construction, root finding and time stepping.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A physical parameter violated its admissibility range.
    InvalidParameter(&'static str),
    /// No boundary-layer solution exists for the requested end state.
    NoBoundaryLayer(&'static str),
    /// The supplied boundary datum is not on the required wave curve.
    NotOnWaveCurve(&'static str),
    /// The requested boundary data do not decompose as BL + contact + rarefaction.
    NoDecomposition(&'static str),
    /// Newton iteration failed to converge; carries the last residual.
    NewtonDiverged { residual: f64 },
    /// A grid is too coarse for the requested stencil.
    GridTooCoarse { needed: usize, got: usize },
    /// A field lost positivity of specific volume or temperature.
    PositivityLoss { t: f64, xi: f64, v: f64, theta: f64 },
    /// The stable time step shrank below a usable size.
    TimeStepUnderflow { t: f64, dt: f64 },
    /// A data series is unsuitable for the requested fit.
    UnfittableSeries(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            CoreError::NoBoundaryLayer(why) => write!(f, "no boundary-layer solution: {why}"),
            CoreError::NotOnWaveCurve(which) => write!(f, "state not on wave curve: {which}"),
            CoreError::NoDecomposition(why) => write!(f, "no BL-CD-R3 decomposition: {why}"),
            CoreError::NewtonDiverged { residual } => {
                write!(f, "Newton iteration diverged (last residual {residual:e})")
            }
            CoreError::GridTooCoarse { needed, got } => {
                write!(f, "grid too coarse: need at least {needed} nodes, got {got}")
            }
            CoreError::PositivityLoss { t, xi, v, theta } => write!(
                f,
                "positivity lost at t={t}, xi={xi}: v={v}, theta={theta}"
            ),
            CoreError::TimeStepUnderflow { t, dt } => {
                write!(f, "time step underflow at t={t}: dt={dt:e}")
            }
            CoreError::UnfittableSeries(why) => write!(f, "series not fittable: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
