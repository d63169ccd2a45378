//! Wave patterns for the inflow problem of the 1-D full compressible
//! Navier-Stokes equations on the half line, in Lagrangian coordinates.
//!
//! The crate constructs the three building blocks that govern the large-time
//! behavior of the half-line problem with inflow boundary data:
//!
//! * [`boundary_layer`] — stationary boundary-layer profiles obtained by
//!   integrating along the stable (or center) manifold of the traveling-wave
//!   ODE, including the subsonic/transonic/supersonic existence trichotomy;
//! * [`contact`] — the viscous contact wave built from the self-similar
//!   solution of a nonlinear diffusion equation;
//! * [`rarefaction`] — the smoothed 3-rarefaction generated by an exact
//!   Burgers solution through characteristics.
//!
//! [`composition`] solves for the intermediate states joining the pieces and
//! assembles their superposition; [`solver`] evolves perturbed data with an
//! explicit finite-difference scheme; [`diagnostics`] measures the energy
//! functional and decay rates used to check the expected stability behavior.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature and enable `libm` for the float math.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("inflow-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod boundary_layer;
pub mod composition;
pub mod contact;
pub mod diagnostics;
pub mod error;
pub mod rarefaction;
pub mod solver;
pub mod thermo;

mod fit;
mod interp;
mod math;
mod ode;
mod special;

pub use error::CoreError;
pub use thermo::{GasModel, Regime, SonicTag, State};
