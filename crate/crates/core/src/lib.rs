//! Pseudo-spectral toolkit for the Klein-Gordon-Schrödinger and Zakharov systems
//! on a periodic box: time integration, nonlinear smoothing diagnostics,
//! `X^{s,b}` norms, resonance geometry, a high-low splitting scheme and the
//! damped-forced system.

pub mod dissipative;
pub mod error;
pub mod evolution;
pub mod highlow;
pub mod integrator;
pub mod io;
pub mod resonance;
pub mod smoothing;
pub mod spectral;

pub use error::{Error, Result};
