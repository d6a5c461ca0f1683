//! Nonlinear smoothing diagnostics: Duhamel residuals, discrete `X^{s,b}` norms,
//! smoothing exponents, ensemble scans and the sharpness counterexample.

mod counterexample;
mod exponents;
mod lattice;
mod scan;
mod xsb;

pub use counterexample::{
    counterexample_box, sharpness_counterexample, sharpness_counterexample_with, BoxResolution,
    CounterexampleReport,
};
pub use exponents::{smoothing_exponents, SmoothingExponents};
pub use lattice::BoxField;
pub use scan::{
    duhamel_residual, scan_initial_state, scan_member, smoothing_scan, Component,
    ComponentSummary, ScanConfig, ScanReport, ScanRow, SmoothingParams,
};
pub use xsb::{xsb_norm, SpaceTimeField, TukeyWindow, XsbDispersion};
