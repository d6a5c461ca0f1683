//! Periodic grids, transforms, Fourier multipliers, norms and projections.

mod fft;
mod field;
mod grid;
mod ops;
mod random;
mod spectrum;

pub(crate) use fft::transform_lines;
pub use field::{quadrature_l2_sq, sample_points, SpectralField, ZeroMode};
pub use grid::{make_grid, Grid};
pub(crate) use ops::apply_table;
pub use ops::{
    dealias, dealiased_abs_sq, dealiased_product, fourier_multiplier, project, shell_index,
    sobolev_norm, Branch, DyadicShellSet, Projection, Symbol,
};
pub use random::{
    random_decay_exponent, random_real_sobolev_field, random_sobolev_field, RANDOM_TAIL_EPS,
};
pub use spectrum::{loglog_slope, radial_spectrum, spectral_slope, RadialBin};
