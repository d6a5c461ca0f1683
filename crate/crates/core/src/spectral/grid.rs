use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Upper bound on the total number of lattice points of one grid.
const MAX_MODES: usize = 1 << 24;

/// Periodic box `[0, 2πL)^d` with `n` modes per dimension.
///
/// Coefficients are stored row-major over the axes with each axis in FFT
/// order: storage index `i` carries the integer wavenumber `i` for
/// `i < n/2` and `i - n` otherwise, so the lattice is `k/L` with
/// `k ∈ [-n/2, n/2)`. The index `n/2` is the Nyquist mode.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    dim: usize,
    n: usize,
    box_length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    xi_sq: Vec<f64>,
    nyquist: Vec<bool>,
    dealias: Vec<bool>,
    reflect: Vec<usize>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.inner.dim)
            .field("n_per_dim", &self.inner.n)
            .field("box_length", &self.inner.box_length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.n == other.inner.n
                && self.inner.box_length == other.inner.box_length)
    }
}

/// Build a grid, validating dimension and size.
pub fn make_grid(dim: usize, n_per_dim: usize, box_length: f64) -> Result<Grid> {
    Grid::new(dim, n_per_dim, box_length)
}

impl Grid {
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if !(1..=4).contains(&dim) {
            return Err(Error::Config(format!(
                "grid dimension must be in 1..=4, got {dim}"
            )));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "n_per_dim must be a power of two >= 8, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Config(format!(
                "box_length must be positive and finite, got {box_length}"
            )));
        }
        let total = n
            .checked_pow(dim as u32)
            .filter(|&t| t <= MAX_MODES)
            .ok_or_else(|| {
                Error::Config(format!("grid {n}^{dim} exceeds {MAX_MODES} lattice points"))
            })?;

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        let cutoff = (n / 3) as i64;
        let mut xi_sq = Vec::with_capacity(total);
        let mut nyquist = Vec::with_capacity(total);
        let mut dealias = Vec::with_capacity(total);
        let mut reflect = Vec::with_capacity(total);
        let mut digits = vec![0usize; dim];
        for flat in 0..total {
            decode(flat, n, &mut digits);
            let mut sq = 0.0;
            let mut nyq = false;
            let mut band = true;
            let mut neg = 0usize;
            for &i in digits.iter() {
                let k = signed(i, n);
                sq += (k as f64 / box_length).powi(2);
                nyq |= i == n / 2;
                band &= k.abs() <= cutoff;
                neg = neg * n + (n - i) % n;
            }
            xi_sq.push(sq);
            nyquist.push(nyq);
            dealias.push(band);
            reflect.push(neg);
        }

        Ok(Grid {
            inner: Arc::new(GridInner {
                dim,
                n,
                box_length,
                forward,
                inverse,
                xi_sq,
                nyquist,
                dealias,
                reflect,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn n_per_dim(&self) -> usize {
        self.inner.n
    }

    pub fn box_length(&self) -> f64 {
        self.inner.box_length
    }

    /// Total number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.inner.xi_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.xi_sq.is_empty()
    }

    /// Spacing of the wavenumber lattice, `1/L`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.inner.box_length
    }

    /// Box volume `(2πL)^d`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI * self.inner.box_length).powi(self.inner.dim as i32)
    }

    /// Quadrature weight of one physical sample point, `(2πL/n)^d`.
    pub fn cell_volume(&self) -> f64 {
        (2.0 * PI * self.inner.box_length / self.inner.n as f64).powi(self.inner.dim as i32)
    }

    /// Integer wavenumbers `k` (so that `ξ = k/L`) of every storage index along one axis.
    pub fn axis_wavenumbers(&self) -> Vec<i64> {
        (0..self.inner.n).map(|i| signed(i, self.inner.n)).collect()
    }

    /// Wavevector `ξ` of a flat storage index.
    pub fn wavevector(&self, flat: usize) -> Vec<f64> {
        let mut digits = vec![0usize; self.inner.dim];
        decode(flat, self.inner.n, &mut digits);
        digits
            .iter()
            .map(|&i| signed(i, self.inner.n) as f64 / self.inner.box_length)
            .collect()
    }

    /// Integer lattice coordinates of a flat storage index.
    pub fn lattice_point(&self, flat: usize) -> Vec<i64> {
        let mut digits = vec![0usize; self.inner.dim];
        decode(flat, self.inner.n, &mut digits);
        digits.iter().map(|&i| signed(i, self.inner.n)).collect()
    }

    /// Flat storage index of integer lattice coordinates (taken modulo `n`).
    pub fn flat_index(&self, point: &[i64]) -> usize {
        let n = self.inner.n as i64;
        point
            .iter()
            .fold(0usize, |acc, &k| acc * self.inner.n + k.rem_euclid(n) as usize)
    }

    /// `|ξ|²` for every storage index.
    pub fn xi_sq(&self) -> &[f64] {
        &self.inner.xi_sq
    }

    /// True where some component sits on the Nyquist index.
    pub fn nyquist_mask(&self) -> &[bool] {
        &self.inner.nyquist
    }

    /// True inside the 2/3-rule band `|k_i| <= n/3` on every axis.
    pub fn dealias_mask(&self) -> &[bool] {
        &self.inner.dealias
    }

    /// Storage index of `-ξ` for every storage index.
    pub fn reflection(&self) -> &[usize] {
        &self.inner.reflect
    }

    /// Largest `|ξ|` present on the lattice.
    pub fn max_xi(&self) -> f64 {
        self.inner.xi_sq.iter().cloned().fold(0.0, f64::max).sqrt()
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.inner.forward
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.inner.inverse
    }

    pub(crate) fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.len() {
            return Err(Error::SizeMismatch(format!(
                "{what}: expected {} values for {:?}, got {len}",
                self.len(),
                self
            )));
        }
        Ok(())
    }

    pub(crate) fn zeros(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.len()]
    }
}

fn signed(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn decode(mut flat: usize, n: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_lattice() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let mut ks = g.axis_wavenumbers();
        ks.sort();
        assert_eq!(ks, vec![-4, -3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn mode_count_and_spacing() {
        let g = make_grid(2, 16, 1.0).unwrap();
        assert_eq!(g.len(), 256);
        let g = make_grid(2, 16, 2.0).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.wavevector(g.flat_index(&[1, 0])), vec![0.5, 0.0]);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(matches!(make_grid(0, 16, 1.0), Err(Error::Config(_))));
        assert!(matches!(make_grid(5, 16, 1.0), Err(Error::Config(_))));
        assert!(matches!(make_grid(2, 12, 1.0), Err(Error::Config(_))));
        assert!(matches!(make_grid(2, 4, 1.0), Err(Error::Config(_))));
        assert!(matches!(make_grid(2, 16, -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn reflection_is_an_involution() {
        let g = make_grid(3, 8, 1.0).unwrap();
        for flat in 0..g.len() {
            let r = g.reflection()[flat];
            assert_eq!(g.reflection()[r], flat);
            let a = g.lattice_point(flat);
            let b = g.lattice_point(r);
            for (x, y) in a.iter().zip(&b) {
                // the Nyquist index is its own reflection
                assert!(x + y == 0 || (*x == -4 && *y == -4));
            }
        }
    }
}
