use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::transform_nd;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Policy for the zero mode of a homogeneous symbol `|ξ|^σ` with `σ < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMode {
    /// Refuse to evaluate the symbol at `ξ = 0`.
    Reject,
    /// Define the symbol as zero at `ξ = 0`.
    Annihilate,
}

/// One complex field stored as Fourier coefficients on a [`Grid`].
///
/// Convention: `û(ξ) = (2πL/n)^d Σ_x u(x) e^{-iξ·x}` over the sample points
/// `x_j = 2πL j/n`, so a constant `c` has zero mode `c (2πL)^d` and
/// `‖u‖²_{L²} = (2πL)^{-d} Σ |û(ξ)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: grid.zeros(),
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.check_len(coeffs.len(), "coefficients")?;
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Forward transform of physical samples given row-major over the axes.
    pub fn from_samples(grid: &Grid, samples: &[Complex64]) -> Result<Self> {
        grid.check_len(samples.len(), "samples")?;
        let mut coeffs = samples.to_vec();
        transform_nd(&mut coeffs, grid.n_per_dim(), grid.dim(), grid.forward_plan().as_ref());
        let w = grid.cell_volume();
        for c in coeffs.iter_mut() {
            *c *= w;
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Samples a function of the physical point `x ∈ [0, 2πL)^d`.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let samples: Vec<Complex64> = sample_points(grid).map(|x| f(&x)).collect();
        Self::from_samples(grid, &samples).expect("sample count matches grid")
    }

    /// Single Fourier mode `e^{ik·x/L}` with integer lattice coordinates `k`.
    pub fn plane_wave(grid: &Grid, k: &[i64]) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[grid.flat_index(k)] = Complex64::new(grid.volume(), 0.0);
        f
    }

    /// Inverse transform back to physical samples.
    pub fn to_samples(&self) -> Vec<Complex64> {
        let mut out = self.coeffs.clone();
        transform_nd(
            &mut out,
            self.grid.n_per_dim(),
            self.grid.dim(),
            self.grid.inverse_plan().as_ref(),
        );
        let w = 1.0 / self.grid.volume();
        for c in out.iter_mut() {
            *c *= w;
        }
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub(crate) fn same_grid(&self, other: &SpectralField, what: &str) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::SizeMismatch(format!(
                "{what}: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// `L²` norm via Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm(|_| 1.0)
    }

    /// Inhomogeneous Sobolev norm `‖⟨ξ⟩^s û‖`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|xi_sq| (1.0 + xi_sq).powf(s))
    }

    /// Homogeneous Sobolev norm `‖|ξ|^s û‖`.
    pub fn homogeneous_norm(&self, s: f64, zero_mode: ZeroMode) -> Result<f64> {
        if s < 0.0 && zero_mode == ZeroMode::Reject && self.coeffs[0].norm() > 0.0 {
            return Err(Error::SingularSymbol(format!(
                "|xi|^{s} at the zero mode of a field with nonzero mean"
            )));
        }
        Ok(self.weighted_norm(|xi_sq| {
            if xi_sq == 0.0 {
                if s == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                xi_sq.powf(s)
            }
        }))
    }

    /// `((2πL)^{-d} Σ weight(|ξ|²) |û|²)^{1/2}`.
    pub(crate) fn weighted_norm(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(self.grid.xi_sq())
            .map(|(c, &q)| weight(q) * c.norm_sqr())
            .sum();
        (sum / self.grid.volume()).sqrt()
    }

    /// `L²` inner product `∫ f ḡ dx`.
    pub fn inner(&self, other: &SpectralField) -> Result<Complex64> {
        self.same_grid(other, "inner product")?;
        let sum: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(sum / self.grid.volume())
    }

    /// Mean-zero check helper: the coefficient of the zero mode.
    pub fn zero_mode(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn scale(&self, a: Complex64) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn scale_real(&self, a: f64) -> SpectralField {
        self.scale(Complex64::new(a, 0.0))
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: Complex64, other: &SpectralField) -> Result<SpectralField> {
        self.same_grid(other, "axpy")?;
        Ok(SpectralField {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + a * y)
                .collect(),
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Coefficients of the pointwise complex conjugate, `conj(û(-ξ))`.
    pub fn conj(&self) -> SpectralField {
        let r = self.grid.reflection();
        SpectralField {
            grid: self.grid.clone(),
            coeffs: (0..self.coeffs.len())
                .map(|i| self.coeffs[r[i]].conj())
                .collect(),
        }
    }

    /// Pointwise real part. On the sample grid this is exactly `(u + ū)/2`.
    pub fn real_part(&self) -> SpectralField {
        let r = self.grid.reflection();
        SpectralField {
            grid: self.grid.clone(),
            coeffs: (0..self.coeffs.len())
                .map(|i| 0.5 * (self.coeffs[i] + self.coeffs[r[i]].conj()))
                .collect(),
        }
    }

    /// Largest `|û(ξ) - ḡ(ξ)|` divided by the box volume, a coefficient-level sup distance.
    pub fn max_abs_diff(&self, other: &SpectralField) -> Result<f64> {
        self.same_grid(other, "difference")?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / self.grid.volume())
    }

    /// True if every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Physical sample points `x_j = 2πL j / n`, row-major over the axes.
pub fn sample_points(grid: &Grid) -> impl Iterator<Item = Vec<f64>> + '_ {
    let n = grid.n_per_dim();
    let d = grid.dim();
    let h = 2.0 * PI * grid.box_length() / n as f64;
    (0..grid.len()).map(move |mut flat| {
        let mut x = vec![0.0; d];
        for slot in x.iter_mut().rev() {
            *slot = (flat % n) as f64 * h;
            flat /= n;
        }
        x
    })
}

/// Spatial quadrature `∫ |u|² dx ≈ (2πL/n)^d Σ_j |u(x_j)|²` of physical samples.
pub fn quadrature_l2_sq(grid: &Grid, samples: &[Complex64]) -> f64 {
    samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::make_grid;

    #[test]
    fn constant_has_only_zero_mode() {
        let g = make_grid(2, 8, 1.5).unwrap();
        let f = SpectralField::from_samples(&g, &vec![Complex64::new(2.0, -1.0); 64]).unwrap();
        let v = g.volume();
        assert!((f.coeffs()[0] - Complex64::new(2.0 * v, -v)).norm() < 1e-10 * v);
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-10));
    }

    #[test]
    fn plane_wave_matches_samples() {
        let g = make_grid(1, 16, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |x| Complex64::from_polar(1.0, 3.0 * x[0]));
        let p = SpectralField::plane_wave(&g, &[3]);
        assert!(f.max_abs_diff(&p).unwrap() < 1e-14);
        assert!((f.l2_norm() - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let g = make_grid(1, 16, 1.0).unwrap();
        assert!(matches!(
            SpectralField::from_samples(&g, &[Complex64::new(0.0, 0.0); 15]),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn real_part_matches_physical() {
        let g = make_grid(2, 8, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |x| Complex64::new(x[0].sin(), x[1].cos() + x[0]));
        let re = f.real_part().to_samples();
        let direct: Vec<Complex64> = f.to_samples().iter().map(|c| Complex64::new(c.re, 0.0)).collect();
        for (a, b) in re.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn homogeneous_negative_needs_policy() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |_| Complex64::new(1.0, 0.0));
        assert!(f.homogeneous_norm(-1.0, ZeroMode::Reject).is_err());
        assert_eq!(f.homogeneous_norm(-1.0, ZeroMode::Annihilate).unwrap(), 0.0);
    }
}
