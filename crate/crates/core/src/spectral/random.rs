use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::SpectralField;
use super::grid::Grid;

/// Tail offset in the decay exponent of random data.
pub const RANDOM_TAIL_EPS: f64 = 0.05;

/// Exponent `p` such that random `H^s` data decays like `⟨ξ⟩^{-p}`.
pub fn random_decay_exponent(dim: usize, s: f64) -> f64 {
    s + dim as f64 / 2.0 + RANDOM_TAIL_EPS
}

/// Complex random field with coefficients `⟨ξ⟩^{-s-d/2-0.05} g_ξ`.
///
/// `g_ξ` are independent standard complex Gaussians `(x + iy)/√2` drawn from a
/// ChaCha stream seeded by `seed`. Nyquist modes are zero.
pub fn random_sobolev_field(grid: &Grid, s: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_decay_exponent(grid.dim(), s);
    let coeffs = grid
        .xi_sq()
        .iter()
        .zip(grid.nyquist_mask())
        .map(|(&q, &nyq)| {
            let x: f64 = StandardNormal.sample(&mut rng);
            let y: f64 = StandardNormal.sample(&mut rng);
            if nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(x, y) * ((1.0 + q).powf(-0.5 * p) / std::f64::consts::SQRT_2)
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("generated on grid")
}

/// Real-valued variant: the Hermitian part of [`random_sobolev_field`], rescaled by `√2`.
pub fn random_real_sobolev_field(grid: &Grid, s: f64, seed: u64) -> SpectralField {
    random_sobolev_field(grid, s, seed)
        .real_part()
        .scale_real(std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::make_grid;

    #[test]
    fn deterministic_per_seed() {
        let g = make_grid(2, 16, 1.0).unwrap();
        assert_eq!(random_sobolev_field(&g, 0.5, 7), random_sobolev_field(&g, 0.5, 7));
        assert_ne!(random_sobolev_field(&g, 0.5, 7), random_sobolev_field(&g, 0.5, 8));
    }

    #[test]
    fn real_variant_is_real() {
        let g = make_grid(2, 16, 1.0).unwrap();
        let f = random_real_sobolev_field(&g, 0.0, 3);
        let max_im = f.to_samples().iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-14);
    }
}
