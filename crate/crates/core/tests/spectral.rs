use std::f64::consts::PI;

use dispersmooth::spectral::{
    dealias, dealiased_product, fourier_multiplier, make_grid, project, quadrature_l2_sq,
    random_decay_exponent, random_real_sobolev_field, random_sobolev_field, sample_points,
    sobolev_norm, spectral_slope, DyadicShellSet, Grid, Projection, SpectralField, Symbol,
};
use dispersmooth::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
}

#[test]
fn lattice_examples() {
    let g = make_grid(1, 8, 1.0).unwrap();
    let mut k = g.axis_wavenumbers();
    k.sort();
    assert_eq!(k, vec![-4, -3, -2, -1, 0, 1, 2, 3]);
    assert_eq!(make_grid(2, 16, 1.0).unwrap().len(), 256);
    let g = make_grid(2, 16, 2.0).unwrap();
    let spacing = g.wavevector(g.flat_index(&[1, 0]))[0];
    assert_eq!(spacing, 0.5);
}

#[test]
fn invalid_grids_are_config_errors() {
    assert!(matches!(make_grid(0, 8, 1.0), Err(Error::Config(_))));
    assert!(matches!(make_grid(2, 7, 1.0), Err(Error::Config(_))));
    assert!(matches!(make_grid(2, 8, 0.0), Err(Error::Config(_))));
}

#[test]
fn single_mode_and_zero_transforms() {
    let g = make_grid(1, 16, 1.0).unwrap();
    let samples: Vec<Complex64> = sample_points(&g).map(|x| Complex64::from_polar(1.0, 3.0 * x[0])).collect();
    let f = SpectralField::from_samples(&g, &samples).unwrap();
    let nonzero: Vec<i64> = (0..g.len())
        .filter(|&i| f.coeffs()[i].norm() > 1e-12)
        .map(|i| g.lattice_point(i)[0])
        .collect();
    assert_eq!(nonzero, vec![3]);
    let z = SpectralField::from_samples(&g, &vec![c(0.0, 0.0); 16]).unwrap();
    assert!(z.coeffs().iter().all(|x| x.norm() == 0.0));
}

/// `û(ξ) = (2πL/n)^d Σ_x u(x) e^{-iξ·x}` summed directly.
fn direct_dft(g: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<Vec<f64>> = sample_points(g).collect();
    (0..g.len())
        .map(|k| {
            let xi = g.wavevector(k);
            let s: Complex64 = pts
                .iter()
                .zip(samples)
                .map(|(x, u)| {
                    let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                    u * Complex64::from_polar(1.0, -phase)
                })
                .sum();
            s * g.cell_volume()
        })
        .collect()
}

#[test]
fn transform_matches_direct_sum() {
    let g = make_grid(2, 8, 1.3).unwrap();
    let f = random_sobolev_field(&g, 0.5, 4);
    let samples = f.to_samples();
    let oracle = direct_dft(&g, &samples);
    let scale = f.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
    assert!(max_diff(f.coeffs(), &oracle) < 1e-12 * scale.max(1.0));
    let back = SpectralField::from_samples(&g, &samples).unwrap();
    assert!(max_diff(back.coeffs(), f.coeffs()) < 1e-12 * scale.max(1.0));
}

#[test]
fn multiplier_examples() {
    let g = make_grid(1, 16, 1.0).unwrap();
    let f = SpectralField::plane_wave(&g, &[3]);
    assert_eq!(fourier_multiplier(&f, Symbol::Bessel(0.0)).unwrap(), f);
    let sq = fourier_multiplier(&f, Symbol::Bessel(2.0)).unwrap();
    assert!(rel_diff(&sq, &f.scale_real(10.0)) < 1e-14);
    let expect = 10f64.sqrt() * f.l2_norm();
    assert!((sobolev_norm(&f, 1.0, false).unwrap() - expect).abs() < 1e-12 * expect);
    assert_eq!(SpectralField::zeros(&g).sobolev_norm(3.0), 0.0);
}

#[test]
fn sobolev_zero_matches_quadrature() {
    let g = make_grid(2, 32, 1.0).unwrap();
    let f = random_sobolev_field(&g, 0.3, 9);
    let q = quadrature_l2_sq(&g, &f.to_samples()).sqrt();
    assert!((f.sobolev_norm(0.0) / q - 1.0).abs() < 1e-10);
}

#[test]
fn lowpass_examples() {
    let g = make_grid(1, 16, 1.0).unwrap();
    let f = SpectralField::plane_wave(&g, &[3]);
    assert_eq!(project(&f, Projection::Lowpass(4.0)).unwrap(), f);
    assert_eq!(project(&f, Projection::Lowpass(2.0)).unwrap().l2_norm(), 0.0);
}

#[test]
fn product_examples() {
    let g = make_grid(1, 16, 1.0).unwrap();
    let a = SpectralField::plane_wave(&g, &[2]);
    let b = SpectralField::plane_wave(&g, &[3]);
    let p = dealiased_product(&a, &b).unwrap();
    let expect = SpectralField::plane_wave(&g, &[5]);
    assert!(p.sub(&expect).unwrap().l2_norm() < 1e-12);
    let z = dealiased_product(&a, &SpectralField::zeros(&g)).unwrap();
    assert_eq!(z.l2_norm(), 0.0);
}

#[test]
fn product_matches_truncated_convolution() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let f = dealias(&random_sobolev_field(&g, 0.0, 1));
    let h = dealias(&random_sobolev_field(&g, 0.5, 2));
    let p = dealiased_product(&f, &h).unwrap();
    let n = g.n_per_dim() as i64;
    let band = n / 3;
    let norm = (2.0 * PI * g.box_length()).powi(2);
    let mut oracle = vec![c(0.0, 0.0); g.len()];
    for i in 0..g.len() {
        let ki = g.lattice_point(i);
        for j in 0..g.len() {
            let kj = g.lattice_point(j);
            let k: Vec<i64> = ki.iter().zip(&kj).map(|(a, b)| a + b).collect();
            if k.iter().all(|x| x.abs() <= band) {
                oracle[g.flat_index(&k)] += f.coeffs()[i] * h.coeffs()[j] / norm;
            }
        }
    }
    let scale = oracle.iter().map(|x| x.norm()).fold(0.0, f64::max);
    assert!(max_diff(p.coeffs(), &oracle) < 1e-12 * scale);
}

#[test]
fn random_field_tail_slope() {
    for (d, n, s) in [(2, 128, 1.0), (2, 128, 0.0), (3, 32, 0.5)] {
        let g = make_grid(d, n, 1.0).unwrap();
        let f = random_sobolev_field(&g, s, 17);
        let slope = spectral_slope(&f).unwrap();
        let expect = -random_decay_exponent(d, s);
        assert!((slope - expect).abs() < 0.1, "d={d} s={s}: slope {slope}, expected {expect}");
    }
}

#[test]
fn smooth_random_field_lives_in_low_shells() {
    let g = make_grid(2, 64, 1.0).unwrap();
    let f = random_sobolev_field(&g, 10.0, 3);
    let low = project(&f, Projection::Lowpass(2.0)).unwrap();
    assert!(low.sobolev_norm(1.0) > 0.99 * f.sobolev_norm(1.0));
}

#[test]
fn real_field_has_hermitian_coefficients() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let f = random_real_sobolev_field(&g, 0.0, 5);
    assert!(f.to_samples().iter().all(|x| x.im.abs() < 1e-12));
}

fn field_strategy() -> impl Strategy<Value = (usize, f64, u64)> {
    (1usize..=3, -0.5f64..2.0, any::<u64>())
}

fn grid_for(d: usize) -> Grid {
    let n = match d {
        1 => 64,
        2 => 16,
        _ => 8,
    };
    make_grid(d, n, 1.0 + 0.25 * d as f64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval((d, s, seed) in field_strategy()) {
        let g = grid_for(d);
        let f = random_sobolev_field(&g, s, seed);
        let q = quadrature_l2_sq(&g, &f.to_samples());
        prop_assert!((q / f.l2_norm().powi(2) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transform_roundtrip((d, s, seed) in field_strategy()) {
        let g = grid_for(d);
        let f = random_sobolev_field(&g, s, seed);
        let samples = f.to_samples();
        let back = SpectralField::from_samples(&g, &samples).unwrap().to_samples();
        prop_assert!(max_diff(&samples, &back) < 1e-12);
    }

    #[test]
    fn bessel_powers_invert((d, s, seed) in field_strategy(), sigma in -3.0f64..3.0) {
        let g = grid_for(d);
        let f = random_sobolev_field(&g, s, seed);
        let there = fourier_multiplier(&f, Symbol::Bessel(sigma)).unwrap();
        let back = fourier_multiplier(&there, Symbol::Bessel(-sigma)).unwrap();
        // Nyquist modes are zeroed by every multiplier.
        let f_no_nyq = fourier_multiplier(&f, Symbol::Bessel(0.0)).unwrap();
        prop_assert!(max_diff(back.coeffs(), f_no_nyq.coeffs()) < 1e-12 * f.l2_norm().max(1.0));
    }

    #[test]
    fn lowpass_is_idempotent((d, s, seed) in field_strategy(), cut in 0.0f64..10.0) {
        let g = grid_for(d);
        let f = random_sobolev_field(&g, s, seed);
        let once = project(&f, Projection::Lowpass(cut)).unwrap();
        prop_assert_eq!(project(&once, Projection::Lowpass(cut)).unwrap(), once);
    }

    #[test]
    fn shells_partition((d, s, seed) in field_strategy()) {
        let g = grid_for(d);
        let f = random_sobolev_field(&g, s, seed);
        let shells = DyadicShellSet::new(&g);
        let mut sum = SpectralField::zeros(&g);
        for j in 0..shells.len() {
            sum = sum.add(&project(&f, Projection::Shell(j)).unwrap()).unwrap();
        }
        prop_assert!(max_diff(sum.coeffs(), f.coeffs()) < 1e-12 * f.l2_norm().max(1.0));
    }
}
