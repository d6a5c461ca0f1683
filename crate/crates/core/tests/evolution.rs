use dispersmooth::evolution::{
    conserved_quantities, integrate, join_wave, linear_propagate, nonlinear_rhs, split_wave,
    Dispersion, System, SystemState,
};
use dispersmooth::integrator::{IntegratorConfig, Scheme};
use dispersmooth::spectral::{
    make_grid, project, random_real_sobolev_field, random_sobolev_field, Grid, Projection,
    SpectralField,
};
use dispersmooth::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn close(a: &SpectralField, b: &SpectralField, tol: f64) -> bool {
    a.sub(b).unwrap().l2_norm() <= tol * b.l2_norm().max(1.0)
}

fn low_mode(grid: &Grid, amp: f64, seed: u64, real: bool) -> SpectralField {
    let f = if real {
        random_real_sobolev_field(grid, 0.0, seed)
    } else {
        random_sobolev_field(grid, 0.0, seed)
    };
    let f = project(&f, Projection::Lowpass(4.0)).unwrap();
    let n = f.l2_norm();
    f.scale_real(amp / n)
}

fn random_state(system: System, grid: &Grid, amp: f64, seed: u64) -> SystemState {
    let u = low_mode(grid, amp, seed, false);
    let v = low_mode(grid, amp, seed + 1, true);
    let mut vt = low_mode(grid, amp, seed + 2, true);
    vt.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    SystemState::from_wave_data(system, u, &v, &vt).unwrap()
}

#[test]
fn linear_propagation_examples() {
    let g = make_grid(1, 16, 1.0).unwrap();
    let f = SpectralField::plane_wave(&g, &[3]);
    assert_eq!(linear_propagate(&f, Dispersion::Schrodinger, 0.0), f);
    let t = 0.37;
    let out = linear_propagate(&f, Dispersion::Schrodinger, t);
    let expect = f.scale(Complex64::from_polar(1.0, -9.0 * t));
    assert!(close(&out, &expect, 1e-14));

    let g = make_grid(2, 32, 1.0).unwrap();
    let f = random_sobolev_field(&g, 0.7, 2);
    for d in [Dispersion::Schrodinger, Dispersion::KgPlus, Dispersion::KgMinus] {
        let out = linear_propagate(&f, d, 1.3);
        assert!((out.sobolev_norm(0.7) / f.sobolev_norm(0.7) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rhs_vanishing_cases() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let z = SpectralField::zeros(&g);
    let w = random_real_sobolev_field(&g, 0.0, 3);
    let (wp, wm) = join_wave(&w, &z).unwrap();
    let st = SystemState::new(System::Kgs, z.clone(), wp, wm, 0.0).unwrap();
    let (_, dp, dm) = nonlinear_rhs(&st);
    assert_eq!(dp.l2_norm(), 0.0);
    assert_eq!(dm.l2_norm(), 0.0);
    let u = random_sobolev_field(&g, 0.0, 4);
    let st = SystemState::new(System::Kgs, u, z.clone(), z, 0.0).unwrap();
    assert_eq!(nonlinear_rhs(&st).0.l2_norm(), 0.0);
}

#[test]
fn rhs_on_single_modes() {
    // u = e^{2ix}, w± = e^{ix}: u(w⁺+w⁻) = 2e^{3ix}, |u|² = 1.
    let g = make_grid(1, 16, 1.0).unwrap();
    let u = SpectralField::plane_wave(&g, &[2]);
    let w = SpectralField::plane_wave(&g, &[1]);
    let one = SpectralField::plane_wave(&g, &[0]);
    let e3 = SpectralField::plane_wave(&g, &[3]);

    let st = SystemState::new(System::Kgs, u.clone(), w.clone(), w.clone(), 0.0).unwrap();
    let (du, dp, dm) = nonlinear_rhs(&st);
    assert!(close(&du, &e3.scale(i()), 1e-13));
    assert!(close(&dp, &one.scale(i()), 1e-13));
    assert!(close(&dm, &one.scale(-i()), 1e-13));

    // Zakharov: Δ|u|² = 0 and Re e^{ix} = (e^{ix} + e^{-ix})/2 with ⟨1⟩^{-1} = 2^{-1/2}.
    let st = SystemState::new(System::Zakharov, u, w.clone(), w.clone(), 0.0).unwrap();
    let (du, dp, dm) = nonlinear_rhs(&st);
    let cos = w.add(&SpectralField::plane_wave(&g, &[-1])).unwrap().scale_real(0.5);
    let k = 0.5f64.sqrt();
    assert!(close(&du, &e3.scale(-i()), 1e-13));
    assert!(close(&dp, &cos.scale(i() * k), 1e-13));
    assert!(close(&dm, &cos.scale(-i() * k), 1e-13));
}

#[test]
fn zero_data_stays_zero() {
    let g = make_grid(2, 16, 1.0).unwrap();
    for system in [System::Kgs, System::Zakharov] {
        let st = SystemState::zeros(system, &g);
        let traj = integrate(&st, &IntegratorConfig::new(1e-2, 0.2)).unwrap();
        assert!(traj.iter().all(|s| s.u.l2_norm() == 0.0 && s.wplus.l2_norm() == 0.0));
    }
}

#[test]
fn wave_decouples_without_u() {
    let g = make_grid(2, 32, 1.0).unwrap();
    let mut st = random_state(System::Kgs, &g, 1.0, 10);
    st.u = SpectralField::zeros(&g);
    let traj = integrate(&st, &IntegratorConfig::new(1e-2, 1.0)).unwrap();
    for s in &traj {
        assert_eq!(s.u.l2_norm(), 0.0);
        let exact = st.linear_propagate(s.t);
        assert!(close(&s.wplus, &exact.wplus, 1e-12));
        assert!(close(&s.wminus, &exact.wminus, 1e-12));
    }
}

#[test]
fn phase_gauge_invariance() {
    let g = make_grid(2, 32, 1.0).unwrap();
    let theta = 0.83;
    let rot = Complex64::from_polar(1.0, theta);
    for system in [System::Kgs, System::Zakharov] {
        let st = random_state(system, &g, 3.0, 20);
        let mut turned = st.clone();
        turned.u = st.u.scale(rot);
        let cfg = IntegratorConfig::new(2e-3, 0.5);
        let a = integrate(&st, &cfg).unwrap();
        let b = integrate(&turned, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(close(&y.u, &x.u.scale(rot), 1e-10));
            assert!(close(&y.wplus, &x.wplus, 1e-10));
            assert!(close(&y.wminus, &x.wminus, 1e-10));
        }
    }
}

#[test]
fn reality_is_preserved() {
    let g = make_grid(2, 32, 1.0).unwrap();
    for system in [System::Kgs, System::Zakharov] {
        let st = random_state(system, &g, 3.0, 30);
        let traj = integrate(&st, &IntegratorConfig::new(2e-3, 1.0)).unwrap();
        for s in &traj {
            assert!(s.reality_defect() <= 1e-8, "{system} t={} defect {}", s.t, s.reality_defect());
        }
    }
}

#[test]
fn solution_error_is_fourth_order() {
    let g = make_grid(2, 32, 1.0).unwrap();
    let st = random_state(System::Kgs, &g, 30.0, 1);
    let run = |dt: f64| {
        let mut cfg = IntegratorConfig::new(dt, 1.0);
        cfg.record_every = usize::MAX;
        integrate(&st, &cfg).unwrap().pop().unwrap()
    };
    let reference = run(2.5e-4);
    let err = |s: &SystemState| {
        s.u.sub(&reference.u).unwrap().l2_norm() + s.wplus.sub(&reference.wplus).unwrap().l2_norm()
    };
    let ratio = err(&run(4e-3)) / err(&run(2e-3));
    assert!((12.0..=20.0).contains(&ratio), "halving ratio {ratio}");
}

#[test]
fn strang_scheme_is_second_order() {
    let g = make_grid(2, 32, 1.0).unwrap();
    let st = random_state(System::Kgs, &g, 10.0, 2);
    let run = |dt: f64| {
        let mut cfg = IntegratorConfig::new(dt, 0.5);
        cfg.scheme = Scheme::Strang;
        cfg.record_every = usize::MAX;
        integrate(&st, &cfg).unwrap().pop().unwrap()
    };
    let reference = run(1.25e-4);
    let err = |s: &SystemState| s.u.sub(&reference.u).unwrap().l2_norm();
    let ratio = err(&run(4e-3)) / err(&run(2e-3));
    assert!((3.0..=5.0).contains(&ratio), "halving ratio {ratio}");
}

#[test]
fn kgs_hamiltonian_conserved() {
    let g = make_grid(2, 64, 1.0).unwrap();
    let st = random_state(System::Kgs, &g, 3.0, 40);
    let mut cfg = IntegratorConfig::new(1e-3, 1.0);
    cfg.record_every = usize::MAX;
    let last = integrate(&st, &cfg).unwrap().pop().unwrap();
    let (e0, e1) = (
        conserved_quantities(&st, 1.0, 1.0).hamiltonian,
        conserved_quantities(&last, 1.0, 1.0).hamiltonian,
    );
    assert!(((e1 - e0) / e0).abs() < 1e-6);
}

#[test]
fn energy_of_single_mode() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let z = SpectralField::zeros(&g);
    let st = SystemState::zeros(System::Kgs, &g);
    let c = conserved_quantities(&st, 1.0, 1.0);
    assert_eq!((c.mass, c.hamiltonian), (0.0, 0.0));
    let u = SpectralField::plane_wave(&g, &[3, 1]);
    let st = SystemState::new(System::Kgs, u, z.clone(), z, 0.0).unwrap();
    let c = conserved_quantities(&st, 1.0, 1.0);
    assert!((c.hamiltonian - 10.0 * c.mass * c.mass).abs() < 1e-12 * c.hamiltonian);
}

#[test]
fn nonfinite_state_is_a_blow_up() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let mut st = SystemState::zeros(System::Zakharov, &g);
    st.u.coeffs_mut()[1] = Complex64::new(f64::NAN, 0.0);
    let err = integrate(&st, &IntegratorConfig::new(1e-2, 0.1)).unwrap_err();
    assert!(matches!(err, Error::BlowUp { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn mismatched_grids_rejected() {
    let a = SpectralField::zeros(&make_grid(2, 16, 1.0).unwrap());
    let b = SpectralField::zeros(&make_grid(2, 8, 1.0).unwrap());
    assert!(matches!(
        SystemState::new(System::Kgs, a.clone(), b, a.clone(), 0.0),
        Err(Error::SizeMismatch(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wave_join_split_roundtrip(seed in any::<u64>(), r in -1.0f64..2.0) {
        let g = make_grid(2, 16, 1.0).unwrap();
        let v = random_real_sobolev_field(&g, r, seed);
        let vt = random_real_sobolev_field(&g, r - 1.0, seed.wrapping_add(1));
        let (wp, wm) = join_wave(&v, &vt).unwrap();
        // Real data: w⁻ is the conjugate field of w⁺.
        prop_assert!(wp.conj().sub(&wm).unwrap().l2_norm() <= 1e-12 * wp.l2_norm().max(1.0));
        let (v2, vt2) = split_wave(&wp, &wm).unwrap();
        let nyq_free = |f: &SpectralField| {
            dispersmooth::spectral::fourier_multiplier(f, dispersmooth::spectral::Symbol::Bessel(0.0)).unwrap()
        };
        prop_assert!(close(&v2, &nyq_free(&v), 1e-12));
        prop_assert!(close(&vt2, &nyq_free(&vt), 1e-12));
    }
}
