use dispersmooth::evolution::{integrate, linear_propagate, nonlinear_rhs, Dispersion, System};
use dispersmooth::integrator::IntegratorConfig;
use dispersmooth::smoothing::{
    duhamel_residual, scan_initial_state, scan_member, sharpness_counterexample,
    smoothing_exponents, Component, ScanConfig, SmoothingParams, SpaceTimeField, TukeyWindow,
    XsbDispersion, xsb_norm,
};
use dispersmooth::spectral::{fourier_multiplier, make_grid, random_sobolev_field, SpectralField, Symbol};
use dispersmooth::Error;
use proptest::prelude::*;

fn kgs_params() -> SmoothingParams {
    SmoothingParams {
        system: System::Kgs,
        d: 2,
        s: 0.0,
        r: 0.0,
        alpha_probe: 0.45,
        beta_probe: 1.45,
        b: 0.55,
    }
}

fn small_scan() -> ScanConfig {
    ScanConfig {
        n_per_dim: 32,
        t_end: 0.1,
        ..ScanConfig::default()
    }
}

#[test]
fn residual_starts_at_zero() {
    let st = scan_initial_state(&kgs_params(), &small_scan(), 3).unwrap();
    let traj = integrate(&st, &IntegratorConfig::new(1e-3, 0.05)).unwrap();
    for c in Component::ALL {
        let res = duhamel_residual(&traj, c);
        assert_eq!(res[0].l2_norm(), 0.0);
        assert!(res.last().unwrap().l2_norm() > 0.0);
    }
}

#[test]
fn no_u_residual_without_u() {
    let cfg = ScanConfig {
        u_amplitude: 0.0,
        ..small_scan()
    };
    let st = scan_initial_state(&kgs_params(), &cfg, 3).unwrap();
    let traj = integrate(&st, &IntegratorConfig::new(1e-3, 0.05)).unwrap();
    assert!(duhamel_residual(&traj, Component::U).iter().all(|r| r.l2_norm() == 0.0));
    let rows = scan_member(&kgs_params(), &cfg, 3).unwrap();
    let u = rows.iter().find(|r| r.component == Component::U).unwrap();
    assert_eq!(u.slope_gain, f64::INFINITY);
}

#[test]
fn residual_matches_one_step_duhamel() {
    // For small t the residual is t·N(state₀) + O(t²).
    let st = scan_initial_state(&kgs_params(), &small_scan(), 5).unwrap();
    let (du, dp, _) = nonlinear_rhs(&st);
    let err = |t: f64| {
        let traj = integrate(&st, &IntegratorConfig::new(t / 20.0, t)).unwrap();
        let ru = duhamel_residual(&traj, Component::U).pop().unwrap();
        let rp = duhamel_residual(&traj, Component::WPlus).pop().unwrap();
        ru.sub(&du.scale_real(t)).unwrap().l2_norm() + rp.sub(&dp.scale_real(t)).unwrap().l2_norm()
    };
    let ratio = err(1e-3) / err(5e-4);
    assert!((3.5..=4.5).contains(&ratio), "error ratio {ratio}");
}

fn single_mode_history(k: &[i64], m: usize, dt: f64) -> (Vec<f64>, Vec<SpectralField>) {
    let g = make_grid(2, 16, 1.0).unwrap();
    let f = SpectralField::plane_wave(&g, k);
    let times: Vec<f64> = (0..m).map(|j| j as f64 * dt).collect();
    let fields = times
        .iter()
        .map(|&t| linear_propagate(&f, Dispersion::Schrodinger, t))
        .collect();
    (times, fields)
}

#[test]
fn free_schrodinger_mode_concentrates_on_its_parabola() {
    let (times, fields) = single_mode_history(&[3, 0], 256, 0.05);
    let stf = SpaceTimeField::new(&times, &fields, TukeyWindow::default()).unwrap();
    let g = stf.grid().clone();
    let spec = stf.tau_spectrum(g.flat_index(&[3, 0]));
    let peak = spec.iter().cloned().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let bin = 2.0 * std::f64::consts::PI / (256.0 * 0.05);
    assert!((peak.0 + 9.0).abs() <= bin, "peak at tau = {}", peak.0);

    let lo = xsb_norm(&stf, 0.0, 0.5, XsbDispersion::Schrodinger);
    let hi = xsb_norm(&stf, 0.0, 0.6, XsbDispersion::Schrodinger);
    assert!((hi / lo - 1.0).abs() < 0.05, "b sensitivity {}", hi / lo);
}

#[test]
fn xsb_norm_of_zero_is_zero() {
    let g = make_grid(2, 8, 1.0).unwrap();
    let fields = vec![SpectralField::zeros(&g); 8];
    let times: Vec<f64> = (0..8).map(|j| j as f64 * 0.1).collect();
    let stf = SpaceTimeField::new(&times, &fields, TukeyWindow::default()).unwrap();
    assert_eq!(xsb_norm(&stf, 1.0, 0.55, XsbDispersion::WavePlus), 0.0);
}

#[test]
fn spatial_weight_commutes_with_preprocessing() {
    let g = make_grid(2, 16, 1.0).unwrap();
    let f = random_sobolev_field(&g, 0.0, 8);
    let times: Vec<f64> = (0..32).map(|j| j as f64 * 0.02).collect();
    let fields: Vec<SpectralField> = times
        .iter()
        .map(|&t| linear_propagate(&f, Dispersion::KgPlus, t))
        .collect();
    let s = 0.7;
    let weighted: Vec<SpectralField> = fields
        .iter()
        .map(|x| fourier_multiplier(x, Symbol::Bessel(s)).unwrap())
        .collect();
    let a = SpaceTimeField::new(&times, &fields, TukeyWindow::default()).unwrap();
    let b = SpaceTimeField::new(&times, &weighted, TukeyWindow::default()).unwrap();
    for disp in [XsbDispersion::Schrodinger, XsbDispersion::WavePlus, XsbDispersion::WaveMinus] {
        let direct = xsb_norm(&a, s, 0.55, disp);
        let pre = xsb_norm(&b, 0.0, 0.55, disp);
        assert!((direct / pre - 1.0).abs() < 1e-10);
    }
}

#[test]
fn exponent_examples() {
    let e = smoothing_exponents(System::Kgs, 3, 0.0, 0.0).unwrap();
    assert_eq!(e.alpha_max, 0.5);
    let err = smoothing_exponents(System::Kgs, 2, -1.0, 0.5).unwrap_err();
    assert!(matches!(err, Error::Admissibility(ref m) if m.contains("s > -1/4")), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn probes_must_sit_below_thresholds() {
    let mut p = kgs_params();
    p.alpha_probe = 0.5;
    assert!(matches!(p.validate(), Err(Error::Admissibility(_))));
    p.alpha_probe = 0.45;
    p.beta_probe = 1.6;
    assert!(matches!(p.validate(), Err(Error::Admissibility(_))));
}

#[test]
fn box_norms_follow_the_scaling() {
    let ns = [8.0, 16.0, 32.0, 64.0, 128.0];
    for s in [0.0, 0.5, 1.0] {
        let scaled: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let r = sharpness_counterexample(n, s, 0.0, 0.5, 0.55, 2).unwrap();
                r.u_norm * n.powf(0.5 - s)
            })
            .collect();
        let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 1.1, "s={s}: N^(1/2-s)|u| = {scaled:?}");
    }
}

#[test]
fn no_gain_ratio_stays_bounded() {
    let ratios: Vec<f64> = [8.0, 16.0, 32.0, 64.0, 128.0]
        .iter()
        .map(|&n| sharpness_counterexample(n, 0.0, 0.0, 0.0, 0.55, 2).unwrap().ratio)
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] <= w[0]), "{ratios:?}");
}

#[test]
fn counterexample_rejects_small_n() {
    assert!(matches!(
        sharpness_counterexample(1.0, 0.0, 0.0, 0.5, 0.55, 2),
        Err(Error::Config(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_max_is_monotone_in_r(
        d in 2usize..=4,
        s in -0.2f64..2.0,
        r in -0.4f64..2.0,
        dr in 0.0f64..0.5,
        zakharov in any::<bool>(),
    ) {
        let system = if zakharov { System::Zakharov } else { System::Kgs };
        if let (Ok(a), Ok(b)) = (
            smoothing_exponents(system, d, s, r),
            smoothing_exponents(system, d, s, r + dr),
        ) {
            prop_assert!(b.alpha_max >= a.alpha_max);
        }
    }
}
