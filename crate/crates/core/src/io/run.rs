//! One runner per experiment. Each returns a [`Report`]; nothing here touches the disk.

use std::path::Path;

use rayon::prelude::*;

use super::checkpoint::{load_checkpoint, Checkpoint};
use super::config::{Experiment, RunConfig};
use super::output::{CsvTable, Report};
use crate::dissipative::{
    attractor_diagnostics, energy_h_rate, integrate_damped, DampedParams, DampedState,
};
use crate::error::{Error, Result};
use crate::evolution::{conserved_quantities, System, SystemState, TransformedSystem};
use crate::highlow::run_global;
use crate::integrator::{integrate_system, IntegratorConfig};
use crate::resonance::{
    bilinear_constant_estimate, calc_lemma_check, resonant_shell_sample, shell_thickness,
    BilinearConfig,
};
use crate::smoothing::{
    scan_initial_state, sharpness_counterexample_with, smoothing_scan, BoxResolution, ScanConfig,
    SmoothingParams,
};
use crate::spectral::{
    dealias, loglog_slope, make_grid, random_real_sobolev_field, random_sobolev_field, Grid,
    SpectralField,
};

/// Validate `config` and run its experiment.
pub fn run_experiment(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    match config.experiment()? {
        Experiment::Simulate => run_simulate(config),
        Experiment::SmoothingScan => run_smoothing_scan(config),
        Experiment::Counterexample => run_counterexample(config),
        Experiment::Highlow => run_highlow(config),
        Experiment::Attractor => run_attractor(config),
        Experiment::XsbConstant => run_xsb(config),
        Experiment::ResonanceGeometry => run_resonance(config),
    }
}

fn grid_of(config: &RunConfig) -> Result<Grid> {
    make_grid(config.grid.d, config.grid.n_per_dim, config.grid.box_length)
}

/// Random band-limited data with `‖u₀‖_{H^s}` and `‖w₀⁺‖_{H^r}` set to the given amplitudes.
fn random_state(config: &RunConfig, system: System, s: f64, r: f64, u_amp: f64, wave_amp: f64) -> Result<SystemState> {
    let params = SmoothingParams {
        system,
        d: config.grid.d,
        s,
        r,
        alpha_probe: 0.0,
        beta_probe: 0.0,
        b: 0.5,
    };
    let sc = ScanConfig {
        n_per_dim: config.grid.n_per_dim,
        box_length: config.grid.box_length,
        u_amplitude: u_amp,
        wave_amplitude: wave_amp,
        ..ScanConfig::default()
    };
    scan_initial_state(&params, &sc, config.seed)
}

fn run_simulate(config: &RunConfig) -> Result<Report> {
    let system: System = config.system.kind.into();
    let (s, r) = (config.system.s, config.system.r);
    let state = match &config.initial.checkpoint {
        Some(path) => {
            let st = load_checkpoint(Path::new(path))?;
            if st.system != system {
                return Err(Error::Config(format!(
                    "checkpoint {path} holds a {} state but system.kind is {system}",
                    st.system
                )));
            }
            let g = st.grid();
            if (g.dim(), g.n_per_dim(), g.box_length()) != (config.grid.d, config.grid.n_per_dim, config.grid.box_length) {
                return Err(Error::Config(format!("checkpoint {path} grid differs from [grid]")));
            }
            st
        }
        None => random_state(config, system, s, r, config.initial.u_amplitude, config.initial.wave_amplitude)?,
    };
    let sys = TransformedSystem::new(system, state.grid());
    let traj = integrate_system(&sys, state.fields(), state.t, &config.integrator.to_config())?;
    let mut table = CsvTable::new(&["step", "t", "mass", "hamiltonian", "Hs_u", "Hr_wplus", "Hr_wminus"]);
    let mut last = None;
    for snap in traj {
        let mut f = snap.fields.into_iter();
        let (u, wp, wm) = (f.next().unwrap(), f.next().unwrap(), f.next().unwrap());
        let st = SystemState::new(system, u, wp, wm, snap.t)?;
        let c = conserved_quantities(&st, s, r);
        table.push(vec![
            snap.step.into(),
            snap.t.into(),
            c.mass.into(),
            c.hamiltonian.into(),
            c.hs_u.into(),
            c.hr_wplus.into(),
            c.hr_wminus.into(),
        ]);
        last = Some(st);
    }
    let mut report = Report::default();
    report.tables.push(("timeseries.csv".into(), table));
    if config.output.checkpoint {
        let st = last.expect("trajectory has the initial state");
        report.checkpoints.push(("final.zkgs".into(), Checkpoint::from_state(&st)));
    }
    Ok(report)
}

fn run_smoothing_scan(config: &RunConfig) -> Result<Report> {
    let params = config.smoothing_params()?;
    let rep = smoothing_scan(&params, &config.scan_config(), config.smoothing.ensemble, config.seed)?;
    let mut rows = CsvTable::new(&["seed", "component", "alpha_probe", "residual_norm", "slope_gain"]);
    for r in &rep.rows {
        rows.push(vec![
            r.seed.into(),
            r.component.to_string().into(),
            r.alpha_probe.into(),
            r.residual_norm.into(),
            r.slope_gain.into(),
        ]);
    }
    let mut summary = CsvTable::new(&[
        "component",
        "mean_gain",
        "spread_gain",
        "mean_residual_norm",
        "max_residual_norm",
    ]);
    for c in &rep.summary {
        summary.push(vec![
            c.component.to_string().into(),
            c.mean_gain.into(),
            c.spread_gain.into(),
            c.mean_residual_norm.into(),
            c.max_residual_norm.into(),
        ]);
    }
    let mut report = Report::default();
    report.notes.push(format!(
        "probes: alpha = {}, beta = {}",
        params.alpha_probe, params.beta_probe
    ));
    report.tables.push(("scan.csv".into(), rows));
    report.tables.push(("summary.csv".into(), summary));
    Ok(report)
}

fn run_counterexample(config: &RunConfig) -> Result<Report> {
    let c = &config.counterexample;
    let res = BoxResolution {
        cells_per_width: c.cells_per_width,
        transverse_cells: c.transverse_cells,
        ..BoxResolution::default()
    };
    let jobs: Vec<(f64, f64)> = c
        .alphas
        .iter()
        .flat_map(|&a| c.n_values.iter().map(move |&n| (a, n)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(alpha, n)| sharpness_counterexample_with(n, c.s, c.r, alpha, c.b, config.grid.d, &res))
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(&["alpha", "N", "ratio", "u_norm", "v_norm", "uv_norm"]);
    for (&(alpha, _), r) in jobs.iter().zip(&results) {
        table.push(vec![
            alpha.into(),
            r.n.into(),
            r.ratio.into(),
            r.u_norm.into(),
            r.v_norm.into(),
            r.uv_norm.into(),
        ]);
    }
    let mut slopes = CsvTable::new(&["alpha", "slope", "predicted"]);
    for &alpha in &c.alphas {
        let pts: Vec<(f64, f64)> = jobs
            .iter()
            .zip(&results)
            .filter(|((a, _), _)| *a == alpha)
            .map(|(_, r)| (r.n, r.ratio))
            .collect();
        let slope = loglog_slope(&pts).unwrap_or(f64::NAN);
        slopes.push(vec![alpha.into(), slope.into(), (alpha - 0.5).into()]);
    }
    let mut report = Report::default();
    report.tables.push(("counterexample.csv".into(), table));
    report.tables.push(("slopes.csv".into(), slopes));
    Ok(report)
}

fn run_highlow(config: &RunConfig) -> Result<Report> {
    let h = &config.highlow;
    let hl = config.highlow_config(h.windows)?;
    let data = random_state(config, System::Kgs, h.s, h.r, h.u_amplitude, h.wave_amplitude)?;
    let rep = run_global(&data.u, &data.wplus, &data.wminus, &hl)?;
    let mut table = CsvTable::new(&["window", "t", "E_low", "mass_low", "w_H1", "z_H1", "diff_vs_direct"]);
    let mut checks = CsvTable::new(&["window", "t", "telescoping_error", "c0"]);
    for r in &rep.rows {
        table.push(vec![
            r.window.into(),
            r.t.into(),
            r.e_low.into(),
            r.mass_low.into(),
            r.w_h1.into(),
            r.z_h1.into(),
            r.diff_vs_direct.into(),
        ]);
        checks.push(vec![r.window.into(), r.t.into(), r.telescoping_error.into(), r.c0.into()]);
    }
    let mut report = Report::default();
    report.notes.push(format!("window length delta = {}", rep.delta));
    report.notes.push(format!(
        "|u0|_L2 = {}, thresholds: {} (energy form), {} (statement form)",
        rep.mass0, rep.threshold.energy_form, rep.threshold.statement_form
    ));
    report.notes.extend(rep.warnings.iter().cloned());
    report.tables.push(("highlow.csv".into(), table));
    report.tables.push(("highlow_checks.csv".into(), checks));
    if config.output.checkpoint {
        report
            .checkpoints
            .push(("final.zkgs".into(), Checkpoint::from_state(&rep.final_state.assembled())));
    }
    Ok(report)
}

fn unit_field(f: SpectralField, norm: f64) -> SpectralField {
    let n = f.l2_norm();
    if n == 0.0 || norm == 0.0 {
        SpectralField::zeros(f.grid())
    } else {
        f.scale_real(norm / n)
    }
}

/// Forcing and initial conditions of the attractor experiment.
pub fn attractor_setup(config: &RunConfig) -> Result<(DampedParams, Vec<DampedState>)> {
    let grid = grid_of(config)?;
    let d = &config.damping;
    let base = config.seed.wrapping_mul(16);
    let f = unit_field(
        dealias(&random_sobolev_field(&grid, d.forcing_regularity, base.wrapping_add(1))),
        d.forcing_f,
    );
    let g = unit_field(
        dealias(&random_real_sobolev_field(&grid, d.forcing_regularity, base.wrapping_add(2))),
        d.forcing_g,
    );
    let mut params = DampedParams::new(d.gamma, d.delta, f, g)?;
    if let Some(a) = d.a {
        params.a = a;
        params.validate()?;
    }
    let ics = d
        .energies
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let sk = base.wrapping_add(3 + 3 * k as u64);
            let u = dealias(&random_sobolev_field(&grid, 1.5, sk));
            let v = dealias(&random_real_sobolev_field(&grid, 1.5, sk + 1));
            let w = dealias(&random_real_sobolev_field(&grid, 0.5, sk + 2));
            let st = DampedState::new(u, v, w, 0.0)?;
            let n = st.energy_norm();
            let scale = if n == 0.0 { 0.0 } else { e.sqrt() / n };
            DampedState::new(st.u.scale_real(scale), st.v.scale_real(scale), st.w.scale_real(scale), 0.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((params, ics))
}

fn run_attractor(config: &RunConfig) -> Result<Report> {
    let d = &config.damping;
    let (params, ics) = attractor_setup(config)?;
    let mut ic = IntegratorConfig::new(d.dt, d.t_end);
    ic.record_every = d.record_every;
    let runs = ics
        .par_iter()
        .map(|st| {
            let traj = integrate_damped(st, &params, &ic)?;
            let rep = attractor_diagnostics(&traj, &params)?;
            let rates: Vec<f64> = traj.iter().map(|s| energy_h_rate(s, &params)).collect();
            Ok((rep, rates, traj.last().cloned().expect("final state")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(&[
        "ic", "t", "H", "dH_closed", "dH_fd", "mass", "energy_norm", "linear_norm", "probe_u_H1.4",
        "probe_v_H2.8", "probe_w_H1.8",
    ]);
    let mut summary = CsvTable::new(&[
        "ic",
        "energy0",
        "ball_radius",
        "entry_time",
        "persistence",
        "linear_decay_rate",
        "required_rate",
        "tail_H_max",
        "probe_tail_ratio_u",
        "probe_tail_ratio_v",
        "probe_tail_ratio_w",
        "probe_monotone_growth",
    ]);
    let mut report = Report::default();
    for (k, ((rep, rates, last), &e)) in runs.iter().zip(&d.energies).enumerate() {
        let rows = &rep.rows;
        for (j, r) in rows.iter().enumerate() {
            let fd = if j > 0 && j + 1 < rows.len() {
                (rows[j + 1].h - rows[j - 1].h) / (rows[j + 1].t - rows[j - 1].t)
            } else {
                f64::NAN
            };
            table.push(vec![
                k.into(),
                r.t.into(),
                r.h.into(),
                rates[j].into(),
                fd.into(),
                r.mass.into(),
                r.energy_norm.into(),
                r.linear_norm.into(),
                r.probes[0].into(),
                r.probes[1].into(),
                r.probes[2].into(),
            ]);
        }
        let t_end = rows.last().map_or(0.0, |r| r.t);
        let tail_h = rows
            .iter()
            .filter(|r| r.t >= 0.5 * t_end)
            .map(|r| r.h)
            .fold(f64::NEG_INFINITY, f64::max);
        let growth: Vec<&str> = rep
            .probe_monotone_growth
            .iter()
            .map(|g| if *g { "1" } else { "0" })
            .collect();
        summary.push(vec![
            k.into(),
            e.into(),
            rep.ball_radius.into(),
            rep.entry_time.into(),
            rep.persistence.into(),
            rep.linear_decay_rate.into(),
            (params.decay_rate() / 2.0).into(),
            tail_h.into(),
            rep.probe_tail_ratio[0].into(),
            rep.probe_tail_ratio[1].into(),
            rep.probe_tail_ratio[2].into(),
            growth.join("").into(),
        ]);
        if let Some(msg) = &rep.inconclusive {
            report.notes.push(format!("ic {k}: inconclusive: {msg}"));
        }
        if config.output.checkpoint {
            report
                .checkpoints
                .push((format!("final_ic{k}.zkgs"), Checkpoint::from_damped(last)));
        }
    }
    report.notes.push(format!("a = {}, decay rate min(gamma, a, delta - a) = {}", params.a, params.decay_rate()));
    report.tables.insert(0, ("attractor.csv".into(), table));
    report.tables.insert(1, ("attractor_summary.csv".into(), summary));
    Ok(report)
}

fn run_xsb(config: &RunConfig) -> Result<Report> {
    let x = &config.xsb;
    let grid = grid_of(config)?;
    let mut cfg = BilinearConfig::new(x.s, x.r, x.alpha, x.b);
    cfg.time_modes = x.time_modes;
    cfg.ensemble = x.ensemble;
    cfg.adversarial = x.adversarial;
    cfg.seed = config.seed;
    let stats = bilinear_constant_estimate(&grid, &cfg)?;
    let mut summary = CsvTable::new(&[
        "s", "r", "alpha", "b", "n_per_dim", "ensemble", "skipped", "max_ratio", "mean_ratio",
    ]);
    summary.push(vec![
        x.s.into(),
        x.r.into(),
        x.alpha.into(),
        x.b.into(),
        config.grid.n_per_dim.into(),
        x.ensemble.into(),
        stats.skipped.into(),
        stats.max_ratio.into(),
        stats.mean_ratio.into(),
    ]);
    let mut ratios = CsvTable::new(&["member", "ratio"]);
    for (k, r) in stats.ratios.iter().enumerate() {
        ratios.push(vec![k.into(), (*r).into()]);
    }
    let mut report = Report::default();
    report.tables.push(("bilinear.csv".into(), summary));
    report.tables.push(("bilinear_ratios.csv".into(), ratios));
    if x.adversarial {
        let mut adv = CsvTable::new(&["label", "scale", "ratio"]);
        for a in &stats.adversarial {
            adv.push(vec![a.label.clone().into(), a.scale.into(), a.ratio.into()]);
        }
        report.tables.push(("bilinear_adversarial.csv".into(), adv));
    }
    Ok(report)
}

fn run_resonance(config: &RunConfig) -> Result<Report> {
    let r = &config.resonance;
    let sample = resonant_shell_sample(&r.xi1, r.nu, r.branch.into(), r.count, config.seed)?;
    let dim = r.xi1.len();
    let mut header: Vec<String> = (0..dim).map(|i| format!("xi2_{i}")).collect();
    header.push("A".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut shell = CsvTable::new(&header);
    for p in &sample.points {
        let mut row: Vec<_> = p.xi2.iter().map(|&x| x.into()).collect();
        row.push(p.a.into());
        shell.push(row);
    }
    let lemma = calc_lemma_check(r.lemma_alpha, r.lemma_beta, &r.lemma_a, &r.lemma_b)?;
    let mut lt = CsvTable::new(&["a", "b", "integral", "ratio"]);
    for e in &lemma.entries {
        lt.push(vec![e.a.into(), e.b.into(), e.integral.into(), e.ratio.into()]);
    }
    let mut report = Report::default();
    if let Some(n) = &sample.notice {
        report.notes.push(n.clone());
    }
    if let Some(th) = shell_thickness(&sample, &r.xi1, 64) {
        report.notes.push(format!("median radial shell thickness = {th}"));
    }
    report.notes.push(format!(
        "lemma ratio range [{}, {}], factor {}",
        lemma.min_ratio,
        lemma.max_ratio,
        lemma.max_ratio / lemma.min_ratio
    ));
    report.tables.push(("shell.csv".into(), shell));
    report.tables.push(("lemma.csv".into(), lt));
    Ok(report)
}
