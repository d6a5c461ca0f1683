use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use super::exponents::smoothing_exponents;
use crate::error::{Error, Result};
use crate::evolution::{integrate, join_wave, Dispersion, System, SystemState};
use crate::integrator::IntegratorConfig;
use crate::spectral::{
    dealias, make_grid, random_real_sobolev_field, random_sobolev_field, spectral_slope,
    SpectralField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    U,
    WPlus,
    WMinus,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::U, Component::WPlus, Component::WMinus];

    pub fn of(self, state: &SystemState) -> &SpectralField {
        match self {
            Component::U => &state.u,
            Component::WPlus => &state.wplus,
            Component::WMinus => &state.wminus,
        }
    }

    pub fn dispersion(self) -> Dispersion {
        match self {
            Component::U => Dispersion::Schrodinger,
            Component::WPlus => Dispersion::KgPlus,
            Component::WMinus => Dispersion::KgMinus,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::U => "u",
            Component::WPlus => "wplus",
            Component::WMinus => "wminus",
        })
    }
}

/// Nonlinear part `state(t) - e^{-(t-t₀)L} state(t₀)` of one component along a trajectory.
pub fn duhamel_residual(trajectory: &[SystemState], component: Component) -> Vec<SpectralField> {
    let Some(first) = trajectory.first() else {
        return Vec::new();
    };
    let data = component.of(first);
    trajectory
        .iter()
        .map(|st| {
            let free = crate::evolution::linear_propagate(data, component.dispersion(), st.t - first.t);
            component.of(st).sub(&free).expect("trajectory shares one grid")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    pub system: System,
    pub d: usize,
    pub s: f64,
    pub r: f64,
    pub alpha_probe: f64,
    pub beta_probe: f64,
    pub b: f64,
}

impl SmoothingParams {
    /// Checks the theorem hypotheses and that the probes sit below the thresholds.
    pub fn validate(&self) -> Result<()> {
        let e = smoothing_exponents(self.system, self.d, self.s, self.r)?;
        if !(self.alpha_probe < e.alpha_max) {
            return Err(Error::Admissibility(format!(
                "alpha_probe = {} must be < alpha_max = {}",
                self.alpha_probe, e.alpha_max
            )));
        }
        if !(self.beta_probe < e.beta_max) {
            return Err(Error::Admissibility(format!(
                "beta_probe = {} must be < beta_max = {}",
                self.beta_probe, e.beta_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub n_per_dim: usize,
    pub box_length: f64,
    /// Time step. The Duhamel integrand oscillates like `e^{it|ξ|²}`, so
    /// `dt · max|ξ|²` must stay O(1) or the measured gains collapse.
    pub dt: f64,
    pub t_end: f64,
    /// Residuals are probed every `record_every` steps and at `t_end`.
    pub record_every: usize,
    /// Target `‖u₀‖_{H^s}`.
    pub u_amplitude: f64,
    /// Target `‖w₀⁺‖_{H^r}`.
    pub wave_amplitude: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_per_dim: 128,
            box_length: 1.0,
            dt: 1e-3,
            t_end: 0.5,
            record_every: 10,
            u_amplitude: 0.5,
            wave_amplitude: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub seed: u64,
    pub component: Component,
    /// `alpha_probe` for `u`, `beta_probe` for the wave components.
    pub alpha_probe: f64,
    /// `sup_t ‖residual‖_{H^{σ+probe}} / (‖u₀‖_{H^s} + ‖w₀⁺‖_{H^r})²`.
    pub residual_norm: f64,
    /// Spectral slope of the data minus that of the residual at `t_end`;
    /// `+∞` when the residual vanishes identically.
    pub slope_gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentSummary {
    pub component: Component,
    pub mean_gain: f64,
    pub spread_gain: f64,
    pub mean_residual_norm: f64,
    pub max_residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub params: SmoothingParams,
    pub rows: Vec<ScanRow>,
    pub summary: Vec<ComponentSummary>,
}

/// Random initial state for one ensemble member, band-limited to the 2/3 band.
///
/// The wave data have zero mean: on the torus a constant wave potential only
/// rotates the phase of `u`, which is a zero-gain artifact absent on `ℝ^d`.
pub fn scan_initial_state(params: &SmoothingParams, config: &ScanConfig, seed: u64) -> Result<SystemState> {
    let grid = make_grid(params.d, config.n_per_dim, config.box_length)?;
    let base = seed.wrapping_mul(4);
    let mut u = dealias(&random_sobolev_field(&grid, params.s, base.wrapping_add(1)));
    let mut v = dealias(&random_real_sobolev_field(&grid, params.r, base.wrapping_add(2)));
    let mut vt = dealias(&random_real_sobolev_field(&grid, params.r - 1.0, base.wrapping_add(3)));
    v.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    vt.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    let un = u.sobolev_norm(params.s);
    u = if config.u_amplitude == 0.0 || un == 0.0 {
        SpectralField::zeros(&grid)
    } else {
        u.scale_real(config.u_amplitude / un)
    };
    let (wp, _) = join_wave(&v, &vt)?;
    let wn = wp.sobolev_norm(params.r);
    let k = if wn == 0.0 { 0.0 } else { config.wave_amplitude / wn };
    v = v.scale_real(k);
    let vt = vt.scale_real(k);
    SystemState::from_wave_data(params.system, u, &v, &vt)
}

/// Residual rows of one ensemble member.
pub fn scan_member(params: &SmoothingParams, config: &ScanConfig, seed: u64) -> Result<Vec<ScanRow>> {
    let state = scan_initial_state(params, config, seed)?;
    let mut ic = IntegratorConfig::new(config.dt, config.t_end);
    ic.record_every = config.record_every.max(1);
    let traj = integrate(&state, &ic)?;
    let size = state.u.sobolev_norm(params.s) + state.wplus.sobolev_norm(params.r);
    let mut rows = Vec::with_capacity(3);
    for comp in Component::ALL {
        let (sigma, probe) = match comp {
            Component::U => (params.s, params.alpha_probe),
            _ => (params.r, params.beta_probe),
        };
        let residuals = duhamel_residual(&traj, comp);
        let sup = residuals
            .iter()
            .map(|f| f.sobolev_norm(sigma + probe))
            .fold(0.0, f64::max);
        let residual_norm = if size > 0.0 { sup / (size * size) } else { 0.0 };
        let last = residuals.last().expect("trajectory has the initial state");
        let slope_gain = if last.l2_norm() == 0.0 {
            f64::INFINITY
        } else {
            match (spectral_slope(comp.of(&state)), spectral_slope(last)) {
                (Some(a), Some(b)) => a - b,
                _ => f64::NAN,
            }
        };
        rows.push(ScanRow {
            seed,
            component: comp,
            alpha_probe: probe,
            residual_norm,
            slope_gain,
        });
    }
    Ok(rows)
}

/// Ensemble smoothing scan over seeds `seed, seed+1, …, seed+ensemble_size-1`.
pub fn smoothing_scan(
    params: &SmoothingParams,
    config: &ScanConfig,
    ensemble_size: usize,
    seed: u64,
) -> Result<ScanReport> {
    params.validate()?;
    if ensemble_size == 0 {
        return Err(Error::Config("ensemble_size must be >= 1".into()));
    }
    let per_member: Vec<Vec<ScanRow>> = (0..ensemble_size as u64)
        .into_par_iter()
        .map(|k| scan_member(params, config, seed.wrapping_add(k)))
        .collect::<Result<_>>()?;
    let rows: Vec<ScanRow> = per_member.into_iter().flatten().collect();
    let summary = Component::ALL
        .iter()
        .map(|&c| summarize(c, rows.iter().filter(|r| r.component == c)))
        .collect();
    Ok(ScanReport {
        params: *params,
        rows,
        summary,
    })
}

fn summarize<'a>(component: Component, rows: impl Iterator<Item = &'a ScanRow>) -> ComponentSummary {
    let rows: Vec<&ScanRow> = rows.collect();
    let gains: Vec<f64> = rows.iter().map(|r| r.slope_gain).collect();
    let n = gains.len() as f64;
    let mean_gain = gains.iter().sum::<f64>() / n;
    let spread_gain = if gains.len() > 1 && mean_gain.is_finite() {
        (gains.iter().map(|g| (g - mean_gain).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    ComponentSummary {
        component,
        mean_gain,
        spread_gain,
        mean_residual_norm: rows.iter().map(|r| r.residual_norm).sum::<f64>() / n,
        max_residual_norm: rows.iter().map(|r| r.residual_norm).fold(0.0, f64::max),
    }
}
