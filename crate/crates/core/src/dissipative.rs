//! Damped and forced KGS in the variables `(u, v, w)`, `w = av + v_t`:
//!
//! * `iu_t + Δu + iγu = -uv + f`
//! * `v_t + av = w`
//! * `w_t + (δ - a)w + (1 + a(a-δ) - Δ)v = |u|² + g`

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{
    integrate_system, FlowBlock, IntegratorConfig, LinearFlow, SemilinearSystem,
};
use crate::spectral::{dealias, dealiased_abs_sq, Grid, SpectralField, ZeroMode};

#[derive(Debug, Clone, PartialEq)]
pub struct DampedParams {
    pub gamma: f64,
    /// Wave damping `δ`.
    pub delta: f64,
    /// Auxiliary constant in `w = av + v_t`, `0 < a < δ`.
    pub a: f64,
    pub f: SpectralField,
    pub g: SpectralField,
}

impl DampedParams {
    /// Parameters with `a = min(γ, δ)/4`.
    pub fn new(gamma: f64, delta: f64, f: SpectralField, g: SpectralField) -> Result<Self> {
        let p = DampedParams {
            gamma,
            delta,
            a: 0.25 * gamma.min(delta),
            f,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unforced parameters on `grid`.
    pub fn unforced(grid: &Grid, gamma: f64, delta: f64) -> Result<Self> {
        let z = SpectralField::zeros(grid);
        DampedParams::new(gamma, delta, z.clone(), z)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.delta > 0.0) || !(self.gamma.is_finite() && self.delta.is_finite()) {
            return Err(Error::Config(format!(
                "damping must be positive, got gamma = {}, delta = {}",
                self.gamma, self.delta
            )));
        }
        if !(self.a > 0.0 && self.a < self.delta) {
            return Err(Error::Config(format!(
                "need 0 < a < delta, got a = {}, delta = {}",
                self.a, self.delta
            )));
        }
        self.f.same_grid(&self.g, "forcing")?;
        Ok(())
    }

    /// `1 + a(a - δ)`.
    pub fn mass_coefficient(&self) -> f64 {
        1.0 + self.a * (self.a - self.delta)
    }

    /// `min(γ, a, δ - a)`.
    pub fn decay_rate(&self) -> f64 {
        self.gamma.min(self.a).min(self.delta - self.a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampedState {
    pub u: SpectralField,
    pub v: SpectralField,
    pub w: SpectralField,
    pub t: f64,
}

impl DampedState {
    pub fn new(u: SpectralField, v: SpectralField, w: SpectralField, t: f64) -> Result<Self> {
        u.same_grid(&v, "state")?;
        u.same_grid(&w, "state")?;
        Ok(DampedState { u, v, w, t })
    }

    pub fn zeros(grid: &Grid) -> Self {
        let z = SpectralField::zeros(grid);
        DampedState {
            u: z.clone(),
            v: z.clone(),
            w: z,
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `(‖u‖²_{H¹} + ‖v‖²_{H¹} + ‖w‖²_{L²})^{1/2}`.
    pub fn energy_norm(&self) -> f64 {
        (self.u.sobolev_norm(1.0).powi(2) + self.v.sobolev_norm(1.0).powi(2) + self.w.l2_norm().powi(2)).sqrt()
    }

    /// `L²` size of the imaginary part of `v` in physical space.
    pub fn v_imaginary_part(&self) -> f64 {
        0.5 * self.v.sub(&self.v.conj()).expect("same grid").l2_norm()
    }

    fn fields(&self) -> Vec<SpectralField> {
        vec![self.u.clone(), self.v.clone(), self.w.clone()]
    }

    fn from_fields(mut f: Vec<SpectralField>, t: f64) -> Self {
        let w = f.pop().expect("three fields");
        let v = f.pop().expect("three fields");
        let u = f.pop().expect("three fields");
        DampedState { u, v, w, t }
    }
}

/// `e^{tM}` for `M = [-a, 1; -(c+q), -(δ-a)]`, `c = 1 + a(a-δ)`.
fn wave_matrix(params: &DampedParams, q: f64, t: f64) -> [Complex64; 4] {
    let (a, delta) = (params.a, params.delta);
    let c = params.mass_coefficient();
    let mu = -0.5 * delta;
    // M - μI = [k, 1; -(c+q), -k] with k = δ/2 - a.
    let k = 0.5 * delta - a;
    let w2 = k * k - (c + q);
    let (ch, sh) = if w2.abs() < 1e-14 {
        (1.0, t)
    } else if w2 > 0.0 {
        let w = w2.sqrt();
        ((w * t).cosh(), (w * t).sinh() / w)
    } else {
        let w = (-w2).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    };
    let e = (mu * t).exp();
    [
        Complex64::new(e * (ch + sh * k), 0.0),
        Complex64::new(e * sh, 0.0),
        Complex64::new(-e * sh * (c + q), 0.0),
        Complex64::new(e * (ch - sh * k), 0.0),
    ]
}

fn linear_flow(grid: &Grid, params: &DampedParams, t: f64) -> LinearFlow {
    let nyq = grid.nyquist_mask();
    let zero = Complex64::new(0.0, 0.0);
    let diag: Vec<Complex64> = grid
        .xi_sq()
        .iter()
        .zip(nyq)
        .map(|(&q, &n)| {
            if n {
                zero
            } else {
                Complex64::from_polar((-params.gamma * t).exp(), -q * t)
            }
        })
        .collect();
    let pair: Vec<[Complex64; 4]> = grid
        .xi_sq()
        .iter()
        .zip(nyq)
        .map(|(&q, &n)| if n { [zero; 4] } else { wave_matrix(params, q, t) })
        .collect();
    LinearFlow {
        blocks: vec![
            FlowBlock::Diagonal { field: 0, table: diag },
            FlowBlock::Pair { fields: (1, 2), table: pair },
        ],
    }
}

/// Exact solution of the linear part (no coupling, no forcing) after time `t`.
pub fn damped_linear_propagate(state: &DampedState, params: &DampedParams, t: f64) -> DampedState {
    let flow = linear_flow(state.grid(), params, t);
    DampedState::from_fields(flow.applied(&state.fields()), state.t + t)
}

struct DampedSystem<'a> {
    params: &'a DampedParams,
    grid: Grid,
}

impl SemilinearSystem for DampedSystem<'_> {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn field_names(&self) -> &[&'static str] {
        &["u", "v", "w"]
    }

    fn linear_flow(&self, h: f64) -> LinearFlow {
        linear_flow(&self.grid, self.params, h)
    }

    fn nonlinear(&self, fields: &[SpectralField]) -> Vec<SpectralField> {
        let i = Complex64::new(0.0, 1.0);
        let us = dealias(&fields[0]).to_samples();
        let vs = dealias(&fields[1]).to_samples();
        let prod: Vec<Complex64> = us.iter().zip(&vs).map(|(a, b)| a * b).collect();
        let prod = dealias(&SpectralField::from_samples(&self.grid, &prod).expect("grid"));
        let du = prod.sub(&self.params.f).expect("grid").scale(i);
        let dw = dealiased_abs_sq(&fields[0]).add(&self.params.g).expect("grid");
        vec![du, SpectralField::zeros(&self.grid), dw]
    }
}

/// Integrate over `[state.t, state.t + config.t_end]`.
pub fn integrate_damped(
    state: &DampedState,
    params: &DampedParams,
    config: &IntegratorConfig,
) -> Result<Vec<DampedState>> {
    params.validate()?;
    state.u.same_grid(&params.f, "state and forcing")?;
    let sys = DampedSystem {
        params,
        grid: state.grid().clone(),
    };
    let traj = integrate_system(&sys, state.fields(), state.t, config)?;
    Ok(traj
        .into_iter()
        .map(|s| DampedState::from_fields(s.fields, s.t))
        .collect())
}

fn grad_sq(f: &SpectralField) -> f64 {
    f.homogeneous_norm(1.0, ZeroMode::Annihilate)
        .expect("positive order")
        .powi(2)
}

/// `Re ∫|u|² v`.
fn cubic(state: &DampedState) -> f64 {
    dealiased_abs_sq(&state.u).inner(&state.v.conj()).expect("grid").re
}

/// `H = 2‖∇u‖² + (1 + a(a-δ))‖v‖² + ‖∇v‖² + ‖w‖² - 2∫|u|²v + 4 Re∫f ū`.
pub fn energy_h(state: &DampedState, params: &DampedParams) -> f64 {
    let fu = params.f.inner(&state.u).expect("grid").re;
    2.0 * grad_sq(&state.u)
        + params.mass_coefficient() * state.v.l2_norm().powi(2)
        + grad_sq(&state.v)
        + state.w.l2_norm().powi(2)
        - 2.0 * cubic(state)
        + 4.0 * fu
}

/// Closed form of `dH/dt` along solutions.
pub fn energy_h_rate(state: &DampedState, params: &DampedParams) -> f64 {
    let (gamma, a, delta) = (params.gamma, params.a, params.delta);
    let fu = params.f.inner(&state.u).expect("grid").re;
    let gw = params.g.inner(&state.w).expect("grid").re;
    -4.0 * gamma * grad_sq(&state.u)
        - 2.0 * a * params.mass_coefficient() * state.v.l2_norm().powi(2)
        - 2.0 * a * grad_sq(&state.v)
        - 2.0 * (delta - a) * state.w.l2_norm().powi(2)
        + (4.0 * gamma + 2.0 * a) * cubic(state)
        - 4.0 * gamma * fu
        + 2.0 * gw
}

/// `d/dt ‖u‖² = -2γ‖u‖² + 2 Im∫f ū`.
pub fn mass_rate(state: &DampedState, params: &DampedParams) -> f64 {
    let fu = params.f.inner(&state.u).expect("grid");
    -2.0 * params.gamma * state.u.l2_norm().powi(2) + 2.0 * fu.im
}

/// Sobolev orders of the compactness probes for `(u, v, w)`.
pub const PROBE_ORDERS: [f64; 3] = [1.4, 2.8, 1.8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorRow {
    pub t: f64,
    pub h: f64,
    pub energy_norm: f64,
    pub mass: f64,
    /// `(‖p‖_{H¹}² + ‖q‖_{H¹}² + ‖r‖²_{L²})^{1/2}` of the linear part.
    pub linear_norm: f64,
    /// `‖u-p‖_{H^{1.4}}`, `‖v-q‖_{H^{2.8}}`, `‖w-r‖_{H^{1.8}}`.
    pub probes: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorReport {
    pub rows: Vec<AttractorRow>,
    /// `1.1 ×` the largest energy norm over the last quarter of the run.
    pub ball_radius: f64,
    /// First time after which the energy norm stays within the ball.
    pub entry_time: f64,
    /// Fraction of samples after `entry_time` inside the ball.
    pub persistence: f64,
    /// Decay rate of the linear part from a log-linear fit, `NaN` if it vanished.
    pub linear_decay_rate: f64,
    /// Per probe: max over `[3T/4, T]` divided by max over `[T/2, 3T/4]`.
    pub probe_tail_ratio: [f64; 3],
    /// Per probe: true when the probe increases at every sample of `[T/2, T]`.
    pub probe_monotone_growth: [bool; 3],
    /// Set when the run is too short to say anything.
    pub inconclusive: Option<String>,
}

fn max_over(rows: &[AttractorRow], lo: f64, hi: f64, f: impl Fn(&AttractorRow) -> f64) -> f64 {
    rows.iter()
        .filter(|r| r.t >= lo && r.t <= hi)
        .map(f)
        .fold(0.0, f64::max)
}

/// Absorbing-ball and compactness diagnostics of a trajectory.
pub fn attractor_diagnostics(trajectory: &[DampedState], params: &DampedParams) -> Result<AttractorReport> {
    let Some(first) = trajectory.first() else {
        return Err(Error::Config("empty trajectory".into()));
    };
    let t0 = first.t;
    let rows: Vec<AttractorRow> = trajectory
        .iter()
        .map(|st| {
            let lin = damped_linear_propagate(first, params, st.t - t0);
            let nl = [
                st.u.sub(&lin.u).expect("grid"),
                st.v.sub(&lin.v).expect("grid"),
                st.w.sub(&lin.w).expect("grid"),
            ];
            AttractorRow {
                t: st.t,
                h: energy_h(st, params),
                energy_norm: st.energy_norm(),
                mass: st.u.l2_norm(),
                linear_norm: lin.energy_norm(),
                probes: [
                    nl[0].sobolev_norm(PROBE_ORDERS[0]),
                    nl[1].sobolev_norm(PROBE_ORDERS[1]),
                    nl[2].sobolev_norm(PROBE_ORDERS[2]),
                ],
            }
        })
        .collect();
    let t_end = rows.last().expect("nonempty").t;
    let span = t_end - t0;
    let inconclusive = if rows.len() < 8 {
        Some(format!("only {} samples", rows.len()))
    } else if span < 2.0 / params.gamma.min(params.delta) {
        Some(format!(
            "run length {span} is shorter than 2/min(gamma, delta) = {}",
            2.0 / params.gamma.min(params.delta)
        ))
    } else {
        None
    };
    let ball_radius = 1.1 * max_over(&rows, t0 + 0.75 * span, t_end, |r| r.energy_norm);
    let last_out = rows.iter().rposition(|r| r.energy_norm > ball_radius);
    let entry_time = match last_out {
        None => t0,
        Some(k) if k + 1 < rows.len() => rows[k + 1].t,
        Some(_) => f64::INFINITY,
    };
    let after: Vec<&AttractorRow> = rows.iter().filter(|r| r.t >= entry_time).collect();
    let persistence = if after.is_empty() {
        0.0
    } else {
        after.iter().filter(|r| r.energy_norm <= ball_radius).count() as f64 / after.len() as f64
    };
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.linear_norm > 0.0)
        .map(|r| (r.t, r.linear_norm.ln()))
        .collect();
    let linear_decay_rate = linear_fit_slope(&fit).map_or(f64::NAN, |s| -s);
    let mid = t0 + 0.5 * span;
    let q3 = t0 + 0.75 * span;
    let mut probe_tail_ratio = [0.0; 3];
    let mut probe_monotone_growth = [false; 3];
    for k in 0..3 {
        let a = max_over(&rows, mid, q3, |r| r.probes[k]);
        let b = max_over(&rows, q3, t_end, |r| r.probes[k]);
        probe_tail_ratio[k] = if a > 0.0 { b / a } else if b > 0.0 { f64::INFINITY } else { 1.0 };
        let tail: Vec<f64> = rows.iter().filter(|r| r.t >= mid).map(|r| r.probes[k]).collect();
        probe_monotone_growth[k] = tail.len() > 1 && tail.windows(2).all(|w| w[1] > w[0]);
    }
    Ok(AttractorReport {
        rows,
        ball_radius,
        entry_time,
        persistence,
        linear_decay_rate,
        probe_tail_ratio,
        probe_monotone_growth,
        inconclusive,
    })
}

fn linear_fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn wave_matrix_identity_at_zero() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let p = DampedParams::unforced(&g, 0.5, 0.4).unwrap();
        for q in [0.0, 1.0, 100.0] {
            let m = wave_matrix(&p, q, 0.0);
            assert_eq!(m[0].re, 1.0);
            assert_eq!(m[1].re, 0.0);
            assert_eq!(m[3].re, 1.0);
        }
    }

    #[test]
    fn invalid_a_rejected() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let mut p = DampedParams::unforced(&g, 0.5, 0.4).unwrap();
        p.a = 0.5;
        assert!(p.validate().is_err());
    }
}
