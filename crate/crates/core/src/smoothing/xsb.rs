use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::spectral::{transform_lines, Grid, SpectralField};

/// Dispersion relation entering an `X^{s,b}` weight `⟨τ + ω(ξ)⟩^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XsbDispersion {
    /// `⟨τ + |ξ|²⟩`.
    Schrodinger,
    /// `⟨τ + |ξ|⟩`.
    WavePlus,
    /// `⟨τ - |ξ|⟩`.
    WaveMinus,
}

impl XsbDispersion {
    /// `ω(ξ)` so that the weight reads `⟨τ + ω⟩`.
    pub fn omega(self, xi_sq: f64) -> f64 {
        match self {
            XsbDispersion::Schrodinger => xi_sq,
            XsbDispersion::WavePlus => xi_sq.sqrt(),
            XsbDispersion::WaveMinus => -xi_sq.sqrt(),
        }
    }
}

/// Tukey (raised-cosine) taper on `[0, 1]`; `taper` is the tapered fraction of the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TukeyWindow {
    pub taper: f64,
}

impl Default for TukeyWindow {
    fn default() -> Self {
        TukeyWindow { taper: 0.5 }
    }
}

impl TukeyWindow {
    pub fn value(&self, x: f64) -> f64 {
        let a = self.taper;
        if a <= 0.0 {
            return 1.0;
        }
        if x < 0.5 * a {
            0.5 * (1.0 - (2.0 * PI * x / a).cos())
        } else if x > 1.0 - 0.5 * a {
            0.5 * (1.0 - (2.0 * PI * (1.0 - x) / a).cos())
        } else {
            1.0
        }
    }
}

/// A field sampled at uniform times, windowed and transformed in time.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    grid: Grid,
    times: Vec<f64>,
    window: TukeyWindow,
    /// Windowed coefficients, `[ξ][t]`.
    windowed: Vec<Complex64>,
    /// Time transform of `windowed`, `[ξ][τ]`, in FFT order.
    spectrum: Vec<Complex64>,
}

impl SpaceTimeField {
    /// Build from snapshots `fields[j]` taken at `times[j]`.
    pub fn new(times: &[f64], fields: &[SpectralField], window: TukeyWindow) -> Result<Self> {
        if times.len() != fields.len() || times.len() < 4 {
            return Err(Error::SizeMismatch(format!(
                "need at least 4 matching times and fields, got {} and {}",
                times.len(),
                fields.len()
            )));
        }
        let dt = times[1] - times[0];
        if !(dt > 0.0) {
            return Err(Error::Config("time samples must increase".into()));
        }
        for (j, w) in times.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0) {
                return Err(Error::Config(format!("time samples not uniform at index {j}")));
            }
        }
        let grid = fields[0].grid().clone();
        for f in fields {
            f.same_grid(&fields[0], "space-time samples")?;
        }
        let m = times.len();
        let mut windowed = vec![Complex64::new(0.0, 0.0); grid.len() * m];
        for (j, f) in fields.iter().enumerate() {
            let w = window.value(j as f64 / (m - 1) as f64);
            for (i, c) in f.coeffs().iter().enumerate() {
                windowed[i * m + j] = c * w;
            }
        }
        let mut spectrum = windowed.clone();
        let plan = time_plan(m);
        transform_lines(&mut spectrum, plan.as_ref());
        let phase0 = times[0];
        for line in spectrum.chunks_mut(m) {
            for (k, c) in line.iter_mut().enumerate() {
                let tau = tau_value(k, m, dt);
                *c *= Complex64::from_polar(dt, -tau * phase0);
            }
        }
        Ok(SpaceTimeField {
            grid,
            times: times.to_vec(),
            window,
            windowed,
            spectrum,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn window(&self) -> TukeyWindow {
        self.window
    }

    pub fn time_step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Angular time frequencies `τ_k` in FFT order.
    pub fn taus(&self) -> Vec<f64> {
        let m = self.times.len();
        (0..m).map(|k| tau_value(k, m, self.time_step())).collect()
    }

    /// `|û(ξ, τ_k)|` for one spatial storage index, paired with `τ_k`.
    pub fn tau_spectrum(&self, flat: usize) -> Vec<(f64, f64)> {
        let m = self.times.len();
        self.taus()
            .into_iter()
            .zip(&self.spectrum[flat * m..(flat + 1) * m])
            .map(|(t, c)| (t, c.norm()))
            .collect()
    }

    /// Space-time `L²` norm of the windowed samples, `(Δt Σ_j ‖w_j u_j‖²_{L²})^{1/2}`.
    pub fn windowed_l2(&self) -> f64 {
        let sum: f64 = self.windowed.iter().map(|c| c.norm_sqr()).sum();
        (sum * self.time_step() / self.grid.volume()).sqrt()
    }

    /// Apply a spatial multiplier to every time slice.
    pub fn map_space(&self, table: &[Complex64]) -> Result<SpaceTimeField> {
        self.grid.check_len(table.len(), "space multiplier")?;
        let m = self.times.len();
        let mut out = self.clone();
        for (i, s) in table.iter().enumerate() {
            for c in out.windowed[i * m..(i + 1) * m].iter_mut() {
                *c *= s;
            }
            for c in out.spectrum[i * m..(i + 1) * m].iter_mut() {
                *c *= s;
            }
        }
        Ok(out)
    }
}

fn time_plan(m: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(m)
}

fn tau_value(k: usize, m: usize, dt: f64) -> f64 {
    let kk = if k < m.div_ceil(2) { k as f64 } else { k as f64 - m as f64 };
    2.0 * PI * kk / (m as f64 * dt)
}

/// Discrete `X^{s,b}` norm `‖⟨ξ⟩^s ⟨τ + ω(ξ)⟩^b û(ξ,τ)‖` of a windowed sample.
///
/// The time transform is taken after removing the free phase `e^{-iω(ξ)t}`
/// from every mode, so `τ + ω(ξ)` is read off directly as the transform
/// variable of the slowly varying profile and is not aliased by a coarse time
/// step. With `s = b = 0` this equals [`SpaceTimeField::windowed_l2`].
pub fn xsb_norm(stf: &SpaceTimeField, s: f64, b: f64, dispersion: XsbDispersion) -> f64 {
    let m = stf.times.len();
    let dt = stf.time_step();
    let plan = time_plan(m);
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    let taus: Vec<f64> = (0..m).map(|k| tau_value(k, m, dt)).collect();
    let tau_weights: Vec<f64> = taus.iter().map(|t| (1.0 + t * t).powf(b)).collect();
    let mut total = 0.0;
    for (i, &q) in stf.grid.xi_sq().iter().enumerate() {
        let src = &stf.windowed[i * m..(i + 1) * m];
        if src.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        let omega = dispersion.omega(q);
        for (j, (dst, c)) in line.iter_mut().zip(src).enumerate() {
            *dst = c * Complex64::from_polar(1.0, omega * stf.times[j]);
        }
        plan.process_with_scratch(&mut line, &mut scratch);
        let acc: f64 = line
            .iter()
            .zip(&tau_weights)
            .map(|(c, w)| w * c.norm_sqr())
            .sum();
        total += (1.0 + q).powf(s) * acc;
    }
    (total * dt / (m as f64) / stf.grid.volume()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{linear_propagate, Dispersion};
    use crate::spectral::{make_grid, random_sobolev_field};

    #[test]
    fn window_shape() {
        let w = TukeyWindow::default();
        assert_eq!(w.value(0.0), 0.0);
        assert_eq!(w.value(0.5), 1.0);
        assert!((w.value(0.125) - 0.5).abs() < 1e-15);
        assert!(w.value(1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_give_windowed_l2() {
        let g = make_grid(2, 16, 1.0).unwrap();
        let f = random_sobolev_field(&g, 0.0, 4);
        let times: Vec<f64> = (0..32).map(|j| j as f64 * 0.05).collect();
        let fields: Vec<SpectralField> = times
            .iter()
            .map(|&t| linear_propagate(&f, Dispersion::Schrodinger, t))
            .collect();
        let stf = SpaceTimeField::new(&times, &fields, TukeyWindow::default()).unwrap();
        let a = xsb_norm(&stf, 0.0, 0.0, XsbDispersion::Schrodinger);
        assert!((a - stf.windowed_l2()).abs() < 1e-10 * a);
    }

    #[test]
    fn rejects_nonuniform_times() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let f = vec![SpectralField::zeros(&g); 4];
        assert!(SpaceTimeField::new(&[0.0, 0.1, 0.3, 0.4], &f, TukeyWindow::default()).is_err());
    }
}
