//! Empirical constant of `‖uv‖_{X^{s+α,b-1}} ≲ ‖u‖_{X^{s,b}} ‖v‖_{X^{r,b}_+}`.
//!
//! Test functions are Gaussian packets on a `(ξ, τ)` lattice concentrated near
//! the dispersion surfaces `τ = -|ξ|²` (for `u`) and `τ = -|ξ|` (for `v`). The
//! lattice spacing in `ξ` is `1/L` of the given grid and packet centers range
//! over a quarter of its spectral half-width `n/(2L)`; the `τ` spacing resolves the packet
//! thickness with `time_modes` cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::geometry::resonant_shell_sample;
use crate::error::{Error, Result};
use crate::smoothing::{sharpness_counterexample_with, BoxField, BoxResolution};
use crate::spectral::{Branch, Grid};

/// Packet profile cut-off, in standard deviations.
const CUTOFF: f64 = 3.0;
/// Packet width in `τ` around the dispersion surface.
const TAU_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearConfig {
    pub s: f64,
    pub r: f64,
    pub alpha: f64,
    pub b: f64,
    /// `τ` cells across the packet thickness `2·CUTOFF·TAU_WIDTH`.
    pub time_modes: usize,
    pub ensemble: usize,
    /// Also evaluate the box pair and near-resonant shell pairs.
    pub adversarial: bool,
    pub seed: u64,
    /// Upper bound on products per convolution.
    pub max_pairs: u64,
}

impl BilinearConfig {
    pub fn new(s: f64, r: f64, alpha: f64, b: f64) -> Self {
        BilinearConfig {
            s,
            r,
            alpha,
            b,
            time_modes: 8,
            ensemble: 16,
            adversarial: false,
            seed: 0,
            max_pairs: 400_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialRatio {
    pub label: String,
    /// Scale parameter: `N` for boxes, `|ξ₁|` for shell pairs.
    pub scale: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearStats {
    pub ratios: Vec<f64>,
    /// Trials where a factor vanished on the lattice.
    pub skipped: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub adversarial: Vec<AdversarialRatio>,
}

#[derive(Debug, Clone, Copy)]
enum Surface {
    Schrodinger,
    Wave,
}

impl Surface {
    fn omega(self, q: f64) -> f64 {
        match self {
            Surface::Schrodinger => q,
            Surface::Wave => q.sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
struct Packet {
    center: Vec<f64>,
    width: f64,
    /// Smooth modulation `1 + 0.3 cos(k·(ξ-center) + phase)`.
    k: Vec<f64>,
    phase: f64,
}

impl Packet {
    fn random(rng: &mut ChaCha8Rng, d: usize, extent: f64, width: f64) -> Self {
        let center = (0..d).map(|_| rng.random_range(-extent..=extent)).collect();
        Packet {
            center,
            width: width * rng.random_range(0.5..=1.5),
            k: (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect(),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
        }
    }

    fn field(&self, surface: Surface, h: f64, h_tau: f64) -> Result<BoxField> {
        let d = self.center.len();
        let reach = CUTOFF * self.width;
        let mut origin = Vec::with_capacity(d + 1);
        let mut shape = Vec::with_capacity(d + 1);
        for &c in &self.center {
            let i0 = ((c - reach) / h).floor();
            let i1 = ((c + reach) / h).ceil();
            origin.push(i0 * h);
            shape.push((i1 - i0) as usize + 1);
        }
        // τ range of the surface over the ξ box.
        let mut q_min = 0.0;
        let mut q_max = 0.0;
        for k in 0..d {
            let a = origin[k];
            let b = origin[k] + (shape[k] - 1) as f64 * h;
            q_max += (a * a).max(b * b);
            q_min += if a <= 0.0 && b >= 0.0 { 0.0 } else { (a * a).min(b * b) };
        }
        let band = CUTOFF * TAU_WIDTH;
        let t0 = ((-surface.omega(q_max) - band) / h_tau).floor();
        let t1 = ((-surface.omega(q_min) + band) / h_tau).ceil();
        origin.push(t0 * h_tau);
        shape.push((t1 - t0) as usize + 1);
        let mut spacing = vec![h; d];
        spacing.push(h_tau);
        BoxField::from_fn(spacing, origin, shape, |xi, tau| {
            let mut dist = 0.0;
            let mut arg = self.phase;
            let mut q = 0.0;
            for k in 0..d {
                let x = xi[k] - self.center[k];
                dist += x * x;
                arg += self.k[k] * x;
                q += xi[k] * xi[k];
            }
            let off = tau + surface.omega(q);
            if dist.sqrt() > reach || off.abs() > band {
                return 0.0;
            }
            (-0.5 * dist / (self.width * self.width)).exp()
                * (-0.5 * off * off / (TAU_WIDTH * TAU_WIDTH)).exp()
                * (1.0 + 0.3 * arg.cos())
        })
    }
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn q_of(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

fn ratio(u: &BoxField, v: &BoxField, cfg: &BilinearConfig) -> Result<Option<f64>> {
    let (s, r, b, alpha) = (cfg.s, cfg.r, cfg.b, cfg.alpha);
    let un = u.weighted_norm(|xi, tau| {
        let q = q_of(xi);
        (1.0 + q).powf(0.5 * s) * bracket(tau + q).powf(b)
    });
    let vn = v.weighted_norm(|xi, tau| {
        let q = q_of(xi);
        (1.0 + q).powf(0.5 * r) * bracket(tau + q.sqrt()).powf(b)
    });
    if un == 0.0 || vn == 0.0 {
        return Ok(None);
    }
    let uv = u.convolve(v, cfg.max_pairs)?;
    let uvn = uv.weighted_norm(|xi, tau| {
        let q = q_of(xi);
        (1.0 + q).powf(0.5 * (s + alpha)) * bracket(tau + q).powf(b - 1.0)
    });
    Ok(Some(uvn / (un * vn)))
}

/// Ratio statistics over `ensemble` random packet pairs, plus adversarial pairs when requested.
pub fn bilinear_constant_estimate(grid: &Grid, cfg: &BilinearConfig) -> Result<BilinearStats> {
    if cfg.time_modes < 2 {
        return Err(Error::Resolution("time_modes must be >= 2".into()));
    }
    if cfg.ensemble == 0 {
        return Err(Error::Config("ensemble must be >= 1".into()));
    }
    let d = grid.dim();
    let h = 1.0 / grid.box_length();
    let h_tau = 2.0 * CUTOFF * TAU_WIDTH / cfg.time_modes as f64;
    let extent = 0.125 * grid.n_per_dim() as f64 / grid.box_length();
    let cells_estimate = (2.0 * CUTOFF / h).powi(d as i32) * cfg.time_modes as f64;
    if cells_estimate * cells_estimate > cfg.max_pairs as f64 {
        return Err(Error::Resource(format!(
            "about {cells_estimate:.0} cells per packet exceeds the pair limit {}",
            cfg.max_pairs
        )));
    }
    let trials: Vec<Option<f64>> = (0..cfg.ensemble as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k));
            let pu = Packet::random(&mut rng, d, extent, 1.0);
            let pv = Packet::random(&mut rng, d, extent, 1.0);
            ratio(
                &pu.field(Surface::Schrodinger, h, h_tau)?,
                &pv.field(Surface::Wave, h, h_tau)?,
                cfg,
            )
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = trials.iter().flatten().copied().collect();
    let skipped = trials.len() - ratios.len();
    let max_ratio = ratios.iter().copied().fold(f64::NAN, f64::max);
    let mean_ratio = if ratios.is_empty() {
        f64::NAN
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    let adversarial = if cfg.adversarial {
        adversarial_ratios(grid, cfg, h, h_tau, extent)?
    } else {
        Vec::new()
    };
    Ok(BilinearStats {
        ratios,
        skipped,
        max_ratio,
        mean_ratio,
        adversarial,
    })
}

fn adversarial_ratios(
    grid: &Grid,
    cfg: &BilinearConfig,
    h: f64,
    h_tau: f64,
    extent: f64,
) -> Result<Vec<AdversarialRatio>> {
    let d = grid.dim();
    let mut out = Vec::new();
    let mut n = 4.0;
    while n <= 2.0 * extent {
        let rep = sharpness_counterexample_with(
            n,
            cfg.s,
            cfg.r,
            cfg.alpha,
            cfg.b,
            d,
            &BoxResolution {
                max_pairs: cfg.max_pairs,
                ..BoxResolution::default()
            },
        )?;
        out.push(AdversarialRatio {
            label: "box".into(),
            scale: n,
            ratio: rep.ratio,
        });
        n *= 2.0;
    }
    // u near ξ₁ and v near a ξ₂ with |A| small; v in X_+ pairs with the Minus branch.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5e11);
    let mut mag = 2.0;
    while mag <= extent {
        let mut xi1 = vec![0.0; d];
        xi1[0] = mag;
        let shell = resonant_shell_sample(&xi1, 0.05, Branch::Minus, 4, rng.random())?;
        for p in &shell.points {
            let pu = Packet {
                center: xi1.clone(),
                width: 0.5,
                k: vec![0.0; d],
                phase: 0.0,
            };
            let pv = Packet {
                center: p.xi2.clone(),
                width: 0.5,
                k: vec![0.0; d],
                phase: 0.0,
            };
            if let Some(ratio) = ratio(
                &pu.field(Surface::Schrodinger, h, h_tau)?,
                &pv.field(Surface::Wave, h, h_tau)?,
                cfg,
            )? {
                out.push(AdversarialRatio {
                    label: "shell".into(),
                    scale: mag,
                    ratio,
                });
            }
        }
        mag *= 2.0;
    }
    Ok(out)
}
