use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectral::Branch;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Frequencies `ξ₀ + ξ₁ + ξ₂ = 0` of a Schrödinger output, Schrödinger input and
/// wave input. `branch` is the sign in front of `|ξ₂|` in the modulation
/// `|ξ₀|² - |ξ₁|² ± |ξ₂|`: `Minus` for a wave factor in `X_+`, `Plus` for `X_-`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTriple {
    xi0: Vec<f64>,
    xi1: Vec<f64>,
    xi2: Vec<f64>,
    branch: Branch,
}

impl FrequencyTriple {
    /// `ξ₀ = -ξ₁ - ξ₂`, so the zero-sum constraint holds by construction.
    pub fn new(xi1: &[f64], xi2: &[f64], branch: Branch) -> Result<Self> {
        if xi1.len() != xi2.len() || xi1.is_empty() {
            return Err(Error::SizeMismatch(format!(
                "frequency vectors of lengths {} and {}",
                xi1.len(),
                xi2.len()
            )));
        }
        let xi0 = xi1.iter().zip(xi2).map(|(a, b)| -a - b).collect();
        Ok(FrequencyTriple {
            xi0,
            xi1: xi1.to_vec(),
            xi2: xi2.to_vec(),
            branch,
        })
    }

    pub fn xi0(&self) -> &[f64] {
        &self.xi0
    }

    pub fn xi1(&self) -> &[f64] {
        &self.xi1
    }

    pub fn xi2(&self) -> &[f64] {
        &self.xi2
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }
}

/// `A = cos(angle) + (|ξ₂| ± 1)/(2|ξ₁|)` with the sign of `branch`, so that
/// `2|ξ₁||ξ₂|A = |ξ₀|² - |ξ₁|² ± |ξ₂|`.
pub fn resonance_a(xi1: &[f64], xi2: &[f64], branch: Branch) -> Result<f64> {
    if xi1.len() != xi2.len() {
        return Err(Error::SizeMismatch("xi1 and xi2 differ in dimension".into()));
    }
    let n1 = norm(xi1);
    let n2 = norm(xi2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::Config("resonance quantity needs nonzero xi1 and xi2".into()));
    }
    let cos_angle = (dot(xi1, xi2) / (n1 * n2)).clamp(-1.0, 1.0);
    Ok(cos_angle + (n2 + branch.sign()) / (2.0 * n1))
}

/// `||ξ₀|² - |ξ₁|² ± |ξ₂||`, a lower bound for the largest modulation.
pub fn modulation_lower_bound(triple: &FrequencyTriple) -> f64 {
    let q0 = dot(&triple.xi0, &triple.xi0);
    let q1 = dot(&triple.xi1, &triple.xi1);
    (q0 - q1 + triple.branch.sign() * norm(&triple.xi2)).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellPoint {
    pub xi2: Vec<f64>,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellSample {
    pub points: Vec<ShellPoint>,
    /// Set when fewer than `count` points could be produced.
    pub notice: Option<String>,
}

/// Random `ξ₂` with `ν ≤ |A(ξ₁, ξ₂)| ≤ 2ν`.
///
/// A direction and a target `A` are drawn uniformly, the radius is solved from
/// the definition of `A`, and the point is kept only if the recomputed `A`
/// satisfies the predicate.
pub fn resonant_shell_sample(
    xi1: &[f64],
    nu: f64,
    branch: Branch,
    count: usize,
    seed: u64,
) -> Result<ShellSample> {
    let n1 = norm(xi1);
    if n1 == 0.0 {
        return Err(Error::Config("xi1 must be nonzero".into()));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Config(format!("nu must be positive, got {nu}")));
    }
    let d = xi1.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let max_attempts = count.saturating_mul(100).max(1000);
    let mut dir = vec![0.0; d];
    for _ in 0..max_attempts {
        if points.len() == count {
            break;
        }
        let len = loop {
            for x in dir.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let len = norm(&dir);
            if len > 1e-12 {
                break len;
            }
        };
        dir.iter_mut().for_each(|x| *x /= len);
        let mag = rng.random_range(nu..=2.0 * nu);
        let target = if rng.random_bool(0.5) { mag } else { -mag };
        let cos_angle = dot(&dir, xi1) / n1;
        let rho = 2.0 * n1 * (target - cos_angle) - branch.sign();
        if !(rho > 0.0) {
            continue;
        }
        let xi2: Vec<f64> = dir.iter().map(|x| rho * x).collect();
        let a = resonance_a(xi1, &xi2, branch)?;
        if a.abs() >= nu && a.abs() <= 2.0 * nu {
            points.push(ShellPoint { xi2, a });
        }
    }
    let notice = (points.len() < count).then(|| {
        format!(
            "only {} of {count} points found with {nu} <= |A| <= {}",
            points.len(),
            2.0 * nu
        )
    });
    Ok(ShellSample { points, notice })
}

/// Median over angular bins (about the `ξ₁` axis, `d = 2`) of the radial extent
/// of the `A > 0` sheet of a shell sample. Within a bin the radius is detrended
/// linearly in the angle before taking its extent, so the result measures the
/// sheet at fixed direction. Bins with fewer than 20 points are ignored.
pub fn shell_thickness(sample: &ShellSample, xi1: &[f64], angle_bins: usize) -> Option<f64> {
    if xi1.len() != 2 || angle_bins == 0 {
        return None;
    }
    let base = xi1[1].atan2(xi1[0]);
    let mut bins: Vec<Vec<(f64, f64)>> = vec![Vec::new(); angle_bins];
    for p in sample.points.iter().filter(|p| p.a > 0.0) {
        let theta = (p.xi2[1].atan2(p.xi2[0]) - base).rem_euclid(std::f64::consts::TAU);
        let bin = ((theta / std::f64::consts::TAU * angle_bins as f64) as usize).min(angle_bins - 1);
        bins[bin].push((theta, norm(&p.xi2)));
    }
    let mut widths: Vec<f64> = bins
        .iter()
        .filter(|b| b.len() >= 20)
        .map(|b| detrended_extent(b))
        .collect();
    if widths.is_empty() {
        return None;
    }
    widths.sort_by(f64::total_cmp);
    Some(widths[widths.len() / 2])
}

fn detrended_extent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mr = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let str_: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mr)).sum();
    let slope = if stt > 0.0 { str_ / stt } else { 0.0 };
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let res = p.1 - mr - slope * (p.0 - mt);
        (lo.min(res), hi.max(res))
    });
    hi - lo
}
