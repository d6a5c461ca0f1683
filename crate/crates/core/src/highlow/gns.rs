//! Gagliardo-Nirenberg-Sobolev constants on `ℝ⁴`:
//! `‖f‖_{L⁴} ≤ C₁‖∇f‖_{L²}` and `‖f‖_{L^{8/3}} ≤ C₂‖f‖_{L²}^{1/2}‖∇f‖_{L²}^{1/2}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Brackets for `C₁`, `C₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnsBracket {
    /// Best ratio over the trial family.
    pub c1_lower: f64,
    /// The Aubin-Talenti constant `(8π)^{-1/2}·6^{1/4}`.
    pub c1_upper: f64,
    pub c2_lower: f64,
    /// `C₁^{1/2}`, from `‖f‖_{8/3} ≤ ‖f‖_2^{1/2}‖f‖_4^{1/2}`.
    pub c2_upper: f64,
}

/// Sharp Sobolev constant in four dimensions.
pub fn sobolev_constant_d4() -> f64 {
    (8.0 * PI).powf(-0.5) * 6f64.powf(0.25)
}

/// Radial integral `∫_{ℝ⁴} g(|x|) dx = 2π² ∫ g(ρ) ρ³ dρ`, on `ρ = e^y`.
fn radial(g: impl Fn(f64) -> f64) -> f64 {
    let (y0, y1, n) = (-25.0f64, 25.0f64, 20_000usize);
    let h = (y1 - y0) / n as f64;
    let mut sum = 0.0;
    for k in 0..=n {
        let y = y0 + k as f64 * h;
        let rho = y.exp();
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        sum += w * g(rho) * rho.powi(4);
    }
    2.0 * PI * PI * sum * h
}

struct Profile {
    in_l2: bool,
    f: Box<dyn Fn(f64) -> f64>,
    df: Box<dyn Fn(f64) -> f64>,
}

fn family() -> Vec<Profile> {
    let mut out: Vec<Profile> = Vec::new();
    // (1+ρ²)^{-k}; k = 1 is the Sobolev optimizer, k > 1 is in L².
    for i in 0..=40 {
        let k = 1.0 + 0.1 * i as f64;
        out.push(Profile {
            in_l2: i > 0,
            f: Box::new(move |r| (1.0 + r * r).powf(-k)),
            df: Box::new(move |r| -2.0 * k * r * (1.0 + r * r).powf(-k - 1.0)),
        });
    }
    // exp(-ρ^p).
    for i in 0..=30 {
        let p = 1.0 + 0.1 * i as f64;
        out.push(Profile {
            in_l2: true,
            f: Box::new(move |r| (-r.powf(p)).exp()),
            df: Box::new(move |r| -p * r.powf(p - 1.0) * (-r.powf(p)).exp()),
        });
    }
    // sech(ρ)^q.
    for i in 1..=20 {
        let q = 0.25 * i as f64;
        out.push(Profile {
            in_l2: true,
            f: Box::new(move |r| r.cosh().powf(-q)),
            df: Box::new(move |r| -q * r.tanh() * r.cosh().powf(-q)),
        });
    }
    out
}

/// Lower brackets by maximizing the quotients over radial trial profiles
/// (power-law, stretched exponential and sech families). Both quotients are
/// dilation invariant in four dimensions, so widths do not enter.
pub fn gns_bracket() -> GnsBracket {
    let mut c1 = 0.0f64;
    let mut c2 = 0.0f64;
    for p in family() {
        let grad = radial(|r| (p.df)(r).powi(2)).sqrt();
        let l4 = radial(|r| (p.f)(r).powi(4)).powf(0.25);
        c1 = c1.max(l4 / grad);
        if p.in_l2 {
            let l2 = radial(|r| (p.f)(r).powi(2)).sqrt();
            let l83 = radial(|r| (p.f)(r).abs().powf(8.0 / 3.0)).powf(3.0 / 8.0);
            c2 = c2.max(l83 / (l2 * grad).sqrt());
        }
    }
    let s = sobolev_constant_d4();
    GnsBracket {
        c1_lower: c1,
        c1_upper: s,
        c2_lower: c2,
        c2_upper: s.sqrt(),
    }
}

/// Both readings of the small-mass condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassThreshold {
    /// `√2/(C₁C₂²)`, the form used by the energy argument.
    pub energy_form: f64,
    /// `√2·C₁C₂²`, the form in the statement of the global result.
    pub statement_form: f64,
}

fn check_constants(c1: f64, c2: f64) -> Result<()> {
    if !(c1.is_finite() && c1 > 0.0 && c2.is_finite() && c2 > 0.0) {
        return Err(Error::Config(format!(
            "GNS constants must be positive, got c1 = {c1}, c2 = {c2}"
        )));
    }
    Ok(())
}

/// `√2/(C₁C₂²)`.
pub fn mass_threshold(c1: f64, c2: f64) -> Result<f64> {
    check_constants(c1, c2)?;
    Ok(2f64.sqrt() / (c1 * c2 * c2))
}

pub fn mass_threshold_forms(c1: f64, c2: f64) -> Result<MassThreshold> {
    Ok(MassThreshold {
        energy_form: mass_threshold(c1, c2)?,
        statement_form: 2f64.sqrt() * c1 * c2 * c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_is_ordered() {
        let b = gns_bracket();
        assert!(b.c1_lower <= b.c1_upper * (1.0 + 1e-9), "{b:?}");
        assert!((b.c1_lower / b.c1_upper - 1.0).abs() < 1e-6, "{b:?}");
        assert!(b.c2_lower > 0.0 && b.c2_lower <= b.c2_upper, "{b:?}");
    }

    #[test]
    fn nonpositive_constants_rejected() {
        assert!(mass_threshold(0.0, 1.0).is_err());
        assert!(mass_threshold(1.0, -1.0).is_err());
    }
}
