//! The box pair that shows the Schrödinger bilinear estimate cannot gain more
//! than half a derivative:
//!
//! * `B₁ = {|ξ₁ - N| < 1/N, |ξᵢ| < 1 (i ≥ 2), |τ + N²| < 1}`
//! * `B₂ = {|ξ₁| < 1/N, |ξᵢ| < 1 (i ≥ 2), |τ| < 1}`
//!
//! With `û = χ_{B₁}`, `v̂ = χ_{B₂}` the ratio
//! `‖uv‖_{X^{s+α,b-1}} / (‖u‖_{X^{s,b}} ‖v‖_{X^{r,b}_+})` grows like `N^{α-1/2}`.

use super::lattice::BoxField;
use crate::error::{Error, Result};

/// Lattice resolution of the boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxResolution {
    /// Cells across the `ξ₁` width `2/N`.
    pub cells_per_width: usize,
    /// Cells across the unit-size widths of the other axes and of `τ`.
    pub transverse_cells: usize,
    /// Upper bound on products formed in the convolution.
    pub max_pairs: u64,
}

impl Default for BoxResolution {
    fn default() -> Self {
        BoxResolution {
            cells_per_width: 8,
            transverse_cells: 8,
            max_pairs: 400_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleReport {
    pub n: f64,
    pub ratio: f64,
    /// `‖u‖_{X^{s,b}}`.
    pub u_norm: f64,
    /// `‖v‖_{X^{r,b}_+}`.
    pub v_norm: f64,
    /// `‖uv‖_{X^{s+α,b-1}}`.
    pub uv_norm: f64,
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn norm_sq(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// Indicator of `B₁` (`high = true`) or `B₂` on the midpoint lattice.
pub fn counterexample_box(n: f64, d: usize, high: bool, res: &BoxResolution) -> Result<BoxField> {
    let h1 = 2.0 / (n * res.cells_per_width as f64);
    let ht = 2.0 / res.transverse_cells as f64;
    let mut spacing = vec![h1];
    let mut origin = vec![if high { n } else { 0.0 } - 1.0 / n + 0.5 * h1];
    let mut shape = vec![res.cells_per_width];
    for _ in 1..d {
        spacing.push(ht);
        origin.push(-1.0 + 0.5 * ht);
        shape.push(res.transverse_cells);
    }
    spacing.push(ht);
    origin.push(if high { -n * n } else { 0.0 } - 1.0 + 0.5 * ht);
    shape.push(res.transverse_cells);
    BoxField::from_fn(spacing, origin, shape, |_, _| 1.0)
}

/// Evaluate the counterexample ratio at scale `N`.
pub fn sharpness_counterexample(
    n: f64,
    s: f64,
    r: f64,
    alpha: f64,
    b: f64,
    d: usize,
) -> Result<CounterexampleReport> {
    sharpness_counterexample_with(n, s, r, alpha, b, d, &BoxResolution::default())
}

pub fn sharpness_counterexample_with(
    n: f64,
    s: f64,
    r: f64,
    alpha: f64,
    b: f64,
    d: usize,
    res: &BoxResolution,
) -> Result<CounterexampleReport> {
    if !(n.is_finite() && n >= 2.0) {
        return Err(Error::Config(format!("N must be >= 2, got {n}")));
    }
    if !(1..=4).contains(&d) {
        return Err(Error::Config(format!("d must be in 1..=4, got {d}")));
    }
    if res.cells_per_width < 2 {
        return Err(Error::Resolution(format!(
            "the xi_1 width 2/N needs at least 2 cells, got {}",
            res.cells_per_width
        )));
    }
    if res.transverse_cells < 1 {
        return Err(Error::Resolution("transverse_cells must be >= 1".into()));
    }
    let u = counterexample_box(n, d, true, res)?;
    let v = counterexample_box(n, d, false, res)?;
    let u_norm = u.weighted_norm(|xi, tau| {
        let q = norm_sq(xi);
        (1.0 + q).powf(0.5 * s) * bracket(tau + q).powf(b)
    });
    let v_norm = v.weighted_norm(|xi, tau| {
        let q = norm_sq(xi);
        (1.0 + q).powf(0.5 * r) * bracket(tau + q.sqrt()).powf(b)
    });
    let uv = u.convolve(&v, res.max_pairs)?;
    let uv_norm = uv.weighted_norm(|xi, tau| {
        let q = norm_sq(xi);
        (1.0 + q).powf(0.5 * (s + alpha)) * bracket(tau + q).powf(b - 1.0)
    });
    Ok(CounterexampleReport {
        n,
        ratio: uv_norm / (u_norm * v_norm),
        u_norm,
        v_norm,
        uv_norm,
    })
}
