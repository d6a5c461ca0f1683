//! Quadrature check of `∫ dy / (⟨y-a⟩^α ⟨y-b⟩^β) ≲ ⟨a-b⟩^{-β}` for `α > 1`, `α ≥ β ≥ 0`.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// The integral is computed on `|y| ≤ LEMMA_TRUNCATION`; the tails are bounded analytically.
pub const LEMMA_TRUNCATION: f64 = 1e4;

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaEntry {
    pub a: f64,
    pub b: f64,
    pub integral: f64,
    /// `integral · ⟨a-b⟩^β`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub alpha: f64,
    pub beta: f64,
    pub entries: Vec<LemmaEntry>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    adaptive(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `∫ ⟨y-a⟩^{-α} ⟨y-b⟩^{-β} dy` without hypothesis checks. Returns `+∞` when
/// `α + β ≤ 1`, where the integral diverges.
pub fn lemma_integral(alpha: f64, beta: f64, a: f64, b: f64) -> f64 {
    let p = alpha + beta;
    if p <= 1.0 {
        return f64::INFINITY;
    }
    let y_max = LEMMA_TRUNCATION;
    let f = |y: f64| bracket(y - a).powf(-alpha) * bracket(y - b).powf(-beta);
    // Breakpoints at the peaks and at dyadic distances from them.
    let mut cuts = vec![-y_max, y_max];
    for c in [a, b] {
        cuts.push(c);
        let mut r = 1.0;
        while r < 2.0 * y_max {
            cuts.push(c - r);
            cuts.push(c + r);
            r *= 2.0;
        }
    }
    cuts.retain(|x| x.abs() <= y_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let body: f64 = cuts
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], 1e-13 * (w[1] - w[0]).max(1.0)))
        .sum();
    // On y > Y: ⟨y-c⟩ ≥ y - c with c = max(a, b), and symmetrically below -Y.
    let hi = a.max(b);
    let lo = a.min(b);
    let tail = |gap: f64| {
        if gap <= 0.0 {
            f64::INFINITY
        } else {
            gap.powf(1.0 - p) / (p - 1.0)
        }
    };
    body + tail(y_max - hi) + tail(y_max + lo)
}

/// Ratios `∫ ⟨y-a⟩^{-α}⟨y-b⟩^{-β} dy · ⟨a-b⟩^β` over the product grid.
pub fn calc_lemma_check(alpha: f64, beta: f64, a_grid: &[f64], b_grid: &[f64]) -> Result<LemmaReport> {
    if !(alpha > 1.0 && alpha >= beta && beta >= 0.0) {
        return Err(Error::Hypothesis(format!(
            "needs alpha > 1 and alpha >= beta >= 0, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let bound = 0.5 * LEMMA_TRUNCATION;
    if a_grid.iter().chain(b_grid).any(|x| !(x.abs() <= bound)) {
        return Err(Error::Config(format!(
            "a and b must be finite with |a|, |b| <= {bound}"
        )));
    }
    let pairs: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| b_grid.iter().map(move |&b| (a, b)))
        .collect();
    let entries: Vec<LemmaEntry> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let integral = lemma_integral(alpha, beta, a, b);
            LemmaEntry {
                a,
                b,
                integral,
                ratio: integral * bracket(a - b).powf(beta),
            }
        })
        .collect();
    let max_ratio = entries.iter().map(|e| e.ratio).fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
    Ok(LemmaReport {
        alpha,
        beta,
        entries,
        max_ratio,
        min_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses_enforced() {
        assert!(matches!(
            calc_lemma_check(0.9, 0.5, &[0.0], &[0.0]),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            calc_lemma_check(1.5, 2.0, &[0.0], &[0.0]),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn cauchy_density_integral() {
        // ∫ dy/(1+y²) = π.
        let v = lemma_integral(2.0, 0.0, 0.0, 0.0);
        assert!((v - std::f64::consts::PI).abs() < 1e-9, "{v}");
    }
}
