use super::field::SpectralField;

/// One radial bin of a shell-averaged spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBin {
    /// Mean `|ξ|` over the lattice points in the bin.
    pub radius: f64,
    /// Root-mean-square coefficient magnitude over the bin.
    pub rms: f64,
    pub count: usize,
}

/// Shell-averaged spectrum over unit-width bins `k ≤ L|ξ| < k+1`.
pub fn radial_spectrum(field: &SpectralField) -> Vec<RadialBin> {
    let grid = field.grid();
    let l = grid.box_length();
    let nbins = (grid.max_xi() * l).floor() as usize + 1;
    let mut sum_r = vec![0.0; nbins];
    let mut sum_sq = vec![0.0; nbins];
    let mut count = vec![0usize; nbins];
    for (c, &q) in field.coeffs().iter().zip(grid.xi_sq()) {
        let r = q.sqrt();
        let b = ((r * l).floor() as usize).min(nbins - 1);
        sum_r[b] += r;
        sum_sq[b] += c.norm_sqr();
        count[b] += 1;
    }
    (0..nbins)
        .filter(|&b| count[b] > 0)
        .map(|b| RadialBin {
            radius: sum_r[b] / count[b] as f64,
            rms: (sum_sq[b] / count[b] as f64).sqrt(),
            count: count[b],
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`. Returns `None` for fewer than two points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Log-log slope of the shell-averaged spectrum over lattice radii `L|ξ| ∈ [n/8, n/3]`.
pub fn spectral_slope(field: &SpectralField) -> Option<f64> {
    let grid = field.grid();
    let n = grid.n_per_dim() as f64;
    let l = grid.box_length();
    let pts: Vec<(f64, f64)> = radial_spectrum(field)
        .into_iter()
        .filter(|b| b.radius * l >= n / 8.0 && b.radius * l <= n / 3.0)
        .map(|b| (b.radius, b.rms))
        .collect();
    loglog_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..20).map(|k| (k as f64, (k as f64).powf(-1.7))).collect();
        assert!((loglog_slope(&pts).unwrap() + 1.7).abs() < 1e-12);
    }

    #[test]
    fn degenerate_input_has_no_slope() {
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(2.0, 1.0), (2.0, 3.0)]), None);
    }
}
