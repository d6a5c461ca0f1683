use num_complex::Complex64;

use super::field::{SpectralField, ZeroMode};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Sign of a Klein-Gordon branch: `Plus` evolves by `e^{-it⟨ξ⟩}`, `Minus` by `e^{+it⟨ξ⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// `+1` for `Plus`, `-1` for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Diagonal Fourier symbols used across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    /// `⟨ξ⟩^σ`, powers of the Bessel operator `(1-Δ)^{1/2}`.
    Bessel(f64),
    /// `|ξ|^σ`; a zero-mode policy is required when `σ < 0`.
    Riesz { order: f64, zero_mode: Option<ZeroMode> },
    /// `-|ξ|²`, the Laplacian.
    Laplacian,
    /// `e^{-it|ξ|²}`, the free Schrödinger group solving `iu_t + Δu = 0`.
    Schrodinger(f64),
    /// `e^{∓it⟨ξ⟩}`, the Klein-Gordon half-wave groups.
    KleinGordon { branch: Branch, t: f64 },
}

impl Symbol {
    /// Symbol value at a given `|ξ|²`.
    pub fn eval(&self, xi_sq: f64) -> Result<Complex64> {
        Ok(match *self {
            Symbol::Bessel(s) => Complex64::new((1.0 + xi_sq).powf(0.5 * s), 0.0),
            Symbol::Riesz { order, zero_mode } => {
                if xi_sq == 0.0 && order < 0.0 {
                    match zero_mode {
                        Some(ZeroMode::Annihilate) => Complex64::new(0.0, 0.0),
                        _ => {
                            return Err(Error::SingularSymbol(format!(
                                "|xi|^{order} is singular at the zero mode"
                            )))
                        }
                    }
                } else if xi_sq == 0.0 && order == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(xi_sq.powf(0.5 * order), 0.0)
                }
            }
            Symbol::Laplacian => Complex64::new(-xi_sq, 0.0),
            Symbol::Schrodinger(t) => Complex64::from_polar(1.0, -t * xi_sq),
            Symbol::KleinGordon { branch, t } => {
                Complex64::from_polar(1.0, -branch.sign() * t * (1.0 + xi_sq).sqrt())
            }
        })
    }

    /// Symbol tabulated on every lattice point, Nyquist modes set to zero.
    pub fn table(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        grid.xi_sq()
            .iter()
            .zip(grid.nyquist_mask())
            .map(|(&q, &nyq)| {
                if nyq {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    self.eval(q)
                }
            })
            .collect()
    }
}

/// Pointwise multiplication of the coefficients by `symbol(ξ)`.
///
/// Nyquist modes are zeroed so that real fields stay exactly real.
pub fn fourier_multiplier(field: &SpectralField, symbol: Symbol) -> Result<SpectralField> {
    let table = symbol.table(field.grid())?;
    Ok(apply_table(field, &table))
}

pub(crate) fn apply_table(field: &SpectralField, table: &[Complex64]) -> SpectralField {
    let coeffs = field.coeffs().iter().zip(table).map(|(c, m)| c * m).collect();
    SpectralField::from_coeffs(field.grid(), coeffs).expect("table built on the same grid")
}

/// Sobolev norm; homogeneous norms with `s < 0` reject fields with a nonzero mean.
pub fn sobolev_norm(field: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    if homogeneous {
        field.homogeneous_norm(s, ZeroMode::Reject)
    } else {
        Ok(field.sobolev_norm(s))
    }
}

/// Index of the dyadic shell containing `|ξ|`: `0` for `|ξ| < 1`, `j ≥ 1` for `2^{j-1} ≤ |ξ| < 2^j`.
pub fn shell_index(xi_sq: f64) -> usize {
    let mut j = 0;
    let mut lower_sq = 1.0;
    while xi_sq >= lower_sq {
        j += 1;
        lower_sq *= 4.0;
    }
    j
}

/// Partition of the lattice into dyadic frequency shells.
#[derive(Debug, Clone)]
pub struct DyadicShellSet {
    shells: Vec<Vec<usize>>,
}

impl DyadicShellSet {
    pub fn new(grid: &Grid) -> Self {
        let mut shells: Vec<Vec<usize>> = Vec::new();
        for (i, &q) in grid.xi_sq().iter().enumerate() {
            let j = shell_index(q);
            if shells.len() <= j {
                shells.resize(j + 1, Vec::new());
            }
            shells[j].push(i);
        }
        DyadicShellSet { shells }
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }

    /// Storage indices belonging to shell `j`.
    pub fn indices(&self, j: usize) -> &[usize] {
        self.shells.get(j).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Nominal frequency `2^{j-1}` of shell `j` (zero for the low block).
    pub fn center(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            2f64.powi(j as i32 - 1)
        }
    }
}

/// Frequency projections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Dyadic shell `j` (see [`shell_index`]).
    Shell(usize),
    /// Keep `|ξ| ≤ N`.
    Lowpass(f64),
    /// Keep `|ξ| > N`, the complement of `Lowpass(N)`.
    Highpass(f64),
}

pub fn project(field: &SpectralField, mode: Projection) -> Result<SpectralField> {
    let keep: Box<dyn Fn(f64) -> bool> = match mode {
        Projection::Shell(j) => Box::new(move |q| shell_index(q) == j),
        Projection::Lowpass(n) | Projection::Highpass(n) => {
            if !(n >= 0.0) {
                return Err(Error::Config(format!("projection cutoff must be >= 0, got {n}")));
            }
            let low = matches!(mode, Projection::Lowpass(_));
            Box::new(move |q| (q <= n * n) == low)
        }
    };
    let coeffs = field
        .coeffs()
        .iter()
        .zip(field.grid().xi_sq())
        .map(|(c, &q)| if keep(q) { *c } else { Complex64::new(0.0, 0.0) })
        .collect();
    SpectralField::from_coeffs(field.grid(), coeffs)
}

/// Zero every coefficient outside the 2/3-rule band.
pub fn dealias(field: &SpectralField) -> SpectralField {
    let coeffs = field
        .coeffs()
        .iter()
        .zip(field.grid().dealias_mask())
        .map(|(c, &keep)| if keep { *c } else { Complex64::new(0.0, 0.0) })
        .collect();
    SpectralField::from_coeffs(field.grid(), coeffs).expect("same grid")
}

/// Product `f·g` with both factors and the result truncated to the 2/3 band.
///
/// For band-limited inputs this is the exact convolution `(2πL)^{-d} Σ_η f̂(η) ĝ(ξ-η)`
/// restricted to the band.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.same_grid(g, "dealiased product")?;
    let a = dealias(f).to_samples();
    let b = dealias(g).to_samples();
    let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(dealias(&SpectralField::from_samples(f.grid(), &prod)?))
}

/// Dealiased `|f|²`.
pub fn dealiased_abs_sq(f: &SpectralField) -> SpectralField {
    let a = dealias(f).to_samples();
    let prod: Vec<Complex64> = a.iter().map(|x| Complex64::new(x.norm_sqr(), 0.0)).collect();
    dealias(&SpectralField::from_samples(f.grid(), &prod).expect("same grid"))
}
