//! Dense real-valued functions on a box of an anisotropic `(ξ, τ)` lattice.

use crate::error::{Error, Result};

/// Values on cells `origin + i·spacing`, `0 ≤ i < shape`, over `d` space axes followed by `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxField {
    spacing: Vec<f64>,
    origin: Vec<f64>,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl BoxField {
    pub fn zeros(spacing: Vec<f64>, origin: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        if spacing.len() != origin.len() || spacing.len() != shape.len() || spacing.len() < 2 {
            return Err(Error::SizeMismatch(
                "spacing, origin and shape need one entry per axis (at least 2)".into(),
            ));
        }
        if spacing.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(Error::Config("lattice spacings must be positive".into()));
        }
        let total: usize = shape.iter().product();
        Ok(BoxField {
            spacing,
            origin,
            shape,
            values: vec![0.0; total],
        })
    }

    /// Evaluate `f(ξ, τ)` at every cell center.
    pub fn from_fn(
        spacing: Vec<f64>,
        origin: Vec<f64>,
        shape: Vec<usize>,
        f: impl Fn(&[f64], f64) -> f64,
    ) -> Result<Self> {
        let mut out = Self::zeros(spacing, origin, shape)?;
        let mut point = vec![0.0; out.axes()];
        for flat in 0..out.values.len() {
            out.coords_into(flat, &mut point);
            let (xi, tau) = point.split_at(point.len() - 1);
            out.values[flat] = f(xi, tau[0]);
        }
        Ok(out)
    }

    pub fn axes(&self) -> usize {
        self.shape.len()
    }

    /// Number of spatial axes.
    pub fn dim(&self) -> usize {
        self.shape.len() - 1
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn nonzeros(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    pub fn coords_into(&self, mut flat: usize, out: &mut [f64]) {
        for k in (0..self.shape.len()).rev() {
            let i = flat % self.shape[k];
            flat /= self.shape[k];
            out[k] = self.origin[k] + i as f64 * self.spacing[k];
        }
    }

    /// `(Σ (w(ξ,τ) f)² · cell volume)^{1/2}`.
    pub fn weighted_norm(&self, weight: impl Fn(&[f64], f64) -> f64) -> f64 {
        let mut point = vec![0.0; self.axes()];
        let mut sum = 0.0;
        for (flat, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            self.coords_into(flat, &mut point);
            let (xi, tau) = point.split_at(point.len() - 1);
            sum += (weight(xi, tau[0]) * v).powi(2);
        }
        (sum * self.cell_volume()).sqrt()
    }

    /// Discrete convolution `(f*g)(z) = Σ_x f(x) g(z-x) · cell volume` by direct summation
    /// over nonzero cells. Fails if more than `max_pairs` products would be formed.
    pub fn convolve(&self, other: &BoxField, max_pairs: u64) -> Result<BoxField> {
        if self.axes() != other.axes() {
            return Err(Error::SizeMismatch("convolution of boxes with different axes".into()));
        }
        for (a, b) in self.spacing.iter().zip(&other.spacing) {
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                return Err(Error::SizeMismatch(format!(
                    "convolution needs equal spacings, got {a} and {b}"
                )));
            }
        }
        let nz_a: Vec<(usize, f64)> = nonzero_cells(self);
        let nz_b: Vec<(usize, f64)> = nonzero_cells(other);
        let pairs = nz_a.len() as u64 * nz_b.len() as u64;
        if pairs > max_pairs {
            return Err(Error::Resource(format!(
                "convolution needs {pairs} products, limit {max_pairs}"
            )));
        }
        let shape: Vec<usize> = self
            .shape
            .iter()
            .zip(&other.shape)
            .map(|(a, b)| a + b - 1)
            .collect();
        let origin: Vec<f64> = self.origin.iter().zip(&other.origin).map(|(a, b)| a + b).collect();
        let mut out = BoxField::zeros(self.spacing.clone(), origin, shape)?;
        let offsets_a: Vec<(usize, f64)> = nz_a
            .iter()
            .map(|&(flat, v)| (out_offset(flat, &self.shape, &out.shape), v))
            .collect();
        let offsets_b: Vec<(usize, f64)> = nz_b
            .iter()
            .map(|&(flat, v)| (out_offset(flat, &other.shape, &out.shape), v))
            .collect();
        let vol = self.cell_volume();
        for &(oa, va) in &offsets_a {
            let va = va * vol;
            for &(ob, vb) in &offsets_b {
                out.values[oa + ob] += va * vb;
            }
        }
        Ok(out)
    }
}

fn nonzero_cells(f: &BoxField) -> Vec<(usize, f64)> {
    f.values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| (i, *v))
        .collect()
}

/// Linear offset in the output box of a multi-index given in the input box.
fn out_offset(mut flat: usize, shape: &[usize], out_shape: &[usize]) -> usize {
    let mut idx = vec![0usize; shape.len()];
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    idx.iter()
        .zip(out_shape)
        .fold(0usize, |acc, (&i, &n)| acc * n + i)
}
