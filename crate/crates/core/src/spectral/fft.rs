//! Multi-dimensional FFT over row-major `n^d` arrays, one axis at a time.

use num_complex::Complex64;
use rustfft::Fft;

/// Unnormalized in-place transform along every axis.
pub(crate) fn transform_nd(data: &mut [Complex64], n: usize, dim: usize, plan: &dyn Fft<f64>) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let mut lines: Vec<Complex64> = Vec::new();
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            plan.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = n * stride;
        lines.resize(block, Complex64::new(0.0, 0.0));
        for chunk in data.chunks_mut(block) {
            // chunk is [n][stride]; gather into [stride][n]
            for i in 0..n {
                for j in 0..stride {
                    lines[j * n + i] = chunk[i * stride + j];
                }
            }
            plan.process_with_scratch(&mut lines, &mut scratch);
            for i in 0..n {
                for j in 0..stride {
                    chunk[i * stride + j] = lines[j * n + i];
                }
            }
        }
    }
}

/// Unnormalized in-place 1-D transform of many contiguous lines of length `plan.len()`.
pub(crate) fn transform_lines(data: &mut [Complex64], plan: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(data, &mut scratch);
}
