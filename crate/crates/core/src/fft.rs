//! 2-D FFT helpers on top of rustfft.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! number of samples, so `ifft2(fft2(x)) == x` up to rounding.

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Planned row/column transforms for one image size, reusable across calls
/// and shareable between threads.
pub struct Fft2d {
    height: usize,
    width: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2d {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2d {
            height,
            width,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn forward(&self, data: &Array2<Complex64>) -> Array2<Complex64> {
        self.transform(data, false)
    }

    /// Inverse transform, normalized by `1 / (height * width)`.
    pub fn inverse(&self, data: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = self.transform(data, true);
        let scale = 1.0 / (self.height * self.width) as f64;
        out.mapv_inplace(|v| v * scale);
        out
    }

    fn transform(&self, data: &Array2<Complex64>, inverse: bool) -> Array2<Complex64> {
        assert_eq!(data.dim(), (self.height, self.width), "fft size mismatch");
        let (row_fft, col_fft) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };

        let mut buf: Vec<Complex64> = data.iter().copied().collect();
        for row in buf.chunks_exact_mut(self.width) {
            row_fft.process(row);
        }
        // Transpose, transform the former columns, transpose back.
        let mut tr = transpose(&buf, self.height, self.width);
        for col in tr.chunks_exact_mut(self.height) {
            col_fft.process(col);
        }
        let back = transpose(&tr, self.width, self.height);
        Array2::from_shape_vec((self.height, self.width), back).expect("shape preserved")
    }
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// One-shot forward 2-D FFT of a real array.
pub fn fft2_real(data: &Array2<f64>) -> Array2<Complex64> {
    let complex = data.mapv(|v| Complex64::new(v, 0.0));
    Fft2d::new(data.nrows(), data.ncols()).forward(&complex)
}

/// One-shot inverse 2-D FFT.
pub fn ifft2(data: &Array2<Complex64>) -> Array2<Complex64> {
    Fft2d::new(data.nrows(), data.ncols()).inverse(data)
}

/// Signed frequency (radians per sample) for bin `k` of an `n`-point transform.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    let k = k as isize;
    let n = n as isize;
    let signed = if k <= n / 2 { k } else { k - n };
    2.0 * std::f64::consts::PI * signed as f64 / n as f64
}
