//! Fourier phase scrambling.
//!
//! Replaces every phase with a uniform random draw while keeping the
//! magnitude spectrum, destroying image structure beyond second-order
//! statistics. Randomization walks the half-spectrum and mirrors each draw
//! so the output stays real; self-conjugate bins (DC, Nyquist corners) admit
//! only phases 0 or pi, and DC is left untouched so the mean survives.

use crate::error::Result;
use crate::fft::{fft2_real, ifft2};
use crate::image::Image;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

/// Returns a phase-scrambled image with the same power spectrum and mean.
pub fn phase_scramble(image: &Image, seed: u64) -> Result<Image> {
    let (h, w) = (image.height(), image.width());
    let spectrum = fft2_real(image.pixels());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Array2::from_elem((h, w), Complex64::default());

    for ky in 0..h {
        for kx in 0..w {
            let my = (h - ky) % h;
            let mx = (w - kx) % w;
            if (my, mx) == (ky, kx) {
                // Self-conjugate bin: real coefficient, random sign. DC keeps
                // its value so the image mean is untouched.
                if ky == 0 && kx == 0 {
                    out[[0, 0]] = spectrum[[0, 0]];
                } else {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    out[[ky, kx]] = Complex64::new(sign * spectrum[[ky, kx]].norm(), 0.0);
                }
            } else if (ky, kx) < (my, mx) {
                let phase = rng.random::<f64>() * std::f64::consts::TAU;
                let rot = Complex64::new(phase.cos(), phase.sin());
                // Each bin keeps its own measured magnitude; the mirror gets
                // the conjugate phase so the inverse transform is real.
                out[[ky, kx]] = rot * spectrum[[ky, kx]].norm();
                out[[my, mx]] = rot.conj() * spectrum[[my, mx]].norm();
            }
        }
    }

    let complex = ifft2(&out);
    debug_assert!(
        complex.iter().map(|v| v.im.abs()).fold(0.0, f64::max) < 1e-10,
        "imaginary residue above tolerance"
    );
    Image::from_pixels(complex.mapv(|v| v.re))
}
