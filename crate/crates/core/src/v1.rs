//! Fixed multiscale oriented front end.
//!
//! A bank of polar-separable band-pass filters is built in the frequency
//! domain: octave-spaced log-radial cosine windows crossed with
//! `cos^(O-1)` angular lobes restricted to a half-plane. The half-plane
//! restriction makes each band analytic, so one inverse FFT per band
//! yields the quadrature pair at once: the real part is the even-phase
//! response, the imaginary part the odd-phase response, and the magnitude
//! is the phase-invariant energy.
//!
//! The forward pass produces, per band, half-wave rectified even and odd
//! maps plus the energy map, every map bilinearly resampled to a common
//! grid at `1 / grid_factor` of the input resolution. Channel layout is
//! fixed: all even maps, then all odd maps, then all energy maps, each
//! block scale-major (band index `s * O + o`).

use crate::error::{Error, Result};
use crate::fft::{bin_frequency, Fft2d};
use crate::image::{sample_bilinear, Image};
use ndarray::{Array2, Array3};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteerableConfig {
    pub num_scales: usize,
    pub num_orientations: usize,
    /// Downsampling factor of the common output grid; must be a power of two.
    pub grid_factor: usize,
}

impl Default for SteerableConfig {
    fn default() -> Self {
        SteerableConfig {
            num_scales: 5,
            num_orientations: 4,
            grid_factor: 4,
        }
    }
}

impl SteerableConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_scales < 1 {
            return Err(Error::invalid("num_scales must be >= 1"));
        }
        if self.num_orientations < 2 {
            return Err(Error::invalid("num_orientations must be >= 2"));
        }
        if self.grid_factor == 0 || !self.grid_factor.is_power_of_two() {
            return Err(Error::invalid("grid_factor must be a power of two"));
        }
        Ok(())
    }

    pub fn num_bands(&self) -> usize {
        self.num_scales * self.num_orientations
    }

    /// Linear filters in the bank: a quadrature pair per band.
    pub fn num_filters(&self) -> usize {
        2 * self.num_bands()
    }

    /// Output channels: even + odd + energy per band.
    pub fn num_channels(&self) -> usize {
        3 * self.num_bands()
    }

    pub fn band_index(&self, scale: usize, orientation: usize) -> usize {
        scale * self.num_orientations + orientation
    }

    pub fn even_channel(&self, scale: usize, orientation: usize) -> usize {
        self.band_index(scale, orientation)
    }

    pub fn odd_channel(&self, scale: usize, orientation: usize) -> usize {
        self.num_bands() + self.band_index(scale, orientation)
    }

    pub fn energy_channel(&self, scale: usize, orientation: usize) -> usize {
        2 * self.num_bands() + self.band_index(scale, orientation)
    }

    /// Center radial frequency (radians/pixel) of scale `s`.
    pub fn center_frequency(&self, scale: usize) -> f64 {
        PI / 2f64.powi(scale as i32 + 1)
    }
}

/// Frequency-domain filter bank for one input size. Immutable after
/// construction and shareable across threads.
pub struct FilterBank {
    config: SteerableConfig,
    height: usize,
    width: usize,
    /// Half-plane band spectra, indexed `s * O + o`.
    bands: Vec<Array2<f64>>,
    fft: Fft2d,
}

/// Builds the oriented band-pass bank for `height x width` inputs.
pub fn build_filter_bank(
    config: SteerableConfig,
    height: usize,
    width: usize,
) -> Result<FilterBank> {
    config.validate()?;
    let min_side = 1usize << config.num_scales;
    if height < min_side || width < min_side {
        return Err(Error::invalid(format!(
            "{height}x{width} input too small for {} scales (needs >= {min_side} per side)",
            config.num_scales
        )));
    }

    let orientations = config.num_orientations;
    let angular_power = (orientations - 1) as i32;
    let mut bands = Vec::with_capacity(config.num_bands());
    for scale in 0..config.num_scales {
        let center = config.center_frequency(scale);
        for orientation in 0..orientations {
            let theta = orientation as f64 * PI / orientations as f64;
            let spectrum = Array2::from_shape_fn((height, width), |(ky, kx)| {
                let fy = bin_frequency(ky, height);
                let fx = bin_frequency(kx, width);
                let r = fy.hypot(fx);
                if r <= 0.0 {
                    return 0.0;
                }
                // One-octave log-radial cosine window centered on `center`.
                let t = (r / center).log2();
                if t.abs() >= 1.0 {
                    return 0.0;
                }
                let radial = (0.5 * PI * t).cos();
                // cos^(O-1) lobe on the half-plane around `theta`.
                let c = (fy.atan2(fx) - theta).cos();
                if c <= 0.0 {
                    return 0.0;
                }
                radial * c.powi(angular_power)
            });
            bands.push(spectrum);
        }
    }

    Ok(FilterBank {
        config,
        height,
        width,
        bands,
        fft: Fft2d::new(height, width),
    })
}

impl FilterBank {
    pub fn config(&self) -> &SteerableConfig {
        &self.config
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn band_spectrum(&self, scale: usize, orientation: usize) -> &Array2<f64> {
        &self.bands[self.config.band_index(scale, orientation)]
    }

    /// Magnitude spectrum of the even (symmetric) member of a band's
    /// quadrature pair.
    pub fn even_magnitude(&self, scale: usize, orientation: usize) -> Array2<f64> {
        self.pair_magnitude(scale, orientation, 1.0)
    }

    /// Magnitude spectrum of the odd (antisymmetric) member.
    pub fn odd_magnitude(&self, scale: usize, orientation: usize) -> Array2<f64> {
        self.pair_magnitude(scale, orientation, -1.0)
    }

    fn pair_magnitude(&self, scale: usize, orientation: usize, sign: f64) -> Array2<f64> {
        let c = self.band_spectrum(scale, orientation);
        let (h, w) = (self.height, self.width);
        Array2::from_shape_fn((h, w), |(ky, kx)| {
            let mirrored = c[[(h - ky) % h, (w - kx) % w]];
            0.5 * (c[[ky, kx]] + sign * mirrored).abs()
        })
    }

    /// Complex analytic response of every band at full input resolution.
    pub fn band_responses(&self, image: &Image) -> Result<Vec<Array2<Complex64>>> {
        if image.height() != self.height || image.width() != self.width {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.height, self.width),
                found: format!("{}x{}", image.height(), image.width()),
            });
        }
        let spectrum = self
            .fft
            .forward(&image.pixels().mapv(|v| Complex64::new(v, 0.0)));
        let responses = self
            .bands
            .iter()
            .map(|band| {
                let mut filtered = spectrum.clone();
                ndarray::Zip::from(&mut filtered)
                    .and(band)
                    .for_each(|v, &g| *v *= g);
                self.fft.inverse(&filtered)
            })
            .collect();
        Ok(responses)
    }
}

/// Feature maps on the common grid, `(channels, height/f, width/f)`.
#[derive(Debug, Clone)]
pub struct V1Response {
    pub channels: Array3<f64>,
}

/// Runs the fixed front end: band filtering, rectification, energy, and
/// resampling to the common grid.
pub fn v1_forward(image: &Image, bank: &FilterBank) -> Result<V1Response> {
    let f = bank.config.grid_factor;
    if image.height() % f != 0 || image.width() % f != 0 {
        return Err(Error::invalid(format!(
            "image {}x{} not divisible by grid factor {f}",
            image.height(),
            image.width()
        )));
    }
    let responses = bank.band_responses(image)?;
    let (oh, ow) = (image.height() / f, image.width() / f);
    let num_bands = bank.config.num_bands();
    let mut channels = Array3::zeros((bank.config.num_channels(), oh, ow));

    for (b, resp) in responses.iter().enumerate() {
        let even = resp.mapv(|v| v.re.max(0.0));
        let odd = resp.mapv(|v| v.im.max(0.0));
        let energy = resp.mapv(|v| v.norm());
        channels
            .index_axis_mut(ndarray::Axis(0), b)
            .assign(&downsample_block_center(&even, f));
        channels
            .index_axis_mut(ndarray::Axis(0), num_bands + b)
            .assign(&downsample_block_center(&odd, f));
        channels
            .index_axis_mut(ndarray::Axis(0), 2 * num_bands + b)
            .assign(&downsample_block_center(&energy, f));
    }
    Ok(V1Response { channels })
}

/// Bilinear downsample by an integer factor, sampling each output cell at
/// the center of its source block.
pub(crate) fn downsample_block_center(src: &Array2<f64>, factor: usize) -> Array2<f64> {
    if factor == 1 {
        return src.clone();
    }
    let (h, w) = (src.nrows() / factor, src.ncols() / factor);
    let offset = (factor as f64 - 1.0) / 2.0;
    Array2::from_shape_fn((h, w), |(u, v)| {
        sample_bilinear(src, u as f64 * factor as f64 + offset, v as f64 * factor as f64 + offset)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::rotate_quarter;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(n: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_pixels(Array2::from_shape_fn((n, n), |_| rng.random::<f64>())).unwrap()
    }

    #[test]
    fn default_bank_has_forty_filters() {
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, 64, 64).unwrap();
        assert_eq!(bank.config().num_filters(), 40);
        assert_eq!(bank.config().num_channels(), 60);
        assert_eq!(bank.bands.len(), 20);
    }

    #[test]
    fn too_small_input_is_rejected() {
        let cfg = SteerableConfig::default();
        assert!(build_filter_bank(cfg, 16, 16).is_err());
        assert!(build_filter_bank(cfg, 64, 16).is_err());
    }

    #[test]
    fn quadrature_pair_magnitudes_match() {
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, 32, 32).unwrap();
        for s in 0..cfg.num_scales {
            for o in 0..cfg.num_orientations {
                let even = bank.even_magnitude(s, o);
                let odd = bank.odd_magnitude(s, o);
                for (a, b) in even.iter().zip(odd.iter()) {
                    assert!((a - b).abs() < 1e-10, "band ({s},{o}): {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn grating_response_is_maximal_at_matching_band() {
        let n = 64;
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, n, n).unwrap();
        // Scale 1 centers at pi/4, which is bin 8 of a 64-point transform;
        // orientation 0 means the wave vector points along x.
        let omega = cfg.center_frequency(1);
        let img = Image::from_pixels(Array2::from_shape_fn((n, n), |(_, x)| {
            0.5 + 0.4 * (omega * x as f64).cos()
        }))
        .unwrap();
        let responses = bank.band_responses(&img).unwrap();
        let energies: Vec<f64> = responses
            .iter()
            .map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .collect();
        let best = energies
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(best, cfg.band_index(1, 0), "energies: {energies:?}");
    }

    #[test]
    fn zero_image_gives_zero_channels() {
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, 32, 32).unwrap();
        let img = Image::constant(32, 32, 0.0).unwrap();
        let out = v1_forward(&img, &bank).unwrap();
        assert!(out.channels.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn channels_are_nonnegative() {
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, 32, 32).unwrap();
        let out = v1_forward(&random_image(32, 7), &bank).unwrap();
        assert!(out.channels.iter().all(|&v| v >= 0.0));
    }

    // Energy channels must equal the resampled magnitude of the raw complex
    // band response, recomputed here from the unrectified responses.
    #[test]
    fn energy_channel_matches_band_magnitude() {
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, 32, 32).unwrap();
        let img = random_image(32, 11);
        let out = v1_forward(&img, &bank).unwrap();
        let raw = bank.band_responses(&img).unwrap();
        for s in 0..cfg.num_scales {
            for o in 0..cfg.num_orientations {
                let b = cfg.band_index(s, o);
                let mag = raw[b].mapv(|v| (v.re * v.re + v.im * v.im).sqrt());
                let expected = downsample_block_center(&mag, cfg.grid_factor);
                let actual = out
                    .channels
                    .index_axis(ndarray::Axis(0), cfg.energy_channel(s, o));
                for (a, e) in actual.iter().zip(expected.iter()) {
                    assert!((a - e).abs() <= 1e-9 * e.abs().max(1e-12));
                }
            }
        }
    }

    // A full-field grating at a band's preferred frequency drives the energy
    // channel nearly uniformly: quadrature energy cancels the phase.
    #[test]
    fn grating_energy_channel_is_flat() {
        let n = 64;
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, n, n).unwrap();
        let omega = cfg.center_frequency(1);
        let img = Image::from_pixels(Array2::from_shape_fn((n, n), |(_, x)| {
            0.5 + 0.4 * (omega * x as f64 + 0.7).cos()
        }))
        .unwrap();
        let out = v1_forward(&img, &bank).unwrap();
        let ch = out
            .channels
            .index_axis(ndarray::Axis(0), cfg.energy_channel(1, 0));
        // Central half of the map.
        let (h, w) = (ch.nrows(), ch.ncols());
        let central = ch.slice(ndarray::s![h / 4..3 * h / 4, w / 4..3 * w / 4]);
        let mean = central.mean().unwrap();
        let var = central.mapv(|v| (v - mean).powi(2)).mean().unwrap();
        let cv = var.sqrt() / mean;
        assert!(cv < 0.05, "coefficient of variation {cv}");
    }

    // A 90-degree rotation maps band theta onto band theta+90 of the rotated
    // image. Even and energy channels transfer directly. The odd member's
    // polarity is only defined modulo 180 degrees of orientation, so for half
    // the orientation pairs the analytic response arrives conjugated; the raw
    // band check below accounts for that.
    #[test]
    fn rotating_the_image_permutes_orientation_bands() {
        let n = 32;
        let cfg = SteerableConfig::default();
        let bank = build_filter_bank(cfg, n, n).unwrap();
        let img = random_image(n, 23);
        let base = v1_forward(&img, &bank).unwrap();
        let rotated_img = rotate_quarter(&img, 1);
        let rotated = v1_forward(&rotated_img, &bank).unwrap();

        let f = cfg.grid_factor;
        let margin = 7usize.div_ceil(f);
        let m = n / f;
        for s in 0..cfg.num_scales {
            for o in 0..cfg.num_orientations {
                let o_rot = (o + 2) % cfg.num_orientations;
                for kind in [
                    (cfg.even_channel(s, o), cfg.even_channel(s, o_rot)),
                    (cfg.energy_channel(s, o), cfg.energy_channel(s, o_rot)),
                ] {
                    let expect = base.channels.index_axis(ndarray::Axis(0), kind.0);
                    // rot90 of the response map, same convention as the image.
                    let expect =
                        Array2::from_shape_fn((m, m), |(i, j)| expect[[j, m - 1 - i]]);
                    let got = rotated.channels.index_axis(ndarray::Axis(0), kind.1);
                    for i in margin..m - margin {
                        for j in margin..m - margin {
                            assert!(
                                (expect[[i, j]] - got[[i, j]]).abs() < 1e-6,
                                "band ({s},{o}) at ({i},{j}): {} vs {}",
                                expect[[i, j]],
                                got[[i, j]]
                            );
                        }
                    }
                }
            }
        }

        // Raw analytic responses, with the conjugation bookkeeping: under a
        // counterclockwise quarter turn, orientations below 90 degrees land
        // on their mirror half-plane.
        let raw_base = bank.band_responses(&img).unwrap();
        let raw_rot = bank.band_responses(&rotated_img).unwrap();
        for s in 0..cfg.num_scales {
            for o in 0..cfg.num_orientations {
                let o_rot = (o + 2) % cfg.num_orientations;
                let conjugated = o_rot < cfg.num_orientations / 2;
                let expect = &raw_base[cfg.band_index(s, o)];
                let got = &raw_rot[cfg.band_index(s, o_rot)];
                for i in 0..n {
                    for j in 0..n {
                        let e = expect[[j, n - 1 - i]];
                        let e = if conjugated { e.conj() } else { e };
                        assert!(
                            (e - got[[i, j]]).norm() < 1e-9,
                            "raw band ({s},{o}) at ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    // Decimating a band-limited image by two shifts content one scale down.
    #[test]
    fn decimation_shifts_band_energies_by_one_scale() {
        let n = 128;
        let cfg = SteerableConfig::default();
        // Band-limited random image: zero outside radius pi/2.
        let mut spec = Array2::from_elem((n, n), Complex64::default());
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for ky in 0..n {
            for kx in 0..n {
                let r = bin_frequency(ky, n).hypot(bin_frequency(kx, n));
                if r > 0.0 && r < 0.95 * PI / 2.0 {
                    spec[[ky, kx]] =
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                }
            }
        }
        // Hermitian symmetrization so the image is real.
        let sym = Array2::from_shape_fn((n, n), |(ky, kx)| {
            0.5 * (spec[[ky, kx]] + spec[[(n - ky) % n, (n - kx) % n]].conj())
        });
        let img = crate::fft::ifft2(&sym).mapv(|v| v.re);
        let image = Image::from_pixels(img.clone()).unwrap();
        let half = Image::from_pixels(Array2::from_shape_fn((n / 2, n / 2), |(y, x)| {
            img[[2 * y, 2 * x]]
        }))
        .unwrap();

        let bank_full = build_filter_bank(cfg, n, n).unwrap();
        let bank_half = build_filter_bank(cfg, n / 2, n / 2).unwrap();
        let full = bank_full.band_responses(&image).unwrap();
        let small = bank_half.band_responses(&half).unwrap();

        for s in 0..cfg.num_scales - 1 {
            for o in 0..cfg.num_orientations {
                let orig = &full[cfg.band_index(s + 1, o)];
                let dec = &small[cfg.band_index(s, o)];
                let e_orig = orig.iter().map(|v| v.norm_sqr()).sum::<f64>() / orig.len() as f64;
                let e_dec = dec.iter().map(|v| v.norm_sqr()).sum::<f64>() / dec.len() as f64;
                let rel = (e_dec - e_orig).abs() / e_orig;
                assert!(rel < 0.05, "scale {s} orient {o}: relative error {rel}");
            }
        }
    }
}
