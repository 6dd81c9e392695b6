//! Grayscale images: loading, saving, and resolution-preserving geometry.
//!
//! Pixels are `f64` luminance values mapped to `[0, 1]` at load time. PGM
//! (P2/P5) and PNG files are read; output is 16-bit binary PGM (P5). RGB
//! input is converted with the 0.299 / 0.587 / 0.114 luminance weights.

use crate::error::{Error, Result};
use ndarray::Array2;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Single-channel raster with row-major `f64` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pixels: Array2<f64>,
}

impl Image {
    /// Wraps a pixel array, requiring nonzero dimensions and finite values.
    pub fn from_pixels(pixels: Array2<f64>) -> Result<Self> {
        if pixels.nrows() == 0 || pixels.ncols() == 0 {
            return Err(Error::invalid("image must have nonzero dimensions"));
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("image contains non-finite pixel values"));
        }
        Ok(Image { pixels })
    }

    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        Image::from_pixels(Array2::from_elem((height, width), value))
    }

    pub fn height(&self) -> usize {
        self.pixels.nrows()
    }

    pub fn width(&self) -> usize {
        self.pixels.ncols()
    }

    pub fn pixels(&self) -> &Array2<f64> {
        &self.pixels
    }

    pub fn into_pixels(self) -> Array2<f64> {
        self.pixels
    }

    pub fn mean(&self) -> f64 {
        self.pixels.mean().unwrap_or(0.0)
    }
}

// ---------------------------------------------------------------------------
// Loading and saving
// ---------------------------------------------------------------------------

/// Loads a PGM (P2/P5) or PNG file as a grayscale image in `[0, 1]`.
pub fn load_grayscale(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        parse_pgm(&bytes, path)
    } else if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        parse_png(&bytes, path)
    } else {
        Err(Error::format(path, "unsupported image format (expected PGM or PNG)"))
    }
}

/// Writes a 16-bit binary PGM (P5, maxval 65535, big-endian samples).
/// Values are clamped to `[0, 1]` before quantization.
pub fn save_pgm16(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (h, w) = (image.height(), image.width());
    let mut out = Vec::with_capacity(32 + 2 * h * w);
    write!(out, "P5\n{} {}\n65535\n", w, h).expect("in-memory write");
    for v in image.pixels().iter() {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        out.extend_from_slice(&q.to_be_bytes());
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn parse_pgm(bytes: &[u8], path: &Path) -> Result<Image> {
    let binary = bytes.starts_with(b"P5");
    let mut pos = 2;
    let mut header = [0usize; 3]; // width, height, maxval
    for slot in header.iter_mut() {
        *slot = next_pgm_int(bytes, &mut pos)
            .ok_or_else(|| Error::format(path, "truncated PGM header"))?;
    }
    let (w, h, maxval) = (header[0], header[1], header[2]);
    if w == 0 || h == 0 {
        return Err(Error::format(path, "zero-dimension image"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(path, format!("unsupported PGM maxval {maxval}")));
    }

    let mut values = Vec::with_capacity(h * w);
    if binary {
        // Exactly one whitespace byte separates the header from the samples.
        pos += 1;
        let wide = maxval > 255;
        let sample_len = if wide { 2 } else { 1 };
        let needed = h * w * sample_len;
        if bytes.len() < pos + needed {
            return Err(Error::format(path, "truncated PGM pixel data"));
        }
        for i in 0..h * w {
            let raw = if wide {
                u16::from_be_bytes([bytes[pos + 2 * i], bytes[pos + 2 * i + 1]]) as usize
            } else {
                bytes[pos + i] as usize
            };
            values.push(raw);
        }
    } else {
        for _ in 0..h * w {
            let v = next_pgm_int(bytes, &mut pos)
                .ok_or_else(|| Error::format(path, "truncated PGM pixel data"))?;
            values.push(v);
        }
    }
    if values.iter().any(|&v| v > maxval) {
        return Err(Error::format(path, "PGM sample exceeds maxval"));
    }
    let scale = 1.0 / maxval as f64;
    let pixels = Array2::from_shape_vec((h, w), values.iter().map(|&v| v as f64 * scale).collect())
        .expect("dimensions checked");
    Image::from_pixels(pixels)
}

/// Reads the next ASCII integer, skipping whitespace and `#` comments.
fn next_pgm_int(bytes: &[u8], pos: &mut usize) -> Option<usize> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
}

fn parse_png(bytes: &[u8], path: &Path) -> Result<Image> {
    use image::DynamicImage;

    let decoded = image::load_from_memory(bytes)
        .map_err(|e| Error::format(path, format!("PNG decode failed: {e}")))?;
    if decoded.width() == 0 || decoded.height() == 0 {
        return Err(Error::format(path, "zero-dimension image"));
    }
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);

    let luma = |r: f64, g: f64, b: f64| 0.299 * r + 0.587 * g + 0.114 * b;
    let mut pixels = Array2::zeros((h, w));
    match decoded {
        DynamicImage::ImageLuma8(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                pixels[[y as usize, x as usize]] = p.0[0] as f64 / 255.0;
            }
        }
        DynamicImage::ImageLumaA8(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                pixels[[y as usize, x as usize]] = p.0[0] as f64 / 255.0;
            }
        }
        DynamicImage::ImageLuma16(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                pixels[[y as usize, x as usize]] = p.0[0] as f64 / 65535.0;
            }
        }
        DynamicImage::ImageLumaA16(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                pixels[[y as usize, x as usize]] = p.0[0] as f64 / 65535.0;
            }
        }
        DynamicImage::ImageRgb8(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                let [r, g, b] = p.0;
                pixels[[y as usize, x as usize]] =
                    luma(r as f64, g as f64, b as f64) / 255.0;
            }
        }
        DynamicImage::ImageRgba8(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                let [r, g, b, _] = p.0;
                pixels[[y as usize, x as usize]] =
                    luma(r as f64, g as f64, b as f64) / 255.0;
            }
        }
        DynamicImage::ImageRgb16(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                let [r, g, b] = p.0;
                pixels[[y as usize, x as usize]] =
                    luma(r as f64, g as f64, b as f64) / 65535.0;
            }
        }
        DynamicImage::ImageRgba16(img) => {
            for (x, y, p) in img.enumerate_pixels() {
                let [r, g, b, _] = p.0;
                pixels[[y as usize, x as usize]] =
                    luma(r as f64, g as f64, b as f64) / 65535.0;
            }
        }
        other => {
            return Err(Error::format(
                path,
                format!("unsupported PNG pixel format {:?}", other.color()),
            ))
        }
    }
    Image::from_pixels(pixels)
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Rotates by `k * 90` degrees counterclockwise. `k` is taken modulo 4;
/// odd `k` swaps the dimensions.
pub fn rotate_quarter(image: &Image, k: u32) -> Image {
    let k = k % 4;
    let src = image.pixels();
    let (h, w) = (src.nrows(), src.ncols());
    let pixels = match k {
        0 => src.clone(),
        1 => Array2::from_shape_fn((w, h), |(i, j)| src[[j, w - 1 - i]]),
        2 => Array2::from_shape_fn((h, w), |(i, j)| src[[h - 1 - i, w - 1 - j]]),
        3 => Array2::from_shape_fn((w, h), |(i, j)| src[[h - 1 - j, i]]),
        _ => unreachable!(),
    };
    Image { pixels }
}

/// Bilinear resize with pixel-center alignment and edge clamping.
pub fn resize_bilinear(image: &Image, out_height: usize, out_width: usize) -> Result<Image> {
    if out_height == 0 || out_width == 0 {
        return Err(Error::invalid("resize target must have nonzero dimensions"));
    }
    let src = image.pixels();
    let (h, w) = (src.nrows(), src.ncols());
    let sy = h as f64 / out_height as f64;
    let sx = w as f64 / out_width as f64;
    let pixels = Array2::from_shape_fn((out_height, out_width), |(i, j)| {
        let y = (i as f64 + 0.5) * sy - 0.5;
        let x = (j as f64 + 0.5) * sx - 0.5;
        sample_bilinear(src, y, x)
    });
    Ok(Image { pixels })
}

/// Bilinear lookup at a fractional position, clamping to the image border.
pub(crate) fn sample_bilinear(src: &Array2<f64>, y: f64, x: f64) -> f64 {
    let (h, w) = (src.nrows(), src.ncols());
    let y = y.clamp(0.0, (h - 1) as f64);
    let x = x.clamp(0.0, (w - 1) as f64);
    let y0 = y.floor() as usize;
    let x0 = x.floor() as usize;
    let y1 = (y0 + 1).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let fy = y - y0 as f64;
    let fx = x - x0 as f64;
    src[[y0, x0]] * (1.0 - fy) * (1.0 - fx)
        + src[[y0, x1]] * (1.0 - fy) * fx
        + src[[y1, x0]] * fy * (1.0 - fx)
        + src[[y1, x1]] * fy * fx
}

/// Central crop to `out_height x out_width`.
pub fn center_crop(image: &Image, out_height: usize, out_width: usize) -> Result<Image> {
    let (h, w) = (image.height(), image.width());
    if out_height == 0 || out_width == 0 || out_height > h || out_width > w {
        return Err(Error::invalid(format!(
            "crop {out_height}x{out_width} does not fit in {h}x{w}"
        )));
    }
    let y0 = (h - out_height) / 2;
    let x0 = (w - out_width) / 2;
    let pixels = image
        .pixels()
        .slice(ndarray::s![y0..y0 + out_height, x0..x0 + out_width])
        .to_owned();
    Ok(Image { pixels })
}

// ---------------------------------------------------------------------------
// Raised cosine aperture
// ---------------------------------------------------------------------------

/// Window weight at radial distance `r` for an aperture of radius `radius`.
/// Flat (1.0) inside 75% of the radius, half-cosine roll-off to zero across
/// the outer 25%.
pub fn raised_cosine_weight(r: f64, radius: f64) -> f64 {
    let flat = 0.75 * radius;
    if r <= flat {
        1.0
    } else if r >= radius {
        0.0
    } else {
        let t = (r - flat) / (radius - flat);
        0.5 * (1.0 + (std::f64::consts::PI * t).cos())
    }
}

/// Multiplies the image by a radially symmetric raised cosine window whose
/// full diameter is `diameter_fraction * min(height, width)`.
pub fn raised_cosine_aperture(image: &Image, diameter_fraction: f64) -> Result<Image> {
    if !(diameter_fraction > 0.0 && diameter_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "diameter_fraction must be in (0, 1], got {diameter_fraction}"
        )));
    }
    let (h, w) = (image.height(), image.width());
    let radius = diameter_fraction * h.min(w) as f64 / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let cx = (w as f64 - 1.0) / 2.0;
    let src = image.pixels();
    let pixels = Array2::from_shape_fn((h, w), |(i, j)| {
        let r = ((i as f64 - cy).powi(2) + (j as f64 - cx).powi(2)).sqrt();
        src[[i, j]] * raised_cosine_weight(r, radius)
    });
    Ok(Image { pixels })
}
