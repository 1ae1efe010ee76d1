//! Sampling of real 2-parameter slices of `P^2`, escape-time fields, and
//! byte-deterministic image/CSV output.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{escape_count, tau, ExtendedComplex};
use crate::io::fmt_f64;
use crate::linalg::cx;
use crate::pencil::ProjPoint;

/// Pixels per parallel work unit (a 64x64 tile).
const TILE: usize = 64 * 64;

/// Sentinel count marking a Julia (non-escaping) pixel.
pub const SENTINEL: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("resolution must be at least 1x1")]
    EmptyResolution,
    #[error("range must be finite with min < max")]
    BadRange,
    #[error("point/value counts differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which affine chart of `P^2` the slice lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `z0 = 1`, the two parameters sweep `z1` and `z2`.
    Z0,
    /// `z1 = 1`.
    Z1,
    /// `z2 = 1`.
    Z2,
}

/// A `W x H` grid of points on an affine chart: the two varying coordinates
/// are `offset + t` for a real parameter `t` swept across the range, sampled
/// at pixel centers.
#[derive(Debug, Clone)]
pub struct ChartSlice {
    pub chart: Chart,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Complex offset added to the first varying coordinate.
    pub x_offset: Complex64,
    /// Complex offset added to the second varying coordinate.
    pub y_offset: Complex64,
    pub width: usize,
    pub height: usize,
}

impl ChartSlice {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.width == 0 || self.height == 0 {
            return Err(RenderError::EmptyResolution);
        }
        for (lo, hi) in [self.x_range, self.y_range] {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(RenderError::BadRange);
            }
        }
        Ok(())
    }
}

/// Row-major pixel-center sampling: pixel `(i, j)` maps to
/// `(xmin + (i + 1/2) dx, ymin + (j + 1/2) dy)`. Pixel centers never land on
/// the coordinate axes of a symmetric grid, which keeps `z1 z2 != 0`.
pub fn make_slice(s: &ChartSlice) -> Result<Vec<ProjPoint>, RenderError> {
    s.validate()?;
    let dx = (s.x_range.1 - s.x_range.0) / s.width as f64;
    let dy = (s.y_range.1 - s.y_range.0) / s.height as f64;
    let mut out = Vec::with_capacity(s.width * s.height);
    for j in 0..s.height {
        let y = s.y_range.0 + (j as f64 + 0.5) * dy;
        for i in 0..s.width {
            let x = s.x_range.0 + (i as f64 + 0.5) * dx;
            let a = s.x_offset + x;
            let b = s.y_offset + y;
            let one = cx(1.0, 0.0);
            let coords = match s.chart {
                Chart::Z0 => vec![one, a, b],
                Chart::Z1 => vec![a, one, b],
                Chart::Z2 => vec![a, b, one],
            };
            out.push(ProjPoint::new(coords).expect("chart coordinate is 1"));
        }
    }
    Ok(out)
}

/// Escape-time counts over a pixel grid; `SENTINEL` marks bounded (Julia)
/// orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeField {
    pub width: usize,
    pub height: usize,
    pub maxiter: u32,
    /// Row-major counts, `SENTINEL` for Julia pixels.
    pub counts: Vec<u32>,
}

/// Escape-time field over the given points. Work is split into 64x64-pixel
/// tiles; each tile writes a disjoint region, so the result is independent of
/// the thread schedule. `tau = inf` points get count 0.
pub fn escape_field(
    points: &[ProjPoint],
    width: usize,
    height: usize,
    maxiter: u32,
    radius: f64,
) -> Result<EscapeField, RenderError> {
    if width * height != points.len() {
        return Err(RenderError::LengthMismatch(width * height, points.len()));
    }
    let tiles: Vec<Vec<u32>> = points
        .par_chunks(TILE)
        .map(|chunk| {
            chunk
                .iter()
                .map(|z| escape_count(tau(z), maxiter, radius).unwrap_or(SENTINEL))
                .collect()
        })
        .collect();
    let mut counts = Vec::with_capacity(points.len());
    for tile in tiles {
        counts.extend(tile);
    }
    Ok(EscapeField {
        width,
        height,
        maxiter,
        counts,
    })
}

/// Binary portable pixmap bytes: sentinel pixels black, escaped pixels the
/// grayscale level `round(255 * min(1, n / maxiter))`.
pub fn image_bytes(f: &EscapeField) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 * f.counts.len() + 32);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", f.width, f.height).as_bytes());
    for &n in &f.counts {
        let level = if n == SENTINEL {
            0u8
        } else {
            let frac = (n as f64 / f.maxiter as f64).min(1.0);
            (255.0 * frac).round() as u8
        };
        out.extend_from_slice(&[level, level, level]);
    }
    out
}

pub fn write_image(f: &EscapeField, path: &Path) -> Result<(), RenderError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&image_bytes(f))?;
    Ok(())
}

/// CSV text: homogeneous coordinates as re/im pairs, `tau` (or `inf`), and the
/// per-point value, all at 17 significant digits.
pub fn csv_string(points: &[ProjPoint], values: &[f64]) -> Result<String, RenderError> {
    if points.len() != values.len() {
        return Err(RenderError::LengthMismatch(points.len(), values.len()));
    }
    let mut out = String::new();
    out.push_str("z0_re,z0_im,z1_re,z1_im,z2_re,z2_im,tau_re,tau_im,value\n");
    for (z, &v) in points.iter().zip(values) {
        for c in z.coords() {
            out.push_str(&fmt_f64(c.re));
            out.push(',');
            out.push_str(&fmt_f64(c.im));
            out.push(',');
        }
        match tau(z) {
            ExtendedComplex::Finite(t) => {
                out.push_str(&fmt_f64(t.re));
                out.push(',');
                out.push_str(&fmt_f64(t.im));
            }
            ExtendedComplex::Infinity => out.push_str("inf,inf"),
        }
        out.push(',');
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(points: &[ProjPoint], values: &[f64], path: &Path) -> Result<(), RenderError> {
    let text = csv_string(points, values)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Escape counts as CSV values: sentinel becomes -1.
pub fn counts_as_values(f: &EscapeField) -> Vec<f64> {
    f.counts
        .iter()
        .map(|&n| if n == SENTINEL { -1.0 } else { n as f64 })
        .collect()
}
