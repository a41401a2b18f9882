//! Mean-matrix block matching.
//!
//! Both frames are reduced to a matrix of 4×4 block means. For each block of
//! the current frame, its single mean is compared against every reference
//! mean inside a 9×9 window (clipped at the matrix border) centred on the
//! co-located block. The position with the smallest absolute difference is
//! the match; its offset in block units times the block size is the motion
//! vector in pixels.
//!
//! Vectors point from the current block to its source in the reference
//! frame: `reference origin = current origin + (dx, dy)`.
//!
//! [`full_search`] is the classical exhaustive pixel-domain matcher, kept as a
//! quality baseline.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::media::{Frame, GrayImage};
use crate::par;

pub const BLOCK_SIZE: usize = 4;
/// In block units: the window spans `2·4 + 1 = 9` means per side.
pub const WINDOW_RADIUS: usize = 4;
/// Largest pixel displacement the default configuration can emit.
pub const MAX_DISPLACEMENT: i32 = (BLOCK_SIZE * WINDOW_RADIUS) as i32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub block_size: usize,
    /// Window half-width in block units.
    pub window_radius: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            block_size: BLOCK_SIZE,
            window_radius: WINDOW_RADIUS,
        }
    }
}

impl SearchConfig {
    fn check(&self, width: usize, height: usize) -> Result<()> {
        let b = self.block_size;
        if b == 0 || !width.is_multiple_of(b) || !height.is_multiple_of(b) {
            return Err(Error::ShapeMismatch(format!(
                "block size {b} does not tile a {width}x{height} frame"
            )));
        }
        Ok(())
    }
}

/// Per-block mean luminance, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl MeanMatrix {
    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} mean matrix with {} values",
                values.len()
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Means of the 4×4 blocks of `frame`.
pub fn block_means(frame: &Frame) -> MeanMatrix {
    means_of(frame, BLOCK_SIZE)
}

fn means_of(image: &GrayImage, block: usize) -> MeanMatrix {
    let rows = image.height() / block;
    let cols = image.width() / block;
    let mut sums = vec![0u32; rows * cols];
    for y in 0..rows * block {
        let row = &image.pixels()[y * image.width()..][..cols * block];
        let out = &mut sums[(y / block) * cols..][..cols];
        for (c, chunk) in row.chunks_exact(block).enumerate() {
            out[c] += chunk.iter().map(|&p| u32::from(p)).sum::<u32>();
        }
    }
    // Integer sums divided once, so equal sums always give bit-equal means.
    let n = (block * block) as f64;
    let values = sums.into_iter().map(|s| f64::from(s) / n).collect();
    MeanMatrix { rows, cols, values }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }
}

/// One vector per block of the current frame, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotionField {
    block_size: usize,
    rows: usize,
    cols: usize,
    vectors: Vec<MotionVector>,
}

impl MotionField {
    pub fn new(
        block_size: usize,
        rows: usize,
        cols: usize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self> {
        if block_size == 0 || vectors.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} field with {} vectors",
                vectors.len()
            )));
        }
        Ok(Self {
            block_size,
            rows,
            cols,
            vectors,
        })
    }

    pub fn zero(block_size: usize, rows: usize, cols: usize) -> Self {
        Self {
            block_size,
            rows,
            cols,
            vectors: vec![MotionVector::ZERO; rows * cols],
        }
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> MotionVector {
        self.vectors[row * self.cols + col]
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().all(|v| *v == MotionVector::ZERO)
    }

    /// `block_row,block_col,dx,dy` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block_row,block_col,dx,dy\n");
        for (i, v) in self.vectors.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", i / self.cols, i % self.cols, v.dx, v.dy);
        }
        out
    }
}

/// Best match for one block mean inside the clipped window around `center`
/// (`(row, col)` in block units).
///
/// Ties go to the candidate nearest the centre (Chebyshev distance), then
/// to the first in window raster order.
pub fn search_block(
    current_mean: f64,
    reference: &MeanMatrix,
    center: (usize, usize),
    cfg: &SearchConfig,
) -> MotionVector {
    let (cr, cc) = center;
    assert!(
        cr < reference.rows && cc < reference.cols,
        "search centre ({cr}, {cc}) outside {}x{} mean matrix",
        reference.rows,
        reference.cols
    );
    let rad = cfg.window_radius;
    let rows = cr.saturating_sub(rad)..=(cr + rad).min(reference.rows - 1);
    let cols = cc.saturating_sub(rad)..=(cc + rad).min(reference.cols - 1);

    let mut best = (f64::INFINITY, usize::MAX, cr, cc);
    for r in rows {
        for c in cols.clone() {
            let diff = (current_mean - reference.get(r, c)).abs();
            let dist = r.abs_diff(cr).max(c.abs_diff(cc));
            if diff < best.0 || (diff == best.0 && dist < best.1) {
                best = (diff, dist, r, c);
            }
        }
    }
    let b = cfg.block_size as i32;
    MotionVector {
        dx: (best.3 as i32 - cc as i32) * b,
        dy: (best.2 as i32 - cr as i32) * b,
    }
}

fn check_pair(current: &GrayImage, reference: &GrayImage) -> Result<()> {
    if !current.same_dims(reference) {
        return Err(Error::DimensionMismatch(format!(
            "current frame is {}x{}, reference is {}x{}",
            current.width(),
            current.height(),
            reference.width(),
            reference.height()
        )));
    }
    Ok(())
}

pub fn estimate_motion(
    current: &Frame,
    reference: &Frame,
    cfg: &SearchConfig,
) -> Result<MotionField> {
    check_pair(current, reference)?;
    cfg.check(current.width(), current.height())?;
    let cur = means_of(current, cfg.block_size);
    let refm = means_of(reference, cfg.block_size);
    let cols = cur.cols;
    let vectors = par::map(cur.rows * cols, |i| {
        let (r, c) = (i / cols, i % cols);
        search_block(cur.get(r, c), &refm, (r, c), cfg)
    });
    MotionField::new(cfg.block_size, cur.rows, cols, vectors)
}

/// Builds the prediction of the current frame by copying, for each block,
/// the reference block the vector points at.
pub fn compensate(reference: &Frame, field: &MotionField) -> Result<Frame> {
    let b = field.block_size;
    let (w, h) = (reference.width(), reference.height());
    if field.rows * b != h || field.cols * b != w {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} field of {b}px blocks does not cover a {w}x{h} frame",
            field.rows, field.cols
        )));
    }
    let mut out = reference.clone();
    let src = reference.pixels();
    let dst = out.pixels_mut();
    for row in 0..field.rows {
        for col in 0..field.cols {
            let v = field.get(row, col);
            let (x, y) = (col * b, row * b);
            let sx = x as i64 + i64::from(v.dx);
            let sy = y as i64 + i64::from(v.dy);
            if sx < 0 || sy < 0 || sx as usize + b > w || sy as usize + b > h {
                return Err(Error::VectorOutOfBounds {
                    row,
                    col,
                    dx: v.dx,
                    dy: v.dy,
                });
            }
            let (sx, sy) = (sx as usize, sy as usize);
            for j in 0..b {
                dst[(y + j) * w + x..][..b].copy_from_slice(&src[(sy + j) * w + sx..][..b]);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cost {
    /// Mean absolute difference.
    Mad,
    /// Mean squared error.
    Mse,
}

fn check_blocks(a: &[u8], b: &[u8]) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "blocks of {} and {} pixels",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `(1/N²) Σ |a − b|` over two equally shaped blocks given as flat slices.
pub fn mad_cost(a: &[u8], b: &[u8]) -> Result<f64> {
    check_blocks(a, b)?;
    let sum: u64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| u64::from(x.abs_diff(y)))
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// `(1/N²) Σ (a − b)²` over two equally shaped blocks given as flat slices.
pub fn mse_cost(a: &[u8], b: &[u8]) -> Result<f64> {
    check_blocks(a, b)?;
    let sum: u64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| u64::from(x.abs_diff(y)).pow(2))
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// Unnormalised block cost; all candidates share the `1/N²` factor.
#[allow(clippy::too_many_arguments)]
fn raw_cost(
    cur: &GrayImage,
    refi: &GrayImage,
    (cx, cy): (usize, usize),
    (rx, ry): (usize, usize),
    block: usize,
    cost: Cost,
) -> u64 {
    let w = cur.width();
    let mut sum = 0u64;
    for j in 0..block {
        let a = &cur.pixels()[(cy + j) * w + cx..][..block];
        let b = &refi.pixels()[(ry + j) * w + rx..][..block];
        for (&p, &q) in a.iter().zip(b) {
            let d = u64::from(p.abs_diff(q));
            sum += match cost {
                Cost::Mad => d,
                Cost::Mse => d * d,
            };
        }
    }
    sum
}

/// Exhaustive pixel-granular search over `[−radius, radius]²`, restricted to
/// candidates that lie fully inside the reference frame. Same tie rules as
/// [`search_block`].
pub fn full_search(
    current: &Frame,
    reference: &Frame,
    block_size: usize,
    radius: usize,
    cost: Cost,
) -> Result<MotionField> {
    check_pair(current, reference)?;
    let (w, h) = (current.width(), current.height());
    SearchConfig {
        block_size,
        window_radius: 0,
    }
    .check(w, h)?;
    let rows = h / block_size;
    let cols = w / block_size;
    let rad = radius as i64;
    let vectors = par::map(rows * cols, |i| {
        let (x, y) = ((i % cols) * block_size, (i / cols) * block_size);
        let mut best = (u64::MAX, u64::MAX, MotionVector::ZERO);
        for dy in -rad..=rad {
            let ry = y as i64 + dy;
            if ry < 0 || ry as usize + block_size > h {
                continue;
            }
            for dx in -rad..=rad {
                let rx = x as i64 + dx;
                if rx < 0 || rx as usize + block_size > w {
                    continue;
                }
                let c = raw_cost(
                    current,
                    reference,
                    (x, y),
                    (rx as usize, ry as usize),
                    block_size,
                    cost,
                );
                let dist = dx.unsigned_abs().max(dy.unsigned_abs());
                if c < best.0 || (c == best.0 && dist < best.1) {
                    best = (c, dist, MotionVector::new(dx as i32, dy as i32));
                }
            }
        }
        best.2
    });
    MotionField::new(block_size, rows, cols, vectors)
}
