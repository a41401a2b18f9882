//! Grayscale frame model, PGM sequence I/O and synthetic test video.

mod pgm;
mod sequence;
mod synthetic;

use std::ops::Deref;

use crate::error::{Error, Result};

pub use pgm::{decode_pgm, load_pgm, save_pgm};
pub use sequence::{
    frame_file_name, load_sequence, save_sequence, sequence_paths, write_file_atomic,
};
pub use synthetic::{gen_synthetic, MAX_SYNTHETIC_SHIFT};

/// Frame edges must be multiples of this so both the 8×8 watermark grid and
/// the 4×4 motion grid tile exactly.
pub const FRAME_ALIGN: usize = 8;

/// 8-bit grayscale raster of arbitrary (non-zero) size, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    pub fn same_dims(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

impl AsRef<GrayImage> for GrayImage {
    fn as_ref(&self) -> &GrayImage {
        self
    }
}

/// A video frame: a [`GrayImage`] whose edges are multiples of 8.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame(GrayImage);

impl Frame {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::try_from(GrayImage::new(width, height, pixels)?)
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::try_from(GrayImage::filled(width, height, value)?)
    }

    pub fn from_fn(width: usize, height: usize, f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        Self::try_from(GrayImage::from_fn(width, height, f)?)
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [u8] {
        self.0.pixels_mut()
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.0.set(x, y, value)
    }

    pub fn image(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_image(self) -> GrayImage {
        self.0
    }
}

impl TryFrom<GrayImage> for Frame {
    type Error = Error;

    fn try_from(image: GrayImage) -> Result<Self> {
        if !image.width.is_multiple_of(FRAME_ALIGN) || !image.height.is_multiple_of(FRAME_ALIGN) {
            return Err(Error::BadDimensions {
                width: image.width,
                height: image.height,
            });
        }
        Ok(Frame(image))
    }
}

impl Deref for Frame {
    type Target = GrayImage;

    fn deref(&self) -> &GrayImage {
        &self.0
    }
}

impl AsRef<GrayImage> for Frame {
    fn as_ref(&self) -> &GrayImage {
        &self.0
    }
}

/// Nominal rate of the 20-frame, 4 second source clips.
pub const DEFAULT_FRAME_RATE: f64 = 5.0;

/// Ordered, dimension-homogeneous list of frames.
#[derive(Clone, Debug, PartialEq)]
pub struct VideoSequence {
    frames: Vec<Frame>,
    /// Informational only; nothing in the pipeline depends on it.
    pub frame_rate: f64,
}

impl VideoSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        let first = frames.first().ok_or(Error::EmptySequence)?;
        if let Some((k, f)) = frames.iter().enumerate().find(|(_, f)| !f.same_dims(first)) {
            return Err(Error::DimensionMismatch(format!(
                "frame {k} is {}x{}, frame 0 is {}x{}",
                f.width(),
                f.height(),
                first.width(),
                first.height()
            )));
        }
        Ok(Self {
            frames,
            frame_rate: DEFAULT_FRAME_RATE,
        })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// Always false; a sequence holds at least one frame.
    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }
}
