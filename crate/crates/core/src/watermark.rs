//! Spatial-domain binary watermark: one horizontal pixel pair per 8×8 block.
//!
//! Watermark pixels are flattened row-major and grouped into consecutive
//! pairs. Pair `k` lands in cover block `k` (raster block order), at the
//! block's top-left pixel and its right neighbour. A white (255) watermark
//! pixel is written as intensity 20, a black (0) one as 10. Extraction
//! classifies each carrier against the midpoint 15.

use crate::error::{Error, Result};
use crate::media::{Frame, GrayImage, VideoSequence};

/// Carrier placement and intensity mapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbedLayout {
    pub cover_block: usize,
    pub pair_len: usize,
    pub mapped_high: u8,
    pub mapped_low: u8,
    pub decision_threshold: u8,
}

pub const LAYOUT: EmbedLayout = EmbedLayout {
    cover_block: 8,
    pair_len: 2,
    mapped_high: 20,
    mapped_low: 10,
    decision_threshold: 15,
};

pub const WHITE: u8 = 255;
pub const BLACK: u8 = 0;

/// Two-level (0 / 255) image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryWatermark(GrayImage);

impl BinaryWatermark {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::try_from(GrayImage::new(width, height, pixels)?)
    }

    pub fn image(&self) -> &GrayImage {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn pixels(&self) -> &[u8] {
        self.0.pixels()
    }

    /// Carrier pairs needed to hold this watermark.
    pub fn pair_count(&self) -> usize {
        pairs_needed(self.width(), self.height())
    }
}

impl TryFrom<GrayImage> for BinaryWatermark {
    type Error = Error;

    fn try_from(image: GrayImage) -> Result<Self> {
        if let Some(&p) = image.pixels().iter().find(|&&p| p != WHITE && p != BLACK) {
            return Err(Error::NotBinary(p));
        }
        Ok(Self(image))
    }
}

impl AsRef<GrayImage> for BinaryWatermark {
    fn as_ref(&self) -> &GrayImage {
        &self.0
    }
}

/// `pixel >= threshold` becomes 255, everything else 0.
pub fn binarize(image: &GrayImage, threshold: u8) -> BinaryWatermark {
    let pixels = image
        .pixels()
        .iter()
        .map(|&p| if p >= threshold { WHITE } else { BLACK })
        .collect();
    BinaryWatermark(GrayImage::new(image.width(), image.height(), pixels).expect("same dims"))
}

pub const DEFAULT_BINARIZE_THRESHOLD: u8 = 128;

/// Number of carrier pairs (one per 8×8 block) a frame of this size holds.
pub fn capacity(frame_width: usize, frame_height: usize) -> Result<usize> {
    let b = LAYOUT.cover_block;
    if !frame_width.is_multiple_of(b) || !frame_height.is_multiple_of(b) {
        return Err(Error::BadDimensions {
            width: frame_width,
            height: frame_height,
        });
    }
    Ok((frame_width / b) * (frame_height / b))
}

pub fn pairs_needed(wm_width: usize, wm_height: usize) -> usize {
    (wm_width * wm_height).div_ceil(LAYOUT.pair_len)
}

fn check_fits(frame: &Frame, wm_width: usize, wm_height: usize) -> Result<usize> {
    let available = capacity(frame.width(), frame.height())?;
    let needed = pairs_needed(wm_width, wm_height);
    if needed > available {
        return Err(Error::CapacityExceeded { needed, available });
    }
    Ok(needed)
}

/// Pixel coordinates of the carrier pair inside block `k`.
fn carrier_origin(frame_width: usize, k: usize) -> (usize, usize) {
    let b = LAYOUT.cover_block;
    let blocks_per_row = frame_width / b;
    ((k % blocks_per_row) * b, (k / blocks_per_row) * b)
}

fn map_level(p: u8) -> u8 {
    if p == WHITE {
        LAYOUT.mapped_high
    } else {
        LAYOUT.mapped_low
    }
}

fn classify(v: u8) -> u8 {
    if v >= LAYOUT.decision_threshold {
        WHITE
    } else {
        BLACK
    }
}

pub fn embed(cover: &Frame, wm: &BinaryWatermark) -> Result<Frame> {
    let needed = check_fits(cover, wm.width(), wm.height())?;
    let mut out = cover.clone();
    let bits = wm.pixels();
    for k in 0..needed {
        let (x, y) = carrier_origin(cover.width(), k);
        for j in 0..LAYOUT.pair_len {
            // An odd-length watermark is padded with one black pixel.
            let p = bits.get(k * LAYOUT.pair_len + j).copied().unwrap_or(BLACK);
            out.set(x + j, y, map_level(p));
        }
    }
    Ok(out)
}

pub fn extract(stego: &Frame, wm_width: usize, wm_height: usize) -> Result<BinaryWatermark> {
    if wm_width == 0 || wm_height == 0 {
        return Err(Error::DimensionMismatch(format!(
            "watermark must be non-empty, got {wm_width}x{wm_height}"
        )));
    }
    let needed = check_fits(stego, wm_width, wm_height)?;
    let total = wm_width * wm_height;
    let mut pixels = Vec::with_capacity(needed * LAYOUT.pair_len);
    for k in 0..needed {
        let (x, y) = carrier_origin(stego.width(), k);
        for j in 0..LAYOUT.pair_len {
            pixels.push(classify(stego.get(x + j, y)));
        }
    }
    pixels.truncate(total);
    BinaryWatermark::new(wm_width, wm_height, pixels)
}

/// Embeds the same watermark into every frame.
pub fn embed_sequence(video: &VideoSequence, wm: &BinaryWatermark) -> Result<VideoSequence> {
    let frames = video
        .frames()
        .iter()
        .map(|f| embed(f, wm))
        .collect::<Result<Vec<_>>>()?;
    let mut out = VideoSequence::new(frames)?;
    out.frame_rate = video.frame_rate;
    Ok(out)
}
