//! Browser bindings for the static demo page in `web/`.
//!
//! Three views: watermark embed/extract on one frame, mean-matrix motion
//! estimation on a translated pair, and the full transcode pipeline with
//! per-frame quality curves.

use s2f_core::codec::{self, EncodeOptions};
use s2f_core::media::gen_synthetic;
use s2f_core::metrics::{correlation, psnr, ssim, SsimParams};
use s2f_core::motion::{estimate_motion, full_search, Cost, MotionVector, SearchConfig};
use s2f_core::watermark::{self, BinaryWatermark};
use s2f_core::{Error, Frame, GrayImage};
use wasm_bindgen::prelude::*;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Watermark patterns selectable from the page.
fn pattern(kind: u32, width: usize, height: usize, seed: u64) -> Result<BinaryWatermark, Error> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let img = GrayImage::from_fn(width, height, |x, y| {
        let on = match kind {
            0 => (x / 4 + y / 4) % 2 == 0,
            1 => {
                let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
                let r = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                ((r / 4.0) as usize).is_multiple_of(2)
            }
            2 => (x + y) % 6 < 3,
            _ => {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state & 1 == 1
            }
        };
        if on {
            watermark::WHITE
        } else {
            watermark::BLACK
        }
    })?;
    BinaryWatermark::try_from(img)
}

/// Cover frame, stego frame and the watermark read back from it.
#[wasm_bindgen]
pub struct WatermarkView {
    size: usize,
    cover: Vec<u8>,
    stego: Vec<u8>,
    wm_width: usize,
    wm_height: usize,
    mark: Vec<u8>,
    recovered: Vec<u8>,
    changed: usize,
    correlation: f64,
    ssim: f64,
}

impl WatermarkView {
    pub fn build(
        size: usize,
        seed: u64,
        wm_width: usize,
        wm_height: usize,
        kind: u32,
    ) -> Result<Self, Error> {
        let cover = gen_synthetic(size, size, 1, (0, 0), seed)?
            .into_frames()
            .remove(0);
        let mark = pattern(kind, wm_width, wm_height, seed)?;
        let stego = watermark::embed(&cover, &mark)?;
        let recovered = watermark::extract(&stego, wm_width, wm_height)?;
        let changed = cover
            .pixels()
            .iter()
            .zip(stego.pixels())
            .filter(|(a, b)| a != b)
            .count();
        Ok(Self {
            size,
            correlation: correlation(&mark, &recovered).unwrap_or(f64::NAN),
            ssim: ssim(&mark, &recovered, &SsimParams::default())?,
            cover: cover.into_image().into_pixels(),
            stego: stego.into_image().into_pixels(),
            wm_width,
            wm_height,
            mark: mark.pixels().to_vec(),
            recovered: recovered.pixels().to_vec(),
            changed,
        })
    }
}

#[wasm_bindgen]
impl WatermarkView {
    #[wasm_bindgen(constructor)]
    pub fn new(
        size: u32,
        seed: u32,
        wm_width: u32,
        wm_height: u32,
        kind: u32,
    ) -> Result<WatermarkView, JsError> {
        Self::build(
            size as usize,
            u64::from(seed),
            wm_width as usize,
            wm_height as usize,
            kind,
        )
        .map_err(js)
    }

    pub fn size(&self) -> u32 {
        self.size as u32
    }

    pub fn cover(&self) -> Vec<u8> {
        self.cover.clone()
    }

    pub fn stego(&self) -> Vec<u8> {
        self.stego.clone()
    }

    /// `|stego − cover|` stretched to full range for display.
    pub fn difference(&self) -> Vec<u8> {
        self.cover
            .iter()
            .zip(&self.stego)
            .map(|(a, b)| if a == b { 0 } else { 255 })
            .collect()
    }

    pub fn wm_width(&self) -> u32 {
        self.wm_width as u32
    }

    pub fn wm_height(&self) -> u32 {
        self.wm_height as u32
    }

    pub fn mark(&self) -> Vec<u8> {
        self.mark.clone()
    }

    pub fn recovered(&self) -> Vec<u8> {
        self.recovered.clone()
    }

    pub fn changed_pixels(&self) -> u32 {
        self.changed as u32
    }

    pub fn correlation(&self) -> f64 {
        self.correlation
    }

    pub fn ssim(&self) -> f64 {
        self.ssim
    }
}

/// A translated frame pair and the motion field estimated between them.
#[wasm_bindgen]
pub struct MotionView {
    size: usize,
    reference: Vec<u8>,
    current: Vec<u8>,
    rows: usize,
    cols: usize,
    vectors: Vec<i32>,
    exact: usize,
    psnr_mean: f64,
    psnr_full: f64,
}

impl MotionView {
    pub fn build(size: usize, dx: i32, dy: i32, seed: u64) -> Result<Self, Error> {
        let v = gen_synthetic(size, size, 2, (dx, dy), seed)?;
        let (reference, current) = (&v.frames()[0], &v.frames()[1]);
        let field = estimate_motion(current, reference, &SearchConfig::default())?;
        let predicted = s2f_core::motion::compensate(reference, &field)?;
        let full = full_search(current, reference, 4, 16, Cost::Mad)?;
        let full_pred = s2f_core::motion::compensate(reference, &full)?;
        let truth = MotionVector::new(dx, dy);
        Ok(Self {
            size,
            rows: field.rows(),
            cols: field.cols(),
            exact: field.vectors().iter().filter(|v| **v == truth).count(),
            vectors: field.vectors().iter().flat_map(|v| [v.dx, v.dy]).collect(),
            psnr_mean: psnr(current, &predicted)?,
            psnr_full: psnr(current, &full_pred)?,
            reference: reference.pixels().to_vec(),
            current: current.pixels().to_vec(),
        })
    }
}

#[wasm_bindgen]
impl MotionView {
    #[wasm_bindgen(constructor)]
    pub fn new(size: u32, dx: i32, dy: i32, seed: u32) -> Result<MotionView, JsError> {
        Self::build(size as usize, dx, dy, u64::from(seed)).map_err(js)
    }

    pub fn size(&self) -> u32 {
        self.size as u32
    }

    pub fn reference(&self) -> Vec<u8> {
        self.reference.clone()
    }

    pub fn current(&self) -> Vec<u8> {
        self.current.clone()
    }

    pub fn rows(&self) -> u32 {
        self.rows as u32
    }

    pub fn cols(&self) -> u32 {
        self.cols as u32
    }

    /// Interleaved `dx, dy` per block, row-major.
    pub fn vectors(&self) -> Vec<i32> {
        self.vectors.clone()
    }

    /// Blocks whose vector equals the true displacement.
    pub fn exact_blocks(&self) -> u32 {
        self.exact as u32
    }

    pub fn psnr_mean_search(&self) -> f64 {
        self.psnr_mean
    }

    pub fn psnr_full_search(&self) -> f64 {
        self.psnr_full
    }
}

/// Watermark every frame, encode, decode, and score each decoded frame.
#[wasm_bindgen]
pub struct PipelineView {
    size: usize,
    frames: Vec<Vec<u8>>,
    psnr: Vec<f64>,
    mse: Vec<f64>,
    wm_correlation: Vec<f64>,
    wm_ssim: Vec<f64>,
    pattern: String,
    stream_bytes: usize,
    raw_bytes: usize,
}

impl PipelineView {
    pub fn build(
        size: usize,
        frames: usize,
        dx: i32,
        dy: i32,
        gop: u8,
        seed: u64,
    ) -> Result<Self, Error> {
        let video = gen_synthetic(size, size, frames, (dx, dy), seed)?;
        let cap = watermark::capacity(size, size)?;
        let wm_h = ((cap * 2) / 32).clamp(1, 64);
        let mark = pattern(3, 32, wm_h, seed)?;
        let marked = watermark::embed_sequence(&video, &mark)?;
        let opts = EncodeOptions {
            gop_length: gop,
            wm_dims: Some((32, wm_h as u16)),
            ..EncodeOptions::default()
        };
        let stream = codec::encode_with(&marked, &opts)?.stream;
        let bytes = codec::serialize(&stream);
        let decoded = codec::decode(&stream)?;
        let report = s2f_core::metrics::sequence_report(
            &marked,
            &decoded,
            Some(&mark),
            &SsimParams::default(),
        )?;
        Ok(Self {
            size,
            psnr: report.rows.iter().map(|r| r.psnr_db).collect(),
            mse: report.rows.iter().map(|r| r.mse).collect(),
            wm_correlation: report
                .rows
                .iter()
                .map(|r| r.wm_correlation.unwrap_or(f64::NAN))
                .collect(),
            wm_ssim: report
                .rows
                .iter()
                .map(|r| r.wm_ssim.unwrap_or(f64::NAN))
                .collect(),
            pattern: stream.type_pattern(),
            stream_bytes: bytes.len(),
            raw_bytes: frames * size * size,
            frames: decoded
                .into_frames()
                .into_iter()
                .map(|f: Frame| f.into_image().into_pixels())
                .collect(),
        })
    }
}

#[wasm_bindgen]
impl PipelineView {
    #[wasm_bindgen(constructor)]
    pub fn new(
        size: u32,
        frames: u32,
        dx: i32,
        dy: i32,
        gop: u8,
        seed: u32,
    ) -> Result<PipelineView, JsError> {
        Self::build(size as usize, frames as usize, dx, dy, gop, u64::from(seed)).map_err(js)
    }

    pub fn size(&self) -> u32 {
        self.size as u32
    }

    pub fn frame_count(&self) -> u32 {
        self.frames.len() as u32
    }

    pub fn decoded_frame(&self, index: u32) -> Vec<u8> {
        self.frames.get(index as usize).cloned().unwrap_or_default()
    }

    /// Per-frame PSNR in dB; `Infinity` for exact frames.
    pub fn psnr(&self) -> Vec<f64> {
        self.psnr.clone()
    }

    pub fn mse(&self) -> Vec<f64> {
        self.mse.clone()
    }

    /// `NaN` where the recovered watermark is flat.
    pub fn wm_correlation(&self) -> Vec<f64> {
        self.wm_correlation.clone()
    }

    pub fn wm_ssim(&self) -> Vec<f64> {
        self.wm_ssim.clone()
    }

    /// `I` / `P` per frame.
    pub fn pattern(&self) -> String {
        self.pattern.clone()
    }

    pub fn stream_bytes(&self) -> u32 {
        self.stream_bytes as u32
    }

    pub fn raw_bytes(&self) -> u32 {
        self.raw_bytes as u32
    }
}
