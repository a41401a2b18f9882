//! Deterministic translated-texture sequences with known ground-truth motion.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Frame, GrayImage, VideoSequence, FRAME_ALIGN};
use crate::error::{Error, Result};

pub const MAX_SYNTHETIC_SHIFT: i32 = 16;

const MEAN_BLOCK: usize = 4;
/// Number of distinct 4×4 block sums: 0 ..= 16·255.
const DISTINCT_SUMS: usize = 16 * 255 + 1;
/// Zero-sum pixel swaps per block; gives the texture some grain.
const GRAIN_STEPS: usize = 24;
const GRAIN_AMPLITUDE: u8 = 48;

/// Generates `frame_count` frames where frame `k` samples frame 0 at offset
/// `(k·dx, k·dy)` with wrap-around:
///
/// `frame_k(x, y) = frame_0((x + k·dx) mod W, (y + k·dy) mod H)`
///
/// so every block of frame `k + 1` is found in frame `k` displaced by exactly
/// `(dx, dy)`, which is the motion vector the estimator should report.
///
/// The 4×4 block means of frame 0 are pairwise distinct whenever the frame
/// has at most 4081 blocks (the number of distinct 16-pixel sums). Larger
/// frames reuse each sum as rarely as possible.
pub fn gen_synthetic(
    width: usize,
    height: usize,
    frame_count: usize,
    motion: (i32, i32),
    texture_seed: u64,
) -> Result<VideoSequence> {
    let (dx, dy) = motion;
    if dx.abs() > MAX_SYNTHETIC_SHIFT || dy.abs() > MAX_SYNTHETIC_SHIFT {
        return Err(Error::DisplacementOutOfRange { dx, dy });
    }
    if width == 0
        || height == 0
        || !width.is_multiple_of(FRAME_ALIGN)
        || !height.is_multiple_of(FRAME_ALIGN)
    {
        return Err(Error::BadDimensions { width, height });
    }
    if frame_count == 0 {
        return Err(Error::EmptySequence);
    }

    let base = texture(width, height, texture_seed);
    let frames = (0..frame_count)
        .map(|k| {
            let ox = k as i64 * dx as i64;
            let oy = k as i64 * dy as i64;
            Frame::from_fn(width, height, |x, y| {
                let sx = (x as i64 + ox).rem_euclid(width as i64) as usize;
                let sy = (y as i64 + oy).rem_euclid(height as i64) as usize;
                base.get(sx, sy)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    VideoSequence::new(frames)
}

fn texture(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = width / MEAN_BLOCK;
    let rows = height / MEAN_BLOCK;
    let blocks = rows * cols;

    let sums: Vec<u32> = if blocks <= DISTINCT_SUMS {
        index::sample(&mut rng, DISTINCT_SUMS, blocks)
            .into_iter()
            .map(|s| s as u32)
            .collect()
    } else {
        let mut all: Vec<u32> = (0..DISTINCT_SUMS as u32).collect();
        let mut sums = Vec::with_capacity(blocks);
        while sums.len() < blocks {
            all.shuffle(&mut rng);
            let take = (blocks - sums.len()).min(all.len());
            sums.extend_from_slice(&all[..take]);
        }
        sums
    };

    let mut image = GrayImage::filled(width, height, 0).expect("non-empty dims");
    for (b, &sum) in sums.iter().enumerate() {
        let block = block_with_sum(sum, &mut rng);
        let (r, c) = (b / cols, b % cols);
        for (i, &p) in block.iter().enumerate() {
            image.set(
                c * MEAN_BLOCK + i % MEAN_BLOCK,
                r * MEAN_BLOCK + i / MEAN_BLOCK,
                p,
            );
        }
    }
    image
}

/// Sixteen pixels summing to exactly `sum`.
fn block_with_sum(sum: u32, rng: &mut impl Rng) -> [u8; 16] {
    let base = sum / 16;
    let extra = (sum % 16) as usize;
    let mut px = [0u8; 16];
    for (i, p) in px.iter_mut().enumerate() {
        *p = (base + u32::from(i < extra)) as u8;
    }
    for _ in 0..GRAIN_STEPS {
        let from = rng.gen_range(0..16);
        let to = rng.gen_range(0..16);
        if from == to {
            continue;
        }
        let room = px[from].min(255 - px[to]).min(GRAIN_AMPLITUDE);
        let t = rng.gen_range(0..=room);
        px[from] -= t;
        px[to] += t;
    }
    px
}
