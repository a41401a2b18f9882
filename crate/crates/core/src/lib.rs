//! Grayscale video watermarking and mean-matrix motion-compensated
//! compression.
//!
//! A binary watermark is embedded into every frame ([`watermark`]), the
//! sequence is compressed into an `.s2f` stream of I frames and motion-only
//! P frames ([`codec`], [`motion`]), and the reconstruction is scored with
//! MSE, PSNR, correlation and SSIM ([`metrics`]).

pub mod codec;
pub mod error;
pub mod media;
pub mod metrics;
pub mod motion;
mod par;
pub mod watermark;

pub use error::{Error, Result};
pub use media::{Frame, GrayImage, VideoSequence};
