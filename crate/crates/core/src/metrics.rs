//! MSE, PSNR, Pearson correlation, global SSIM and per-frame reports.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::media::{GrayImage, VideoSequence};
use crate::par;
use crate::watermark::{self, BinaryWatermark};

pub const MAX_PIXEL: f64 = 255.0;

fn check_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

pub fn mse(a: impl AsRef<GrayImage>, b: impl AsRef<GrayImage>) -> Result<f64> {
    let (a, b) = (a.as_ref(), b.as_ref());
    check_dims(a, b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| u64::from(x.abs_diff(y)).pow(2))
        .sum();
    Ok(sum as f64 / a.pixels().len() as f64)
}

/// Peak signal-to-noise ratio in dB; `+inf` for identical inputs.
pub fn psnr(a: impl AsRef<GrayImage>, b: impl AsRef<GrayImage>) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (MAX_PIXEL * MAX_PIXEL / mse).log10()
    }
}

struct Moments {
    mean_a: f64,
    mean_b: f64,
    /// Sums of products of deviations; not yet normalised.
    saa: f64,
    sbb: f64,
    sab: f64,
    n: usize,
}

fn mean(px: &[u8]) -> f64 {
    px.iter().map(|&p| u64::from(p)).sum::<u64>() as f64 / px.len() as f64
}

fn cross(a: &[u8], ma: f64, b: &[u8], mb: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (f64::from(x) - ma) * (f64::from(y) - mb))
        .sum()
}

fn moments(a: &GrayImage, b: &GrayImage) -> Moments {
    let (pa, pb) = (a.pixels(), b.pixels());
    let (mean_a, mean_b) = (mean(pa), mean(pb));
    // The same routine for all three sums keeps x-vs-x results exact.
    Moments {
        mean_a,
        mean_b,
        saa: cross(pa, mean_a, pa, mean_a),
        sbb: cross(pb, mean_b, pb, mean_b),
        sab: cross(pa, mean_a, pb, mean_b),
        n: pa.len(),
    }
}

/// Pearson correlation coefficient over all pixels.
pub fn correlation(a: impl AsRef<GrayImage>, b: impl AsRef<GrayImage>) -> Result<f64> {
    let (a, b) = (a.as_ref(), b.as_ref());
    check_dims(a, b)?;
    let m = moments(a, b);
    if m.saa == 0.0 || m.sbb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(m.sab / (m.saa * m.sbb).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
    /// Luminance exponent.
    pub alpha: f64,
    /// Contrast exponent.
    pub beta: f64,
    /// Structure exponent.
    pub gamma: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        }
    }
}

impl SsimParams {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }
}

/// Single-window SSIM over the whole image, sample (N − 1) statistics.
///
/// With unit exponents this is the combined form
/// `(2μxμy + C1)(2σxy + C2) / ((μx² + μy² + C1)(σx² + σy² + C2))`.
/// Other exponents weight the luminance, contrast and structure terms
/// separately, with the structure term stabilised by `C2 / 2`.
pub fn ssim(
    a: impl AsRef<GrayImage>,
    b: impl AsRef<GrayImage>,
    params: &SsimParams,
) -> Result<f64> {
    let (a, b) = (a.as_ref(), b.as_ref());
    check_dims(a, b)?;
    let m = moments(a, b);
    // A single pixel has no sample variance; treat its spread as zero.
    let denom = m.n.saturating_sub(1).max(1) as f64;
    let (var_a, var_b, cov) = (m.saa / denom, m.sbb / denom, m.sab / denom);
    let (c1, c2) = (params.c1(), params.c2());
    let (mx, my) = (m.mean_a, m.mean_b);

    if params.alpha == 1.0 && params.beta == 1.0 && params.gamma == 1.0 {
        return Ok(((2.0 * mx * my + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (var_a + var_b + c2)));
    }
    let (sx, sy) = (var_a.sqrt(), var_b.sqrt());
    let c3 = c2 / 2.0;
    let l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
    let c = (2.0 * sx * sy + c2) / (var_a + var_b + c2);
    let s = (cov + c3) / (sx * sy + c3);
    Ok(l.powf(params.alpha) * c.powf(params.beta) * s.powf(params.gamma))
}

/// One report row. Watermark fields are `None` when no watermark was given;
/// `wm_correlation` is also `None` when the recovered watermark is flat.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMetrics {
    pub frame_index: usize,
    pub mse: f64,
    pub psnr_db: f64,
    pub wm_correlation: Option<f64>,
    pub wm_ssim: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub rows: Vec<FrameMetrics>,
}

pub const REPORT_HEADER: &str = "frame,mse,psnr_db,wm_correlation,wm_ssim";

impl MetricsReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.frame_index,
                format_sig(r.mse),
                format_sig(r.psnr_db),
                opt(r.wm_correlation),
                opt(r.wm_ssim)
            );
        }
        out
    }
}

/// Six significant digits in the style of C's `%g`; `inf` for infinities.
pub fn format_sig(v: f64) -> String {
    const DIGITS: i32 = 6;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    // Round first so 999999.5 moves to the exponent form like %g does.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..DIGITS).contains(&exp) {
        trim(&format!("{:.*}", (DIGITS - 1 - exp) as usize, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

/// Per-frame fidelity of `decoded` against `original`, plus watermark
/// recovery from every decoded frame when `wm` is given.
pub fn sequence_report(
    original: &VideoSequence,
    decoded: &VideoSequence,
    wm: Option<&BinaryWatermark>,
    params: &SsimParams,
) -> Result<MetricsReport> {
    if original.len() != decoded.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} original frames vs {} decoded",
            original.len(),
            decoded.len()
        )));
    }
    let rows = par::map(original.len(), |k| {
        let (o, d) = (&original.frames()[k], &decoded.frames()[k]);
        let mse = mse(o, d)?;
        let (wm_correlation, wm_ssim) = match wm {
            Some(w) => {
                let got = watermark::extract(d, w.width(), w.height())?;
                let corr = match correlation(w, &got) {
                    Ok(c) => Some(c),
                    Err(Error::UndefinedCorrelation) => None,
                    Err(e) => return Err(e),
                };
                (corr, Some(ssim(w, &got, params)?))
            }
            None => (None, None),
        };
        Ok(FrameMetrics {
            frame_index: k,
            mse,
            psnr_db: psnr_from_mse(mse),
            wm_correlation,
            wm_ssim,
        })
    });
    Ok(MetricsReport {
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}
