//! GOP-structured encoder/decoder and the `.s2f` container.
//!
//! Every `gop_length`-th frame (starting at 0) is stored verbatim as an I
//! record; every other frame is stored only as the motion field against the
//! previously *reconstructed* frame. No residual is transmitted, so P frames
//! are lossy and drift until the next I frame.
//!
//! Byte layout (little-endian, no padding):
//!
//! ```text
//! header (24 bytes)
//!   0  magic        "S2F1"
//!   4  version      u16 = 1
//!   6  width        u32
//!  10  height       u32
//!  14  frame_count  u32
//!  18  block_size   u8 = 4
//!  19  gop_length   u8
//!  20  wm_width     u16 (0 = none)
//!  22  wm_height    u16 (0 = none)
//! ```
//!
//! Each record is one type byte (0 = I, 1 = P) followed by the payload:
//! `width·height` raw pixels for I, or one `(dx: i8, dy: i8)` pair per 4×4
//! block in raster order for P.

use crate::error::{Error, Result};
use crate::media::{Frame, VideoSequence};
use crate::motion::{compensate, estimate_motion, MotionField, MotionVector, SearchConfig};
use crate::par;
use crate::watermark;

pub const MAGIC: [u8; 4] = *b"S2F1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;
pub const BLOCK_SIZE: u8 = 4;
pub const DEFAULT_GOP: u8 = 6;
/// Largest vector component the container accepts, in pixels.
pub const MAX_VECTOR: i32 = 16;

const TYPE_I: u8 = 0;
const TYPE_P: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct S2fHeader {
    pub width: u32,
    pub height: u32,
    pub frame_count: u32,
    pub block_size: u8,
    pub gop_length: u8,
    /// `(0, 0)` when no watermark metadata is carried.
    pub wm_width: u16,
    pub wm_height: u16,
}

impl S2fHeader {
    pub fn watermark_dims(&self) -> Option<(usize, usize)> {
        (self.wm_width != 0).then_some((self.wm_width as usize, self.wm_height as usize))
    }

    fn block_rows(&self) -> usize {
        self.height as usize / BLOCK_SIZE as usize
    }

    fn block_cols(&self) -> usize {
        self.width as usize / BLOCK_SIZE as usize
    }

    fn validate(&self) -> Result<()> {
        let (w, h) = (self.width as usize, self.height as usize);
        if w == 0 || w % 8 != 0 {
            return Err(Error::container(
                "width",
                format!("{w} is not a positive multiple of 8"),
            ));
        }
        if h == 0 || h % 8 != 0 {
            return Err(Error::container(
                "height",
                format!("{h} is not a positive multiple of 8"),
            ));
        }
        if self.frame_count == 0 {
            return Err(Error::container("frame_count", "stream has no frames"));
        }
        if self.block_size != BLOCK_SIZE {
            return Err(Error::container(
                "block_size",
                format!(
                    "{} unsupported, version 1 requires {BLOCK_SIZE}",
                    self.block_size
                ),
            ));
        }
        if self.gop_length == 0 {
            return Err(Error::container("gop_length", "must be at least 1"));
        }
        match (self.wm_width, self.wm_height) {
            (0, 0) => {}
            (0, _) | (_, 0) => {
                return Err(Error::container(
                    "wm_width",
                    format!(
                        "watermark dimensions {}x{} must be both zero or both non-zero",
                        self.wm_width, self.wm_height
                    ),
                ))
            }
            (ww, wh) => {
                let needed = watermark::pairs_needed(ww as usize, wh as usize);
                let available = watermark::capacity(w, h)?;
                if needed > available {
                    return Err(Error::container(
                        "wm_width",
                        format!("{ww}x{wh} watermark exceeds frame capacity of {available} pairs"),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameRecord {
    Intra(Frame),
    Predicted(MotionField),
}

impl FrameRecord {
    pub fn is_intra(&self) -> bool {
        matches!(self, FrameRecord::Intra(_))
    }

    pub fn type_byte(&self) -> u8 {
        match self {
            FrameRecord::Intra(_) => TYPE_I,
            FrameRecord::Predicted(_) => TYPE_P,
        }
    }
}

/// Decoded form of a `.s2f` file. Construction validates every container
/// invariant, so any value of this type serializes without error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S2fStream {
    header: S2fHeader,
    records: Vec<FrameRecord>,
}

fn vector_ok(v: i32) -> bool {
    v % BLOCK_SIZE as i32 == 0 && v.abs() <= MAX_VECTOR
}

impl S2fStream {
    pub fn new(header: S2fHeader, records: Vec<FrameRecord>) -> Result<Self> {
        header.validate()?;
        if records.len() != header.frame_count as usize {
            return Err(Error::container(
                "frame_count",
                format!(
                    "header says {}, found {} records",
                    header.frame_count,
                    records.len()
                ),
            ));
        }
        for (k, rec) in records.iter().enumerate() {
            check_record(&header, k, rec)?;
        }
        Ok(Self { header, records })
    }

    pub fn header(&self) -> &S2fHeader {
        &self.header
    }

    pub fn records(&self) -> &[FrameRecord] {
        &self.records
    }

    /// `I` / `P` per record, e.g. `IPPPPPI`.
    pub fn type_pattern(&self) -> String {
        self.records
            .iter()
            .map(|r| if r.is_intra() { 'I' } else { 'P' })
            .collect()
    }
}

fn check_record(header: &S2fHeader, k: usize, rec: &FrameRecord) -> Result<()> {
    let want_intra = k.is_multiple_of(header.gop_length as usize);
    if rec.is_intra() != want_intra {
        return Err(Error::container(
            "frame_type",
            format!(
                "record {k} is {} but gop length {} requires {}",
                if rec.is_intra() { "I" } else { "P" },
                header.gop_length,
                if want_intra { "I" } else { "P" }
            ),
        ));
    }
    match rec {
        FrameRecord::Intra(f) => {
            if f.width() != header.width as usize || f.height() != header.height as usize {
                return Err(Error::container(
                    "record payload",
                    format!("record {k} frame is {}x{}", f.width(), f.height()),
                ));
            }
        }
        FrameRecord::Predicted(field) => {
            if field.block_size() != BLOCK_SIZE as usize
                || field.rows() != header.block_rows()
                || field.cols() != header.block_cols()
            {
                return Err(Error::container(
                    "record payload",
                    format!("record {k} field shape does not match the frame"),
                ));
            }
            if let Some(v) = field
                .vectors()
                .iter()
                .find(|v| !vector_ok(v.dx) || !vector_ok(v.dy))
            {
                return Err(Error::container(
                    "vector",
                    format!(
                        "record {k} has ({}, {}); components must be multiples of {BLOCK_SIZE} within ±{MAX_VECTOR}",
                        v.dx, v.dy
                    ),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    pub gop_length: u8,
    pub wm_dims: Option<(u16, u16)>,
    pub search: SearchConfig,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            gop_length: DEFAULT_GOP,
            wm_dims: None,
            search: SearchConfig::default(),
        }
    }
}

/// Encoder output together with the frames the encoder reconstructed while
/// predicting; these equal what [`decode`] produces.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub stream: S2fStream,
    pub reconstruction: VideoSequence,
}

pub fn encode(
    video: &VideoSequence,
    gop_length: u8,
    wm_dims: Option<(u16, u16)>,
) -> Result<S2fStream> {
    let opts = EncodeOptions {
        gop_length,
        wm_dims,
        ..EncodeOptions::default()
    };
    Ok(encode_with(video, &opts)?.stream)
}

pub fn encode_with(video: &VideoSequence, opts: &EncodeOptions) -> Result<Encoded> {
    let search = opts.search;
    if search.block_size != BLOCK_SIZE as usize
        || search.block_size * search.window_radius > MAX_VECTOR as usize
    {
        return Err(Error::ShapeMismatch(format!(
            "search with {}px blocks and radius {} cannot be stored in a version 1 stream",
            search.block_size, search.window_radius
        )));
    }
    let dim = |v: usize, field: &'static str| {
        u32::try_from(v)
            .map_err(|_| Error::container(field, format!("{v} does not fit in 32 bits")))
    };
    let (wm_width, wm_height) = opts.wm_dims.unwrap_or((0, 0));
    let header = S2fHeader {
        width: dim(video.width(), "width")?,
        height: dim(video.height(), "height")?,
        frame_count: dim(video.len(), "frame_count")?,
        block_size: BLOCK_SIZE,
        gop_length: opts.gop_length,
        wm_width,
        wm_height,
    };
    header.validate()?;

    let gop = opts.gop_length as usize;
    let frames = video.frames();
    let groups = par::map(frames.len().div_ceil(gop), |g| {
        encode_group(&frames[g * gop..((g + 1) * gop).min(frames.len())], &search)
    });
    let mut records = Vec::with_capacity(frames.len());
    let mut recon = Vec::with_capacity(frames.len());
    for group in groups {
        let (r, f) = group?;
        records.extend(r);
        recon.extend(f);
    }
    Ok(Encoded {
        stream: S2fStream::new(header, records)?,
        reconstruction: VideoSequence::new(recon)?,
    })
}

/// One I frame followed by closed-loop P frames.
fn encode_group(frames: &[Frame], search: &SearchConfig) -> Result<(Vec<FrameRecord>, Vec<Frame>)> {
    let mut records = vec![FrameRecord::Intra(frames[0].clone())];
    let mut recon = vec![frames[0].clone()];
    for frame in &frames[1..] {
        let reference = recon.last().expect("group starts with an I frame");
        let field = estimate_motion(frame, reference, search)?;
        let predicted = compensate(reference, &field)?;
        records.push(FrameRecord::Predicted(field));
        recon.push(predicted);
    }
    Ok((records, recon))
}

pub fn decode(stream: &S2fStream) -> Result<VideoSequence> {
    let records = stream.records();
    let starts: Vec<usize> = (0..records.len())
        .filter(|&k| records[k].is_intra())
        .collect();
    let groups = par::map(starts.len(), |g| {
        let end = starts.get(g + 1).copied().unwrap_or(records.len());
        decode_group(&records[starts[g]..end], starts[g])
    });
    let mut frames = Vec::with_capacity(records.len());
    for group in groups {
        frames.extend(group?);
    }
    VideoSequence::new(frames)
}

fn decode_group(records: &[FrameRecord], first_index: usize) -> Result<Vec<Frame>> {
    let mut out: Vec<Frame> = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let frame = match rec {
            FrameRecord::Intra(f) => f.clone(),
            FrameRecord::Predicted(field) => {
                let reference = out.last().ok_or_else(|| {
                    Error::container(
                        "frame_type",
                        format!("record {} has no reference", first_index + i),
                    )
                })?;
                compensate(reference, field)?
            }
        };
        out.push(frame);
    }
    Ok(out)
}

/// Canonical byte form of a stream.
pub fn serialize(stream: &S2fStream) -> Vec<u8> {
    let h = &stream.header;
    let pixels = h.width as usize * h.height as usize;
    let blocks = h.block_rows() * h.block_cols();
    let body: usize = stream
        .records
        .iter()
        .map(|r| 1 + if r.is_intra() { pixels } else { 2 * blocks })
        .sum();
    let mut out = Vec::with_capacity(HEADER_LEN + body);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&h.width.to_le_bytes());
    out.extend_from_slice(&h.height.to_le_bytes());
    out.extend_from_slice(&h.frame_count.to_le_bytes());
    out.push(h.block_size);
    out.push(h.gop_length);
    out.extend_from_slice(&h.wm_width.to_le_bytes());
    out.extend_from_slice(&h.wm_height.to_le_bytes());
    debug_assert_eq!(out.len(), HEADER_LEN);
    for rec in &stream.records {
        out.push(rec.type_byte());
        match rec {
            FrameRecord::Intra(f) => out.extend_from_slice(f.pixels()),
            FrameRecord::Predicted(field) => {
                for v in field.vectors() {
                    // Validated to ±16 on construction.
                    out.push(v.dx as i8 as u8);
                    out.push(v.dy as i8 as u8);
                }
            }
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, field: &'static str) -> Result<&'a [u8]> {
        let rest = &self.bytes[self.pos..];
        if rest.len() < n {
            return Err(Error::container(
                field,
                format!(
                    "truncated at byte {}: need {n}, have {}",
                    self.pos,
                    rest.len()
                ),
            ));
        }
        self.pos += n;
        Ok(&rest[..n])
    }

    fn u8(&mut self, field: &'static str) -> Result<u8> {
        Ok(self.take(1, field)?[0])
    }

    fn u16(&mut self, field: &'static str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, field)?.try_into().unwrap()))
    }

    fn u32(&mut self, field: &'static str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, field)?.try_into().unwrap()))
    }
}

pub fn parse(bytes: &[u8]) -> Result<S2fStream> {
    let mut rd = Reader { bytes, pos: 0 };
    if rd.take(4, "magic")? != MAGIC {
        return Err(Error::container("magic", "not an S2F1 stream"));
    }
    let version = rd.u16("version")?;
    if version != VERSION {
        return Err(Error::container(
            "version",
            format!("unsupported version {version}"),
        ));
    }
    let header = S2fHeader {
        width: rd.u32("width")?,
        height: rd.u32("height")?,
        frame_count: rd.u32("frame_count")?,
        block_size: rd.u8("block_size")?,
        gop_length: rd.u8("gop_length")?,
        wm_width: rd.u16("wm_width")?,
        wm_height: rd.u16("wm_height")?,
    };
    header.validate()?;

    let (w, h) = (header.width as usize, header.height as usize);
    let (rows, cols) = (header.block_rows(), header.block_cols());
    let pixels = w
        .checked_mul(h)
        .ok_or_else(|| Error::container("width", format!("{w}x{h} frame is too large")))?;
    let mut records = Vec::new();
    for k in 0..header.frame_count as usize {
        let t = rd.u8("frame_type")?;
        if t != TYPE_I && t != TYPE_P {
            return Err(Error::container(
                "frame_type",
                format!("record {k} has unknown type {t}"),
            ));
        }
        let want = if k % header.gop_length as usize == 0 {
            TYPE_I
        } else {
            TYPE_P
        };
        if t != want {
            return Err(Error::container(
                "frame_type",
                format!(
                    "record {k} has type {t}, gop length {} requires {want}",
                    header.gop_length
                ),
            ));
        }
        let rec = if t == TYPE_I {
            let px = rd.take(pixels, "record payload")?;
            FrameRecord::Intra(Frame::new(w, h, px.to_vec())?)
        } else {
            let raw = rd.take(2 * rows * cols, "record payload")?;
            let vectors = raw
                .chunks_exact(2)
                .map(|p| MotionVector::new(i32::from(p[0] as i8), i32::from(p[1] as i8)))
                .collect();
            FrameRecord::Predicted(MotionField::new(BLOCK_SIZE as usize, rows, cols, vectors)?)
        };
        check_record(&header, k, &rec)?;
        records.push(rec);
    }
    if rd.pos != bytes.len() {
        return Err(Error::container(
            "trailing bytes",
            format!("{} bytes after the last record", bytes.len() - rd.pos),
        ));
    }
    S2fStream::new(header, records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::gen_synthetic;

    fn one_frame_stream() -> S2fStream {
        let video = VideoSequence::new(vec![Frame::filled(8, 8, 0).unwrap()]).unwrap();
        encode(&video, DEFAULT_GOP, None).unwrap()
    }

    #[test]
    fn single_frame_layout() {
        let s = one_frame_stream();
        assert_eq!(s.type_pattern(), "I");
        let bytes = serialize(&s);
        assert_eq!(bytes.len(), 89);
        assert_eq!(&bytes[..4], &[0x53, 0x32, 0x46, 0x31]);
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(&bytes[6..10], &[8, 0, 0, 0]);
        assert_eq!(&bytes[14..18], &[1, 0, 0, 0]);
        assert_eq!(&bytes[18..20], &[4, 6]);
        assert_eq!(bytes[24], 0);
        assert_eq!(parse(&bytes).unwrap(), s);
    }

    #[test]
    fn static_video_is_lossless() {
        let f = Frame::from_fn(16, 16, |x, y| (x * 13 + y * 7) as u8).unwrap();
        let video = VideoSequence::new(vec![f; 7]).unwrap();
        let s = encode(&video, 6, None).unwrap();
        assert_eq!(s.type_pattern(), "IPPPPPI");
        for rec in s.records() {
            if let FrameRecord::Predicted(field) = rec {
                assert!(field.is_zero());
            }
        }
        assert_eq!(decode(&s).unwrap(), video);
    }

    #[test]
    fn twenty_frames_gop_six() {
        let video = gen_synthetic(32, 32, 20, (4, 0), 3).unwrap();
        let s = encode(&video, 6, None).unwrap();
        assert_eq!(s.type_pattern(), "IPPPPPIPPPPPIPPPPPIP");
    }

    #[test]
    fn decode_zero_p() {
        let f = Frame::from_fn(8, 8, |x, y| (x + y) as u8).unwrap();
        let header = S2fHeader {
            width: 8,
            height: 8,
            frame_count: 2,
            block_size: 4,
            gop_length: 6,
            wm_width: 0,
            wm_height: 0,
        };
        let s = S2fStream::new(
            header,
            vec![
                FrameRecord::Intra(f.clone()),
                FrameRecord::Predicted(MotionField::zero(4, 2, 2)),
            ],
        )
        .unwrap();
        assert_eq!(decode(&s).unwrap().frames(), &[f.clone(), f]);
    }

    #[test]
    fn decode_rejects_out_of_frame_vector() {
        let f = Frame::filled(8, 8, 1).unwrap();
        let mut v = vec![MotionVector::ZERO; 4];
        v[0] = MotionVector::new(-4, 0);
        let header = S2fHeader {
            width: 8,
            height: 8,
            frame_count: 2,
            block_size: 4,
            gop_length: 2,
            wm_width: 0,
            wm_height: 0,
        };
        let s = S2fStream::new(
            header,
            vec![
                FrameRecord::Intra(f),
                FrameRecord::Predicted(MotionField::new(4, 2, 2, v).unwrap()),
            ],
        )
        .unwrap();
        let bytes = serialize(&s);
        assert_eq!(parse(&bytes).unwrap(), s);
        assert!(matches!(decode(&s), Err(Error::VectorOutOfBounds { .. })));
    }

    fn field_name(e: Error) -> &'static str {
        match e {
            Error::Container { field, .. } => field,
            other => panic!("expected container error, got {other}"),
        }
    }

    #[test]
    fn header_corruption_names_field() {
        let bytes = serialize(&one_frame_stream());
        let cases = [
            (0, "magic"),
            (3, "magic"),
            (4, "version"),
            (6, "width"),
            (10, "height"),
            (18, "block_size"),
            (20, "wm_width"),
        ];
        for (offset, field) in cases {
            let mut b = bytes.clone();
            b[offset] ^= 0xFF;
            assert_eq!(field_name(parse(&b).unwrap_err()), field, "byte {offset}");
        }
        let mut b = bytes.clone();
        b[19] = 0;
        assert_eq!(field_name(parse(&b).unwrap_err()), "gop_length");
    }

    #[test]
    fn parse_rejects_malformed_records() {
        let video = gen_synthetic(16, 16, 3, (4, 0), 1).unwrap();
        let bytes = serialize(&encode(&video, 6, None).unwrap());
        let p_start = HEADER_LEN + 1 + 256;
        assert_eq!(
            field_name(parse(&bytes[..bytes.len() - 1]).unwrap_err()),
            "record payload"
        );

        let mut b = bytes.clone();
        b.push(0);
        assert_eq!(field_name(parse(&b).unwrap_err()), "trailing bytes");

        let mut b = bytes.clone();
        b[p_start] = TYPE_I;
        assert_eq!(field_name(parse(&b).unwrap_err()), "frame_type");

        let mut b = bytes.clone();
        b[p_start] = 7;
        assert_eq!(field_name(parse(&b).unwrap_err()), "frame_type");

        let mut b = bytes.clone();
        b[p_start + 1] = 3;
        assert_eq!(field_name(parse(&b).unwrap_err()), "vector");

        let mut b = bytes.clone();
        b[p_start + 2] = 20;
        assert_eq!(field_name(parse(&b).unwrap_err()), "vector");

        let mut b = bytes.clone();
        b[HEADER_LEN] = TYPE_P;
        assert_eq!(field_name(parse(&b).unwrap_err()), "frame_type");
    }

    #[test]
    fn watermark_dims_travel_in_header() {
        let video = gen_synthetic(64, 64, 2, (0, 0), 1).unwrap();
        let s = encode(&video, 6, Some((8, 4))).unwrap();
        let back = parse(&serialize(&s)).unwrap();
        assert_eq!(back.header().watermark_dims(), Some((8, 4)));
        // 64×64 holds 64 pairs; a 16×16 watermark needs 128.
        assert!(encode(&video, 6, Some((16, 16))).is_err());
        assert!(encode(&video, 6, Some((8, 0))).is_err());
    }

    #[test]
    fn encode_rejects_unstorable_search() {
        let video = gen_synthetic(32, 32, 2, (0, 0), 1).unwrap();
        let opts = EncodeOptions {
            search: SearchConfig {
                block_size: 4,
                window_radius: 5,
            },
            ..EncodeOptions::default()
        };
        assert!(encode_with(&video, &opts).is_err());
    }
}
