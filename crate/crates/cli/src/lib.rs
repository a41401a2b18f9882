//! `s2f` command-line front end.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use s2f_core::codec::{self, EncodeOptions, FrameRecord};
use s2f_core::media::{
    decode_pgm, gen_synthetic, load_pgm, load_sequence, save_pgm, save_sequence, sequence_paths,
    write_file_atomic,
};
use s2f_core::metrics::{sequence_report, SsimParams};
use s2f_core::motion::SearchConfig;
use s2f_core::watermark::{self, BinaryWatermark, DEFAULT_BINARIZE_THRESHOLD};
use s2f_core::{Error, Frame, VideoSequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "s2f",
    version,
    about = "Watermark and motion-compress grayscale PGM video"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed a binary watermark into one frame or every frame of a directory.
    Embed {
        cover: PathBuf,
        watermark: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        bin: Binarize,
    },
    /// Recover a watermark from a PGM frame or from a frame of an .s2f file.
    Extract {
        stego: PathBuf,
        output: PathBuf,
        #[arg(long, value_name = "WxH", value_parser = parse_size)]
        wm_size: Option<(usize, usize)>,
        /// Frame to read when the input is an .s2f stream.
        #[arg(long, default_value_t = 0)]
        frame: usize,
    },
    /// Compress a directory of PGM frames into an .s2f stream.
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        enc: EncodeArgs,
        #[arg(long, value_name = "WxH", value_parser = parse_size)]
        wm_size: Option<(usize, usize)>,
    },
    /// Reconstruct the PGM frames of an .s2f stream.
    Decode {
        input: PathBuf,
        output: PathBuf,
        /// Also write each P frame's motion field as CSV into this directory.
        #[arg(long, value_name = "DIR")]
        vectors_dir: Option<PathBuf>,
    },
    /// Embed a watermark into every frame, then encode.
    Transcode {
        input: PathBuf,
        watermark: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        enc: EncodeArgs,
        #[command(flatten)]
        bin: Binarize,
    },
    /// Per-frame MSE / PSNR and watermark correlation / SSIM as CSV.
    Metrics {
        original: PathBuf,
        decoded: PathBuf,
        report: PathBuf,
        #[arg(long, value_name = "WM.pgm")]
        wm: Option<PathBuf>,
        #[arg(long, value_name = "WxH", value_parser = parse_size, requires = "wm")]
        wm_size: Option<(usize, usize)>,
        #[command(flatten)]
        bin: Binarize,
    },
    /// Write a synthetic translated-texture sequence.
    Gen {
        output: PathBuf,
        #[arg(long, value_name = "WxH", value_parser = parse_size, default_value = "256x256")]
        size: (usize, usize),
        #[arg(long, default_value_t = 20)]
        frames: usize,
        #[arg(long, value_name = "DX,DY", value_parser = parse_motion, default_value = "4,0", allow_hyphen_values = true)]
        motion: (i32, i32),
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long, default_value_t = codec::DEFAULT_GOP, value_parser = clap::value_parser!(u8).range(1..))]
    gop: u8,
    /// Search window half-width in 4×4 blocks.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(0..=4))]
    radius: u8,
}

#[derive(Args, Debug)]
struct Binarize {
    /// Intensity at or above which a watermark pixel counts as white.
    #[arg(long, default_value_t = DEFAULT_BINARIZE_THRESHOLD)]
    threshold: u8,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("bad dimension {v:?}"))
    };
    Ok((parse(w)?, parse(h)?))
}

fn parse_motion(s: &str) -> Result<(i32, i32), String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected DX,DY, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<i32>()
            .map_err(|_| format!("bad displacement {v:?}"))
    };
    Ok((parse(x)?, parse(y)?))
}

/// A failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            Error::Pgm(_)
            | Error::Truncated { .. }
            | Error::NotBinary(_)
            | Error::Container { .. }
            | Error::VectorOutOfBounds { .. }
            | Error::UndefinedCorrelation => EXIT_FORMAT,
            Error::BadDimensions { .. }
            | Error::DimensionMismatch(_)
            | Error::EmptySequence
            | Error::CapacityExceeded { .. }
            | Error::ShapeMismatch(_) => EXIT_CAPACITY,
            Error::DisplacementOutOfRange { .. } => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

type CmdResult = Result<String, Failure>;

/// Output files are written via a sibling temporary; their directory must
/// already exist.
fn check_output_file(path: &Path) -> Result<(), Failure> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if path.file_name().is_none() || !parent.is_dir() {
        return Err(Failure {
            code: EXIT_IO,
            message: format!("{}: output directory does not exist", path.display()),
        });
    }
    Ok(())
}

fn check_input(path: &Path) -> Result<(), Failure> {
    if !path.exists() {
        return Err(Failure {
            code: EXIT_IO,
            message: format!("{}: no such file or directory", path.display()),
        });
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command, and returns
/// the process exit status. Diagnostics go to stderr, summaries to stdout.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            if !summary.is_empty() {
                println!("{summary}");
            }
            EXIT_OK
        }
        Err(f) => {
            eprintln!("s2f: {f}");
            f.code
        }
    }
}

fn execute(cmd: Command) -> CmdResult {
    validate_paths(&cmd)?;
    match cmd {
        Command::Embed {
            cover,
            watermark,
            output,
            bin,
        } => cmd_embed(&cover, &watermark, &output, bin.threshold),
        Command::Extract {
            stego,
            output,
            wm_size,
            frame,
        } => cmd_extract(&stego, &output, wm_size, frame),
        Command::Encode {
            input,
            output,
            enc,
            wm_size,
        } => {
            let video = read_dir_sequence(&input)?;
            let dims = wm_size.map(header_dims).transpose()?;
            write_stream(&video, &output, &enc, dims)
        }
        Command::Decode {
            input,
            output,
            vectors_dir,
        } => cmd_decode(&input, &output, vectors_dir.as_deref()),
        Command::Transcode {
            input,
            watermark,
            output,
            enc,
            bin,
        } => {
            let video = read_dir_sequence(&input)?;
            let wm = read_watermark(&watermark, bin.threshold)?;
            let marked = watermark::embed_sequence(&video, &wm)?;
            let dims = header_dims((wm.width(), wm.height()))?;
            write_stream(&marked, &output, &enc, Some(dims))
        }
        Command::Metrics {
            original,
            decoded,
            report,
            wm,
            wm_size,
            bin,
        } => cmd_metrics(
            &original,
            &decoded,
            &report,
            wm.as_deref(),
            wm_size,
            bin.threshold,
        ),
        Command::Gen {
            output,
            size,
            frames,
            motion,
            seed,
        } => {
            let video = gen_synthetic(size.0, size.1, frames, motion, seed)?;
            save_sequence(&video, &output)?;
            Ok(format!(
                "wrote {} frames of {}x{} to {}",
                video.len(),
                size.0,
                size.1,
                output.display()
            ))
        }
    }
}

fn validate_paths(cmd: &Command) -> Result<(), Failure> {
    match cmd {
        Command::Embed {
            cover,
            watermark,
            output,
            ..
        } => {
            check_input(cover)?;
            check_input(watermark)?;
            if !cover.is_dir() {
                check_output_file(output)?;
            }
        }
        Command::Extract { stego, output, .. } => {
            check_input(stego)?;
            check_output_file(output)?;
        }
        Command::Encode { input, output, .. } => {
            check_input(input)?;
            check_output_file(output)?;
        }
        Command::Decode { input, .. } => check_input(input)?,
        Command::Transcode {
            input,
            watermark,
            output,
            ..
        } => {
            check_input(input)?;
            check_input(watermark)?;
            check_output_file(output)?;
        }
        Command::Metrics {
            original,
            decoded,
            report,
            wm,
            ..
        } => {
            check_input(original)?;
            check_input(decoded)?;
            if let Some(wm) = wm {
                check_input(wm)?;
            }
            check_output_file(report)?;
        }
        Command::Gen { .. } => {}
    }
    Ok(())
}

fn header_dims((w, h): (usize, usize)) -> Result<(u16, u16), Failure> {
    match (u16::try_from(w), u16::try_from(h)) {
        (Ok(w), Ok(h)) => Ok((w, h)),
        _ => Err(Failure {
            code: EXIT_CAPACITY,
            message: format!("watermark size {w}x{h} exceeds 65535 per side"),
        }),
    }
}

fn read_dir_sequence(dir: &Path) -> Result<VideoSequence, Failure> {
    if !dir.is_dir() {
        return Err(Failure {
            code: EXIT_IO,
            message: format!("{}: not a directory", dir.display()),
        });
    }
    Ok(load_sequence(&sequence_paths(dir)?)?)
}

fn read_watermark(path: &Path, threshold: u8) -> Result<BinaryWatermark, Failure> {
    let image = decode_pgm(&fs::read(path).map_err(io_at(path))?)?;
    Ok(watermark::binarize(&image, threshold))
}

fn write_stream(
    video: &VideoSequence,
    output: &Path,
    enc: &EncodeArgs,
    wm_dims: Option<(u16, u16)>,
) -> CmdResult {
    let opts = EncodeOptions {
        gop_length: enc.gop,
        wm_dims,
        search: SearchConfig {
            window_radius: enc.radius as usize,
            ..SearchConfig::default()
        },
    };
    let stream = codec::encode_with(video, &opts)?.stream;
    let bytes = codec::serialize(&stream);
    write_file_atomic(output, &bytes)?;
    Ok(format!(
        "encoded {} frames ({}) into {} bytes at {}",
        video.len(),
        stream.type_pattern(),
        bytes.len(),
        output.display()
    ))
}

fn cmd_embed(cover: &Path, wm_path: &Path, output: &Path, threshold: u8) -> CmdResult {
    let wm = read_watermark(wm_path, threshold)?;
    if cover.is_dir() {
        let video = read_dir_sequence(cover)?;
        let marked = watermark::embed_sequence(&video, &wm)?;
        save_sequence(&marked, output)?;
        return Ok(format!(
            "embedded {}x{} watermark into {} frames in {}",
            wm.width(),
            wm.height(),
            marked.len(),
            output.display()
        ));
    }
    let frame = load_pgm(&fs::read(cover).map_err(io_at(cover))?)?;
    let stego = watermark::embed(&frame, &wm)?;
    write_file_atomic(output, &save_pgm(&stego))?;
    Ok(format!(
        "embedded {}x{} watermark into {}",
        wm.width(),
        wm.height(),
        output.display()
    ))
}

fn is_stream(bytes: &[u8]) -> bool {
    bytes.starts_with(&codec::MAGIC)
}

fn cmd_extract(
    input: &Path,
    output: &Path,
    wm_size: Option<(usize, usize)>,
    frame_index: usize,
) -> CmdResult {
    let bytes = fs::read(input).map_err(io_at(input))?;
    let (frame, dims): (Frame, Option<(usize, usize)>) = if is_stream(&bytes) {
        let stream = codec::parse(&bytes)?;
        let header_dims = stream.header().watermark_dims();
        let n = stream.records().len();
        if frame_index >= n {
            return Err(usage(format!(
                "--frame {frame_index} out of range, stream has {n} frames"
            )));
        }
        let frame = codec::decode(&stream)?
            .into_frames()
            .swap_remove(frame_index);
        (frame, wm_size.or(header_dims))
    } else {
        (load_pgm(&bytes)?, wm_size)
    };
    let (w, h) = dims.ok_or_else(|| usage("--wm-size WxH is required for this input"))?;
    let wm = watermark::extract(&frame, w, h)?;
    write_file_atomic(output, &save_pgm(wm.image()))?;
    Ok(format!(
        "extracted {w}x{h} watermark to {}",
        output.display()
    ))
}

fn cmd_decode(input: &Path, output: &Path, vectors_dir: Option<&Path>) -> CmdResult {
    let bytes = fs::read(input).map_err(io_at(input))?;
    let stream = codec::parse(&bytes)?;
    let video = codec::decode(&stream)?;
    save_sequence(&video, output)?;
    if let Some(dir) = vectors_dir {
        fs::create_dir_all(dir).map_err(io_at(dir))?;
        for (k, rec) in stream.records().iter().enumerate() {
            if let FrameRecord::Predicted(field) = rec {
                write_file_atomic(
                    &dir.join(format!("vectors_{k:04}.csv")),
                    field.to_csv().as_bytes(),
                )?;
            }
        }
    }
    let wm_note = match stream.header().watermark_dims() {
        Some((w, h)) => format!(", watermark {w}x{h}"),
        None => String::new(),
    };
    Ok(format!(
        "decoded {} frames to {}{wm_note}",
        video.len(),
        output.display()
    ))
}

fn cmd_metrics(
    original: &Path,
    decoded: &Path,
    report: &Path,
    wm_path: Option<&Path>,
    wm_size: Option<(usize, usize)>,
    threshold: u8,
) -> CmdResult {
    let orig = read_dir_sequence(original)?;
    let dec = read_dir_sequence(decoded)?;
    let wm = wm_path.map(|p| read_watermark(p, threshold)).transpose()?;
    if let (Some(wm), Some((w, h))) = (&wm, wm_size) {
        if (wm.width(), wm.height()) != (w, h) {
            return Err(Error::DimensionMismatch(format!(
                "--wm-size {w}x{h} does not match the {}x{} watermark image",
                wm.width(),
                wm.height()
            ))
            .into());
        }
    }
    let r = sequence_report(&orig, &dec, wm.as_ref(), &SsimParams::default())?;
    write_file_atomic(report, r.to_csv().as_bytes())?;
    Ok(format!(
        "wrote {} rows to {}",
        r.rows.len(),
        report.display()
    ))
}
