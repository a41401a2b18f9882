use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{load_pgm, save_pgm, VideoSequence};
use crate::error::{Error, Result};

/// `frame_0000.pgm`, `frame_0001.pgm`, ...
pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:04}.pgm")
}

pub fn load_sequence<P: AsRef<Path>>(paths: &[P]) -> Result<VideoSequence> {
    let frames = paths
        .iter()
        .map(|p| load_pgm(&fs::read(p.as_ref())?))
        .collect::<Result<Vec<_>>>()?;
    VideoSequence::new(frames)
}

/// Every `*.pgm` file directly inside `dir`, sorted by file name.
pub fn sequence_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let is_pgm = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::EmptySequence);
    }
    paths.sort();
    Ok(paths)
}

/// Writes `frame_NNNN.pgm` files into `dir`, creating it if needed.
pub fn save_sequence(video: &VideoSequence, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    video
        .frames()
        .iter()
        .enumerate()
        .map(|(k, frame)| {
            let path = dir.join(frame_file_name(k));
            write_file_atomic(&path, &save_pgm(frame))?;
            Ok(path)
        })
        .collect()
}

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed write never leaves a truncated file behind.
pub fn write_file_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::other("output path has no file name")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
