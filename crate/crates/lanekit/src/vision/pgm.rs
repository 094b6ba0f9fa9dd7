//! Binary PGM (P5) debug frame dumps.
//!
//! Grayscale frames are written as-is; masks are written with values
//! {0, 255}. Dump files are named `frame_<tick>_<stage>.pgm`.

use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{LaneError, Result};
use crate::vision::{BinaryMask, GrayImage};

pub fn frame_dump_name(dir: &Path, tick: i64, stage: &str) -> PathBuf {
    dir.join(format!("frame_{tick}_{stage}.pgm"))
}

pub fn write_pgm_gray(path: &Path, img: &GrayImage) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    write!(w, "P5\n{} {}\n255\n", img.width(), img.height())?;
    w.write_all(img.data())?;
    Ok(())
}

pub fn write_pgm_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    write_pgm_gray(path, &mask.to_gray())
}

pub fn read_pgm_gray(path: &Path) -> Result<GrayImage> {
    let mut raw = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut raw)?;
    parse_pgm(&raw)
}

fn parse_pgm(raw: &[u8]) -> Result<GrayImage> {
    let bad = |msg: &str| LaneError::Parse {
        line: 0,
        msg: msg.to_string(),
    };
    // Header: magic, width, height, maxval as whitespace-separated tokens,
    // with '#' comments allowed between them.
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    while tokens.len() < 4 {
        while pos < raw.len() && raw[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < raw.len() && raw[pos] == b'#' {
            while pos < raw.len() && raw[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < raw.len() && !raw[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated PGM header"));
        }
        tokens.push(std::str::from_utf8(&raw[start..pos]).map_err(|_| bad("non-ascii header"))?);
    }
    if tokens[0] != "P5" {
        return Err(bad("not a binary PGM (expected P5)"));
    }
    let width: usize = tokens[1].parse().map_err(|_| bad("bad width"))?;
    let height: usize = tokens[2].parse().map_err(|_| bad("bad height"))?;
    let maxval: usize = tokens[3].parse().map_err(|_| bad("bad maxval"))?;
    if maxval != 255 {
        return Err(bad("only maxval 255 supported"));
    }
    // Exactly one whitespace byte separates the header from pixel data.
    pos += 1;
    let n = width * height;
    if raw.len() < pos + n {
        return Err(bad("truncated PGM pixel data"));
    }
    GrayImage::new(width, height, raw[pos..pos + n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = frame_dump_name(dir.path(), 42, "blur");
        let img = GrayImage::new(3, 2, vec![0, 10, 255, 7, 8, 9]).unwrap();
        write_pgm_gray(&path, &img).unwrap();
        assert_eq!(path.file_name().unwrap(), "frame_42_blur.pgm");
        let back = read_pgm_gray(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn mask_values_are_binary() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        let mask = BinaryMask::new(2, 2, vec![true, false, false, true]).unwrap();
        write_pgm_mask(&path, &mask).unwrap();
        let back = read_pgm_gray(&path).unwrap();
        assert_eq!(back.data(), &[255, 0, 0, 255]);
    }
}
