//! Image file formats.
//!
//! * 16-bit binary PGM (`P5`, maxval 65535, big-endian samples) for viewing.
//!   `[0, 1]` maps linearly onto `[0, 65535]` with clamping.
//! * `BSR1` raw matrices for exact data: the line `BSR1`, the line
//!   `rows cols`, then `rows*cols` little-endian `f64` values, row-major.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::Image;
use crate::error::{Error, Result};

const RAW_MAGIC: &str = "BSR1";

pub fn encode_pgm16(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", img.cols(), img.rows()).into_bytes();
    out.reserve(img.len() * 2);
    for &v in img.data() {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        out.extend_from_slice(&q.to_be_bytes());
    }
    out
}

/// Decodes a binary PGM (8- or 16-bit) back to `[0, 1]` intensities.
pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        fields.push(
            std::str::from_utf8(&bytes[start..pos])
                .map_err(|_| bad_pgm())?
                .to_owned(),
        );
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if fields[0] != "P5" {
        return Err(Error::Format(format!(
            "unsupported PGM magic {:?}",
            fields[0]
        )));
    }
    let cols: usize = fields[1].parse().map_err(|_| bad_pgm())?;
    let rows: usize = fields[2].parse().map_err(|_| bad_pgm())?;
    let maxval: u32 = fields[3].parse().map_err(|_| bad_pgm())?;
    if maxval == 0 || maxval > 65535 {
        return Err(bad_pgm());
    }
    let width = if maxval > 255 { 2 } else { 1 };
    let body = bytes.get(pos..).unwrap_or_default();
    if body.len() < rows * cols * width {
        return Err(Error::Format("truncated PGM raster".into()));
    }
    let scale = 1.0 / f64::from(maxval);
    let data = (0..rows * cols)
        .map(|k| {
            let v = if width == 2 {
                u16::from_be_bytes([body[2 * k], body[2 * k + 1]]) as f64
            } else {
                body[k] as f64
            };
            v * scale
        })
        .collect();
    Image::new(rows, cols, data)
}

fn bad_pgm() -> Error {
    Error::Format("malformed PGM header".into())
}

pub fn encode_raw(img: &Image) -> Vec<u8> {
    let mut out = format!("{RAW_MAGIC}\n{} {}\n", img.rows(), img.cols()).into_bytes();
    out.reserve(img.len() * 8);
    for &v in img.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_raw(bytes: &[u8]) -> Result<Image> {
    let mut reader = BufReader::new(bytes);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line != format!("{RAW_MAGIC}\n") {
        return Err(Error::Format("missing BSR1 magic line".into()));
    }
    line.clear();
    reader.read_line(&mut line)?;
    let dims: Vec<usize> = line
        .strip_suffix('\n')
        .ok_or_else(|| Error::Format("truncated BSR1 header".into()))?
        .split(' ')
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format(format!("bad BSR1 dims line {line:?}")))?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Format(format!("bad BSR1 dims line {line:?}")));
    };
    let mut body = Vec::new();
    reader.read_to_end(&mut body)?;
    if body.len() != rows * cols * 8 {
        return Err(Error::Format(format!(
            "BSR1 payload has {} bytes, expected {}",
            body.len(),
            rows * cols * 8
        )));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Image::new(rows, cols, data)
}

pub fn write_pgm16(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    write_bytes(path.as_ref(), &encode_pgm16(img))
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&fs::read(path)?)
}

pub fn write_raw(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    write_bytes(path.as_ref(), &encode_raw(img))
}

pub fn read_raw(path: impl AsRef<Path>) -> Result<Image> {
    decode_raw(&fs::read(path)?)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}
