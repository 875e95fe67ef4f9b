//! Minimal PGM (P2/P5) reading and binary P5 writing, used for mask export,
//! image output and object rasters. No external imaging dependency.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// A decoded PGM image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples; one entry per pixel regardless of byte depth.
    pub pixels: Vec<u16>,
}

/// Encodes 8-bit samples as a binary P5 image with maxval 255.
pub fn encode_p5(width: usize, height: usize, samples: &[u8]) -> Result<Vec<u8>> {
    if samples.len() != width * height {
        return Err(Error::dimension_mismatch(format!(
            "expected {} samples for {width}x{height}, got {}",
            width * height,
            samples.len()
        )));
    }
    let mut out = Vec::with_capacity(samples.len() + 32);
    write!(out, "P5\n{width} {height}\n255\n").expect("writing to a Vec cannot fail");
    out.extend_from_slice(samples);
    Ok(out)
}

/// Writes a binary P5 image to `path`.
pub fn write_p5(path: impl AsRef<Path>, width: usize, height: usize, samples: &[u8]) -> Result<()> {
    let bytes = encode_p5(width, height, samples)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Reads a P2 or P5 image from `path`.
pub fn read(path: impl AsRef<Path>) -> Result<Pgm> {
    parse(&std::fs::read(path)?)
}

struct Tokenizer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokenizer<'a> {
    /// Next whitespace-delimited token, skipping `#` comments.
    fn next_token(&mut self) -> Result<&'a [u8]> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        if self.pos >= self.bytes.len() {
            return Err(parse_error("unexpected end of PGM header"));
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn next_usize(&mut self) -> Result<usize> {
        let token = self.next_token()?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_error("expected an unsigned integer in PGM header"))
    }
}

fn parse_error(message: &str) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: message.into(),
    }
}

/// Parses P2 (ASCII) or P5 (binary) bytes.
pub fn parse(bytes: &[u8]) -> Result<Pgm> {
    let mut tok = Tokenizer { bytes, pos: 0 };
    let magic = tok.next_token()?.to_vec();
    let width = tok.next_usize()?;
    let height = tok.next_usize()?;
    let maxval = tok.next_usize()?;
    if maxval == 0 || maxval > 65535 {
        return Err(parse_error("PGM maxval must be in 1..=65535"));
    }
    let count = width * height;
    let pixels = match magic.as_slice() {
        b"P2" => {
            let mut pixels = Vec::with_capacity(count);
            for _ in 0..count {
                let v = tok.next_usize()?;
                if v > maxval {
                    return Err(parse_error("P2 sample exceeds maxval"));
                }
                pixels.push(v as u16);
            }
            pixels
        }
        b"P5" => {
            // Exactly one whitespace byte separates the header from raster data.
            let data = &bytes[tok.pos + 1..];
            if maxval < 256 {
                if data.len() < count {
                    return Err(parse_error("P5 raster data truncated"));
                }
                data[..count].iter().map(|&b| u16::from(b)).collect()
            } else {
                if data.len() < 2 * count {
                    return Err(parse_error("P5 raster data truncated"));
                }
                data[..2 * count]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect()
            }
        }
        _ => return Err(parse_error("unsupported magic; expected P2 or P5")),
    };
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}
