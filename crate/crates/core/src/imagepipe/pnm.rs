use std::fs;
use std::path::Path;

use super::{GrayImage, ImageError, ImageResult};

/// A decoded netpbm file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Raster {
    Gray(GrayImage),
    /// Red, green, blue.
    Color([GrayImage; 3]),
}

impl Raster {
    pub fn rows(&self) -> usize {
        self.channels()[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.channels()[0].cols()
    }

    pub fn channels(&self) -> &[GrayImage] {
        match self {
            Raster::Gray(g) => std::slice::from_ref(g),
            Raster::Color(c) => c,
        }
    }

    /// The gray raster, or the first channel of a color one.
    pub fn into_gray(self) -> GrayImage {
        match self {
            Raster::Gray(g) => g,
            Raster::Color([r, _, _]) => r,
        }
    }
}

struct Header {
    color: bool,
    cols: usize,
    rows: usize,
    data_start: usize,
}

fn header(bytes: &[u8]) -> ImageResult<Header> {
    let color = match bytes.get(..2) {
        Some(b"P5") => false,
        Some(b"P6") => true,
        _ => return Err(ImageError::Format("expected P5 or P6 magic".into())),
    };
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(ImageError::Format(format!("expected a number at byte {start}")));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::Format("header number out of range".into()))?;
    }
    // Exactly one whitespace byte separates maxval from the samples.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(ImageError::Format("missing whitespace after maxval".into()));
    }
    let [cols, rows, maxval] = fields;
    if maxval != 255 {
        return Err(ImageError::Format(format!("maxval {maxval} unsupported, only 255")));
    }
    Ok(Header { color, cols, rows, data_start: pos + 1 })
}

pub fn decode(bytes: &[u8]) -> ImageResult<Raster> {
    let h = header(bytes)?;
    let plane = h.rows * h.cols;
    let depth = if h.color { 3 } else { 1 };
    let data = bytes
        .get(h.data_start..h.data_start + plane * depth)
        .ok_or_else(|| ImageError::Format(format!("truncated sample data, need {} bytes", plane * depth)))?;
    if !h.color {
        return Ok(Raster::Gray(GrayImage::new(h.rows, h.cols, data.to_vec())?));
    }
    let channel = |k: usize| GrayImage::new(h.rows, h.cols, data.iter().skip(k).step_by(3).copied().collect());
    Ok(Raster::Color([channel(0)?, channel(1)?, channel(2)?]))
}

/// Canonical encoding: `P5\n<cols> <rows>\n255\n` followed by samples.
pub fn encode(raster: &Raster) -> ImageResult<Vec<u8>> {
    let (magic, channels) = match raster {
        Raster::Gray(g) => ("P5", std::slice::from_ref(g)),
        Raster::Color(c) => ("P6", &c[..]),
    };
    let (rows, cols) = (channels[0].rows(), channels[0].cols());
    if channels.iter().any(|c| c.rows() != rows || c.cols() != cols) {
        return Err(ImageError::Shape("channels differ in shape".into()));
    }
    let mut out = format!("{magic}\n{cols} {rows}\n255\n").into_bytes();
    out.reserve(rows * cols * channels.len());
    for i in 0..rows * cols {
        out.extend(channels.iter().map(|c| c.pixels()[i]));
    }
    Ok(out)
}

pub fn load_image(path: impl AsRef<Path>) -> ImageResult<Raster> {
    decode(&fs::read(path)?)
}

pub fn save_image(raster: &Raster, path: impl AsRef<Path>) -> ImageResult<()> {
    fs::write(path, encode(raster)?)?;
    Ok(())
}
