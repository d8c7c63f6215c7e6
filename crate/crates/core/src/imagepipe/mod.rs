//! Raster ingestion and bitplane algebra.
//!
//! Binary PGM/PPM (maxval 255) I/O, the bit-slicer and its inverse, MSB
//! extraction, 2x2 tiling and a few synthetic test images.

mod planes;
mod pnm;
mod synth;

use thiserror::Error;

pub use planes::{bit_reassemble, bit_slice, msb_plane, tiles_2x2, BitPlane, Channel, Grid, Tile2x2};
pub use pnm::{decode, encode, load_image, save_image, Raster};
pub use synth::{checker, gradient, noise, Synthetic};

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("shape error: {0}")]
    Shape(String),
}

pub type ImageResult<T> = std::result::Result<T, ImageError>;

/// Row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> ImageResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(ImageError::Shape(format!("empty raster {rows}x{cols}")));
        }
        if pixels.len() != rows * cols {
            return Err(ImageError::Shape(format!(
                "{rows}x{cols} raster needs {} pixels, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: u8) -> ImageResult<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.pixels[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        self.pixels[r * self.cols + c] = value;
    }

    /// Side exponent `n` when the raster is a `2^n x 2^n` square.
    pub fn square_exponent(&self) -> Option<u32> {
        (self.rows == self.cols && self.rows.is_power_of_two()).then(|| self.rows.trailing_zeros())
    }

    pub fn histogram(&self) -> [usize; 256] {
        let mut h = [0; 256];
        for &p in &self.pixels {
            h[p as usize] += 1;
        }
        h
    }
}
