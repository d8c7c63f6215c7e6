use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrayImage;

/// Generators for test rasters, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synthetic {
    Gradient,
    Checker,
    Noise,
}

impl Synthetic {
    pub fn generate(self, side: usize, seed: u64) -> GrayImage {
        match self {
            Synthetic::Gradient => gradient(side, side),
            Synthetic::Checker => checker(side, side, (side / 8).max(1)),
            Synthetic::Noise => noise(side, side, seed),
        }
    }
}

impl FromStr for Synthetic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gradient" => Ok(Synthetic::Gradient),
            "checker" => Ok(Synthetic::Checker),
            "noise" => Ok(Synthetic::Noise),
            other => Err(format!("unknown generator `{other}`")),
        }
    }
}

impl fmt::Display for Synthetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Synthetic::Gradient => "gradient",
            Synthetic::Checker => "checker",
            Synthetic::Noise => "noise",
        })
    }
}

/// Diagonal ramp from 0 at the upper left to 255 at the lower right.
pub fn gradient(rows: usize, cols: usize) -> GrayImage {
    let span = (rows + cols).saturating_sub(2).max(1);
    let pixels = (0..rows * cols)
        .map(|i| ((i / cols + i % cols) * 255 / span) as u8)
        .collect();
    GrayImage::new(rows.max(1), cols.max(1), pixels).expect("non-empty shape")
}

/// Alternating 0/255 squares of side `block`.
pub fn checker(rows: usize, cols: usize, block: usize) -> GrayImage {
    let block = block.max(1);
    let pixels = (0..rows * cols)
        .map(|i| if (i / cols / block + i % cols / block).is_multiple_of(2) { 0 } else { 255 })
        .collect();
    GrayImage::new(rows, cols, pixels).expect("non-empty shape")
}

/// Uniform random bytes from a seeded ChaCha8 stream.
pub fn noise(rows: usize, cols: usize, seed: u64) -> GrayImage {
    let mut pixels = vec![0u8; rows * cols];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut pixels);
    GrayImage::new(rows, cols, pixels).expect("non-empty shape")
}
