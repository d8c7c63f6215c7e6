use serde::{Deserialize, Serialize};

use super::{GrayImage, ImageError, ImageResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Gray,
    Red,
    Green,
    Blue,
}

/// One bit of every pixel. Index 7 is the most significant plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPlane {
    pub rows: usize,
    pub cols: usize,
    pub bits: Vec<bool>,
    pub index: u8,
    pub channel: Channel,
}

impl BitPlane {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>, index: u8, channel: Channel) -> ImageResult<Self> {
        if rows == 0 || cols == 0 || bits.len() != rows * cols {
            return Err(ImageError::Shape(format!("{} bits do not fill {rows}x{cols}", bits.len())));
        }
        if index > 7 {
            return Err(ImageError::Shape(format!("plane index {index} outside 0..=7")));
        }
        Ok(Self { rows, cols, bits, index, channel })
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.bits[r * self.cols + c] = bit;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Black/white rendering: 255 where the bit is set.
    pub fn to_image(&self) -> GrayImage {
        let pixels = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        GrayImage { rows: self.rows, cols: self.cols, pixels }
    }
}

/// Splits an image into its eight bitplanes; `planes[d]` holds bit `d`.
pub fn bit_slice(image: &GrayImage) -> [BitPlane; 8] {
    bit_slice_channel(image, Channel::Gray)
}

pub(crate) fn bit_slice_channel(image: &GrayImage, channel: Channel) -> [BitPlane; 8] {
    std::array::from_fn(|d| BitPlane {
        rows: image.rows,
        cols: image.cols,
        bits: image.pixels.iter().map(|p| p >> d & 1 == 1).collect(),
        index: d as u8,
        channel,
    })
}

/// Inverse of [`bit_slice`]. Planes may come in any order; each index
/// 0..=7 must appear exactly once.
pub fn bit_reassemble(planes: &[BitPlane]) -> ImageResult<GrayImage> {
    let first = planes.first().ok_or_else(|| ImageError::Shape("no planes".into()))?;
    if planes.len() != 8 {
        return Err(ImageError::Shape(format!("need 8 planes, got {}", planes.len())));
    }
    let (rows, cols) = (first.rows, first.cols);
    let mut seen = 0u16;
    for p in planes {
        if p.rows != rows || p.cols != cols || p.bits.len() != rows * cols {
            return Err(ImageError::Shape(format!("plane {} is {}x{}, expected {rows}x{cols}", p.index, p.rows, p.cols)));
        }
        seen |= 1 << p.index;
    }
    if seen != 0xff {
        return Err(ImageError::Shape("plane indices must cover 0..=7 once each".into()));
    }
    let mut pixels = vec![0u8; rows * cols];
    for p in planes {
        for (px, &b) in pixels.iter_mut().zip(&p.bits) {
            *px |= (b as u8) << p.index;
        }
    }
    GrayImage::new(rows, cols, pixels)
}

pub fn msb_plane(image: &GrayImage, channel: Channel) -> BitPlane {
    BitPlane {
        rows: image.rows,
        cols: image.cols,
        bits: image.pixels.iter().map(|&p| p >= 128).collect(),
        index: 7,
        channel,
    }
}

/// Anything with a rectangular cell layout.
pub trait Grid {
    type Cell: Copy;
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn cell(&self, r: usize, c: usize) -> Self::Cell;
}

impl Grid for GrayImage {
    type Cell = u8;
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn cell(&self, r: usize, c: usize) -> u8 {
        self.get(r, c)
    }
}

impl Grid for BitPlane {
    type Cell = bool;
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn cell(&self, r: usize, c: usize) -> bool {
        self.get(r, c)
    }
}

/// A 2x2 block. `cells[0] = [(1,1), (1,2)]`, `cells[1] = [(2,1), (2,2)]`;
/// `row`/`col` locate its upper-left cell in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tile2x2<T> {
    pub row: usize,
    pub col: usize,
    pub cells: [[T; 2]; 2],
}

impl<T: Copy> Tile2x2<T> {
    /// Cells in reading order (1,1), (1,2), (2,1), (2,2).
    pub fn flat(&self) -> [T; 4] {
        [self.cells[0][0], self.cells[0][1], self.cells[1][0], self.cells[1][1]]
    }
}

/// Non-overlapping tiles in row-major order starting at the upper left.
pub fn tiles_2x2<G: Grid>(grid: &G) -> ImageResult<Vec<Tile2x2<G::Cell>>> {
    let (rows, cols) = (grid.rows(), grid.cols());
    if rows % 2 == 1 || cols % 2 == 1 {
        return Err(ImageError::Shape(format!("{rows}x{cols} has an odd side")));
    }
    let mut tiles = Vec::with_capacity(rows * cols / 4);
    for r in (0..rows).step_by(2) {
        for c in (0..cols).step_by(2) {
            tiles.push(Tile2x2 {
                row: r,
                col: c,
                cells: [
                    [grid.cell(r, c), grid.cell(r, c + 1)],
                    [grid.cell(r + 1, c), grid.cell(r + 1, c + 1)],
                ],
            });
        }
    }
    Ok(tiles)
}
