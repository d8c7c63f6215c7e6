use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{neqr_state, value_qubit, NeqrTile, VALUE_BITS, X_QUBIT, Y_QUBIT};
use crate::imagepipe::{tiles_2x2, GrayImage};
use crate::{Result, SimError};

/// One full-register shot of one tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSample {
    pub tile_row: usize,
    pub tile_col: usize,
    pub y: usize,
    pub x: usize,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleLog {
    pub seed: u64,
    pub samples: Vec<TileSample>,
}

fn decode(index: usize) -> (u8, usize, usize) {
    let value = (0..VALUE_BITS)
        .filter(|&b| index >> value_qubit(b) & 1 == 1)
        .fold(0u8, |v, b| v | 1 << b);
    (value, index >> Y_QUBIT & 1, index >> X_QUBIT & 1)
}

/// Encodes each 2x2 tile, takes one shot, and writes the sampled value at
/// the sampled position. The three unsampled pixels of the tile stay 0.
pub fn neqr_measure_recover(image: &GrayImage, seed: u64) -> Result<(GrayImage, SampleLog)> {
    let tiles = tiles_2x2(image).map_err(|e| SimError::Structural(e.to_string()))?;
    let mut out = GrayImage::filled(image.rows(), image.cols(), 0).map_err(|e| SimError::Internal(e.to_string()))?;
    let mut samples = Vec::with_capacity(tiles.len());
    for (k, tile) in tiles.into_iter().enumerate() {
        let state = neqr_state(&NeqrTile::from(tile))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let (value, y, x) = decode(state.sample_index(&mut rng));
        out.set(tile.row + y, tile.col + x, value);
        samples.push(TileSample { tile_row: tile.row, tile_col: tile.col, y, x, value });
    }
    Ok((out, SampleLog { seed, samples }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neqr::basis_index;

    #[test]
    fn decode_inverts_basis_index() {
        for v in [0u8, 1, 100, 128, 200, 255] {
            for (y, x) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                assert_eq!(decode(basis_index(v, y, x)), (v, y, x));
            }
        }
    }
}
