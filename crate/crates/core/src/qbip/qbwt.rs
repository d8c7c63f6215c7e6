use super::interface::{cl2qu_simple, run_qubits};
use crate::circuit::Circuit;
use crate::imagepipe::{tiles_2x2, BitPlane, Tile2x2};
use crate::simcore::StateVector;
use crate::{Result, SimError};

pub type BoolTile = Tile2x2<bool>;

/// Register layout: q0 = I11, q1 = I12, q2 = I21, q3 = I22. The top-left
/// bit predicts the other three.
pub fn qbwt_circuit() -> Circuit {
    let mut c = Circuit::new(4);
    c.cnot(0, 1).cnot(0, 2).cnot(0, 3);
    c
}

/// The inverse network. The three CNOTs share their control and commute,
/// so reversing them gives the same gates.
pub fn iqbwt_circuit() -> Circuit {
    let mut c = Circuit::new(4);
    c.cnot(0, 3).cnot(0, 2).cnot(0, 1);
    c
}

fn with_cells(tile: &BoolTile, bits: &[bool]) -> BoolTile {
    Tile2x2 { row: tile.row, col: tile.col, cells: [[bits[0], bits[1]], [bits[2], bits[3]]] }
}

/// Runs the transform on four already-loaded qubits in reading order.
pub fn qbwt_qubits(word: &[StateVector]) -> Result<[bool; 4]> {
    transform_qubits(&qbwt_circuit(), word)
}

fn transform_qubits(circuit: &Circuit, word: &[StateVector]) -> Result<[bool; 4]> {
    let bits: [bool; 4] = run_qubits(circuit, word)?
        .try_into()
        .map_err(|_| SimError::Structural("a tile holds four qubits".into()))?;
    Ok(bits)
}

fn transform(circuit: &Circuit, tile: &BoolTile) -> Result<BoolTile> {
    let word: Vec<StateVector> = tile.flat().iter().map(|&b| cl2qu_simple(b)).collect();
    Ok(with_cells(tile, &transform_qubits(circuit, &word)?))
}

pub fn qbwt(tile: &BoolTile) -> Result<BoolTile> {
    transform(&qbwt_circuit(), tile)
}

pub fn iqbwt(tile: &BoolTile) -> Result<BoolTile> {
    transform(&iqbwt_circuit(), tile)
}

/// Applies a tile transform in place across a plane. Only sixteen distinct
/// tiles exist, so each is simulated once.
fn transform_plane(circuit: &Circuit, plane: &BitPlane) -> Result<BitPlane> {
    let tiles = tiles_2x2(plane).map_err(|e| SimError::Structural(e.to_string()))?;
    let mut table: [Option<[bool; 4]>; 16] = [None; 16];
    let mut out = plane.clone();
    for t in tiles {
        let key = t.flat().iter().enumerate().fold(0, |k, (i, &b)| k | (b as usize) << i);
        let bits = match table[key] {
            Some(bits) => bits,
            None => {
                let bits = transform(circuit, &t)?.flat();
                table[key] = Some(bits);
                bits
            }
        };
        out.set(t.row, t.col, bits[0]);
        out.set(t.row, t.col + 1, bits[1]);
        out.set(t.row + 1, t.col, bits[2]);
        out.set(t.row + 1, t.col + 1, bits[3]);
    }
    Ok(out)
}

pub fn qbwt_plane(plane: &BitPlane) -> Result<BitPlane> {
    transform_plane(&qbwt_circuit(), plane)
}

pub fn iqbwt_plane(plane: &BitPlane) -> Result<BitPlane> {
    transform_plane(&iqbwt_circuit(), plane)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile(bits: [bool; 4]) -> BoolTile {
        Tile2x2 { row: 0, col: 0, cells: [[bits[0], bits[1]], [bits[2], bits[3]]] }
    }

    #[test]
    fn worked_example() {
        let out = qbwt(&tile([true, false, true, true])).unwrap();
        assert_eq!(out.cells, [[true, true], [false, false]]);
        assert_eq!(iqbwt(&out).unwrap().cells, [[true, false], [true, true]]);
        assert_eq!(qbwt(&tile([false; 4])).unwrap().cells, [[false; 2]; 2]);
    }

    #[test]
    fn odd_plane_rejected() {
        let p = BitPlane::new(2, 3, vec![false; 6], 7, crate::imagepipe::Channel::Gray).unwrap();
        assert!(matches!(qbwt_plane(&p), Err(SimError::Structural(_))));
    }
}
