//! Novel enhanced quantum representation for 2x2 grayscale tiles.
//!
//! Ten qubits: `q[0..8]` hold the 8-bit gray code with `q[0]` carrying the
//! most significant bit, `q[8]` is the X coordinate and `q[9]` the Y
//! coordinate. Each set bit of each pixel costs one doubly-controlled X whose
//! controls select that pixel's `|YX>`.

mod recover;
mod teleport;

pub use recover::{neqr_measure_recover, SampleLog, TileSample};
pub use teleport::{
    neqr_teleport_branch, neqr_teleport_test, teleport_circuit, Channel, TeleportAmplitude, TeleportReport, TELEPORT_QUBITS,
};

use crate::circuit::{final_state, Circuit, Control, Gate, GateOp};
use crate::imagepipe::Tile2x2;
use crate::simcore::{concurrence, partial_trace, StateVector};
use crate::{Result, SimError};

pub const VALUE_BITS: usize = 8;
pub const X_QUBIT: usize = 8;
pub const Y_QUBIT: usize = 9;
pub const NEQR_QUBITS: usize = 10;

/// Gray values in pixel order (Y,X) = (0,0), (0,1), (1,0), (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeqrTile {
    pub values: [u8; 4],
}

impl NeqrTile {
    /// Checks that every value fits in eight bits.
    pub fn new(values: [u32; 4]) -> Result<Self> {
        let mut out = [0u8; 4];
        for (o, v) in out.iter_mut().zip(values) {
            *o = u8::try_from(v).map_err(|_| SimError::Parameter(format!("gray value {v} exceeds 255")))?;
        }
        Ok(Self { values: out })
    }

    pub fn get(&self, y: usize, x: usize) -> u8 {
        self.values[2 * y + x]
    }
}

impl From<[u8; 4]> for NeqrTile {
    fn from(values: [u8; 4]) -> Self {
        Self { values }
    }
}

impl From<Tile2x2<u8>> for NeqrTile {
    fn from(t: Tile2x2<u8>) -> Self {
        Self { values: t.flat() }
    }
}

/// Value qubit holding bit `b` of a gray level (bit 7 = MSB goes to `q[0]`).
pub fn value_qubit(b: usize) -> usize {
    VALUE_BITS - 1 - b
}

/// Basis index of `|f>|YX>` in the ten-qubit register.
pub fn basis_index(value: u8, y: usize, x: usize) -> usize {
    let code: usize = (0..VALUE_BITS)
        .filter(|b| value >> b & 1 == 1)
        .map(|b| 1 << value_qubit(b))
        .sum();
    code | x << X_QUBIT | y << Y_QUBIT
}

/// The encoding circuit, with anticontrols left in place.
pub fn neqr_build(tile: &NeqrTile) -> Circuit {
    let mut c = Circuit::new(NEQR_QUBITS);
    c.h(X_QUBIT).h(Y_QUBIT);
    for y in 0..2 {
        for x in 0..2 {
            let select = |q, bit| if bit == 1 { Control::on(q) } else { Control::off(q) };
            let controls = vec![select(Y_QUBIT, y), select(X_QUBIT, x)];
            let value = tile.get(y, x);
            for k in (0..VALUE_BITS).filter(|&k| value >> (VALUE_BITS - 1 - k) & 1 == 1) {
                c.op(GateOp::controlled(Gate::X, vec![k], controls.clone()));
            }
        }
    }
    c
}

pub fn neqr_state(tile: &NeqrTile) -> Result<StateVector> {
    final_state(&neqr_build(tile), None)
}

/// P(1) for every qubit, `q[0]` first.
pub fn neqr_marginals(state: &StateVector) -> Vec<f64> {
    state.marginals()
}

/// Pairwise concurrence of every two-qubit reduced state. The diagonal is
/// `None`.
pub fn neqr_entanglement_matrix(state: &StateVector) -> Result<Vec<Vec<Option<f64>>>> {
    let n = state.n_qubits();
    let mut grid = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = concurrence(&partial_trace(state, &[i, j])?)?;
            grid[i][j] = Some(c);
            grid[j][i] = Some(c);
        }
    }
    Ok(grid)
}
