use std::collections::HashMap;

use super::interface::{cl2qu_simple, run_qubits};
use crate::circuit::Circuit;
use crate::imagepipe::BitPlane;
use crate::simcore::{StateVector, MAX_QUBITS};
use crate::{Result, SimError};

/// Longest column: inputs plus one ancilla per bit must fit the simulator.
pub const MAX_COLUMN: usize = MAX_QUBITS / 2;

/// Inputs `I^d` on `q[d]`, outputs `J^d` on ancilla `q[D + d]`; index 0 is
/// the most significant bit.
///
/// `J^d` is accumulated from a CNOT of `I^d` and one Toffoli per earlier
/// output. Afterwards a CNOT from `J^d` onto `I^d` (for `d >= 1`) leaves
/// `K^d = I^d xor J^d` on the input wire, and `K^0 = J^0 = I^0` stays put.
pub fn qbop_circuit(depth: usize) -> Circuit {
    let mut c = Circuit::new(2 * depth);
    let j = |d: usize| depth + d;
    for d in 0..depth {
        c.cnot(d, j(d));
        for k in 0..d {
            c.ccnot(d, j(k), j(d));
        }
    }
    for d in 1..depth {
        c.cnot(j(d), d);
    }
    c
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 || depth > MAX_COLUMN {
        return Err(SimError::Size(format!("column of {depth} bits, supported 1..={MAX_COLUMN}")));
    }
    Ok(())
}

/// Runs the network on already-loaded input qubits. Returns `(J, K)`.
pub fn qbop_qubits(word: &[StateVector]) -> Result<(Vec<bool>, Vec<bool>)> {
    let depth = word.len();
    check_depth(depth)?;
    let out = run_qubits(&qbop_circuit(depth), word)?;
    Ok((out[depth..].to_vec(), out[..depth].to_vec()))
}

pub fn qbop(column: &[bool]) -> Result<(Vec<bool>, Vec<bool>)> {
    let word: Vec<StateVector> = column.iter().map(|&b| cl2qu_simple(b)).collect();
    qbop_qubits(&word)
}

/// `I^d = J^d or K^d`.
pub fn qbop_reconstruct(j: &[bool], k: &[bool]) -> Result<Vec<bool>> {
    if j.len() != k.len() {
        return Err(SimError::Structural(format!("J has {} bits, K has {}", j.len(), k.len())));
    }
    Ok(j.iter().zip(k).map(|(a, b)| a | b).collect())
}

/// Per-pixel QBOP over a stack of planes. Columns run from the highest plane
/// index down, so `J` of the MSB plane is the first output. Returned planes
/// keep the input order and indices. Repeated columns are simulated once.
pub fn qbop_plane(planes: &[BitPlane]) -> Result<(Vec<BitPlane>, Vec<BitPlane>)> {
    let first = planes.first().ok_or_else(|| SimError::Structural("no planes".into()))?;
    check_depth(planes.len())?;
    if planes.iter().any(|p| p.rows != first.rows || p.cols != first.cols) {
        return Err(SimError::Structural("planes differ in shape".into()));
    }
    let mut order: Vec<usize> = (0..planes.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(planes[i].index));

    let mut j_planes = planes.to_vec();
    let mut k_planes = planes.to_vec();
    let mut memo: HashMap<Vec<bool>, (Vec<bool>, Vec<bool>)> = HashMap::new();
    for px in 0..first.bits.len() {
        let column: Vec<bool> = order.iter().map(|&i| planes[i].bits[px]).collect();
        if !memo.contains_key(&column) {
            let jk = qbop(&column)?;
            memo.insert(column.clone(), jk);
        }
        let (j, k) = &memo[&column];
        for (pos, &i) in order.iter().enumerate() {
            j_planes[i].bits[px] = j[pos];
            k_planes[i].bits[px] = k[pos];
        }
    }
    Ok((j_planes, k_planes))
}
