use std::collections::BTreeMap;

use num_complex::Complex64;

use super::gate::GateMatrix;
use super::state::{check_operands, mask, StateVector};
use crate::error::Result;

/// Statevector that stores only its nonzero amplitudes.
///
/// Gate application costs time proportional to the support rather than to
/// `2^n`, which pays off for basis-state inputs to reversible networks.
/// Amplitudes are kept in index order so arithmetic is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n_qubits: usize,
    amps: BTreeMap<usize, Complex64>,
}

impl SparseState {
    pub fn from_dense(state: &StateVector) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let amps = state.amplitudes().iter().enumerate().filter(|(_, a)| **a != zero).map(|(i, a)| (i, *a)).collect();
        Self { n_qubits: state.n_qubits(), amps }
    }

    pub fn to_dense(&self) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for (&i, &a) in &self.amps {
            amps[i] = a;
        }
        StateVector::from_raw(self.n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support(&self) -> usize {
        self.amps.len()
    }

    /// Same contract as [`StateVector::apply`].
    pub fn apply(&mut self, gate: &GateMatrix, targets: &[usize], controls: &[usize], anticontrols: &[usize]) -> Result<()> {
        check_operands(self.n_qubits, gate.arity(), targets, controls, anticontrols)?;
        let (tmask, cmask, amask) = (mask(targets), mask(controls), mask(anticontrols));
        let dim = gate.dim();
        let offsets: Vec<usize> = (0..dim)
            .map(|j| targets.iter().enumerate().filter(|(bit, _)| j >> bit & 1 == 1).fold(0, |acc, (_, &q)| acc | 1 << q))
            .collect();
        let m = gate.entries();
        let mut out: BTreeMap<usize, Complex64> = BTreeMap::new();
        for (&i, &a) in &self.amps {
            if i & cmask != cmask || i & amask != 0 {
                *out.entry(i).or_default() += a;
                continue;
            }
            let base = i & !tmask;
            let col = offsets.iter().position(|&off| base | off == i).expect("offsets cover every target pattern");
            for (r, off) in offsets.iter().enumerate() {
                let g = m[r * dim + col];
                if g != Complex64::new(0.0, 0.0) {
                    *out.entry(base | off).or_default() += g * a;
                }
            }
        }
        out.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        self.amps = out;
        Ok(())
    }
}
