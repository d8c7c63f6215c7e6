use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ir::{Circuit, GateOp, Instruction};
use super::passes::defer_measurements;
use super::validate::{validate, Diagnostic};
use crate::error::SimError;
use crate::simcore::{SparseState, StateVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("circuit failed validation ({} diagnostics)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RunMode {
    /// Repeated execution with collapse; every shot ends with a full-register
    /// Z measurement.
    Sampled { shots: u64, seed: u64 },
    /// Measurements deferred into quantum controls; returns the final state.
    Deferred,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcomes {
    /// Final-register bitstrings (`q[n-1]...q[0]`) and their counts.
    Counts(BTreeMap<String, u64>),
    State(StateVector),
}

impl Outcomes {
    pub fn counts(&self) -> Option<&BTreeMap<String, u64>> {
        match self {
            Outcomes::Counts(c) => Some(c),
            Outcomes::State(_) => None,
        }
    }

    pub fn state(&self) -> Option<&StateVector> {
        match self {
            Outcomes::State(s) => Some(s),
            Outcomes::Counts(_) => None,
        }
    }

    pub fn into_state(self) -> Option<StateVector> {
        match self {
            Outcomes::State(s) => Some(s),
            Outcomes::Counts(_) => None,
        }
    }
}

/// Runs a circuit after validating it.
pub fn run(
    circuit: &Circuit,
    mode: RunMode,
    initial: Option<&StateVector>,
) -> Result<Outcomes, RunError> {
    let diags = validate(circuit);
    if !diags.is_empty() {
        return Err(RunError::Invalid(diags));
    }
    if let Some(init) = initial {
        if init.n_qubits() != circuit.n_qubits {
            return Err(SimError::Structural(format!(
                "initial state has {} qubits, circuit has {}",
                init.n_qubits(),
                circuit.n_qubits
            ))
            .into());
        }
    }
    match mode {
        RunMode::Deferred => {
            let deferred = defer_measurements(circuit)?;
            Ok(Outcomes::State(final_state(&deferred, initial)?))
        }
        RunMode::Sampled { shots, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = BTreeMap::new();
            if circuit.is_dynamic() {
                for _ in 0..shots {
                    let state = run_shot(circuit, initial, &mut rng)?;
                    let idx = state.sample_index(&mut rng);
                    *counts.entry(state.bitstring(idx)).or_insert(0) += 1;
                }
            } else {
                let state = final_state(circuit, initial)?;
                let cdf: Vec<f64> = state
                    .probabilities()
                    .iter()
                    .scan(0.0, |acc, p| {
                        *acc += p;
                        Some(*acc)
                    })
                    .collect();
                let total = *cdf.last().unwrap_or(&1.0);
                let mut tally = vec![0u64; cdf.len()];
                for _ in 0..shots {
                    let draw: f64 = rng.random::<f64>() * total;
                    let idx = cdf.partition_point(|&c| c <= draw).min(cdf.len() - 1);
                    tally[idx] += 1;
                }
                for (idx, n) in tally.into_iter().enumerate().filter(|(_, n)| *n > 0) {
                    counts.insert(state.bitstring(idx), n);
                }
            }
            Ok(Outcomes::Counts(counts))
        }
    }
}

/// Applies the unitary part of a measurement-free circuit.
pub fn final_state(circuit: &Circuit, initial: Option<&StateVector>) -> Result<StateVector, SimError> {
    let fresh;
    let state = match initial {
        Some(s) => s,
        None => {
            fresh = StateVector::new(circuit.n_qubits)?;
            &fresh
        }
    };
    let mut ops = Vec::with_capacity(circuit.instructions.len());
    for (i, inst) in circuit.instructions.iter().enumerate() {
        match inst {
            Instruction::Gate(op) => ops.push(op),
            Instruction::Barrier { .. } => {}
            _ => {
                return Err(SimError::Structural(format!(
                    "instruction {i} needs classical control; run it sampled or deferred"
                )))
            }
        }
    }
    if state.n_qubits() < SPARSE_MIN_QUBITS {
        return apply_dense(state.clone(), &ops);
    }
    let mut sparse = SparseState::from_dense(state);
    for (k, op) in ops.iter().enumerate() {
        if sparse.support() > SPARSE_MAX_SUPPORT {
            return apply_dense(sparse.to_dense(), &ops[k..]);
        }
        sparse.apply(&op.gate.matrix(), &op.targets, &op.on_controls(), &op.anticontrols())?;
    }
    Ok(sparse.to_dense())
}

/// Registers at least this wide start on the sparse path.
const SPARSE_MIN_QUBITS: usize = 12;
/// Support past which a sparse run switches to dense storage.
const SPARSE_MAX_SUPPORT: usize = 1 << 10;

fn apply_dense(mut state: StateVector, ops: &[&GateOp]) -> Result<StateVector, SimError> {
    for op in ops {
        apply_op(&mut state, op)?;
    }
    Ok(state)
}

/// One collapsing execution. Returns the pre-readout state.
pub fn run_shot<R: Rng + ?Sized>(
    circuit: &Circuit,
    initial: Option<&StateVector>,
    rng: &mut R,
) -> Result<StateVector, SimError> {
    let mut state = match initial {
        Some(s) => s.clone(),
        None => StateVector::new(circuit.n_qubits)?,
    };
    let mut bits = vec![0u8; circuit.n_clbits];
    for inst in &circuit.instructions {
        match inst {
            Instruction::Gate(op) => apply_op(&mut state, op)?,
            Instruction::Measure { qubit, clbit } => bits[*clbit] = state.measure(*qubit, rng)?,
            Instruction::Reset { qubit } => {
                if state.measure(*qubit, rng)? == 1 {
                    state.apply(&crate::simcore::GateMatrix::pauli_x(), &[*qubit], &[], &[])?;
                }
            }
            Instruction::Barrier { .. } => {}
            Instruction::Conditional { clbit, op } => {
                if bits[*clbit] == 1 {
                    apply_op(&mut state, op)?;
                }
            }
        }
    }
    Ok(state)
}

pub(crate) fn apply_op(state: &mut StateVector, op: &GateOp) -> Result<(), SimError> {
    state.apply(&op.gate.matrix(), &op.targets, &op.on_controls(), &op.anticontrols())
}
