use crate::circuit::{final_state, Circuit, Control, Gate, GateOp};
use crate::simcore::{GateMatrix, StateVector};
use crate::{Result, SimError};

/// Largest deviation from `|0>`/`|1>` accepted when reading qubits back.
pub const CBS_TOL: f64 = 1e-6;

/// Maps a bit onto `|0>` by a NOT applied only when the bit is set.
pub fn cl2qu_simple(bit: bool) -> StateVector {
    let mut q = StateVector::new(1).expect("one qubit");
    if bit {
        q.apply(&GateMatrix::pauli_x(), &[0], &[], &[]).expect("valid target");
    }
    q
}

fn cbs_bit(p1: f64, what: impl FnOnce() -> String) -> Result<bool> {
    if p1 <= CBS_TOL {
        Ok(false)
    } else if p1 >= 1.0 - CBS_TOL {
        Ok(true)
    } else {
        Err(SimError::Contract(format!("{} is not a basis state (P(1) = {p1:.6})", what())))
    }
}

/// Z-axis readout of independent single qubits. Only basis states are
/// accepted, which makes the result deterministic.
pub fn qu2cl(word: &[StateVector]) -> Result<Vec<bool>> {
    word.iter()
        .enumerate()
        .map(|(i, q)| {
            if q.n_qubits() != 1 {
                return Err(SimError::Structural(format!("word entry {i} has {} qubits", q.n_qubits())));
            }
            cbs_bit(q.prob_one(0)?, || format!("qubit {i}"))
        })
        .collect()
}

/// Readout of every qubit of a register, `q[0]` first.
pub fn qu2cl_register(state: &StateVector) -> Result<Vec<bool>> {
    state
        .marginals()
        .into_iter()
        .enumerate()
        .map(|(i, p)| cbs_bit(p, || format!("register qubit {i}")))
        .collect()
}

/// Qubits each exactly `|0>` or `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CbsWord {
    qubits: Vec<StateVector>,
}

impl CbsWord {
    pub fn new(qubits: Vec<StateVector>) -> Result<Self> {
        for (i, q) in qubits.iter().enumerate() {
            let off = if q.n_qubits() == 1 {
                let (a, b) = (q.amplitude(0).norm(), q.amplitude(1).norm());
                (a - 1.0).abs().max(b).min((b - 1.0).abs().max(a))
            } else {
                f64::INFINITY
            };
            if off > 1e-10 {
                return Err(SimError::Contract(format!("qubit {i} is not a basis state")));
            }
        }
        Ok(Self { qubits })
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self { qubits: bits.iter().map(|&b| cl2qu_simple(b)).collect() }
    }

    pub fn qubits(&self) -> &[StateVector] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn bits(&self) -> Vec<bool> {
        qu2cl(&self.qubits).expect("invariant: every qubit is a basis state")
    }
}

/// Tensor product with `word[j]` on register qubit `j`.
pub(crate) fn register(word: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = word.split_first().ok_or_else(|| SimError::Structural("empty word".into()))?;
    rest.iter().try_fold(first.clone(), |state, q| StateVector::tensor(q, &state))
}

/// Checks and loads single qubits into a register of `width` qubits, runs
/// `circuit`, and reads every qubit back.
pub(crate) fn run_qubits(circuit: &Circuit, word: &[StateVector]) -> Result<Vec<bool>> {
    qu2cl(word)?;
    let mut state = register(word)?;
    if state.n_qubits() < circuit.n_qubits {
        state = state.extend(circuit.n_qubits - state.n_qubits())?;
    }
    qu2cl_register(&final_state(circuit, Some(&state))?)
}

/// Loads `bits` through [`cl2qu_simple`], runs `circuit`, reads back all
/// qubits. Qubits beyond `bits.len()` start as `|0>` ancillas.
pub fn run_cbs(circuit: &Circuit, bits: &[bool]) -> Result<Vec<bool>> {
    let word: Vec<StateVector> = bits.iter().map(|&b| cl2qu_simple(b)).collect();
    run_qubits(circuit, &word)
}

/// States after each stage of the superdense intake, two qubits with `q[1]`
/// as the first (most significant) qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperdenseTrace {
    pub bell: StateVector,
    pub after_x: StateVector,
    pub after_z: StateVector,
    pub after_cnot: StateVector,
    pub output: StateVector,
    pub bits: (bool, bool),
}

/// Intake of two bits via a Bell pair: X on the first qubit when `b2` is
/// set, Z when `b1` is set, then CNOT and H. The output is `|b1 b2>`.
pub fn cl2qu_superdense(b1: bool, b2: bool) -> Result<SuperdenseTrace> {
    let (first, second) = (1, 0);
    let step = |state: &StateVector, op: GateOp| {
        let mut c = Circuit::new(2);
        c.op(op);
        final_state(&c, Some(state))
    };
    let cnot = || GateOp::controlled(Gate::X, vec![second], vec![Control::on(first)]);
    let zero = StateVector::new(2)?;
    let bell = step(&step(&zero, GateOp::new(Gate::H, vec![first]))?, cnot())?;
    let after_x = if b2 { step(&bell, GateOp::new(Gate::X, vec![first]))? } else { bell.clone() };
    let after_z = if b1 { step(&after_x, GateOp::new(Gate::Z, vec![first]))? } else { after_x.clone() };
    let after_cnot = step(&after_z, cnot())?;
    let output = step(&after_cnot, GateOp::new(Gate::H, vec![first]))?;
    let read = qu2cl_register(&output)?;
    Ok(SuperdenseTrace { bell, after_x, after_z, after_cnot, output, bits: (read[first], read[second]) })
}
