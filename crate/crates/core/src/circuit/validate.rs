use std::fmt;

use serde::{Deserialize, Serialize};

use super::ir::{Circuit, GateOp, Instruction};
use crate::simcore::{MAX_QUBITS, UNITARY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    NonUnitaryGate,
    MalformedGate,
    RegisterSize,
    QubitOutOfRange,
    OverlappingQubits,
    ArityMismatch,
    ClbitOutOfRange,
    UnmeasuredClbit,
    BarrierNotAllowed,
    ResetNotAllowed,
    ConditionalNotAllowed,
    MidCircuitMeasureNotAllowed,
}

/// A problem found in a circuit, tied to an instruction index when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub instruction: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, instruction: Option<usize>, message: impl Into<String>) -> Self {
        Self { kind, instruction, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.instruction {
            Some(i) => write!(f, "instruction {i}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Structural and unitarity checks. Empty output means the circuit can run.
pub fn validate(circuit: &Circuit) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if circuit.n_qubits == 0 || circuit.n_qubits > MAX_QUBITS {
        out.push(Diagnostic::new(
            DiagnosticKind::RegisterSize,
            None,
            format!("register of {} qubits outside 1..={MAX_QUBITS}", circuit.n_qubits),
        ));
    }
    let mut written = vec![false; circuit.n_clbits];
    for (i, inst) in circuit.instructions.iter().enumerate() {
        let at = Some(i);
        match inst {
            Instruction::Gate(op) => check_op(circuit.n_qubits, op, i, &mut out),
            Instruction::Conditional { clbit, op } => {
                check_op(circuit.n_qubits, op, i, &mut out);
                if *clbit >= circuit.n_clbits {
                    out.push(Diagnostic::new(
                        DiagnosticKind::ClbitOutOfRange,
                        at,
                        format!("classical bit {clbit} not declared"),
                    ));
                } else if !written[*clbit] {
                    out.push(Diagnostic::new(
                        DiagnosticKind::UnmeasuredClbit,
                        at,
                        format!("conditional reads classical bit {clbit} before any measurement writes it"),
                    ));
                }
            }
            Instruction::Measure { qubit, clbit } => {
                check_qubit(circuit.n_qubits, *qubit, i, &mut out);
                if *clbit >= circuit.n_clbits {
                    out.push(Diagnostic::new(
                        DiagnosticKind::ClbitOutOfRange,
                        at,
                        format!("classical bit {clbit} not declared"),
                    ));
                } else {
                    written[*clbit] = true;
                }
            }
            Instruction::Reset { qubit } => check_qubit(circuit.n_qubits, *qubit, i, &mut out),
            Instruction::Barrier { qubits } => {
                for &q in qubits {
                    check_qubit(circuit.n_qubits, q, i, &mut out);
                }
            }
        }
    }
    out
}

fn check_qubit(n: usize, q: usize, i: usize, out: &mut Vec<Diagnostic>) {
    if q >= n {
        out.push(Diagnostic::new(
            DiagnosticKind::QubitOutOfRange,
            Some(i),
            format!("qubit {q} out of range for {n} qubits"),
        ));
    }
}

fn check_op(n: usize, op: &GateOp, i: usize, out: &mut Vec<Diagnostic>) {
    let at = Some(i);
    if let super::ir::Gate::Custom { matrix } = &op.gate {
        let dim = 1usize << matrix.arity().min(8);
        if matrix.entries().len() != dim * dim {
            out.push(Diagnostic::new(
                DiagnosticKind::MalformedGate,
                at,
                format!("gate `{}` has {} entries for arity {}", matrix.name(), matrix.entries().len(), matrix.arity()),
            ));
            return;
        }
        if !matrix.is_unitary(UNITARY_TOL) {
            out.push(Diagnostic::new(
                DiagnosticKind::NonUnitaryGate,
                at,
                format!("non-unitary gate `{}`", matrix.name()),
            ));
        }
    }
    if op.targets.len() != op.gate.arity() {
        out.push(Diagnostic::new(
            DiagnosticKind::ArityMismatch,
            at,
            format!("gate {} takes {} targets, got {}", op.gate.label(), op.gate.arity(), op.targets.len()),
        ));
    }
    let mut seen = Vec::new();
    for q in op.qubits() {
        check_qubit(n, q, i, out);
        if seen.contains(&q) {
            out.push(Diagnostic::new(
                DiagnosticKind::OverlappingQubits,
                at,
                format!("qubit {q} used more than once in one gate"),
            ));
        }
        seen.push(q);
    }
}
