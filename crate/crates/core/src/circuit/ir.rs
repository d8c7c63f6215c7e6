use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::simcore::GateMatrix;

/// Gate vocabulary carried by the IR. `Custom` exists so validation can
/// reject matrices that are not unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    T,
    #[serde(rename = "SWAP")]
    Swap,
    #[serde(rename = "RY")]
    Ry { theta: f64 },
    #[serde(rename = "CUSTOM")]
    Custom { matrix: GateMatrix },
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::Swap => 2,
            Gate::Custom { matrix } => matrix.arity(),
            _ => 1,
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        match self {
            Gate::I => GateMatrix::identity(),
            Gate::X => GateMatrix::pauli_x(),
            Gate::Y => GateMatrix::pauli_y(),
            Gate::Z => GateMatrix::pauli_z(),
            Gate::H => GateMatrix::hadamard(),
            Gate::T => GateMatrix::t(),
            Gate::Swap => GateMatrix::swap(),
            Gate::Ry { theta } => GateMatrix::ry(*theta),
            Gate::Custom { matrix } => matrix.clone(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Gate::I => "I",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::T => "T",
            Gate::Swap => "SWAP",
            Gate::Ry { .. } => "RY",
            Gate::Custom { matrix } => matrix.name(),
        }
    }
}

/// One control qubit. `anti` controls fire on `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub anti: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, anti: false }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, anti: true }
    }
}

/// A gate with its targets and an ordered control list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<Control>,
}

impl GateOp {
    pub fn new(gate: Gate, targets: Vec<usize>) -> Self {
        Self { gate, targets, controls: Vec::new() }
    }

    pub fn controlled(gate: Gate, targets: Vec<usize>, controls: Vec<Control>) -> Self {
        Self { gate, targets, controls }
    }

    /// Qubits that must be `|1>`.
    pub fn on_controls(&self) -> Vec<usize> {
        self.controls.iter().filter(|c| !c.anti).map(|c| c.qubit).collect()
    }

    /// Qubits that must be `|0>`.
    pub fn anticontrols(&self) -> Vec<usize> {
        self.controls.iter().filter(|c| c.anti).map(|c| c.qubit).collect()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().copied().chain(self.controls.iter().map(|c| c.qubit))
    }

    /// Name the dialects use for this gate, e.g. `CCNOT` for a doubly
    /// controlled X. Anticontrols count as controls.
    pub fn mnemonic(&self) -> String {
        match (&self.gate, self.controls.len()) {
            (Gate::X, 1) => "CNOT".into(),
            (Gate::X, 2) => "CCNOT".into(),
            (Gate::Z, 1) => "CZ".into(),
            (g, 0) => g.label().into(),
            (g, n) => format!("C{n}-{}", g.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instruction {
    Gate(GateOp),
    Measure { qubit: usize, clbit: usize },
    Reset { qubit: usize },
    Barrier { qubits: Vec<usize> },
    /// Fires `op` when classical bit `clbit` holds 1.
    Conditional { clbit: usize, op: GateOp },
}

impl Instruction {
    /// Every qubit the instruction reads or writes.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate(op) | Instruction::Conditional { op, .. } => op.qubits().collect(),
            Instruction::Measure { qubit, .. } | Instruction::Reset { qubit } => vec![*qubit],
            Instruction::Barrier { qubits } => qubits.clone(),
        }
    }
}

/// Ordered instruction list over `n_qubits` qubits and `n_clbits` classical bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    #[serde(default)]
    pub n_clbits: usize,
    #[serde(default)]
    pub instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, n_clbits: 0, instructions: Vec::new() }
    }

    pub fn with_clbits(n_qubits: usize, n_clbits: usize) -> Self {
        Self { n_qubits, n_clbits, instructions: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, inst: Instruction) -> &mut Self {
        self.instructions.push(inst);
        self
    }

    pub fn op(&mut self, op: GateOp) -> &mut Self {
        self.push(Instruction::Gate(op))
    }

    pub fn gate(&mut self, gate: Gate, q: usize) -> &mut Self {
        self.op(GateOp::new(gate, vec![q]))
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::H, q)
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::X, q)
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Z, q)
    }

    pub fn t(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::T, q)
    }

    pub fn ry(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(Gate::Ry { theta }, q)
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.op(GateOp::controlled(Gate::X, vec![target], vec![Control::on(control)]))
    }

    pub fn cz(&mut self, control: usize, target: usize) -> &mut Self {
        self.op(GateOp::controlled(Gate::Z, vec![target], vec![Control::on(control)]))
    }

    pub fn ccnot(&mut self, c1: usize, c2: usize, target: usize) -> &mut Self {
        self.op(GateOp::controlled(
            Gate::X,
            vec![target],
            vec![Control::on(c1), Control::on(c2)],
        ))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.op(GateOp::new(Gate::Swap, vec![a, b]))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.push(Instruction::Measure { qubit, clbit })
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Self {
        self.push(Instruction::Reset { qubit })
    }

    pub fn barrier(&mut self, qubits: Vec<usize>) -> &mut Self {
        self.push(Instruction::Barrier { qubits })
    }

    pub fn conditional(&mut self, clbit: usize, op: GateOp) -> &mut Self {
        self.push(Instruction::Conditional { clbit, op })
    }

    /// Appends every instruction of `other`, widening registers as needed.
    pub fn append(&mut self, other: &Circuit) -> &mut Self {
        self.n_qubits = self.n_qubits.max(other.n_qubits);
        self.n_clbits = self.n_clbits.max(other.n_clbits);
        self.instructions.extend(other.instructions.iter().cloned());
        self
    }

    pub fn has_anticontrols(&self) -> bool {
        self.instructions.iter().any(|i| match i {
            Instruction::Gate(op) | Instruction::Conditional { op, .. } => {
                op.controls.iter().any(|c| c.anti)
            }
            _ => false,
        })
    }

    /// True when the circuit measures, resets or branches classically.
    pub fn is_dynamic(&self) -> bool {
        self.instructions.iter().any(|i| {
            matches!(
                i,
                Instruction::Measure { .. } | Instruction::Reset { .. } | Instruction::Conditional { .. }
            )
        })
    }

    /// Gate tallies keyed by dialect mnemonic (`H`, `CNOT`, `CCNOT`, ...).
    pub fn gate_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for inst in &self.instructions {
            if let Instruction::Gate(op) | Instruction::Conditional { op, .. } = inst {
                *counts.entry(op.mnemonic()).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn gate_total(&self) -> usize {
        self.gate_counts().values().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
