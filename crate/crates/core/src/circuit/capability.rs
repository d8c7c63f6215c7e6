use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ir::{Circuit, Instruction};
use super::validate::{Diagnostic, DiagnosticKind};
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResetPolicy {
    No,
    /// Only before any other instruction touches the qubit.
    StartOnly,
    Anywhere,
}

/// Which of the problematic constructs a backend accepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityProfile {
    pub name: String,
    pub allows_barrier: bool,
    pub allows_reset: ResetPolicy,
    pub allows_conditional: bool,
    pub allows_mid_circuit_measure: bool,
}

impl CapabilityProfile {
    /// Barrier yes, reset no, if-then-else no, measurement only at the end.
    pub fn dialect_a() -> Self {
        Self {
            name: "dialect-A".into(),
            allows_barrier: true,
            allows_reset: ResetPolicy::No,
            allows_conditional: false,
            allows_mid_circuit_measure: false,
        }
    }

    /// Barrier no, reset at start only, if-then-else no, measurement only
    /// at the end.
    pub fn dialect_b() -> Self {
        Self {
            name: "dialect-B".into(),
            allows_barrier: false,
            allows_reset: ResetPolicy::StartOnly,
            allows_conditional: false,
            allows_mid_circuit_measure: false,
        }
    }

    /// `dialect-B` on its simulator, where classical jumps and mid-circuit
    /// measurement are available.
    pub fn dialect_b_sim() -> Self {
        Self {
            name: "dialect-B-sim".into(),
            allows_conditional: true,
            allows_mid_circuit_measure: true,
            ..Self::dialect_b()
        }
    }

    /// Everything allowed.
    pub fn permissive() -> Self {
        Self {
            name: "permissive".into(),
            allows_barrier: true,
            allows_reset: ResetPolicy::Anywhere,
            allows_conditional: true,
            allows_mid_circuit_measure: true,
        }
    }

    pub fn builtins() -> Vec<Self> {
        vec![Self::dialect_a(), Self::dialect_b(), Self::dialect_b_sim(), Self::permissive()]
    }

    pub fn builtin(name: &str) -> Option<Self> {
        Self::builtins().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
    }

    /// A built-in name, or a path to a JSON profile.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if let Some(p) = Self::builtin(name_or_path) {
            return Ok(p);
        }
        Self::load(Path::new(name_or_path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Parameter(format!("cannot read profile {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| SimError::Parameter(format!("bad profile {}: {e}", path.display())))
    }
}

/// One diagnostic per instruction the profile cannot execute.
pub fn capability_check(circuit: &Circuit, profile: &CapabilityProfile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut touched = vec![false; circuit.n_qubits];
    let insts = &circuit.instructions;
    for (i, inst) in insts.iter().enumerate() {
        let at = Some(i);
        match inst {
            Instruction::Barrier { .. } if !profile.allows_barrier => out.push(Diagnostic::new(
                DiagnosticKind::BarrierNotAllowed,
                at,
                format!("barrier is not supported by {}", profile.name),
            )),
            Instruction::Reset { qubit } => {
                let used = touched.get(*qubit).copied().unwrap_or(false);
                let bad = match profile.allows_reset {
                    ResetPolicy::No => true,
                    ResetPolicy::StartOnly => used,
                    ResetPolicy::Anywhere => false,
                };
                if bad {
                    out.push(Diagnostic::new(
                        DiagnosticKind::ResetNotAllowed,
                        at,
                        format!("qubit reset of {qubit} is not supported here by {}", profile.name),
                    ));
                }
            }
            Instruction::Conditional { .. } if !profile.allows_conditional => {
                out.push(Diagnostic::new(
                    DiagnosticKind::ConditionalNotAllowed,
                    at,
                    format!("if-then-else is not supported by {}", profile.name),
                ))
            }
            Instruction::Measure { qubit, clbit } if !profile.allows_mid_circuit_measure
                && is_mid_circuit(&insts[i + 1..], *qubit, *clbit) => {
                    out.push(Diagnostic::new(
                        DiagnosticKind::MidCircuitMeasureNotAllowed,
                        at,
                        format!("mid-circuit measurement of qubit {qubit} is not supported by {}", profile.name),
                    ));
                }
            _ => {}
        }
        if !matches!(inst, Instruction::Barrier { .. }) {
            for q in inst.qubits() {
                if let Some(t) = touched.get_mut(q) {
                    *t = true;
                }
            }
        }
    }
    out
}

/// A measurement is mid-circuit when a later instruction acts on the
/// measured qubit or reads its classical bit.
fn is_mid_circuit(rest: &[Instruction], qubit: usize, clbit: usize) -> bool {
    rest.iter().any(|inst| match inst {
        Instruction::Conditional { clbit: c, op } => *c == clbit || op.qubits().any(|q| q == qubit),
        Instruction::Gate(op) => op.qubits().any(|q| q == qubit),
        Instruction::Reset { qubit: q } => *q == qubit,
        Instruction::Measure { .. } | Instruction::Barrier { .. } => false,
    })
}
