use super::ir::{Circuit, Control, GateOp, Instruction};
use crate::error::{Result, SimError};

/// Rewrites every anticontrol as a control wrapped in X gates on that qubit.
/// Control order is kept, so `X 9; CCNOT 9 8 5; X 9` comes out of an
/// anticontrol on 9 and a control on 8.
pub fn lower_anticontrols(circuit: &Circuit) -> Circuit {
    let mut out = Circuit { instructions: Vec::with_capacity(circuit.len()), ..circuit.clone() };
    for inst in &circuit.instructions {
        let (op, clbit) = match inst {
            Instruction::Gate(op) => (op, None),
            Instruction::Conditional { clbit, op } => (op, Some(*clbit)),
            other => {
                out.push(other.clone());
                continue;
            }
        };
        let anti = op.anticontrols();
        if anti.is_empty() {
            out.push(inst.clone());
            continue;
        }
        for &q in &anti {
            out.x(q);
        }
        let lowered = GateOp {
            controls: op.controls.iter().map(|c| Control::on(c.qubit)).collect(),
            ..op.clone()
        };
        match clbit {
            Some(clbit) => out.conditional(clbit, lowered),
            None => out.op(lowered),
        };
        for &q in &anti {
            out.x(q);
        }
    }
    out
}

/// Replaces measurement plus classical control by quantum control on the
/// measured qubit.
///
/// Each classical bit may be written by at most one measurement, and a
/// measured qubit may afterwards only serve as a control. Resets are
/// dropped when they act on a qubit nothing has touched yet and rejected
/// otherwise.
pub fn defer_measurements(circuit: &Circuit) -> Result<Circuit> {
    let mut source: Vec<Option<usize>> = vec![None; circuit.n_clbits];
    let mut measured = vec![false; circuit.n_qubits];
    let mut touched = vec![false; circuit.n_qubits];
    let mut out = Circuit { instructions: Vec::with_capacity(circuit.len()), ..circuit.clone() };

    let check_targets = |op: &GateOp, measured: &[bool], i: usize| -> Result<()> {
        if let Some(&q) = op.targets.iter().find(|&&q| measured.get(q).copied().unwrap_or(false)) {
            return Err(SimError::Structural(format!(
                "instruction {i}: measured qubit {q} is modified after its measurement"
            )));
        }
        Ok(())
    };

    for (i, inst) in circuit.instructions.iter().enumerate() {
        for q in inst.qubits() {
            if q >= circuit.n_qubits {
                return Err(SimError::Structural(format!("instruction {i}: qubit {q} out of range")));
            }
        }
        match inst {
            Instruction::Gate(op) => {
                check_targets(op, &measured, i)?;
                out.op(op.clone());
            }
            Instruction::Measure { qubit, clbit } => {
                let slot = source.get_mut(*clbit).ok_or_else(|| {
                    SimError::Structural(format!("instruction {i}: classical bit {clbit} not declared"))
                })?;
                if slot.is_some() {
                    return Err(SimError::Structural(format!(
                        "classical bit {clbit} is written by more than one measurement"
                    )));
                }
                *slot = Some(*qubit);
                measured[*qubit] = true;
            }
            Instruction::Conditional { clbit, op } => {
                check_targets(op, &measured, i)?;
                let q = source.get(*clbit).copied().flatten().ok_or_else(|| {
                    SimError::Structural(format!(
                        "instruction {i}: classical bit {clbit} is read before it is measured"
                    ))
                })?;
                let mut controls = vec![Control::on(q)];
                controls.extend(op.controls.iter().copied());
                out.op(GateOp { controls, ..op.clone() });
            }
            Instruction::Reset { qubit } => {
                if touched[*qubit] {
                    return Err(SimError::Structural(format!(
                        "instruction {i}: reset of qubit {qubit} after use cannot be deferred"
                    )));
                }
            }
            Instruction::Barrier { .. } => {
                out.push(inst.clone());
            }
        }
        for q in inst.qubits() {
            touched[q] = true;
        }
    }
    Ok(out)
}
