use std::collections::HashMap;

use super::quil::split_indexed;
use super::{format_angle, Dialect, EmitError, ParseError, Spelling};
use crate::circuit::{Circuit, Diagnostic, Gate, GateOp, Instruction};

fn name(s: Spelling) -> &'static str {
    match s {
        Spelling::I => "id",
        Spelling::X => "x",
        Spelling::Y => "y",
        Spelling::Z => "z",
        Spelling::H => "h",
        Spelling::T => "t",
        Spelling::Swap => "swap",
        Spelling::Cnot => "cx",
        Spelling::Cz => "cz",
        Spelling::Ccnot => "ccx",
        Spelling::Ry => "ry",
    }
}

fn gate_stmt(op: &GateOp, index: usize) -> Result<String, EmitError> {
    let (spelling, operands) = Spelling::of(op).ok_or_else(|| EmitError::UnsupportedGate {
        index,
        gate: op.mnemonic(),
        dialect: Dialect::Qasm,
    })?;
    let head = match (&op.gate, spelling) {
        (Gate::Ry { theta }, Spelling::Ry) => format!("ry({})", format_angle(*theta)),
        _ => name(spelling).to_string(),
    };
    Ok(format!("{head} {};", qubit_list(&operands)))
}

fn qubit_list(qs: &[usize]) -> String {
    qs.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(",")
}

/// OpenQASM 2 header, `qreg q[n]`, one single-bit `creg cK[1]` per classical
/// bit so that `if(cK==1)` tests exactly one measurement.
pub(super) fn emit(circuit: &Circuit, diagnostics: &[Diagnostic]) -> Result<Vec<String>, EmitError> {
    let mut lines = vec!["OPENQASM 2.0;".to_string(), "include \"qelib1.inc\";".to_string()];
    for d in diagnostics {
        lines.push(format!("// capability: {d}"));
    }
    lines.push(format!("qreg q[{}];", circuit.n_qubits));
    for k in 0..circuit.n_clbits {
        lines.push(format!("creg c{k}[1];"));
    }
    for (i, inst) in circuit.instructions.iter().enumerate() {
        lines.push(match inst {
            Instruction::Gate(op) => gate_stmt(op, i)?,
            Instruction::Measure { qubit, clbit } => format!("measure q[{qubit}] -> c{clbit}[0];"),
            Instruction::Reset { qubit } => format!("reset q[{qubit}];"),
            Instruction::Barrier { qubits } => format!("barrier {};", qubit_list(qubits)),
            Instruction::Conditional { clbit, op } => format!("if(c{clbit}==1) {}", gate_stmt(op, i)?),
        });
    }
    Ok(lines)
}

fn qubit_ref(token: &str, line: usize, n_qubits: usize) -> Result<usize, ParseError> {
    match split_indexed(token.trim()) {
        Some(("q", idx)) if idx < n_qubits => Ok(idx),
        Some(("q", idx)) => Err(ParseError::new(line, format!("q[{idx}] outside qreg"))),
        _ => Err(ParseError::new(line, format!("expected q[i], found `{token}`"))),
    }
}

struct Cregs {
    offsets: HashMap<String, (usize, usize)>,
    total: usize,
}

impl Cregs {
    fn bit(&self, token: &str, line: usize) -> Result<usize, ParseError> {
        let (name, idx) =
            split_indexed(token.trim()).ok_or_else(|| ParseError::new(line, format!("bad bit `{token}`")))?;
        match self.offsets.get(name) {
            Some(&(off, len)) if idx < len => Ok(off + idx),
            _ => Err(ParseError::new(line, format!("undeclared bit `{token}`"))),
        }
    }

    /// A creg usable in `if(name==1)`: it must hold exactly one bit.
    fn single(&self, name: &str, line: usize) -> Result<usize, ParseError> {
        match self.offsets.get(name) {
            Some(&(off, 1)) => Ok(off),
            Some(_) => Err(ParseError::new(line, format!("condition on multi-bit register `{name}`"))),
            None => Err(ParseError::new(line, format!("undeclared register `{name}`"))),
        }
    }
}

fn parse_gate(stmt: &str, line: usize, n_qubits: usize) -> Result<GateOp, ParseError> {
    let (head, args) = stmt
        .split_once(char::is_whitespace)
        .ok_or_else(|| ParseError::new(line, format!("malformed statement `{stmt}`")))?;
    let (word, theta) = match head.strip_prefix("ry(").and_then(|r| r.strip_suffix(')')) {
        Some(a) => (
            "ry",
            Some(a.parse::<f64>().map_err(|_| ParseError::new(line, format!("bad angle `{a}`")))?),
        ),
        None => (head, None),
    };
    let spelling = Spelling::ALL
        .iter()
        .map(|(s, _)| *s)
        .find(|s| name(*s) == word)
        .ok_or_else(|| ParseError::new(line, format!("unknown instruction `{head}`")))?;
    if spelling == Spelling::Ry && theta.is_none() {
        return Err(ParseError::new(line, "ry needs an angle"));
    }
    let operands = args
        .split(',')
        .map(|t| qubit_ref(t, line, n_qubits))
        .collect::<Result<Vec<_>, _>>()?;
    if operands.len() != spelling.operands() {
        return Err(ParseError::new(line, format!("{word} takes {} qubits", spelling.operands())));
    }
    Ok(spelling.build(&operands, theta))
}

pub(super) fn parse(lines: &[String]) -> Result<Circuit, ParseError> {
    let mut n_qubits: Option<usize> = None;
    let mut cregs = Cregs { offsets: HashMap::new(), total: 0 };
    let mut instructions = Vec::new();
    for (i, raw) in lines.iter().enumerate() {
        let n = i + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        for stmt in code.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
                continue;
            }
            if let Some(decl) = stmt.strip_prefix("qreg ") {
                match split_indexed(decl.trim()) {
                    Some(("q", len)) if len > 0 => n_qubits = Some(len),
                    _ => return Err(ParseError::new(n, format!("unsupported qreg `{decl}`"))),
                }
                continue;
            }
            if let Some(decl) = stmt.strip_prefix("creg ") {
                let (name, len) =
                    split_indexed(decl.trim()).ok_or_else(|| ParseError::new(n, format!("bad creg `{decl}`")))?;
                cregs.offsets.insert(name.to_string(), (cregs.total, len));
                cregs.total += len;
                continue;
            }
            let nq = n_qubits.ok_or_else(|| ParseError::new(n, "statement before qreg declaration"))?;
            if let Some(rest) = stmt.strip_prefix("measure ") {
                let (q, c) = rest
                    .split_once("->")
                    .ok_or_else(|| ParseError::new(n, "measure needs `->`"))?;
                instructions.push(Instruction::Measure { qubit: qubit_ref(q, n, nq)?, clbit: cregs.bit(c, n)? });
            } else if let Some(rest) = stmt.strip_prefix("reset ") {
                instructions.push(Instruction::Reset { qubit: qubit_ref(rest, n, nq)? });
            } else if let Some(rest) = stmt.strip_prefix("barrier ") {
                let qubits = rest.split(',').map(|t| qubit_ref(t, n, nq)).collect::<Result<Vec<_>, _>>()?;
                instructions.push(Instruction::Barrier { qubits });
            } else if let Some(rest) = stmt.strip_prefix("if(") {
                let (cond, body) = rest
                    .split_once(')')
                    .ok_or_else(|| ParseError::new(n, "unterminated condition"))?;
                let (reg, value) = cond
                    .split_once("==")
                    .ok_or_else(|| ParseError::new(n, "condition needs `==`"))?;
                if value.trim() != "1" {
                    return Err(ParseError::new(n, "only `==1` conditions are supported"));
                }
                let clbit = cregs.single(reg.trim(), n)?;
                let op = parse_gate(body.trim(), n, nq)?;
                instructions.push(Instruction::Conditional { clbit, op });
            } else {
                instructions.push(Instruction::Gate(parse_gate(stmt, n, nq)?));
            }
        }
    }
    let n_qubits = n_qubits.ok_or_else(|| ParseError::new(lines.len(), "missing qreg declaration"))?;
    Ok(Circuit { n_qubits, n_clbits: cregs.total, instructions })
}
