use std::collections::HashMap;

use super::{format_angle, EmitError, ParseError, Spelling};
use crate::circuit::{Circuit, Diagnostic, Gate, GateOp, Instruction};

use super::Dialect;

fn name(s: Spelling) -> &'static str {
    match s {
        Spelling::I => "I",
        Spelling::X => "X",
        Spelling::Y => "Y",
        Spelling::Z => "Z",
        Spelling::H => "H",
        Spelling::T => "T",
        Spelling::Swap => "SWAP",
        Spelling::Cnot => "CNOT",
        Spelling::Cz => "CZ",
        Spelling::Ccnot => "CCNOT",
        Spelling::Ry => "RY",
    }
}

fn gate_line(op: &GateOp, index: usize) -> Result<String, EmitError> {
    let (spelling, operands) = Spelling::of(op).ok_or_else(|| EmitError::UnsupportedGate {
        index,
        gate: op.mnemonic(),
        dialect: Dialect::Quil,
    })?;
    let mut line = match (&op.gate, spelling) {
        (Gate::Ry { theta }, Spelling::Ry) => format!("RY({})", format_angle(*theta)),
        _ => name(spelling).to_string(),
    };
    for q in operands {
        line.push(' ');
        line.push_str(&q.to_string());
    }
    Ok(line)
}

/// `RESET`, one `DECLARE rK BIT[1]` per classical bit, then one instruction
/// per line. Conditionals become a `JUMP-WHEN` / `LABEL` block.
pub(super) fn emit(circuit: &Circuit, diagnostics: &[Diagnostic]) -> Result<Vec<String>, EmitError> {
    let mut lines = vec!["RESET".to_string()];
    for d in diagnostics {
        lines.push(format!("# capability: {d}"));
    }
    for k in 0..circuit.n_clbits {
        lines.push(format!("DECLARE r{k} BIT[1]"));
    }
    let mut label = 1;
    for (i, inst) in circuit.instructions.iter().enumerate() {
        match inst {
            Instruction::Gate(op) => lines.push(gate_line(op, i)?),
            Instruction::Measure { qubit, clbit } => lines.push(format!("MEASURE {qubit} r{clbit}[0]")),
            Instruction::Reset { qubit } => lines.push(format!("RESET {qubit}")),
            Instruction::Barrier { qubits } => {
                let qs: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                lines.push(format!("PRAGMA BARRIER {}", qs.join(" ")).trim_end().to_string());
            }
            Instruction::Conditional { clbit, op } => {
                let (then, end) = (label, label + 1);
                label += 2;
                lines.push(format!("JUMP-WHEN @THEN{then} r{clbit}[0]"));
                lines.push(format!("JUMP @END{end}"));
                lines.push(format!("LABEL @THEN{then}"));
                lines.push(gate_line(op, i)?);
                lines.push(format!("LABEL @END{end}"));
            }
        }
    }
    Ok(lines)
}

struct Registers {
    offsets: HashMap<String, (usize, usize)>,
    total: usize,
}

impl Registers {
    fn bit(&self, token: &str, line: usize) -> Result<usize, ParseError> {
        let (name, idx) = split_indexed(token).ok_or_else(|| ParseError::new(line, format!("bad bit reference `{token}`")))?;
        let (offset, len) = self
            .offsets
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::new(line, format!("undeclared register `{name}`")))?;
        if idx >= len {
            return Err(ParseError::new(line, format!("bit {idx} outside register `{name}`")));
        }
        Ok(offset + idx)
    }
}

/// `name[idx]`
pub(super) fn split_indexed(token: &str) -> Option<(&str, usize)> {
    let open = token.find('[')?;
    let rest = token[open + 1..].strip_suffix(']')?;
    Some((&token[..open], rest.parse().ok()?))
}

fn qubit(token: &str, line: usize) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError::new(line, format!("expected qubit index, found `{token}`")))
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Option<GateOp>, ParseError> {
    let head = tokens[0];
    let (word, theta) = match head.strip_prefix("RY(").and_then(|r| r.strip_suffix(')')) {
        Some(arg) => {
            let theta: f64 = arg.parse().map_err(|_| ParseError::new(line, format!("bad angle `{arg}`")))?;
            ("RY", Some(theta))
        }
        None => (head, None),
    };
    let Some(spelling) = Spelling::ALL.iter().map(|(s, _)| *s).find(|s| name(*s) == word) else {
        return Ok(None);
    };
    if spelling == Spelling::Ry && theta.is_none() {
        return Err(ParseError::new(line, "RY needs an angle"));
    }
    let operands = tokens[1..].iter().map(|t| qubit(t, line)).collect::<Result<Vec<_>, _>>()?;
    if operands.len() != spelling.operands() {
        return Err(ParseError::new(
            line,
            format!("{word} takes {} qubits, got {}", spelling.operands(), operands.len()),
        ));
    }
    Ok(Some(spelling.build(&operands, theta)))
}

pub(super) fn parse(lines: &[String]) -> Result<Circuit, ParseError> {
    let mut regs = Registers { offsets: HashMap::new(), total: 0 };
    let mut instructions = Vec::new();
    let mut max_qubit = 0usize;
    let mut seen_header = false;
    let items: Vec<(usize, &str)> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let last = lines.len();
    let mut pos = 0;

    while pos < items.len() {
        let (n, line) = items[pos];
        pos += 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "RESET" if toks.len() == 1 => {
                if seen_header || !instructions.is_empty() {
                    return Err(ParseError::new(n, "global RESET only allowed as the first line"));
                }
                seen_header = true;
            }
            "RESET" => {
                let q = qubit(toks[1], n)?;
                max_qubit = max_qubit.max(q);
                instructions.push(Instruction::Reset { qubit: q });
            }
            "DECLARE" => {
                let (name, len) = match toks.as_slice() {
                    [_, name, "BIT"] => (name.to_string(), 1),
                    [_, name, ty] => {
                        let (kind, len) = split_indexed(ty).ok_or_else(|| ParseError::new(n, format!("bad type `{ty}`")))?;
                        if kind != "BIT" {
                            return Err(ParseError::new(n, format!("unsupported type `{kind}`")));
                        }
                        (name.to_string(), len)
                    }
                    _ => return Err(ParseError::new(n, "malformed DECLARE")),
                };
                regs.offsets.insert(name, (regs.total, len));
                regs.total += len;
            }
            "MEASURE" if toks.len() == 3 => {
                let q = qubit(toks[1], n)?;
                max_qubit = max_qubit.max(q);
                instructions.push(Instruction::Measure { qubit: q, clbit: regs.bit(toks[2], n)? });
            }
            "PRAGMA" if toks.get(1) == Some(&"BARRIER") => {
                let qubits = toks[2..].iter().map(|t| qubit(t, n)).collect::<Result<Vec<_>, _>>()?;
                max_qubit = qubits.iter().copied().fold(max_qubit, usize::max);
                instructions.push(Instruction::Barrier { qubits });
            }
            "JUMP-WHEN" if toks.len() == 3 => {
                let then = toks[1];
                let clbit = regs.bit(toks[2], n)?;
                let (jn, jump) = expect(&items, &mut pos, "JUMP", last)?;
                let end = *jump.get(1).ok_or_else(|| ParseError::new(jn, "JUMP without label"))?;
                let (ln, label) = expect(&items, &mut pos, "LABEL", last)?;
                if label.get(1) != Some(&then) {
                    return Err(ParseError::new(ln, format!("expected `LABEL {then}`")));
                }
                let Some(&(gn, gate_line)) = items.get(pos) else {
                    return Err(ParseError::new(last, "conditional block without a gate"));
                };
                pos += 1;
                let gtoks: Vec<&str> = gate_line.split_whitespace().collect();
                let op = parse_gate(&gtoks, gn)?
                    .ok_or_else(|| ParseError::new(gn, format!("unknown instruction `{}`", gtoks[0])))?;
                let (en, close) = expect(&items, &mut pos, "LABEL", last)?;
                if close.get(1) != Some(&end) {
                    return Err(ParseError::new(en, format!("expected `LABEL {end}`")));
                }
                max_qubit = op.qubits().fold(max_qubit, usize::max);
                instructions.push(Instruction::Conditional { clbit, op });
            }
            _ => match parse_gate(&toks, n)? {
                Some(op) => {
                    max_qubit = op.qubits().fold(max_qubit, usize::max);
                    instructions.push(Instruction::Gate(op));
                }
                None => return Err(ParseError::new(n, format!("unknown instruction `{}`", toks[0]))),
            },
        }
    }
    Ok(Circuit { n_qubits: max_qubit + 1, n_clbits: regs.total, instructions })
}

fn expect<'a>(
    items: &[(usize, &'a str)],
    pos: &mut usize,
    want: &str,
    last: usize,
) -> Result<(usize, Vec<&'a str>), ParseError> {
    let Some(&(n, line)) = items.get(*pos) else {
        return Err(ParseError::new(last, format!("unexpected end of program, expected `{want}`")));
    };
    *pos += 1;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.first() != Some(&want) {
        return Err(ParseError::new(n, format!("expected `{want}`, found `{line}`")));
    }
    Ok((n, toks))
}
