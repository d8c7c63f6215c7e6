//! Text emission in a quil-like and a QASM-like dialect, plus a parser for
//! exactly the subset the emitter produces.
//!
//! Supported gates: `I X Y Z H T SWAP CNOT CZ CCNOT RY(theta)`. Anticontrols
//! are lowered to X-conjugated controls before emission.

mod qasm;
mod quil;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{capability_check, lower_anticontrols, CapabilityProfile, Circuit, Diagnostic, Gate, GateOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Qasm,
    Quil,
}

impl Dialect {
    pub fn extension(self) -> &'static str {
        match self {
            Dialect::Qasm => "qasm",
            Dialect::Quil => "quil",
        }
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qasm" => Ok(Dialect::Qasm),
            "quil" => Ok(Dialect::Quil),
            other => Err(format!("unknown dialect `{other}`")),
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Program text in one dialect, one statement per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialectText {
    pub dialect: Dialect,
    pub lines: Vec<String>,
}

impl DialectText {
    pub fn new(dialect: Dialect, text: &str) -> Self {
        Self { dialect, lines: text.lines().map(str::to_string).collect() }
    }

    /// UTF-8, LF line endings, trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

impl fmt::Display for DialectText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmitError {
    #[error("instruction {index}: gate `{gate}` has no {dialect} spelling")]
    UnsupportedGate { index: usize, gate: String, dialect: Dialect },
    #[error("circuit violates profile `{profile}` ({} diagnostics)", .diagnostics.len())]
    Capability { profile: String, diagnostics: Vec<Diagnostic> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

/// Emits `circuit` after checking it against `profile`. With `force`,
/// capability violations become comments instead of an error.
pub fn emit(
    circuit: &Circuit,
    dialect: Dialect,
    profile: &CapabilityProfile,
    force: bool,
) -> Result<DialectText, EmitError> {
    let diagnostics = capability_check(circuit, profile);
    if !diagnostics.is_empty() && !force {
        return Err(EmitError::Capability { profile: profile.name.clone(), diagnostics });
    }
    let lowered = lower_anticontrols(circuit);
    let lines = match dialect {
        Dialect::Quil => quil::emit(&lowered, &diagnostics)?,
        Dialect::Qasm => qasm::emit(&lowered, &diagnostics)?,
    };
    Ok(DialectText { dialect, lines })
}

pub fn parse(text: &DialectText) -> Result<Circuit, ParseError> {
    match text.dialect {
        Dialect::Quil => quil::parse(&text.lines),
        Dialect::Qasm => qasm::parse(&text.lines),
    }
}

/// Dialect-neutral shape of an emittable gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Spelling {
    I,
    X,
    Y,
    Z,
    H,
    T,
    Swap,
    Cnot,
    Cz,
    Ccnot,
    Ry,
}

impl Spelling {
    /// Vocabulary with its operand count.
    pub(crate) const ALL: [(Spelling, usize); 11] = [
        (Spelling::I, 1),
        (Spelling::X, 1),
        (Spelling::Y, 1),
        (Spelling::Z, 1),
        (Spelling::H, 1),
        (Spelling::T, 1),
        (Spelling::Swap, 2),
        (Spelling::Cnot, 2),
        (Spelling::Cz, 2),
        (Spelling::Ccnot, 3),
        (Spelling::Ry, 1),
    ];

    pub(crate) fn operands(self) -> usize {
        Self::ALL.iter().find(|(s, _)| *s == self).map(|(_, n)| *n).unwrap_or(1)
    }

    /// Classifies a lowered op; returns the spelling and its operand order
    /// (controls first, then targets).
    pub(crate) fn of(op: &GateOp) -> Option<(Spelling, Vec<usize>)> {
        let controls: Vec<usize> = op.controls.iter().map(|c| c.qubit).collect();
        let spelling = match (&op.gate, controls.len()) {
            (Gate::I, 0) => Spelling::I,
            (Gate::X, 0) => Spelling::X,
            (Gate::Y, 0) => Spelling::Y,
            (Gate::Z, 0) => Spelling::Z,
            (Gate::H, 0) => Spelling::H,
            (Gate::T, 0) => Spelling::T,
            (Gate::Swap, 0) => Spelling::Swap,
            (Gate::Ry { .. }, 0) => Spelling::Ry,
            (Gate::X, 1) => Spelling::Cnot,
            (Gate::Z, 1) => Spelling::Cz,
            (Gate::X, 2) => Spelling::Ccnot,
            _ => return None,
        };
        let mut operands = controls;
        operands.extend(&op.targets);
        Some((spelling, operands))
    }

    pub(crate) fn build(self, operands: &[usize], theta: Option<f64>) -> GateOp {
        use crate::circuit::Control;
        let single = |gate: Gate| GateOp::new(gate, vec![operands[0]]);
        match self {
            Spelling::I => single(Gate::I),
            Spelling::X => single(Gate::X),
            Spelling::Y => single(Gate::Y),
            Spelling::Z => single(Gate::Z),
            Spelling::H => single(Gate::H),
            Spelling::T => single(Gate::T),
            Spelling::Ry => single(Gate::Ry { theta: theta.unwrap_or(0.0) }),
            Spelling::Swap => GateOp::new(Gate::Swap, vec![operands[0], operands[1]]),
            Spelling::Cnot => GateOp::controlled(Gate::X, vec![operands[1]], vec![Control::on(operands[0])]),
            Spelling::Cz => GateOp::controlled(Gate::Z, vec![operands[1]], vec![Control::on(operands[0])]),
            Spelling::Ccnot => GateOp::controlled(
                Gate::X,
                vec![operands[2]],
                vec![Control::on(operands[0]), Control::on(operands[1])],
            ),
        }
    }
}

/// Formats an angle with 12 significant digits, trailing zeros trimmed.
pub fn format_angle(theta: f64) -> String {
    if theta == 0.0 || !theta.is_finite() {
        return format!("{theta}");
    }
    let magnitude = theta.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{theta:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Whitespace-insensitive token stream, for golden comparisons.
pub fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}
