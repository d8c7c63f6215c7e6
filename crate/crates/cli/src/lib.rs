//! Experiment drivers behind the `qimage` command line: image round trips
//! through each representation, the teleportation coupling test, circuit
//! emission and the comparison report.

mod report;
mod roundtrip;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use qimage::circuit::{CapabilityProfile, Circuit, Diagnostic};
use qimage::emit::{self, Dialect, DialectText, EmitError};
use qimage::neqr::{neqr_teleport_test, Channel, NeqrTile, TeleportReport};

pub use report::{build_report, Comparison, ComparisonRow};
pub use roundtrip::{roundtrip, ExperimentReport, Technique};

/// The tile every golden check uses.
pub const GOLDEN_TILE: [u8; 4] = [0, 100, 200, 255];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportOutcome {
    pub golden: TeleportReport,
    /// Same protocol over a product-state channel; it must not match.
    pub negative_control: TeleportReport,
    pub passed: bool,
}

pub fn teleport_test() -> Result<TeleportOutcome> {
    let tile = NeqrTile::from(GOLDEN_TILE);
    let golden = neqr_teleport_test(&tile, Channel::Neqr)?;
    let negative_control = neqr_teleport_test(&tile, Channel::Product)?;
    let passed = golden.passed && !negative_control.destination_match;
    Ok(TeleportOutcome { golden, negative_control, passed })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Result of the `emit` command. `text` is absent when the profile check
/// failed without `force`.
#[derive(Debug, Clone)]
pub struct EmitOutcome {
    pub text: Option<DialectText>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn emit_circuit(circuit: &Circuit, dialect: Dialect, profile: &CapabilityProfile, force: bool) -> Result<EmitOutcome> {
    match emit::emit(circuit, dialect, profile, force) {
        Ok(text) => {
            let diagnostics = qimage::circuit::capability_check(circuit, profile);
            Ok(EmitOutcome { text: Some(text), diagnostics })
        }
        Err(EmitError::Capability { diagnostics, .. }) => Ok(EmitOutcome { text: None, diagnostics }),
        Err(e) => Err(e.into()),
    }
}

/// Built-in circuits, for feeding the `emit` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinCircuit {
    Neqr,
    Teleport,
    Qbwt,
    Qbop,
}

impl std::str::FromStr for BuiltinCircuit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neqr" => Ok(Self::Neqr),
            "teleport" => Ok(Self::Teleport),
            "qbwt" => Ok(Self::Qbwt),
            "qbop" => Ok(Self::Qbop),
            other => Err(format!("unknown circuit `{other}`")),
        }
    }
}

pub fn builtin_circuit(kind: BuiltinCircuit, tile: [u8; 4]) -> Circuit {
    let tile = NeqrTile::from(tile);
    match kind {
        BuiltinCircuit::Neqr => qimage::neqr::neqr_build(&tile),
        BuiltinCircuit::Teleport => qimage::neqr::teleport_circuit(&tile, Channel::Neqr),
        BuiltinCircuit::Qbwt => qimage::qbip::qbwt_circuit(),
        BuiltinCircuit::Qbop => qimage::qbip::qbop_circuit(8),
    }
}
