//! Circuit IR: instructions with ordered control/anticontrol lists,
//! validation, rewriting passes, execution and backend capability checks.

mod capability;
mod ir;
mod passes;
mod run;
mod validate;

pub use capability::{capability_check, CapabilityProfile, ResetPolicy};
pub use ir::{Circuit, Control, Gate, GateOp, Instruction};
pub use passes::{defer_measurements, lower_anticontrols};
pub use run::{final_state, run, run_shot, Outcomes, RunError, RunMode};
pub use validate::{validate, Diagnostic, DiagnosticKind};
