//! Quantum image representation toolkit.
//!
//! A dense statevector simulator with a small circuit IR, two textual
//! dialects, a netpbm/bitplane image pipeline, and implementations of the
//! FRQI, NEQR and QBIP image encodings together with the experiments that
//! compare them.

pub mod error;
pub mod frqi;
pub mod circuit;
pub mod emit;
pub mod imagepipe;
pub mod neqr;
pub mod qbip;
pub mod simcore;

pub use error::{Result, SimError};
