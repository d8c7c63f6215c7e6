//! Quantum Boolean image processing.
//!
//! Every bit becomes a computational basis qubit, Boolean algorithms run as
//! CNOT/Toffoli networks on the simulator, and reading the result back is a
//! z-axis measurement that cannot disturb a basis state.

mod interface;
mod qbop;
mod qbwt;

pub use interface::{
    cl2qu_simple, cl2qu_superdense, qu2cl, qu2cl_register, run_cbs, CbsWord, SuperdenseTrace, CBS_TOL,
};
pub use qbop::{qbop, qbop_circuit, qbop_plane, qbop_qubits, qbop_reconstruct, MAX_COLUMN};
pub use qbwt::{iqbwt, iqbwt_plane, qbwt, qbwt_circuit, qbwt_plane, qbwt_qubits, BoolTile};
