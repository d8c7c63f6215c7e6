//! Statevector simulation, dense with a sparse path for wide registers
//! whose support stays small.
//!
//! Gate application with controls and anticontrols, projective Z
//! measurement, density matrices with partial trace, fidelity, concurrence,
//! Bloch angles and the three Pauli noise channels.

mod density;
mod gate;
mod metrics;
mod noise;
mod sparse;
mod state;

pub use density::{partial_trace, DensityMatrix, DENSITY_TOL, MAX_KEPT_QUBITS};
pub use gate::{GateMatrix, UNITARY_TOL};
pub use metrics::{bloch_angles, concurrence, fidelity, BlochAngles};
pub use noise::{apply_channel, NoiseChannel, NoiseKind};
pub use sparse::SparseState;
pub use state::{
    format_bits, marginal_prob_one, measure_qubit, StateVector, MAX_QUBITS, NORM_TOL,
};
