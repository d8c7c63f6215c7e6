use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{neqr_build, NeqrTile, NEQR_QUBITS, Y_QUBIT};
use crate::circuit::{run, Circuit, Gate, GateOp, Outcomes, RunError, RunMode};
use crate::simcore::StateVector;
use crate::{Result, SimError};

pub const TELEPORT_QUBITS: usize = 13;
const PAYLOAD: usize = 10;
const ALICE: usize = 11;
const BOB: usize = 12;

const GOLDEN_AMPLITUDES: [(f64, f64); 4] =
    [(0.6035533906, 0.25), (0.6035533906, 0.25), (0.25, -0.1035533906), (0.25, -0.1035533906)];
const GOLDEN_PROBABILITIES: [f64; 4] = [0.4267766953, 0.4267766953, 0.0732233047, 0.0732233047];
const GOLDEN_DESTINATION_P1: f64 = 0.1464466094;
const GOLDEN_TOL: f64 = 1e-8;

/// What feeds the two channel qubits `q[0]` and `q[9]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    /// The NEQR tile circuit, whose `q[0]`/`q[9]` pair is entangled.
    Neqr,
    /// Only `H` on `q[9]`: the same pair left in a product state.
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportAmplitude {
    pub bitstring: String,
    pub re: f64,
    pub im: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportReport {
    pub channel: Channel,
    pub tile: [u8; 4],
    pub n_qubits: usize,
    pub gate_counts: BTreeMap<String, usize>,
    /// Measured values of `q[10]` and `q[11]` selecting the reported branch.
    pub branch: [u8; 2],
    pub amplitudes: Vec<TeleportAmplitude>,
    pub payload_p1: f64,
    pub destination_p0: f64,
    pub destination_p1: f64,
    pub amplitudes_match: bool,
    pub probabilities_match: bool,
    pub destination_match: bool,
    pub passed: bool,
}

fn payload_prep(c: &mut Circuit) {
    c.h(PAYLOAD).t(PAYLOAD).h(PAYLOAD).t(PAYLOAD);
}

/// The 13-qubit coupling circuit: encoding, payload preparation on `q[10]`,
/// swaps moving the channel pair onto `q[11]`/`q[12]`, then the
/// measurement-and-correction half of teleportation.
pub fn teleport_circuit(tile: &NeqrTile, channel: Channel) -> Circuit {
    let mut c = Circuit::with_clbits(TELEPORT_QUBITS, 3);
    match channel {
        Channel::Neqr => {
            let enc = neqr_build(tile);
            c.instructions.extend(enc.instructions);
        }
        Channel::Product => {
            c.h(Y_QUBIT);
        }
    }
    payload_prep(&mut c);
    c.swap(0, ALICE).swap(Y_QUBIT, BOB).cnot(PAYLOAD, ALICE).h(PAYLOAD);
    c.measure(ALICE, 1).conditional(1, GateOp::new(Gate::X, vec![BOB]));
    c.measure(PAYLOAD, 0).conditional(0, GateOp::new(Gate::Z, vec![BOB]));
    c
}

fn deferred(circuit: &Circuit) -> Result<StateVector> {
    match run(circuit, RunMode::Deferred, None) {
        Ok(Outcomes::State(s)) => Ok(s),
        Ok(Outcomes::Counts(_)) => Err(SimError::Internal("deferred run returned counts".into())),
        Err(RunError::Sim(e)) => Err(e),
        Err(RunError::Invalid(d)) => Err(SimError::Internal(format!("teleport circuit invalid: {d:?}"))),
    }
}

fn close_sorted(mut got: Vec<f64>, mut want: Vec<f64>) -> bool {
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= GOLDEN_TOL)
}

/// Runs the coupling circuit in deferred mode and reports the branch where
/// both measurements read 0, plus the destination marginal of the full state.
pub fn neqr_teleport_test(tile: &NeqrTile, channel: Channel) -> Result<TeleportReport> {
    neqr_teleport_branch(tile, channel, [0, 0])
}

pub fn neqr_teleport_branch(tile: &NeqrTile, channel: Channel, branch: [u8; 2]) -> Result<TeleportReport> {
    let circuit = teleport_circuit(tile, channel);
    let state = deferred(&circuit)?;
    let destination_p1 = state.prob_one(BOB)?;

    let mut post = state.clone();
    post.project(PAYLOAD, branch[0])?;
    post.project(ALICE, branch[1])?;
    let amplitudes: Vec<TeleportAmplitude> = post
        .nonzero(1e-12)
        .into_iter()
        .map(|(i, a)| TeleportAmplitude {
            bitstring: post.bitstring(i),
            re: a.re,
            im: a.im,
            probability: a.norm_sqr(),
        })
        .collect();

    let mut payload = Circuit::new(PAYLOAD + 1);
    payload_prep(&mut payload);
    let payload_p1 = crate::circuit::final_state(&payload, None)?.prob_one(PAYLOAD)?;

    let amplitudes_match = amplitudes.len() == 4
        && close_sorted(amplitudes.iter().map(|a| a.re).collect(), GOLDEN_AMPLITUDES.map(|g| g.0).to_vec())
        && close_sorted(amplitudes.iter().map(|a| a.im).collect(), GOLDEN_AMPLITUDES.map(|g| g.1).to_vec())
        && amplitudes.iter().all(|a| {
            GOLDEN_AMPLITUDES
                .iter()
                .any(|g| (a.re - g.0).abs() <= GOLDEN_TOL && (a.im - g.1).abs() <= GOLDEN_TOL)
        });
    let probabilities_match =
        close_sorted(amplitudes.iter().map(|a| a.probability).collect(), GOLDEN_PROBABILITIES.to_vec());
    let destination_match = (destination_p1 - GOLDEN_DESTINATION_P1).abs() <= GOLDEN_TOL;

    Ok(TeleportReport {
        channel,
        tile: tile.values,
        n_qubits: circuit.n_qubits,
        gate_counts: circuit.gate_counts(),
        branch,
        amplitudes,
        payload_p1,
        destination_p0: 1.0 - destination_p1,
        destination_p1,
        amplitudes_match,
        probabilities_match,
        destination_match,
        passed: amplitudes_match && probabilities_match && destination_match,
    })
}

const _: () = assert!(NEQR_QUBITS + 3 == TELEPORT_QUBITS);
