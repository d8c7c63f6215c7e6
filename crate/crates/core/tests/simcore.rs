mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_partial_trace, c, concurrence_oracle, pair_concurrence_oracle, random_state};
use qimage::circuit::{run, Circuit, DiagnosticKind, Gate, GateOp, RunError, RunMode};
use qimage::simcore::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn basis_states_survive_measurement() {
    let mut r = rng(1);
    for n in 1..=4 {
        for idx in 0..1usize << n {
            let state = StateVector::basis(n, idx).unwrap();
            for q in 0..n {
                let (bit, after) = measure_qubit(&state, q, &mut r).unwrap();
                assert_eq!(bit as usize, idx >> q & 1);
                assert_eq!(after.amplitudes(), state.amplitudes());
            }
        }
    }
}

#[test]
fn hadamard_twice_is_identity() {
    let mut r = rng(2);
    for _ in 0..20 {
        let psi = random_state(1, &mut r);
        let mut out = psi.clone();
        out.apply(&GateMatrix::hadamard(), &[0], &[], &[]).unwrap();
        out.apply(&GateMatrix::hadamard(), &[0], &[], &[]).unwrap();
        let f = fidelity(&DensityMatrix::from_pure(&psi).unwrap(), &DensityMatrix::from_pure(&out).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "{f}");
    }
}

#[test]
fn projector_is_not_a_gate() {
    let half_sum = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    assert!(GateMatrix::new("P0", 1, half_sum.clone()).is_err());

    let mut circuit = Circuit::new(1);
    let matrix = GateMatrix::new_unchecked("P0", 1, half_sum).unwrap();
    circuit.op(GateOp::new(Gate::Custom { matrix }, vec![0]));
    match run(&circuit, RunMode::Deferred, None) {
        Err(RunError::Invalid(d)) => assert!(d.iter().any(|d| d.kind == DiagnosticKind::NonUnitaryGate)),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn fidelity_of_pure_states_is_overlap() {
    let mut r = rng(3);
    for i in 0..100 {
        let n = 1 + i % 3;
        let (a, b) = (random_state(n, &mut r), random_state(n, &mut r));
        let overlap: num_complex::Complex64 =
            a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        let f = fidelity(&DensityMatrix::from_pure(&a).unwrap(), &DensityMatrix::from_pure(&b).unwrap()).unwrap();
        assert!((f - overlap.norm()).abs() < 1e-9, "pair {i}: {f} vs {}", overlap.norm());
    }
}

#[test]
fn cnot_copies_basis_states_only() {
    for bit in 0..2 {
        let mut s = StateVector::basis(2, bit).unwrap();
        s.apply(&GateMatrix::pauli_x(), &[1], &[0], &[]).unwrap();
        assert_eq!(s.amplitudes(), StateVector::basis(2, bit | bit << 1).unwrap().amplitudes());
    }

    let plus = StateVector::qubit(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
    let mut s = plus.extend(1).unwrap();
    s.apply(&GateMatrix::pauli_x(), &[1], &[0], &[]).unwrap();
    let target = DensityMatrix::from_pure(&plus).unwrap();
    for q in 0..2 {
        let f = fidelity(&target, &partial_trace(&s, &[q]).unwrap()).unwrap();
        assert!((f - FRAC_1_SQRT_2).abs() < 1e-9, "qubit {q}: {f}");
    }
}

#[test]
fn partial_trace_matches_oracle() {
    let mut r = rng(4);
    let keeps: [&[usize]; 5] = [&[0], &[2], &[0, 3], &[3, 1], &[1, 2, 4]];
    for keep in keeps {
        let psi = random_state(5, &mut r);
        let rho = partial_trace(&psi, keep).unwrap();
        // Kept qubits are ordered ascending whatever order they are given in.
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let oracle = brute_partial_trace(&psi, &sorted);
        assert!((rho.matrix() - &oracle).norm() < 1e-12, "keep {keep:?}");
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn concurrence_matches_oracle() {
    let mut r = rng(5);
    // Rank-2 reductions of 3-qubit states stress the near-zero eigenvalues.
    for _ in 0..30 {
        let psi = random_state(3, &mut r);
        let got = concurrence(&partial_trace(&psi, &[0, 2]).unwrap()).unwrap();
        let want = pair_concurrence_oracle(&psi, 0, 2);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    // Full-rank reductions against the characteristic-polynomial route.
    for _ in 0..30 {
        let psi = random_state(5, &mut r);
        let rho = partial_trace(&psi, &[1, 3]).unwrap();
        let got = concurrence(&rho).unwrap();
        assert!((got - pair_concurrence_oracle(&psi, 1, 3)).abs() < 1e-9);
        assert!((got - concurrence_oracle(rho.matrix())).abs() < 1e-7);
    }
    let bell = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
    assert!((concurrence(&DensityMatrix::from_pure(&bell).unwrap()).unwrap() - 1.0).abs() < 1e-9);
    assert!(concurrence(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap() < 1e-9);
}

#[test]
fn noise_channels_preserve_trace() {
    let mut r = rng(6);
    let rho = DensityMatrix::from_pure(&random_state(2, &mut r)).unwrap();
    for p in [0.0, 0.1, 0.5, 1.0] {
        for ch in [NoiseChannel::bit_flip(p), NoiseChannel::phase_flip(p), NoiseChannel::bit_phase_flip(p)] {
            let ch = ch.unwrap();
            let id = ch.completeness();
            assert!((id[0][0] - c(1.0, 0.0)).norm() < 1e-12 && id[0][1].norm() < 1e-12);
            for q in 0..2 {
                let out = apply_channel(&rho, q, &ch).unwrap();
                assert!((out.trace() - c(1.0, 0.0)).norm() < 1e-12);
                out.validate().unwrap();
            }
        }
    }
    assert!(NoiseChannel::bit_flip(1.5).is_err());

    // A full bit flip on |0> gives |1>; a half phase flip dephases |+>.
    let zero = DensityMatrix::from_pure(&StateVector::new(1).unwrap()).unwrap();
    let flipped = apply_channel(&zero, 0, &NoiseChannel::bit_flip(1.0).unwrap()).unwrap();
    assert!((flipped.get(1, 1).re - 1.0).abs() < 1e-12);
    let plus = StateVector::qubit(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
    let deph = apply_channel(&DensityMatrix::from_pure(&plus).unwrap(), 0, &NoiseChannel::phase_flip(0.5).unwrap()).unwrap();
    assert!(deph.get(0, 1).norm() < 1e-12);
}

#[test]
fn bloch_angle_of_three_quarters() {
    let q = StateVector::qubit(c(0.5, 0.0), c(0.75f64.sqrt(), 0.0)).unwrap();
    let angles = bloch_angles(&DensityMatrix::from_pure(&q).unwrap()).unwrap();
    assert!((angles.theta - 2.0 * PI / 3.0).abs() < 1e-12);
    assert!(angles.phi.abs() < 1e-12);

    // The same populations without coherence keep the polar angle.
    let mixed = DensityMatrix::from_matrix(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.75, 0.0)],
    ))
    .unwrap();
    let angles = bloch_angles(&mixed).unwrap();
    assert!((angles.theta.to_degrees() - 120.0).abs() < 1e-9);
    assert!((angles.purity - 0.625).abs() < 1e-12);
}

#[test]
fn size_limits() {
    assert!(StateVector::new(0).is_err());
    assert!(StateVector::new(MAX_QUBITS + 1).is_err());
    assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
}

fn gate_strategy() -> impl Strategy<Value = (u8, usize, usize, f64)> {
    (0u8..7, 0usize..4, 0usize..4, 0.0..2.0 * PI)
}

proptest! {
    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), ops in prop::collection::vec(gate_strategy(), 1..30)) {
        let mut state = random_state(4, &mut rng(seed));
        for (kind, a, b, theta) in ops {
            let gate = match kind {
                0 => GateMatrix::hadamard(),
                1 => GateMatrix::pauli_x(),
                2 => GateMatrix::pauli_y(),
                3 => GateMatrix::t(),
                4 => GateMatrix::ry(theta),
                5 => GateMatrix::swap(),
                _ => GateMatrix::pauli_z(),
            };
            if gate.arity() == 2 {
                if a != b {
                    state.apply(&gate, &[a, b], &[], &[]).unwrap();
                }
            } else if a != b {
                state.apply(&gate, &[a], &[b], &[]).unwrap();
            } else {
                state.apply(&gate, &[a], &[], &[(a + 1) % 4]).unwrap();
            }
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn marginals_agree_with_probabilities(seed in any::<u64>()) {
        let state = random_state(4, &mut rng(seed));
        let probs = state.probabilities();
        for (q, m) in state.marginals().into_iter().enumerate() {
            let direct: f64 = probs.iter().enumerate().filter(|(i, _)| i >> q & 1 == 1).map(|(_, p)| p).sum();
            prop_assert!((m - direct).abs() < 1e-12);
        }
    }
}
