//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use qimage::circuit::{Circuit, Control, GateOp, Instruction};
use qimage::simcore::{GateMatrix, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1 << n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

/// Reduced density matrix by summing over every pair of full-register
/// indices that agree on the traced-out qubits. `keep[j]` becomes bit `j`.
pub fn brute_partial_trace(state: &StateVector, keep: &[usize]) -> DMatrix<Complex64> {
    let dim = 1 << keep.len();
    let amps = state.amplitudes();
    let kept_mask: usize = keep.iter().map(|q| 1 << q).sum();
    let sub = |i: usize| keep.iter().enumerate().map(|(j, q)| (i >> q & 1) << j).sum::<usize>();
    let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for i in 0..amps.len() {
        for k in 0..amps.len() {
            if i & !kept_mask == k & !kept_mask {
                m[(sub(i), sub(k))] += amps[i] * amps[k].conj();
            }
        }
    }
    m
}

/// Coefficients of det(xI - A), highest power first, by Faddeev-LeVerrier.
fn char_poly(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut m = DMatrix::from_element(n, n, c(0.0, 0.0));
    for k in 1..=n {
        m = a * &m + &id * coeffs[k - 1];
        let ck = -(a * &m).trace() / k as f64;
        coeffs.push(ck);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |x: Complex64| coeffs.iter().fold(c(0.0, 0.0), |acc, &k| acc * x + k);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..2000 {
        let prev = roots.clone();
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(c(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            if denom.norm() > 1e-300 {
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
            }
        }
        if roots.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    roots
}

/// Wootters concurrence from the eigenvalues of rho * (YY rho* YY), which
/// are the squares of the usual lambda values.
pub fn concurrence_oracle(rho: &DMatrix<Complex64>) -> f64 {
    let y = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let yy = y.kronecker(&y);
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let r = rho * tilde;
    let mut lambdas: Vec<f64> = poly_roots(&char_poly(&r)).iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Concurrence of qubits `(a, b)` of a pure state without any
/// eigendecomposition. The unnormalized pair vectors `w_e`, one per
/// environment basis state, decompose the reduced state as `sum_e w_e w_e^+`,
/// and the lambdas are the singular values of `W^T (Y x Y) W`.
pub fn pair_concurrence_oracle(state: &StateVector, a: usize, b: usize) -> f64 {
    let n = state.n_qubits();
    let env: Vec<usize> = (0..n).filter(|&q| q != a && q != b).collect();
    let amps = state.amplitudes();
    let (lo, hi) = (a.min(b), a.max(b));
    let mut w = DMatrix::from_element(4, 1 << env.len(), c(0.0, 0.0));
    for (i, amp) in amps.iter().enumerate() {
        let row = (i >> lo & 1) | (i >> hi & 1) << 1;
        let col = env.iter().enumerate().map(|(j, q)| (i >> q & 1) << j).sum::<usize>();
        w[(row, col)] = *amp;
    }
    let y = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let tau = w.transpose() * y.kronecker(&y) * &w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    lambdas.resize(lambdas.len().max(4), 0.0);
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Final-register distribution of a dynamic circuit, by walking every
/// measurement branch with its Born weight.
pub fn branch_distribution(circuit: &Circuit) -> Vec<f64> {
    let mut dist = vec![0.0; 1 << circuit.n_qubits];
    walk(circuit, 0, StateVector::new(circuit.n_qubits).unwrap(), vec![0; circuit.n_clbits], 1.0, &mut dist);
    dist
}

fn apply(state: &mut StateVector, op: &GateOp) {
    state.apply(&op.gate.matrix(), &op.targets, &op.on_controls(), &op.anticontrols()).unwrap();
}

fn walk(circuit: &Circuit, from: usize, mut state: StateVector, bits: Vec<u8>, weight: f64, dist: &mut [f64]) {
    for i in from..circuit.instructions.len() {
        match &circuit.instructions[i] {
            Instruction::Gate(op) => apply(&mut state, op),
            Instruction::Barrier { .. } => {}
            Instruction::Conditional { clbit, op } => {
                if bits[*clbit] == 1 {
                    apply(&mut state, op);
                }
            }
            Instruction::Measure { qubit, clbit } => {
                let p1 = state.prob_one(*qubit).unwrap();
                for (bit, p) in [(0u8, 1.0 - p1), (1, p1)] {
                    if p > 1e-14 {
                        let mut s = state.clone();
                        s.project(*qubit, bit).unwrap();
                        let mut b = bits.clone();
                        b[*clbit] = bit;
                        walk(circuit, i + 1, s, b, weight * p, dist);
                    }
                }
                return;
            }
            Instruction::Reset { qubit } => {
                let p1 = state.prob_one(*qubit).unwrap();
                for (bit, p) in [(0u8, 1.0 - p1), (1, p1)] {
                    if p > 1e-14 {
                        let mut s = state.clone();
                        s.project(*qubit, bit).unwrap();
                        if bit == 1 {
                            s.apply(&GateMatrix::pauli_x(), &[*qubit], &[], &[]).unwrap();
                        }
                        walk(circuit, i + 1, s, bits.clone(), weight * p, dist);
                    }
                }
                return;
            }
        }
    }
    for (d, p) in dist.iter_mut().zip(state.probabilities()) {
        *d += weight * p;
    }
}

/// Order-insensitive view of a gate list for golden comparisons.
///
/// `X a ... op ... X a` sandwiches fold back into anticontrols, and runs of
/// X gates sharing one control pattern (which commute) are sorted by target.
pub fn canonical(circuit: &Circuit) -> Vec<String> {
    let insts = &circuit.instructions;
    let plain_x = |i: usize| match insts.get(i) {
        Some(Instruction::Gate(op)) if op.controls.is_empty() && op.gate == qimage::circuit::Gate::X => Some(op.targets[0]),
        _ => None,
    };
    let mut units: Vec<(Option<GateOp>, String)> = Vec::new();
    let mut i = 0;
    while i < insts.len() {
        let mut pre = Vec::new();
        while let Some(q) = plain_x(i + pre.len()) {
            pre.push(q);
        }
        let folded = (!pre.is_empty())
            .then(|| match insts.get(i + pre.len()) {
                Some(Instruction::Gate(op)) if !op.controls.is_empty() => {
                    let post: Vec<usize> = (0..pre.len()).map_while(|k| plain_x(i + pre.len() + 1 + k)).collect();
                    let mut a = pre.clone();
                    let mut b = post.clone();
                    a.sort();
                    b.sort();
                    let covers = a.iter().all(|q| op.controls.iter().any(|c| c.qubit == *q));
                    (a == b && covers).then(|| {
                        let mut lifted = op.clone();
                        for ctl in &mut lifted.controls {
                            if pre.contains(&ctl.qubit) {
                                *ctl = Control::off(ctl.qubit);
                            }
                        }
                        lifted
                    })
                }
                _ => None,
            })
            .flatten();
        match folded {
            Some(op) => {
                i += 2 * pre.len() + 1;
                units.push((Some(op.clone()), format!("{:?}", Instruction::Gate(op))));
            }
            None => {
                let inst = &insts[i];
                let op = match inst {
                    Instruction::Gate(op) => Some(op.clone()),
                    _ => None,
                };
                units.push((op, format!("{inst:?}")));
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut k = 0;
    while k < units.len() {
        let key = |u: &(Option<GateOp>, String)| {
            u.0.as_ref()
                .filter(|op| op.gate == qimage::circuit::Gate::X && !op.controls.is_empty())
                .map(|op| op.controls.clone())
        };
        match key(&units[k]) {
            Some(ctl) => {
                let mut run: Vec<String> = Vec::new();
                while k < units.len() && key(&units[k]).as_ref() == Some(&ctl) {
                    run.push(units[k].1.clone());
                    k += 1;
                }
                run.sort();
                out.extend(run);
            }
            None => {
                out.push(units[k].1.clone());
                k += 1;
            }
        }
    }
    out
}
