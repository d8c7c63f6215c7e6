use num_complex::Complex64;
use rand::Rng;

use super::gate::GateMatrix;
use crate::error::{Result, SimError};

/// Largest register the simulator will allocate (2^24 amplitudes).
pub const MAX_QUBITS: usize = 24;

pub const NORM_TOL: f64 = 1e-10;

/// Dense statevector over `n` qubits.
///
/// Bit `q` of a basis index is the state of qubit `q`; qubit 0 is the least
/// significant bit, so a printed ket reads `q[n-1]...q[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Ground state `|0...0>`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(SimError::Structural(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Takes ownership of an amplitude array; its length must be a power of
    /// two and its norm must be 1 within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(SimError::Structural(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_size(n_qubits)?;
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::Parameter(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Single-qubit state `alpha|0> + beta|1>`.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_amplitudes(vec![alpha, beta])
    }

    /// Wraps amplitudes already known to be a valid state.
    pub(super) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(SimError::Structural("inner product of mismatched registers".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `high ⊗ low`: `low` occupies qubits `0..low.n`, `high` the qubits above.
    pub fn tensor(high: &StateVector, low: &StateVector) -> Result<StateVector> {
        let n = high.n_qubits + low.n_qubits;
        check_size(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            for l in &low.amps {
                amps.push(h * l);
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Widens the register with fresh `|0>` qubits on top.
    pub fn extend(&self, extra: usize) -> Result<StateVector> {
        if extra == 0 {
            return Ok(self.clone());
        }
        let n = self.n_qubits + extra;
        check_size(n)?;
        // |0...0> on top leaves the low block unchanged and the rest zero.
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        Ok(Self { n_qubits: n, amps })
    }

    /// Printed ket label `q[n-1]...q[0]` of a basis index.
    pub fn bitstring(&self, index: usize) -> String {
        format_bits(index, self.n_qubits)
    }

    /// Nonzero amplitudes (|a| > tol) with their basis labels, in index order.
    pub fn nonzero(&self, tol: f64) -> Vec<(usize, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(i, a)| (i, *a))
            .collect()
    }

    /// Applies `gate` to `targets` on the subspace where every control is 1
    /// and every anticontrol is 0.
    pub fn apply(
        &mut self,
        gate: &GateMatrix,
        targets: &[usize],
        controls: &[usize],
        anticontrols: &[usize],
    ) -> Result<()> {
        check_operands(self.n_qubits, gate.arity(), targets, controls, anticontrols)?;
        let tmask = mask(targets);
        let cmask = mask(controls);
        let amask = mask(anticontrols);
        let dim = gate.dim();
        let offsets: Vec<usize> = (0..dim)
            .map(|j| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| j >> bit & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | 1 << q)
            })
            .collect();
        let m = gate.entries();
        let full = self.amps.len() - 1;
        let free = full & !(tmask | cmask | amask);
        // Only the bases whose controls fire are visited: every subset of
        // the free bits, with the control bits forced on.
        let bases = Subsets { free, next: Some(0) }.map(|sub| sub | cmask);
        if dim == 2 {
            let t = tmask;
            let [m00, m01, m10, m11] = [m[0], m[1], m[2], m[3]];
            if permutation(m, 2).as_deref() == Some(&[1, 0]) {
                for base in bases {
                    self.amps.swap(base, base | t);
                }
            } else {
                for base in bases {
                    let (a0, a1) = (self.amps[base], self.amps[base | t]);
                    self.amps[base] = m00 * a0 + m01 * a1;
                    self.amps[base | t] = m10 * a0 + m11 * a1;
                }
            }
            return Ok(());
        }
        let perm = permutation(m, dim);
        let mut buf = vec![Complex64::new(0.0, 0.0); dim];
        for base in bases {
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amps[base | off];
            }
            match &perm {
                Some(p) => {
                    for (off, &src) in offsets.iter().zip(p) {
                        self.amps[base | off] = buf[src];
                    }
                }
                None => {
                    for (r, off) in offsets.iter().enumerate() {
                        let row = &m[r * dim..(r + 1) * dim];
                        self.amps[base | off] = row.iter().zip(&buf).map(|(g, a)| g * a).sum();
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact `P(q = 1)`.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Per-qubit `P(1)` for every qubit, index order.
    pub fn marginals(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut bits = i;
            while bits != 0 {
                out[bits.trailing_zeros() as usize] += p;
                bits &= bits - 1;
            }
        }
        out
    }

    /// Full-register outcome probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Projects qubit `q` onto `bit` and renormalizes. Returns the branch
    /// probability; a zero-probability branch is an error and leaves the
    /// state untouched.
    pub fn project(&mut self, q: usize, bit: u8) -> Result<f64> {
        self.check_qubit(q)?;
        let p1 = self.prob_one(q)?;
        let p = if bit == 1 { p1 } else { 1.0 - p1 };
        if p <= 0.0 {
            return Err(SimError::Internal(format!(
                "projection of qubit {q} onto {bit} has zero probability"
            )));
        }
        let scale = 1.0 / p.sqrt();
        let want = usize::from(bit == 1);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i >> q & 1 == want {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Z-basis projective measurement of qubit `q` with collapse.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(q)?;
        let draw: f64 = rng.random();
        let bit = u8::from(draw < p1);
        self.project(q, bit)?;
        Ok(bit)
    }

    /// Samples a full-register basis index without collapsing.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            acc += p;
            last = i;
            if draw < acc {
                return i;
            }
        }
        last
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(SimError::Structural(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

/// `P(1)` of qubit `q`, analytic.
pub fn marginal_prob_one(state: &StateVector, q: usize) -> Result<f64> {
    state.prob_one(q)
}

/// Collapsing measurement returning the outcome and the post-measurement state.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    q: usize,
    rng: &mut R,
) -> Result<(u8, StateVector)> {
    let mut out = state.clone();
    let bit = out.measure(q, rng)?;
    Ok((bit, out))
}

pub fn format_bits(index: usize, width: usize) -> String {
    (0..width).rev().map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(SimError::Size(format!(
            "{n_qubits} qubits requested, supported range is 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Subsets of a bit mask in ascending order.
struct Subsets {
    free: usize,
    next: Option<usize>,
}

impl Iterator for Subsets {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let cur = self.next?;
        self.next = (cur != self.free).then(|| cur.wrapping_sub(self.free) & self.free);
        Some(cur)
    }
}

/// For a 0/1 permutation matrix, the source column of each row.
fn permutation(m: &[Complex64], dim: usize) -> Option<Vec<usize>> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    (0..dim)
        .map(|r| {
            let row = &m[r * dim..(r + 1) * dim];
            if row.iter().any(|e| *e != one && *e != zero) || row.iter().filter(|e| **e == one).count() != 1 {
                return None;
            }
            row.iter().position(|e| *e == one)
        })
        .collect()
}

pub(super) fn mask(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, q| acc | 1 << q)
}

pub(super) fn check_operands(
    n_qubits: usize,
    arity: usize,
    targets: &[usize],
    controls: &[usize],
    anticontrols: &[usize],
) -> Result<()> {
    if targets.len() != arity {
        return Err(SimError::Structural(format!(
            "gate arity {arity} but {} targets",
            targets.len()
        )));
    }
    let mut seen = 0usize;
    for &q in targets.iter().chain(controls).chain(anticontrols) {
        if q >= n_qubits {
            return Err(SimError::Structural(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        if seen >> q & 1 == 1 {
            return Err(SimError::Structural(format!(
                "qubit {q} appears more than once among targets/controls/anticontrols"
            )));
        }
        seen |= 1 << q;
    }
    Ok(())
}
