use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

/// Single-qubit Pauli channel `rho -> (1 - p) rho + p sigma rho sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel {
    kind: NoiseKind,
    p: f64,
}

type Op2 = [[Complex64; 2]; 2];

impl NoiseChannel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SimError::Parameter(format!("noise probability {p} outside [0, 1]")));
        }
        Ok(Self { kind, p })
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(NoiseKind::BitFlip, p)
    }

    pub fn phase_flip(p: f64) -> Result<Self> {
        Self::new(NoiseKind::PhaseFlip, p)
    }

    pub fn bit_phase_flip(p: f64) -> Result<Self> {
        Self::new(NoiseKind::BitPhaseFlip, p)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `[sqrt(1 - p) I, sqrt(p) sigma]`.
    pub fn kraus(&self) -> [Op2; 2] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let sigma: Op2 = match self.kind {
            NoiseKind::BitFlip => [[z, one], [one, z]],
            NoiseKind::PhaseFlip => [[one, z], [z, -one]],
            NoiseKind::BitPhaseFlip => [[z, -i], [i, z]],
        };
        let a = (1.0 - self.p).sqrt();
        let b = self.p.sqrt();
        [[[one * a, z], [z, one * a]], sigma.map(|row| row.map(|e| e * b))]
    }

    /// `sum_k K_k^dagger K_k` as a 2x2 matrix; equals `I` for a valid channel.
    pub fn completeness(&self) -> Op2 {
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for k in self.kraus() {
            for r in 0..2 {
                for c in 0..2 {
                    for m in 0..2 {
                        acc[r][c] += k[m][r].conj() * k[m][c];
                    }
                }
            }
        }
        acc
    }
}

/// Applies `ch` to qubit `q` of `rho` through its Kraus operators.
pub fn apply_channel(rho: &DensityMatrix, q: usize, ch: &NoiseChannel) -> Result<DensityMatrix> {
    if q >= rho.n_qubits() {
        return Err(SimError::Structural(format!("qubit {q} out of range")));
    }
    let dim = rho.dim();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for k in ch.kraus() {
        out += conjugate_local(rho.matrix(), q, &k);
    }
    DensityMatrix::from_matrix_unchecked(out)
}

/// `K rho K^dagger` with `K` acting on qubit `q`.
fn conjugate_local(m: &DMatrix<Complex64>, q: usize, k: &Op2) -> DMatrix<Complex64> {
    let dim = m.nrows();
    let bit = 1usize << q;
    let mut left = m.clone();
    for c in 0..dim {
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let (a, b) = (m[(r0, c)], m[(r0 | bit, c)]);
            left[(r0, c)] = k[0][0] * a + k[0][1] * b;
            left[(r0 | bit, c)] = k[1][0] * a + k[1][1] * b;
        }
    }
    let mut out = left.clone();
    for r in 0..dim {
        for c0 in (0..dim).filter(|c| c & bit == 0) {
            let (a, b) = (left[(r, c0)], left[(r, c0 | bit)]);
            out[(r, c0)] = a * k[0][0].conj() + b * k[0][1].conj();
            out[(r, c0 | bit)] = a * k[1][0].conj() + b * k[1][1].conj();
        }
    }
    out
}
