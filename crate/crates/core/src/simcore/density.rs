use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Result, SimError};

pub const DENSITY_TOL: f64 = 1e-10;

/// Largest number of qubits a partial trace may keep (1024 x 1024 matrix).
pub const MAX_KEPT_QUBITS: usize = 10;

/// Hermitian, positive semidefinite, unit-trace matrix over `n` qubits.
/// Row/column bit `j` addresses the `j`-th qubit of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and eigenvalues `>= -1e-10`.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(m)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(SimError::Structural(format!(
                "density matrix must be square with power-of-two side, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { n_qubits: dim.trailing_zeros() as usize, m })
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        if state.n_qubits() > 2 * MAX_KEPT_QUBITS {
            return Err(SimError::Size("pure state too large for a dense density matrix".into()));
        }
        let amps = state.amplitudes();
        let dim = amps.len();
        let m = DMatrix::from_fn(dim, dim, |r, c| amps[r] * amps[c].conj());
        Ok(Self { n_qubits: state.n_qubits(), m })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let m = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(1.0 / dim as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::from_matrix_unchecked(m)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.m;
        let dim = m.nrows();
        for r in 0..dim {
            for c in r..dim {
                if (m[(r, c)] - m[(c, r)].conj()).norm() > DENSITY_TOL {
                    return Err(SimError::Structural("density matrix is not Hermitian".into()));
                }
            }
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(SimError::Structural(format!("density matrix trace is {tr}")));
        }
        if let Some(low) = self.eigenvalues().iter().copied().reduce(f64::min) {
            if low < -DENSITY_TOL {
                return Err(SimError::Structural(format!(
                    "density matrix has negative eigenvalue {low}"
                )));
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum |rho_rc|^2 for Hermitian rho.
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = hermitian(&self.m).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn prob_one(&self, q: usize) -> Result<f64> {
        if q >= self.n_qubits {
            return Err(SimError::Structural(format!("qubit {q} out of range")));
        }
        Ok((0..self.dim()).filter(|i| i >> q & 1 == 1).map(|i| self.m[(i, i)].re).sum())
    }

    /// Reduced state on `keep` (sorted ascending); kept qubit `keep[j]` becomes bit `j`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = normalize_keep(keep, self.n_qubits)?;
        let (kept_off, env_off) = offsets(&keep, self.n_qubits);
        let k = kept_off.len();
        let mut out = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
        for &e in &env_off {
            for (a, &oa) in kept_off.iter().enumerate() {
                for (b, &ob) in kept_off.iter().enumerate() {
                    out[(a, b)] += self.m[(e | oa, e | ob)];
                }
            }
        }
        Self::from_matrix_unchecked(out)
    }
}

/// Reduced density matrix of a pure state on the `keep` qubits.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = normalize_keep(keep, state.n_qubits())?;
    let (kept_off, env_off) = offsets(&keep, state.n_qubits());
    let amps = state.amplitudes();
    let k = kept_off.len();
    let mut out = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
    let mut column = vec![Complex64::new(0.0, 0.0); k];
    for &e in &env_off {
        for (slot, &oa) in column.iter_mut().zip(&kept_off) {
            *slot = amps[e | oa];
        }
        if column.iter().all(|z| z.norm_sqr() == 0.0) {
            continue;
        }
        for a in 0..k {
            if column[a].norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..k {
                out[(a, b)] += column[a] * column[b].conj();
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(out)
}

fn normalize_keep(keep: &[usize], n_qubits: usize) -> Result<Vec<usize>> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(SimError::Structural("partial trace must keep at least one qubit".into()));
    }
    if keep.len() > MAX_KEPT_QUBITS {
        return Err(SimError::Size(format!(
            "partial trace keeps {} qubits, limit is {MAX_KEPT_QUBITS}",
            keep.len()
        )));
    }
    if let Some(&q) = keep.iter().find(|&&q| q >= n_qubits) {
        return Err(SimError::Structural(format!("qubit {q} out of range")));
    }
    Ok(keep)
}

/// Basis-index offsets for every assignment of the kept qubits and of the
/// traced-out environment.
fn offsets(keep: &[usize], n_qubits: usize) -> (Vec<usize>, Vec<usize>) {
    let env: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
    (scatter_all(keep), scatter_all(&env))
}

fn scatter_all(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|j| {
            qubits
                .iter()
                .enumerate()
                .filter(|(bit, _)| j >> bit & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect()
}

pub(crate) fn hermitian(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues below this (relative to the largest) are rounding noise of a
/// rank-deficient matrix and are dropped before taking square roots, which
/// would otherwise blow a 1e-16 error up to 1e-8.
const RANK_TOL: f64 = 1e-12;

/// `sqrt` of a PSD Hermitian matrix via eigendecomposition.
pub(crate) fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = hermitian(m).symmetric_eigen();
    let dim = m.nrows();
    let cutoff = RANK_TOL * eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l));
    let mut d = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > cutoff {
            d[(i, i)] = Complex64::new(l.sqrt(), 0.0);
        }
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::GateMatrix;

    fn bell() -> StateVector {
        let mut s = StateVector::new(2).unwrap();
        s.apply(&GateMatrix::hadamard(), &[1], &[], &[]).unwrap();
        s.apply(&GateMatrix::pauli_x(), &[0], &[1], &[]).unwrap();
        s
    }

    fn approx(a: &DensityMatrix, b: &[[f64; 2]; 2]) -> bool {
        (0..2).all(|r| (0..2).all(|c| (a.get(r, c) - Complex64::new(b[r][c], 0.0)).norm() < 1e-12))
    }

    #[test]
    fn bell_reduced_is_maximally_mixed() {
        let r = partial_trace(&bell(), &[0]).unwrap();
        assert!(approx(&r, &[[0.5, 0.0], [0.0, 0.5]]));
        let r = partial_trace(&bell(), &[1]).unwrap();
        assert!(approx(&r, &[[0.5, 0.0], [0.0, 0.5]]));
    }

    #[test]
    fn product_state_keeps_low_factor() {
        // |0> ⊗ |1>: q1 = 0, q0 = 1.
        let s = StateVector::basis(2, 0b01).unwrap();
        let r = partial_trace(&s, &[0]).unwrap();
        assert!(approx(&r, &[[0.0, 0.0], [0.0, 1.0]]));
        assert!((r.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_and_state_routes_agree() {
        let s = bell().extend(1).unwrap();
        let via_state = partial_trace(&s, &[0, 2]).unwrap();
        let via_rho = DensityMatrix::from_pure(&s).unwrap().partial_trace(&[0, 2]).unwrap();
        assert!((via_state.matrix() - via_rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn keep_limits() {
        let s = StateVector::new(12).unwrap();
        assert!(matches!(partial_trace(&s, &(0..11).collect::<Vec<_>>()), Err(SimError::Size(_))));
        assert!(partial_trace(&s, &[]).is_err());
        assert!(partial_trace(&s, &[12]).is_err());
    }

    #[test]
    fn invalid_matrices_rejected() {
        let bad_trace = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        assert!(DensityMatrix::from_matrix(bad_trace).is_err());
        let non_psd = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0)],
        );
        assert!(DensityMatrix::from_matrix(non_psd).is_err());
        let non_herm = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        );
        assert!(DensityMatrix::from_matrix(non_herm).is_err());
    }
}
