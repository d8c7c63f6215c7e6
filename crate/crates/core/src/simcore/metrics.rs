use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{psd_sqrt, DensityMatrix};
use crate::error::{Result, SimError};

/// `Tr[(sqrt(rho_out) rho_in sqrt(rho_out))^(1/2)]`, clamped to `[0, 1]`.
///
/// Computed as the nuclear norm of `sqrt(rho_in) sqrt(rho_out)`; singular
/// values stay accurate where eigenvalues near zero would not. For pure
/// states this equals `|<psi_in|psi_out>|`.
pub fn fidelity(rho_in: &DensityMatrix, rho_out: &DensityMatrix) -> Result<f64> {
    if rho_in.dim() != rho_out.dim() {
        return Err(SimError::Structural(format!(
            "fidelity of {}x{} and {}x{} matrices",
            rho_in.dim(),
            rho_in.dim(),
            rho_out.dim(),
            rho_out.dim()
        )));
    }
    let product = psd_sqrt(rho_in.matrix()) * psd_sqrt(rho_out.matrix());
    let f: f64 = product.singular_values().iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(SimError::Structural(format!(
            "concurrence needs a 2-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    rho.validate()?;
    let m = rho.matrix();
    // sigma_y ⊗ sigma_y is real: antidiagonal (-1, 1, 1, -1).
    let yy = DMatrix::from_fn(4, 4, |r, c| match (r, c) {
        (0, 3) | (3, 0) => Complex64::new(-1.0, 0.0),
        (1, 2) | (2, 1) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    });
    // The lambdas are the square roots of the eigenvalues of rho * rho~,
    // i.e. the singular values of sqrt(rho) sqrt(rho~), and
    // sqrt(rho~) = YY conj(sqrt(rho)) YY with YY unitary.
    let s = psd_sqrt(m);
    let mut lambdas: Vec<f64> = (&s * &yy * s.map(|z| z.conj())).singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Polar angles and purity of a single-qubit state.
///
/// `theta = acos(<Z>)` so that `P(1) = (1 - cos theta) / 2` holds for mixed
/// states too; `phi = atan2(<Y>, <X>)` wrapped into `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
    pub purity: f64,
    pub vector: [f64; 3],
}

pub fn bloch_angles(rho: &DensityMatrix) -> Result<BlochAngles> {
    if rho.n_qubits() != 1 {
        return Err(SimError::Structural("bloch_angles needs a 1-qubit state".into()));
    }
    let off = rho.get(0, 1);
    let x = 2.0 * off.re;
    let y = -2.0 * off.im;
    let z = (rho.get(0, 0) - rho.get(1, 1)).re;
    let theta = z.clamp(-1.0, 1.0).acos();
    let mut phi = if x.hypot(y) < 1e-12 { 0.0 } else { y.atan2(x) };
    if phi < 0.0 {
        phi += TAU;
    }
    if phi >= TAU {
        phi -= TAU;
    }
    debug_assert!((0.0..=PI).contains(&theta));
    Ok(BlochAngles { theta, phi, purity: rho.purity(), vector: [x, y, z] })
}
