use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense `2^arity x 2^arity` gate matrix, stored row-major.
///
/// Bit `j` of a row/column index addresses the `j`-th target qubit handed
/// to [`StateVector::apply`](super::StateVector::apply).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateMatrix {
    name: String,
    arity: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    /// Registers a gate, rejecting anything that is not unitary within 1e-10.
    pub fn new(name: impl Into<String>, arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        let gate = Self::new_unchecked(name, arity, entries)?;
        if !gate.is_unitary(UNITARY_TOL) {
            return Err(SimError::Parameter(format!(
                "gate `{}` is not unitary",
                gate.name
            )));
        }
        Ok(gate)
    }

    /// Shape-checked but not unitarity-checked. Circuits may carry such
    /// matrices so that validation can report them.
    pub fn new_unchecked(
        name: impl Into<String>,
        arity: usize,
        entries: Vec<Complex64>,
    ) -> Result<Self> {
        let name = name.into();
        if arity == 0 || arity > 4 {
            return Err(SimError::Parameter(format!(
                "gate `{name}` has unsupported arity {arity}"
            )));
        }
        let dim = 1usize << arity;
        if entries.len() != dim * dim {
            return Err(SimError::Structural(format!(
                "gate `{name}` needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { name, arity, entries })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Checks `U^dagger U = I` entrywise.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = ZERO;
                for k in 0..dim {
                    acc += self.get(k, r).conj() * self.get(k, c);
                }
                let expected = if r == c { ONE } else { ZERO };
                if (acc - expected).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity() -> Self {
        Self::fixed("I", 1, vec![ONE, ZERO, ZERO, ONE])
    }

    pub fn pauli_x() -> Self {
        Self::fixed("X", 1, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::fixed("Y", 1, vec![ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::fixed("Z", 1, vec![ONE, ZERO, ZERO, -ONE])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::fixed("H", 1, vec![h, h, h, -h])
    }

    pub fn t() -> Self {
        Self::fixed("T", 1, vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, FRAC_PI_4)])
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::fixed(
            "RY",
            1,
            vec![
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        )
    }

    pub fn swap() -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[4 + 2] = ONE;
        m[2 * 4 + 1] = ONE;
        m[15] = ONE;
        Self::fixed("SWAP", 2, m)
    }

    fn fixed(name: &str, arity: usize, entries: Vec<Complex64>) -> Self {
        Self { name: name.to_string(), arity, entries }
    }
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}q]", self.name, self.arity)
    }
}
