//! Flexible representation of quantum images.
//!
//! Each pixel's gray level becomes an angle on a single color qubit that is
//! entangled with a position register. The state is built directly at the
//! amplitude level. Measuring the color qubit collapses it to a basis state,
//! so single-shot recovery can only produce a binarized image.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::imagepipe::GrayImage;
use crate::simcore::{measure_qubit, StateVector, MAX_QUBITS};
use crate::{Result, SimError};

/// Angles for a `2^n x 2^n` image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FrqiAngles {
    n: u32,
    theta: Vec<f64>,
}

impl FrqiAngles {
    pub fn new(n: u32, theta: Vec<f64>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(2 * n)
            .ok_or_else(|| SimError::Size(format!("side exponent {n} too large")))?;
        if theta.len() != expected {
            return Err(SimError::Structural(format!(
                "n = {n} needs {expected} angles, got {}",
                theta.len()
            )));
        }
        if let Some(bad) = theta.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
            return Err(SimError::Parameter(format!("angle {bad} outside [0, pi/2]")));
        }
        Ok(Self { n, theta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// Linear gray-to-angle map, 0 to 0 and 255 to pi/2.
pub fn gray_to_angle(g: u8) -> f64 {
    FRAC_PI_2 * f64::from(g) / 255.0
}

pub fn angles_from_gray(image: &GrayImage) -> Result<FrqiAngles> {
    let n = image.square_exponent().ok_or_else(|| {
        SimError::Structural(format!(
            "{}x{} is not a power-of-two square",
            image.rows(),
            image.cols()
        ))
    })?;
    FrqiAngles::new(n, image.pixels().iter().map(|&g| gray_to_angle(g)).collect())
}

/// An encoded image over `2n + 1` qubits; qubit `2n` is the color qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct FrqiState {
    pub n: u32,
    pub state: StateVector,
}

impl FrqiState {
    pub fn color_index(&self) -> usize {
        2 * self.n as usize
    }
}

pub fn frqi_encode(angles: &FrqiAngles) -> Result<FrqiState> {
    let n_qubits = 2 * angles.n as usize + 1;
    if n_qubits > MAX_QUBITS {
        return Err(SimError::Size(format!("{n_qubits} qubits exceeds the cap of {MAX_QUBITS}")));
    }
    let positions = angles.theta.len();
    let scale = 1.0 / f64::from(1u32 << angles.n);
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * positions];
    for (i, t) in angles.theta.iter().enumerate() {
        amps[i] = Complex64::new(scale * t.cos(), 0.0);
        amps[positions + i] = Complex64::new(scale * t.sin(), 0.0);
    }
    Ok(FrqiState { n: angles.n, state: StateVector::from_amplitudes(amps)? })
}

/// `cos(theta)|0> + sin(theta)|1>`.
pub fn color_qubit(theta: f64) -> StateVector {
    StateVector::qubit(Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0))
        .expect("cos^2 + sin^2 = 1")
}

fn pixel_rng(seed: u64, pixel: usize) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pixel as u64);
    rng
}

/// One z-axis measurement per pixel of its color qubit: 255 on outcome 1,
/// 0 otherwise. Each pixel draws from its own stream so the result does not
/// depend on evaluation order.
pub fn frqi_measure_recover(image: &GrayImage, seed: u64) -> Result<GrayImage> {
    let mut out = Vec::with_capacity(image.pixels().len());
    for (i, &g) in image.pixels().iter().enumerate() {
        let (bit, _) = measure_qubit(&color_qubit(gray_to_angle(g)), 0, &mut pixel_rng(seed, i))?;
        out.push(if bit == 1 { 255 } else { 0 });
    }
    GrayImage::new(image.rows(), image.cols(), out).map_err(|e| SimError::Internal(e.to_string()))
}

/// Single full-register shot: returns `(color bit, position index)`.
pub fn frqi_sample<R: Rng + ?Sized>(encoded: &FrqiState, rng: &mut R) -> (u8, usize) {
    let idx = encoded.state.sample_index(rng);
    let positions = 1usize << (2 * encoded.n);
    ((idx >= positions) as u8, idx % positions)
}
