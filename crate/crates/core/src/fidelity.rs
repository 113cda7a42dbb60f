//! Closed-form teleportation fidelities for Gaussian channels.
//!
//! With a shared state `Gamma = [[A, C], [C^T, B]]` and unit-gain
//! Braunstein-Kimble teleportation, the output of a pure Gaussian input `D`
//! is Gaussian with covariance `D + E'`, where
//! `E' = R A R + R C + C^T R + B` and `R = diag(1, -1)`. The fidelity is
//! `F = 2 / sqrt(det(2D + E'))`. Setting `D = 0` gives the renormalized
//! fidelity of the teleportation operation itself (equivalently of
//! entanglement swapping), which exceeds 1 only for entangled channels.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::Result;
use crate::gaussian::{OneModeCovariance, TwoModeCovariance};
use crate::linalg::reflection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityKind {
    /// Fidelity of a pure Gaussian input, in `(0, 1]`.
    PureStateFidelity,
    /// Renormalized operation fidelity, unbounded above.
    SwapFidelity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityValue {
    pub value: f64,
    pub kind: FidelityKind,
}

/// Added-noise matrix `E'` of the teleportation channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMatrixE(pub Matrix2<f64>);

impl NoiseMatrixE {
    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }
}

pub(crate) fn noise_matrix_unchecked(gamma: &TwoModeCovariance) -> Matrix2<f64> {
    let r = reflection();
    let c = gamma.c();
    let e = r * gamma.a() * r + r * c + c.transpose() * r + gamma.b();
    (e + e.transpose()) * 0.5
}

/// `2 / sqrt(det m)`.
#[inline]
pub fn fidelity_from_matrix(m: &Matrix2<f64>) -> f64 {
    2.0 / m.determinant().sqrt()
}

pub fn noise_matrix(gamma: &TwoModeCovariance) -> Result<NoiseMatrixE> {
    gamma.require_physical()?;
    Ok(NoiseMatrixE(noise_matrix_unchecked(gamma)))
}

/// Fidelity of teleporting a pure Gaussian state with covariance `d`.
pub fn teleport_fidelity(gamma: &TwoModeCovariance, d: &OneModeCovariance) -> Result<FidelityValue> {
    gamma.require_physical()?;
    d.require_pure()?;
    let e = d.matrix() * 2.0 + noise_matrix_unchecked(gamma);
    Ok(FidelityValue {
        value: fidelity_from_matrix(&e),
        kind: FidelityKind::PureStateFidelity,
    })
}

/// Renormalized fidelity of the teleportation operation, `2 / sqrt(det E')`.
pub fn swap_fidelity(gamma: &TwoModeCovariance) -> Result<FidelityValue> {
    gamma.require_physical()?;
    Ok(FidelityValue {
        value: fidelity_from_matrix(&noise_matrix_unchecked(gamma)),
        kind: FidelityKind::SwapFidelity,
    })
}

/// Covariance of the teleported state, `D_in + E'`.
pub fn output_covariance(
    gamma: &TwoModeCovariance,
    d_in: &OneModeCovariance,
) -> Result<OneModeCovariance> {
    gamma.require_physical()?;
    d_in.require_physical()?;
    OneModeCovariance::new(d_in.matrix() + noise_matrix_unchecked(gamma))
}
