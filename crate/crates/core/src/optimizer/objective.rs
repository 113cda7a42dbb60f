use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// Discriminant below which the optimal-noise formula is ill defined.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Entries of `2D + R A R + R C S^T + S C^T R + S B S^T = [[alpha, gamma], [gamma, beta]]`.
///
/// This is the noise-free part of the matrix whose determinant sets the
/// fidelity after Bob applies a map with homogeneous part `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveQuadratic {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_od: f64,
}

impl ObjectiveQuadratic {
    pub fn new(alpha: f64, beta: f64, gamma_od: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma_od,
        }
    }

    pub fn from_matrix(m: &Matrix2<f64>) -> Self {
        Self::new(m[(0, 0)], m[(1, 1)], 0.5 * (m[(0, 1)] + m[(1, 0)]))
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.alpha, self.gamma_od, self.gamma_od, self.beta)
    }

    /// `alpha * beta - gamma^2`.
    pub fn discriminant(&self) -> f64 {
        self.alpha * self.beta - self.gamma_od * self.gamma_od
    }

    /// Determinant of `[[alpha + g11, gamma + g12], [gamma + g12, beta + g22]]`
    /// for an arbitrary noise matrix.
    pub fn determinant_with(&self, g: &Matrix2<f64>) -> f64 {
        (self.matrix() + g).determinant()
    }
}

/// Noise matrix minimizing the determinant for fixed `S`: the CP-extremal
/// `G = |1 - s| / sqrt(alpha beta - gamma^2) [[alpha, gamma], [gamma, beta]]`.
pub fn optimal_g_for_s(obj: &ObjectiveQuadratic, s_det: f64) -> Result<Matrix2<f64>> {
    let disc = obj.discriminant();
    if disc <= DEGENERATE_TOL {
        return Err(Error::DegenerateObjective(disc));
    }
    let k = (1.0 - s_det).abs();
    if k == 0.0 {
        return Ok(Matrix2::zeros());
    }
    Ok(obj.matrix() * (k / disc.sqrt()))
}

/// Minimal determinant `(|1 - s| + sqrt(alpha beta - gamma^2))^2`.
pub fn objective_determinant(obj: &ObjectiveQuadratic, s_det: f64) -> Result<f64> {
    let disc = obj.discriminant();
    let scale = obj.alpha.abs().max(obj.beta.abs()).max(1.0);
    if disc < -DEGENERATE_TOL * scale * scale {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let root = (1.0 - s_det).abs() + disc.max(0.0).sqrt();
    Ok(root * root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_needs_no_noise() {
        let obj = ObjectiveQuadratic::new(2.5, 1.7, 0.3);
        assert_eq!(optimal_g_for_s(&obj, 1.0).unwrap(), Matrix2::zeros());
        let d = objective_determinant(&ObjectiveQuadratic::new(2.5, 1.7, 0.0), 1.0).unwrap();
        assert!((d - 2.5 * 1.7).abs() < 1e-14);
    }

    #[test]
    fn vacuum_channel_coherent_input() {
        let obj = ObjectiveQuadratic::new(3.0, 3.0, 0.0);
        let g = optimal_g_for_s(&obj, 0.0).unwrap();
        assert!((g - Matrix2::identity()).amax() < 1e-15);
        assert!((objective_determinant(&obj, 0.0).unwrap() - 16.0).abs() < 1e-12);
        assert!((obj.determinant_with(&g) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn anisotropic_example() {
        let obj = ObjectiveQuadratic::new(4.0, 1.0, 0.0);
        let g = optimal_g_for_s(&obj, 0.5).unwrap();
        assert!((g - Matrix2::new(1.0, 0.0, 0.0, 0.25)).amax() < 1e-15);
        // CP equality det G = (1 - s)^2
        assert!((g.determinant() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tmsv_coherent_consistency() {
        let r = 0.4f64;
        let al = 2.0 * (-2.0 * r).exp() + 2.0;
        let d = objective_determinant(&ObjectiveQuadratic::new(al, al, 0.0), 1.0).unwrap();
        assert!((d - al * al).abs() < 1e-12);
        assert!((2.0 / d.sqrt() - 1.0 / (1.0 + (-2.0 * r).exp())).abs() < 1e-14);
    }

    #[test]
    fn error_paths() {
        let flat = ObjectiveQuadratic::new(1.0, 1.0, 1.0);
        assert!(matches!(optimal_g_for_s(&flat, 0.0), Err(Error::DegenerateObjective(_))));
        let neg = ObjectiveQuadratic::new(1.0, 1.0, 2.0);
        assert!(matches!(objective_determinant(&neg, 0.0), Err(Error::NegativeDiscriminant(_))));
    }
}
