use nalgebra::{Matrix2, Matrix4};

use super::{check_symmetric, TwoModeCovariance};
use crate::error::{Error, Result};
use crate::linalg::{self, EIG_TOL};

/// Single-mode trace-preserving Gaussian map `Gamma -> S Gamma S^T + G`.
///
/// `S` and `G` are stored exactly as given; complete positivity is checked
/// with [`is_valid_cp_map`], not enforced here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCpMap {
    s: Matrix2<f64>,
    g: Matrix2<f64>,
}

impl GaussianCpMap {
    pub fn new(s: Matrix2<f64>, g: Matrix2<f64>) -> Result<Self> {
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("S has non-finite entries".into()));
        }
        check_symmetric(&g)?;
        Ok(Self { s, g })
    }

    pub(crate) fn from_parts(s: Matrix2<f64>, g: Matrix2<f64>) -> Self {
        Self {
            s,
            g: linalg::symmetrize(&g),
        }
    }

    pub fn identity() -> Self {
        Self {
            s: Matrix2::identity(),
            g: Matrix2::zeros(),
        }
    }

    /// Discard the mode and prepare vacuum.
    pub fn vacuum_replacement() -> Self {
        Self {
            s: Matrix2::zeros(),
            g: Matrix2::identity(),
        }
    }

    pub fn s(&self) -> &Matrix2<f64> {
        &self.s
    }

    pub fn g(&self) -> &Matrix2<f64> {
        &self.g
    }

    /// `det S`.
    pub fn s_det(&self) -> f64 {
        self.s.determinant()
    }

    /// `g11 g22 - g12^2 - (1 - det S)^2`; zero for extremal maps.
    pub fn cp_slack(&self) -> f64 {
        let k = 1.0 - self.s_det();
        self.g.determinant() - k * k
    }

    /// Scalar form of the CP condition.
    pub fn is_valid(&self) -> bool {
        self.g[(0, 0)] >= -EIG_TOL && self.g[(1, 1)] >= -EIG_TOL && self.cp_slack() >= -EIG_TOL
    }

    /// Matrix form: smallest eigenvalue of `G + i Sigma - i S Sigma S^T`.
    pub fn cp_margin_eigen(&self) -> f64 {
        let sig = linalg::sigma();
        let im = sig - self.s * sig * self.s.transpose();
        linalg::min_eig_hermitian2(&self.g, &im)
    }

    pub fn is_valid_eigen(&self) -> bool {
        self.cp_margin_eigen() >= -EIG_TOL
    }

    pub fn apply(&self, m: &Matrix2<f64>) -> Matrix2<f64> {
        self.s * m * self.s.transpose() + self.g
    }

    fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidCpMap(format!(
                "g11 = {:.3e}, g22 = {:.3e}, det G - (1 - det S)^2 = {:.3e}",
                self.g[(0, 0)],
                self.g[(1, 1)],
                self.cp_slack()
            )))
        }
    }
}

/// Scalar CP test `g11 >= 0, g22 >= 0, det G >= (1 - det S)^2`.
pub fn is_valid_cp_map(map: &GaussianCpMap) -> bool {
    map.is_valid()
}

pub(crate) fn transform_bob(gamma: &TwoModeCovariance, map: &GaussianCpMap) -> TwoModeCovariance {
    let mut s = Matrix4::identity();
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(map.s());
    let g = linalg::direct_sum(&Matrix2::zeros(), map.g());
    TwoModeCovariance::from_symmetric(s * gamma.matrix() * s.transpose() + g)
}

pub(crate) fn transform_alice(
    gamma: &TwoModeCovariance,
    map: &GaussianCpMap,
) -> TwoModeCovariance {
    let mut s = Matrix4::identity();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(map.s());
    let g = linalg::direct_sum(map.g(), &Matrix2::zeros());
    TwoModeCovariance::from_symmetric(s * gamma.matrix() * s.transpose() + g)
}

/// Applies a CP map to Bob's mode: `C -> C S^T`, `B -> S B S^T + G`.
pub fn apply_cp_map_bob(
    gamma: &TwoModeCovariance,
    map: &GaussianCpMap,
) -> Result<TwoModeCovariance> {
    map.require_valid()?;
    gamma.require_physical()?;
    Ok(transform_bob(gamma, map))
}

/// Applies a CP map to Alice's mode: `A -> S A S^T + G`, `C -> S C`.
pub fn apply_cp_map_alice(
    gamma: &TwoModeCovariance,
    map: &GaussianCpMap,
) -> Result<TwoModeCovariance> {
    map.require_valid()?;
    gamma.require_physical()?;
    Ok(transform_alice(gamma, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_tmsv_noisy, ChannelParams, Covariance};

    fn tmsv(r: f64, b0: f64) -> TwoModeCovariance {
        make_tmsv_noisy(ChannelParams::new(r, b0).unwrap())
    }

    #[test]
    fn validity_examples() {
        let id = GaussianCpMap::identity();
        assert!(is_valid_cp_map(&id) && id.is_valid_eigen());
        let vac = GaussianCpMap::vacuum_replacement();
        assert!(is_valid_cp_map(&vac) && vac.is_valid_eigen());
        assert!(vac.cp_slack().abs() < 1e-15);
        let amp = GaussianCpMap::new(Matrix2::identity() * 2.0, Matrix2::zeros()).unwrap();
        assert!(!is_valid_cp_map(&amp));
        assert!(!amp.is_valid_eigen());
        // (1 - 4)^2 = 9 of missing noise; the eigen form sees -3
        assert!((amp.cp_slack() + 9.0).abs() < 1e-12);
        assert!((amp.cp_margin_eigen() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_noise_is_rejected() {
        let g = Matrix2::new(1.0, 0.5, 0.0, 1.0);
        assert!(matches!(
            GaussianCpMap::new(Matrix2::identity(), g),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn identity_leaves_channel_unchanged() {
        let g = tmsv(0.7, 0.2);
        assert_eq!(apply_cp_map_bob(&g, &GaussianCpMap::identity()).unwrap(), g);
        assert_eq!(apply_cp_map_alice(&g, &GaussianCpMap::identity()).unwrap(), g);
    }

    #[test]
    fn vacuum_replacement_destroys_correlations() {
        let g = tmsv(0.7, 0.2);
        let vac = GaussianCpMap::vacuum_replacement();
        let bob = apply_cp_map_bob(&g, &vac).unwrap();
        assert_eq!(bob.c(), Matrix2::zeros());
        assert_eq!(bob.b(), Matrix2::identity());
        assert_eq!(bob.a(), g.a());
        let alice = apply_cp_map_alice(&g, &vac).unwrap();
        assert_eq!(alice.c(), Matrix2::zeros());
        assert_eq!(alice.a(), Matrix2::identity());
        assert_eq!(alice.b(), g.b());
    }

    #[test]
    fn diagonal_alice_map_keeps_tridiagonal_form() {
        let g = tmsv(0.4, 0.3);
        let map = GaussianCpMap::new(Matrix2::new(0.6, 0.0, 0.0, 0.9), Matrix2::identity()).unwrap();
        let out = apply_cp_map_alice(&g, &map).unwrap();
        let m = out.matrix();
        let (a, c1, c2) = (g.a()[(0, 0)], g.c()[(0, 0)], g.c()[(1, 1)]);
        assert!((m[(0, 0)] - (0.36 * a + 1.0)).abs() < 1e-14);
        assert!((m[(1, 1)] - (0.81 * a + 1.0)).abs() < 1e-14);
        assert!((m[(0, 2)] - 0.6 * c1).abs() < 1e-14);
        assert!((m[(1, 3)] - 0.9 * c2).abs() < 1e-14);
        for &(i, j) in &[(0, 1), (0, 3), (1, 2), (2, 3)] {
            assert_eq!(m[(i, j)], 0.0);
        }
        assert!(out.is_physical());
    }

    #[test]
    fn invalid_map_is_a_precondition_error() {
        let amp = GaussianCpMap::new(Matrix2::identity() * 2.0, Matrix2::zeros()).unwrap();
        assert!(matches!(
            apply_cp_map_bob(&tmsv(0.3, 0.0), &amp),
            Err(Error::InvalidCpMap(_))
        ));
    }
}
