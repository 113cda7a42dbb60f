//! Gaussian covariance matrices, Gaussian CP maps and the checks on them.
//!
//! Convention: the covariance matrix holds doubled symmetrized second
//! moments, `Gamma_ij = <dr_i dr_j + dr_j dr_i>`, so the vacuum is the
//! identity matrix. Quadratures are ordered `(x_A, p_A, x_B, p_B)`.

mod channel;
mod cp_map;

pub(crate) mod cp_map_internal {
    pub(crate) use super::cp_map::{transform_alice, transform_bob};
}
mod standard_form;

pub use channel::{make_tmsv_noisy, ChannelParams, ChannelSpec};
pub use cp_map::{apply_cp_map_alice, apply_cp_map_bob, is_valid_cp_map, GaussianCpMap};
pub use standard_form::{to_standard_form, StandardFormParams};
pub(crate) use standard_form::inverse_det1;

use nalgebra::{Matrix2, Matrix4};

use crate::error::{Error, Result};
use crate::linalg::{self, EIG_TOL};

/// Relative asymmetry accepted before a matrix is rejected as non-symmetric.
const SYMMETRY_TOL: f64 = 1e-10;

/// Purity tolerance on `det D - 1`.
pub const PURITY_TOL: f64 = 1e-9;

fn check_symmetric<const N: usize>(m: &nalgebra::SMatrix<f64, N, N>) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let scale = m.amax().max(1.0);
    let asym = linalg::max_asymmetry(m);
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Anything that can be tested against the uncertainty principle.
pub trait Covariance {
    /// Smallest eigenvalue of the Hermitian matrix `m + i*Omega`.
    fn uncertainty_margin(&self) -> f64;

    fn is_physical(&self) -> bool {
        self.uncertainty_margin() >= -EIG_TOL
    }
}

/// True iff `g + i*Omega` is positive semidefinite within [`EIG_TOL`].
pub fn is_physical<T: Covariance>(g: &T) -> bool {
    g.is_physical()
}

/// Single-mode covariance matrix (an input state `D` or a reduced block).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneModeCovariance {
    m: Matrix2<f64>,
}

impl OneModeCovariance {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(Self {
            m: linalg::symmetrize(&m),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    pub fn diagonal(d11: f64, d22: f64) -> Self {
        Self {
            m: Matrix2::new(d11, 0.0, 0.0, d22),
        }
    }

    /// Squeezed vacuum `Rot(theta) diag(e^{2s}, e^{-2s}) Rot(theta)^T`.
    pub fn squeezed(s: f64, theta: f64) -> Self {
        let rot = linalg::rotation(theta);
        let d = Matrix2::new((2.0 * s).exp(), 0.0, 0.0, (-2.0 * s).exp());
        Self {
            m: linalg::symmetrize(&(rot * d * rot.transpose())),
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    pub fn is_pure(&self) -> bool {
        (self.det() - 1.0).abs() <= PURITY_TOL
    }

    pub fn require_physical(&self) -> Result<()> {
        let min_eig = self.uncertainty_margin();
        if min_eig < -EIG_TOL {
            return Err(Error::NotPhysical {
                what: "single-mode covariance",
                min_eig,
            });
        }
        Ok(())
    }

    pub fn require_pure(&self) -> Result<()> {
        self.require_physical()?;
        if !self.is_pure() {
            return Err(Error::NotPure(self.det()));
        }
        Ok(())
    }
}

impl Covariance for OneModeCovariance {
    fn uncertainty_margin(&self) -> f64 {
        linalg::min_eig_hermitian2(&self.m, &linalg::sigma())
    }
}

/// Two-mode covariance matrix `[[A, C], [C^T, B]]`; Alice holds mode A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    m: Matrix4<f64>,
}

impl TwoModeCovariance {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(Self {
            m: linalg::symmetrize(&m),
        })
    }

    pub(crate) fn from_symmetric(m: Matrix4<f64>) -> Self {
        Self {
            m: linalg::symmetrize(&m),
        }
    }

    pub fn from_blocks(a: &Matrix2<f64>, b: &Matrix2<f64>, c: &Matrix2<f64>) -> Result<Self> {
        let mut m = linalg::direct_sum(a, b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
        Self::new(m)
    }

    /// Tridiagonal standard form with parameters `(a, b, c1, c2)`.
    pub fn standard(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        #[rustfmt::skip]
        let m = Matrix4::new(
            a, 0.0, c1, 0.0,
            0.0, a, 0.0, c2,
            c1, 0.0, b, 0.0,
            0.0, c2, 0.0, b,
        );
        Self { m }
    }

    pub fn vacuum() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Alice's reduced covariance.
    pub fn a(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Bob's reduced covariance.
    pub fn b(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Inter-modal correlation block.
    pub fn c(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn require_physical(&self) -> Result<()> {
        let min_eig = self.uncertainty_margin();
        if min_eig < -EIG_TOL {
            return Err(Error::NotPhysical {
                what: "two-mode covariance",
                min_eig,
            });
        }
        Ok(())
    }

    /// Covariance after flipping Bob's momentum, `Lambda Gamma Lambda`.
    pub fn partial_transpose(&self) -> Self {
        let lambda = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        Self {
            m: lambda * self.m * lambda,
        }
    }

    /// Conjugation by the local operation `S_A (+) S_B`.
    pub fn local_transform(&self, s_a: &Matrix2<f64>, s_b: &Matrix2<f64>) -> Self {
        let s = linalg::direct_sum(s_a, s_b);
        Self::from_symmetric(s * self.m * s.transpose())
    }
}

impl Covariance for TwoModeCovariance {
    fn uncertainty_margin(&self) -> f64 {
        linalg::min_eig_hermitian4(&self.m, &linalg::omega())
    }
}

/// PPT test: Gaussian two-mode states are separable iff the partially
/// transposed covariance is still physical.
pub fn is_ppt_separable(gamma: &TwoModeCovariance) -> Result<bool> {
    gamma.require_physical()?;
    Ok(gamma.partial_transpose().is_physical())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_physical_and_pure() {
        assert!(is_physical(&TwoModeCovariance::vacuum()));
        assert!(OneModeCovariance::vacuum().is_pure());
    }

    #[test]
    fn sub_vacuum_variance_is_unphysical() {
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.5, 0.5, 1.0, 1.0));
        let g = TwoModeCovariance::new(m).unwrap();
        assert!(!g.is_physical());
        assert!(matches!(g.require_physical(), Err(Error::NotPhysical { .. })));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 0.3;
        assert!(matches!(TwoModeCovariance::new(m), Err(Error::NotSymmetric(_))));
        let d = Matrix2::new(1.0, 0.2, 0.0, 1.0);
        assert!(matches!(OneModeCovariance::new(d), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn squeezed_states_are_pure() {
        for &(s, th) in &[(0.3, 0.0), (-0.7, 1.1), (1.2, -2.0)] {
            let d = OneModeCovariance::squeezed(s, th);
            assert!(d.is_pure());
            assert!(d.is_physical());
        }
        let thermal = OneModeCovariance::diagonal(2.0, 2.0);
        assert!(thermal.is_physical() && !thermal.is_pure());
        assert!(matches!(thermal.require_pure(), Err(Error::NotPure(_))));
        assert!(!OneModeCovariance::diagonal(0.5, 1.5).is_physical());
    }

    #[test]
    fn ppt_examples() {
        let product = TwoModeCovariance::from_blocks(
            &Matrix2::new(2.0, 0.3, 0.3, 1.0),
            &Matrix2::identity(),
            &Matrix2::zeros(),
        )
        .unwrap();
        assert!(is_ppt_separable(&product).unwrap());
        let tmsv = make_tmsv_noisy(ChannelParams::new(1.0, 0.0).unwrap());
        assert!(!is_ppt_separable(&tmsv).unwrap());
        let noisy_vacuum = make_tmsv_noisy(ChannelParams::new(0.0, 0.5).unwrap());
        assert!(is_ppt_separable(&noisy_vacuum).unwrap());
    }

    #[test]
    fn ppt_rejects_unphysical_input() {
        let g = TwoModeCovariance::standard(0.5, 1.0, 0.0, 0.0);
        assert!(is_ppt_separable(&g).is_err());
    }
}
