//! Small fixed-size helpers shared by the covariance types.

use nalgebra::{Matrix2, Matrix4, SMatrix, SymmetricEigen};

/// Absolute tolerance on the smallest eigenvalue in physicality and CP tests.
pub const EIG_TOL: f64 = 1e-9;

/// The constant single-mode matrices of the phase-space formalism.
///
/// `sigma` is the symplectic form, `r_matrix = diag(1, -1)` is the momentum
/// reflection that appears in the teleportation noise matrix.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticForm {
    pub sigma: Matrix2<f64>,
    pub r_matrix: Matrix2<f64>,
}

impl SymplecticForm {
    pub fn new() -> Self {
        Self {
            sigma: sigma(),
            r_matrix: reflection(),
        }
    }
}

impl Default for SymplecticForm {
    fn default() -> Self {
        Self::new()
    }
}

#[inline]
pub fn sigma() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

#[inline]
pub fn reflection() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// Two-mode symplectic form `Sigma (+) Sigma`.
pub fn omega() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o.fixed_view_mut::<2, 2>(0, 0).copy_from(&sigma());
    o.fixed_view_mut::<2, 2>(2, 2).copy_from(&sigma());
    o
}

/// Counter-clockwise rotation by `theta`.
#[inline]
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

pub fn direct_sum(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

pub fn max_asymmetry<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in (i + 1)..N {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of the Hermitian 2x2 matrix `re + i*im`.
///
/// Uses the real symmetric embedding `[[re, -im], [im, re]]`, whose spectrum
/// is the Hermitian spectrum with every eigenvalue doubled.
pub fn min_eig_hermitian2(re: &Matrix2<f64>, im: &Matrix2<f64>) -> f64 {
    let mut big = SMatrix::<f64, 4, 4>::zeros();
    big.fixed_view_mut::<2, 2>(0, 0).copy_from(re);
    big.fixed_view_mut::<2, 2>(2, 2).copy_from(re);
    big.fixed_view_mut::<2, 2>(0, 2).copy_from(&(-im));
    big.fixed_view_mut::<2, 2>(2, 0).copy_from(im);
    SymmetricEigen::new(symmetrize(&big)).eigenvalues.min()
}

/// Smallest eigenvalue of the Hermitian 4x4 matrix `re + i*im`.
pub fn min_eig_hermitian4(re: &Matrix4<f64>, im: &Matrix4<f64>) -> f64 {
    let mut big = SMatrix::<f64, 8, 8>::zeros();
    big.fixed_view_mut::<4, 4>(0, 0).copy_from(re);
    big.fixed_view_mut::<4, 4>(4, 4).copy_from(re);
    big.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-im));
    big.fixed_view_mut::<4, 4>(4, 0).copy_from(im);
    SymmetricEigen::new(symmetrize(&big)).eigenvalues.min()
}

/// Largest eigenvalue of a real symmetric 2x2 matrix.
pub fn max_eig_sym2(m: &Matrix2<f64>) -> f64 {
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let half_diff = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    half_tr + half_diff.hypot(0.5 * (m[(0, 1)] + m[(1, 0)]))
}

/// Largest eigenvalue of a real symmetric 4x4 matrix.
pub fn max_eig_sym4(m: &Matrix4<f64>) -> f64 {
    SymmetricEigen::new(symmetrize(m)).eigenvalues.max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let f = SymplecticForm::new();
        assert_eq!(f.sigma.transpose(), -f.sigma);
        assert_eq!(f.r_matrix * f.r_matrix, Matrix2::identity());
        assert_eq!(omega().transpose(), -omega());
    }

    #[test]
    fn hermitian_embedding_matches_closed_form() {
        // [[2, 0.5 + 1.5i], [0.5 - 1.5i, 1]]
        let re = Matrix2::new(2.0, 0.5, 0.5, 1.0);
        let im = Matrix2::new(0.0, 1.5, -1.5, 0.0);
        let expected = 1.5 - (0.25f64 + 0.25 + 2.25).sqrt();
        assert!((min_eig_hermitian2(&re, &im) - expected).abs() < 1e-12);
    }

    #[test]
    fn vacuum_sits_on_the_boundary() {
        let m = Matrix4::identity();
        assert!(min_eig_hermitian4(&m, &omega()).abs() < 1e-12);
    }
}
