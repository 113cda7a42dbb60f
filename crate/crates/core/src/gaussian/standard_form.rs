use nalgebra::Matrix2;

use super::TwoModeCovariance;
use crate::error::Result;
use crate::linalg;

/// Off-diagonal magnitude treated as already diagonal.
const DIAG_TOL: f64 = 1e-13;

/// Local-symplectic normal form `[[a,0,c1,0],[0,a,0,c2],[c1,0,b,0],[0,c2,0,b]]`.
///
/// `alice_symplectic` and `bob_symplectic` satisfy
/// `(S_A (+) S_B) Gamma (S_A (+) S_B)^T = standard form`.
///
/// Sign and ordering convention:
/// - `c1 * c2 < 0`: `c1 <= 0 <= c2` and `|c1| >= |c2|`;
/// - otherwise: `c1 >= 0` and `|c1| >= |c2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub alice_symplectic: Matrix2<f64>,
    pub bob_symplectic: Matrix2<f64>,
}

impl StandardFormParams {
    pub fn covariance(&self) -> TwoModeCovariance {
        TwoModeCovariance::standard(self.a, self.b, self.c1, self.c2)
    }

    /// Undo the reduction: `(S_A (+) S_B)^{-1} Gamma_std (S_A (+) S_B)^{-T}`.
    pub fn reconstruct(&self) -> TwoModeCovariance {
        let ia = inverse_det1(&self.alice_symplectic);
        let ib = inverse_det1(&self.bob_symplectic);
        self.covariance().local_transform(&ia, &ib)
    }
}

/// Inverse of a 2x2 matrix with unit determinant.
pub(crate) fn inverse_det1(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Symplectic `K O^T` taking a single-mode covariance to `sqrt(det m) * I`.
fn normalize_block(m: &Matrix2<f64>) -> (f64, Matrix2<f64>) {
    let (p, q, r) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let scale = p.abs().max(r.abs()).max(1.0);
    if q.abs() <= DIAG_TOL * scale && (p - r).abs() <= DIAG_TOL * scale {
        return (0.5 * (p + r), Matrix2::identity());
    }
    let theta = 0.5 * (2.0 * q).atan2(p - r);
    let o = linalg::rotation(theta);
    let d = o.transpose() * m * o;
    let (l1, l2) = (d[(0, 0)], d[(1, 1)]);
    let a = (l1 * l2).sqrt();
    let k = Matrix2::new((a / l1).sqrt(), 0.0, 0.0, (a / l2).sqrt());
    (a, k * o.transpose())
}

/// Rotations `(O_A, O_B)` with `O_A c O_B^T` diagonal.
fn rotate_to_diagonal(c: &Matrix2<f64>) -> (Matrix2<f64>, Matrix2<f64>) {
    let scale = c.amax().max(1.0);
    if c[(0, 1)].abs() <= DIAG_TOL * scale && c[(1, 0)].abs() <= DIAG_TOL * scale {
        return (Matrix2::identity(), Matrix2::identity());
    }
    let svd = c.svd(true, true);
    let mut u = svd.u.expect("u requested");
    let mut v_t = svd.v_t.expect("v_t requested");
    // reflections are not symplectic; move them into the singular values
    let flip = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    if u.determinant() < 0.0 {
        u *= flip;
    }
    if v_t.determinant() < 0.0 {
        v_t = flip * v_t;
    }
    (u.transpose(), v_t)
}

/// Reduces a physical two-mode covariance to its tridiagonal standard form.
pub fn to_standard_form(gamma: &TwoModeCovariance) -> Result<StandardFormParams> {
    gamma.require_physical()?;

    let (a, s_a1) = normalize_block(&gamma.a());
    let (b, s_b1) = normalize_block(&gamma.b());
    let c_mid = s_a1 * gamma.c() * s_b1.transpose();
    let (mut o_a, mut o_b) = rotate_to_diagonal(&c_mid);

    let c_diag = o_a * c_mid * o_b.transpose();
    let (mut c1, mut c2) = (c_diag[(0, 0)], c_diag[(1, 1)]);

    // quarter turn on both sides swaps (c1, c2); a half turn on one side negates both
    let quarter = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    if c1.abs() < c2.abs() {
        o_a = quarter * o_a;
        o_b = quarter * o_b;
        std::mem::swap(&mut c1, &mut c2);
    }
    let negate = if c1 * c2 < 0.0 { c1 > 0.0 } else { c1 < 0.0 };
    if negate {
        o_a = -o_a;
        c1 = -c1;
        c2 = -c2;
    }

    Ok(StandardFormParams {
        a,
        b,
        c1,
        c2,
        alice_symplectic: o_a * s_a1,
        bob_symplectic: o_b * s_b1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_tmsv_noisy, ChannelParams};

    #[test]
    fn already_standard_is_fixed() {
        let g = make_tmsv_noisy(ChannelParams::new(0.6, 0.4).unwrap());
        let sf = to_standard_form(&g).unwrap();
        assert_eq!(sf.alice_symplectic, Matrix2::identity());
        assert_eq!(sf.bob_symplectic, Matrix2::identity());
        assert_eq!(sf.covariance(), g);
    }

    #[test]
    fn product_state_has_no_correlations() {
        let g = TwoModeCovariance::from_blocks(
            &Matrix2::new(3.0, 1.0, 1.0, 2.0),
            &Matrix2::new(1.5, -0.2, -0.2, 1.0),
            &Matrix2::zeros(),
        )
        .unwrap();
        let sf = to_standard_form(&g).unwrap();
        assert_eq!((sf.c1, sf.c2), (0.0, 0.0));
        assert!((sf.a - 5f64.sqrt()).abs() < 1e-12);
        assert!((sf.a * sf.a - g.a().determinant()).abs() < 1e-12);
    }

    #[test]
    fn rotated_channel_recovers_parameters() {
        let g = make_tmsv_noisy(ChannelParams::new(0.8, 0.3).unwrap());
        let rotated = g.local_transform(&linalg::rotation(0.7), &linalg::rotation(-2.1));
        let sf = to_standard_form(&rotated).unwrap();
        let want = to_standard_form(&g).unwrap();
        for (x, y) in [(sf.a, want.a), (sf.b, want.b), (sf.c1, want.c1), (sf.c2, want.c2)] {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        assert!((sf.reconstruct().matrix() - rotated.matrix()).amax() < 1e-10);
        assert!((sf.alice_symplectic.determinant() - 1.0).abs() < 1e-12);
        assert!((sf.bob_symplectic.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ordering_convention_for_positive_det_c() {
        let g = TwoModeCovariance::standard(3.0, 3.0, 0.5, 2.0);
        let sf = to_standard_form(&g).unwrap();
        assert!((sf.c1 - 2.0).abs() < 1e-12 && (sf.c2 - 0.5).abs() < 1e-12);
        let g = TwoModeCovariance::standard(3.0, 3.0, -2.0, -0.5);
        let sf = to_standard_form(&g).unwrap();
        assert!((sf.c1 - 2.0).abs() < 1e-12 && (sf.c2 - 0.5).abs() < 1e-12);
        let g = TwoModeCovariance::standard(3.0, 3.0, 0.5, -2.0);
        let sf = to_standard_form(&g).unwrap();
        assert!((sf.c1 + 2.0).abs() < 1e-12 && (sf.c2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unphysical_input_is_rejected() {
        let g = TwoModeCovariance::standard(1.0, 1.0, 1.0, 1.0);
        assert!(to_standard_form(&g).is_err());
    }
}
