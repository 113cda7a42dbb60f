//! Real roots of the low-degree polynomials that locate stationary points.
//!
//! Coefficients are in ascending order: `c[0] + c[1] x + c[2] x^2 + ...`.

use nalgebra::{Complex, Matrix4, Schur, Vector4};

/// Relative size below which a coefficient is treated as zero.
const COEF_TOL: f64 = 1e-12;
/// Imaginary parts accepted as numerical noise on a real eigenvalue.
const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum RealRoots {
    Roots(Vec<f64>),
    /// Every coefficient vanished; any `x` solves the equation.
    Indeterminate,
}

pub fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn eval_poly_derivative(c: &[f64], x: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &ci)| acc * x + k as f64 * ci)
}

/// Sum of `|c_k| |x|^k`, the natural scale of a residual at `x`.
pub fn residual_scale(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x.abs() + ci.abs())
}

/// Real roots of `c0 + c1 x + c2 x^2`, falling back to the linear case when
/// the leading coefficient vanishes relative to `scale`.
pub fn solve_quadratic(c: [f64; 3], scale: f64) -> RealRoots {
    let scale = scale.max(c.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let zero = |v: f64| v.abs() <= COEF_TOL * scale;
    let [c0, c1, c2] = c;
    if zero(c2) {
        if zero(c1) {
            return if zero(c0) {
                RealRoots::Indeterminate
            } else {
                RealRoots::Roots(vec![])
            };
        }
        return RealRoots::Roots(vec![-c0 / c1]);
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let disc_scale = c1 * c1 + (4.0 * c2 * c0).abs();
    if disc < 0.0 {
        if disc >= -COEF_TOL * disc_scale {
            return RealRoots::Roots(vec![-c1 / (2.0 * c2)]);
        }
        return RealRoots::Roots(vec![]);
    }
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    if q == 0.0 {
        return RealRoots::Roots(vec![0.0]);
    }
    let mut roots = vec![q / c2, c0 / q];
    roots.sort_by(f64::total_cmp);
    if (roots[1] - roots[0]).abs() <= 1e-14 * roots[1].abs().max(1.0) {
        roots.pop();
    }
    RealRoots::Roots(roots)
}

fn newton_polish(c: &[f64], mut x: f64) -> f64 {
    for _ in 0..60 {
        let f = eval_poly(c, x);
        let df = eval_poly_derivative(c, x);
        if df == 0.0 || !f.is_finite() {
            break;
        }
        let step = f / df;
        let next = x - step;
        if !next.is_finite() || eval_poly(c, next).abs() > f.abs() {
            break;
        }
        x = next;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Real roots of a quartic with nonzero leading coefficient, from the
/// eigenvalues of its companion matrix, polished by Newton iteration.
///
/// Eigenvalues with imaginary part up to `1e-9 (1 + |z|)` are taken as real.
/// Near-double roots split into pairs with imaginary parts of order
/// `sqrt(eps)`; those are accepted when Newton on the real part lands on a
/// point with residual at rounding level.
pub fn quartic_real_roots(c: [f64; 5]) -> Vec<f64> {
    let lead = c[4];
    assert!(lead != 0.0, "quartic leading coefficient must be nonzero");
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -monic[0],
        1.0, 0.0, 0.0, -monic[1],
        0.0, 1.0, 0.0, -monic[2],
        0.0, 0.0, 1.0, -monic[3],
    );
    let mut roots: Vec<f64> = Vec::new();
    for z in companion_eigenvalues(&companion).iter() {
        let strict = z.im.abs() <= IMAG_TOL * (1.0 + z.norm());
        let near = z.im.abs() <= 1e-6 * (1.0 + z.norm());
        if !(strict || near) {
            continue;
        }
        let x = newton_polish(&monic, z.re);
        let resid = eval_poly(&monic, x).abs();
        let ok = if strict {
            true
        } else {
            resid <= 1e-13 * residual_scale(&monic, x)
        };
        if ok && x.is_finite() {
            roots.push(x);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * a.abs().max(1.0));
    roots
}

/// Eigenvalues via a capped Schur iteration. Francis steps can stall on
/// permutation-like companions (`x^4 + 1`), so on failure the matrix is
/// conjugated by a fixed orthogonal matrix and retried.
fn companion_eigenvalues(m: &Matrix4<f64>) -> Vec<Complex<f64>> {
    let mut work = *m;
    for attempt in 0..4 {
        if let Some(schur) = Schur::try_new(work, f64::EPSILON, 500) {
            return schur.complex_eigenvalues().iter().copied().collect();
        }
        let v = Vector4::new(1.0, 0.3 + attempt as f64, -0.7, 0.2).normalize();
        let h = Matrix4::identity() - v * v.transpose() * 2.0;
        work = h * work * h;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roots(r: RealRoots) -> Vec<f64> {
        match r {
            RealRoots::Roots(v) => v,
            RealRoots::Indeterminate => panic!("indeterminate"),
        }
    }

    #[test]
    fn quadratic_cases() {
        assert_eq!(roots(solve_quadratic([-1.0, 0.0, 1.0], 1.0)), vec![-1.0, 1.0]);
        assert_eq!(roots(solve_quadratic([2.0, -1.0, 0.0], 1.0)), vec![2.0]);
        assert!(roots(solve_quadratic([1.0, 0.0, 1.0], 1.0)).is_empty());
        assert_eq!(roots(solve_quadratic([1.0, -2.0, 1.0], 1.0)), vec![1.0]);
        assert_eq!(solve_quadratic([0.0, 0.0, 0.0], 1.0), RealRoots::Indeterminate);
        assert!(roots(solve_quadratic([1.0, 0.0, 0.0], 1.0)).is_empty());
    }

    #[test]
    fn quartic_with_four_real_roots() {
        // (x - 1)(x + 2)(x - 0.5)(x - 3)
        let mut p = vec![1.0];
        for r in [1.0, -2.0, 0.5, 3.0] {
            let mut q = vec![0.0; p.len() + 1];
            for (i, &v) in p.iter().enumerate() {
                q[i] -= r * v;
                q[i + 1] += v;
            }
            p = q;
        }
        let c = [p[0], p[1], p[2], p[3], p[4]];
        let r = quartic_real_roots(c);
        let want = [-2.0, 0.5, 1.0, 3.0];
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quartic_without_real_roots() {
        assert!(quartic_real_roots([1.0, 0.0, 0.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn quartic_double_root() {
        // (x - 1)^2 (x^2 + 1) = x^4 - 2x^3 + 2x^2 - 2x + 1
        let r = quartic_real_roots([1.0, -2.0, 2.0, -2.0, 1.0]);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn planted_roots_are_found(r1 in -5.0f64..5.0, r2 in -5.0f64..5.0, re in -3.0f64..3.0, im in 0.1f64..3.0) {
            prop_assume!((r1 - r2).abs() > 1e-3);
            // (x - r1)(x - r2)(x^2 - 2 re x + re^2 + im^2)
            let q = [re * re + im * im, -2.0 * re, 1.0];
            let l = [r1 * r2, -(r1 + r2), 1.0];
            let mut c = [0.0; 5];
            for i in 0..3 { for j in 0..3 { c[i + j] += l[i] * q[j]; } }
            let found = quartic_real_roots(c);
            prop_assert_eq!(found.len(), 2);
            for x in found {
                prop_assert!(eval_poly(&c, x).abs() <= 1e-10 * residual_scale(&c, x));
                prop_assert!((x - r1).abs() < 1e-8 || (x - r2).abs() < 1e-8);
            }
        }
    }
}
