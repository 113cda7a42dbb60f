//! Seeded random generators for property tests and cross-checks.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::{is_ppt_separable, Covariance, OneModeCovariance, TwoModeCovariance};
use crate::linalg::{direct_sum, omega, rotation};

/// Deterministic generator used by every sampler here.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Rot(t1) diag(e^s, e^-s) Rot(t2)` with `|s| <= 0.8`.
pub fn random_local_symplectic<R: Rng>(rng: &mut R) -> Matrix2<f64> {
    let s: f64 = rng.gen_range(-0.8..0.8);
    let t1: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let t2: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    rotation(t1) * Matrix2::new(s.exp(), 0.0, 0.0, (-s).exp()) * rotation(t2)
}

/// Squeezed vacuum with `|s| <= 0.8` at a random angle.
pub fn random_pure_input<R: Rng>(rng: &mut R) -> OneModeCovariance {
    let s = rng.gen_range(-0.8..0.8);
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    OneModeCovariance::squeezed(s, theta)
}

/// Squeezed thermal state with symplectic eigenvalue in `[1, 3]`.
pub fn random_single_mode<R: Rng>(rng: &mut R) -> Matrix2<f64> {
    let nu: f64 = rng.gen_range(1.0..3.0);
    let s = random_local_symplectic(rng);
    s * s.transpose() * nu
}

/// `S diag(nu1, nu1, nu2, nu2) S^T` with `S = exp(Omega H)` for a random
/// symmetric `H`; always physical.
pub fn random_physical_state<R: Rng>(rng: &mut R) -> TwoModeCovariance {
    let mut h = Matrix4::zeros();
    for i in 0..4 {
        for j in i..4 {
            let v = rng.gen_range(-0.6..0.6);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let s = (omega() * h).exp();
    let nu1: f64 = rng.gen_range(1.0..2.5);
    let nu2: f64 = rng.gen_range(1.0..2.5);
    let thermal = Matrix4::from_diagonal(&Vector4::new(nu1, nu1, nu2, nu2));
    TwoModeCovariance::new(s * thermal * s.transpose()).expect("symmetric by construction")
}

/// Physical standard form `(a, b, c1, c2)` with `a, b` in `[1, 4]`.
pub fn random_standard_form<R: Rng>(rng: &mut R) -> TwoModeCovariance {
    loop {
        let a = rng.gen_range(1.0..4.0);
        let b = rng.gen_range(1.0..4.0);
        let c1 = rng.gen_range(-3.0..3.0);
        let c2 = rng.gen_range(-3.0..3.0);
        let g = TwoModeCovariance::standard(a, b, c1, c2);
        if g.is_physical() {
            return g;
        }
    }
}

/// Standard form in canonical sign and ordering convention: `|c1| >= |c2|`,
/// with `c1 <= 0 <= c2` when `c1 c2 < 0` and `c1 >= 0` otherwise.
pub fn random_canonical_standard_form<R: Rng>(rng: &mut R) -> TwoModeCovariance {
    let g = random_standard_form(rng);
    let m = g.matrix();
    let (c1, c2) = (m[(0, 2)], m[(1, 3)]);
    let (hi, lo) = (c1.abs().max(c2.abs()), c1.abs().min(c2.abs()));
    let (c1, c2) = if c1 * c2 < 0.0 { (-hi, lo) } else { (hi, lo) };
    TwoModeCovariance::standard(m[(0, 0)], m[(2, 2)], c1, c2)
}

/// Physical state with all three blocks diagonal: a standard form followed
/// by local diagonal squeezers.
pub fn random_diagonal_channel<R: Rng>(rng: &mut R) -> TwoModeCovariance {
    let g = random_standard_form(rng);
    let ka: f64 = rng.gen_range(-0.5..0.5f64).exp();
    let kb: f64 = rng.gen_range(-0.5..0.5f64).exp();
    g.local_transform(&Matrix2::new(ka, 0.0, 0.0, 1.0 / ka), &Matrix2::new(kb, 0.0, 0.0, 1.0 / kb))
}

/// As [`random_diagonal_channel`], restricted to entangled states.
pub fn random_entangled_diagonal<R: Rng>(rng: &mut R) -> TwoModeCovariance {
    loop {
        let g = random_diagonal_channel(rng);
        if !is_ppt_separable(&g).unwrap_or(true) {
            return g;
        }
    }
}

/// `count` separable covariances from a seeded stream. The first is a
/// product state; later ones add random classical correlations to a product
/// state and apply local symplectics, keeping only PPT draws.
pub fn separable_state_sampler(seed: u64, count: usize) -> Vec<TwoModeCovariance> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let a = random_single_mode(&mut rng);
        let b = random_single_mode(&mut rng);
        let product = direct_sum(&a, &b);
        if i == 0 {
            out.push(TwoModeCovariance::new(product).expect("symmetric"));
            continue;
        }
        let mut drawn = None;
        for _ in 0..100 {
            let mut l = Matrix4::zeros();
            for v in l.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            let scale: f64 = rng.gen_range(0.0..1.5);
            let noisy = TwoModeCovariance::new(product + l * l.transpose() * scale).expect("symmetric");
            let moved = noisy.local_transform(&random_local_symplectic(&mut rng), &random_local_symplectic(&mut rng));
            if is_ppt_separable(&moved).unwrap_or(false) {
                drawn = Some(moved);
                break;
            }
        }
        out.push(drawn.unwrap_or_else(|| TwoModeCovariance::new(product).expect("symmetric")));
    }
    out
}
