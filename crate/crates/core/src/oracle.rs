//! Brute-force checks that share no arithmetic with the closed-form paths.
//!
//! The fidelities here come from 2-D quadrature of Gaussian Wigner
//! functions, and the optima from exhaustive scans of diagonal `S`. The
//! teleportation kernel is the distribution of `(x_A + x_B, p_B - p_A)`, so
//! its covariance is obtained by marginalizing the channel along that linear
//! map rather than from the noise-matrix formula.

pub mod sampling;

use nalgebra::{Matrix2, Matrix4, SMatrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{OneModeCovariance, TwoModeCovariance};
use crate::linalg::{max_eig_sym2, max_eig_sym4};
use crate::optimizer::{Side, Target};

pub use sampling::separable_state_sampler;

/// Uniform midpoint grid on `[-L, L]^2` with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl PhaseSpaceGrid {
    pub fn new(half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!("grid half-width must be > 0, got {half_width}")));
        }
        if points_per_axis < 64 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid needs an even number >= 64 of points per axis, got {points_per_axis}"
            )));
        }
        Ok(Self {
            half_width,
            points_per_axis,
        })
    }

    /// `L = 8 sigma_max` with the given resolution.
    pub fn for_width(sigma_max: f64, points_per_axis: usize) -> Result<Self> {
        Self::new(8.0 * sigma_max, points_per_axis)
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    fn node(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.step()
    }

    /// `sum f(x_i, p_j) dx dp`, rows summed in parallel and reduced in order.
    fn integrate<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> f64 {
        let n = self.points_per_axis;
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = self.node(i);
                (0..n).map(|j| f(x, self.node(j))).sum::<f64>()
            })
            .collect();
        rows.iter().sum::<f64>() * self.step() * self.step()
    }
}

/// A quadrature value and whether the grid was narrower than `8 sigma_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub grid_too_small: bool,
}

/// Covariance of the kernel variables `(x_A + x_B, p_B - p_A)`.
pub fn kernel_covariance(gamma: &TwoModeCovariance) -> Matrix2<f64> {
    #[rustfmt::skip]
    let l = SMatrix::<f64, 2, 4>::new(
        1.0, 0.0, 1.0, 0.0,
        0.0, -1.0, 0.0, 1.0,
    );
    let k = l * gamma.matrix() * l.transpose();
    (k + k.transpose()) * 0.5
}

/// Single-mode Wigner function of a zero-mean Gaussian, evaluated through
/// its precomputed inverse covariance and normalization.
struct Wigner1 {
    inv: Matrix2<f64>,
    norm: f64,
}

impl Wigner1 {
    fn new(v: &Matrix2<f64>) -> Result<Self> {
        let det = v.determinant();
        let inv = v
            .try_inverse()
            .filter(|_| det > 0.0)
            .ok_or_else(|| Error::InvalidParameter("singular covariance".into()))?;
        Ok(Self {
            inv,
            norm: 1.0 / (std::f64::consts::PI * det.sqrt()),
        })
    }

    fn at(&self, x: f64, p: f64) -> f64 {
        let q = self.inv[(0, 0)] * x * x + 2.0 * self.inv[(0, 1)] * x * p + self.inv[(1, 1)] * p * p;
        self.norm * (-q).exp()
    }
}

/// Default grid for an overlap: `L = 8 sqrt(lambda_max)`, `N = 512`.
pub fn default_overlap_grid(gamma: &TwoModeCovariance, d: &OneModeCovariance) -> PhaseSpaceGrid {
    let sigma = overlap_sigma(gamma, d);
    PhaseSpaceGrid::for_width(sigma, 512).expect("positive width")
}

fn overlap_sigma(gamma: &TwoModeCovariance, d: &OneModeCovariance) -> f64 {
    let out = d.matrix() + kernel_covariance(gamma);
    max_eig_sym2(d.matrix()).max(max_eig_sym2(&out)).sqrt()
}

/// `2 pi sum W_in W_out dx dp` for a pure input `d` on the grid.
pub fn wigner_overlap_fidelity(
    gamma: &TwoModeCovariance,
    d: &OneModeCovariance,
    grid: &PhaseSpaceGrid,
) -> Result<Quadrature> {
    gamma.require_physical()?;
    d.require_pure()?;
    let w_in = Wigner1::new(d.matrix())?;
    let w_out = Wigner1::new(&(d.matrix() + kernel_covariance(gamma)))?;
    let sum = grid.integrate(|x, p| w_in.at(x, p) * w_out.at(x, p));
    Ok(Quadrature {
        value: 2.0 * std::f64::consts::PI * sum,
        grid_too_small: grid.half_width < 8.0 * overlap_sigma(gamma, d),
    })
}

/// Default grid for the swap integral: `L = 8 sqrt(lambda_max(Gamma))`, `N = 512`.
pub fn default_swap_grid(gamma: &TwoModeCovariance) -> PhaseSpaceGrid {
    PhaseSpaceGrid::for_width(max_eig_sym4(gamma.matrix()).sqrt(), 512).expect("positive width")
}

/// `2 pi sum W_AB(x, p, -x, p) dx dp`.
pub fn swap_fidelity_integral(gamma: &TwoModeCovariance, grid: &PhaseSpaceGrid) -> Result<Quadrature> {
    gamma.require_physical()?;
    let m = gamma.matrix();
    let det = m.determinant();
    let inv: Matrix4<f64> = m
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular covariance".into()))?;
    let norm = 1.0 / (std::f64::consts::PI.powi(2) * det.sqrt());
    let sum = grid.integrate(|x, p| {
        let v = nalgebra::Vector4::new(x, p, -x, p);
        norm * (-(v.dot(&(inv * v)))).exp()
    });
    let sigma = max_eig_sym4(m).sqrt();
    Ok(Quadrature {
        value: 2.0 * std::f64::consts::PI * sum,
        grid_too_small: grid.half_width < 8.0 * sigma,
    })
}

/// Best diagonal map found by a grid scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub fidelity: f64,
}

/// Brute-force objective for `S = diag(x, y)` on one side, with the noise at
/// its optimum for that `S`.
struct ScanObjective {
    d2: Matrix2<f64>,
    a: Matrix2<f64>,
    b: Matrix2<f64>,
    c: Matrix2<f64>,
    side: Side,
}

impl ScanObjective {
    fn fidelity(&self, x: f64, y: f64) -> f64 {
        let s = Matrix2::new(x, 0.0, 0.0, y);
        let r = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let m = match self.side {
            Side::Alice => {
                let a = s * self.a * s.transpose();
                self.d2 + r * a * r + r * s * self.c + self.c.transpose() * s.transpose() * r + self.b
            }
            _ => {
                let b = s * self.b * s.transpose();
                self.d2 + r * self.a * r + r * self.c * s.transpose() + s * self.c.transpose() * r + b
            }
        };
        let root = (1.0 - x * y).abs() + m.determinant().max(0.0).sqrt();
        2.0 / root
    }
}

fn better(a: &GridPoint, b: &GridPoint) -> bool {
    // higher fidelity, then lexicographically smaller (x, y)
    a.fidelity > b.fidelity
        || (a.fidelity == b.fidelity && (a.x, a.y).partial_cmp(&(b.x, b.y)) == Some(std::cmp::Ordering::Less))
}

fn scan_box<F: Fn(f64, f64) -> f64 + Sync>(f: &F, cx: f64, cy: f64, half: f64, step: f64) -> GridPoint {
    let n = (2.0 * half / step).round() as usize;
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let x = cx - half + i as f64 * step;
            let mut best = GridPoint {
                x,
                y: cy - half,
                fidelity: f(x, cy - half),
            };
            for j in 1..=n {
                let y = cy - half + j as f64 * step;
                let p = GridPoint { x, y, fidelity: f(x, y) };
                if better(&p, &best) {
                    best = p;
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("non-empty scan")
}

/// Scans `S = diag(x, y)` over `[-bounds, bounds]^2`; with `refine`, rescans
/// a `+-2 step` box around the winner at `step / 100`.
pub fn grid_search_cp(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
    bounds: f64,
    step: f64,
    refine: bool,
) -> Result<GridPoint> {
    if side == Side::Both {
        return Err(Error::InvalidParameter("use grid_search_two_sided_swap".into()));
    }
    if !(bounds > 0.0 && step > 0.0) {
        return Err(Error::InvalidParameter("bounds and step must be positive".into()));
    }
    let d = match target {
        Target::Coherent => Matrix2::identity(),
        Target::PureGaussian(d) => *d.matrix(),
        Target::Swap => Matrix2::zeros(),
    };
    let obj = ScanObjective {
        d2: d * 2.0,
        a: gamma.a(),
        b: gamma.b(),
        c: gamma.c(),
        side,
    };
    let f = |x: f64, y: f64| obj.fidelity(x, y);
    let mut best = scan_box(&f, 0.0, 0.0, bounds, step);
    if refine {
        let fine = scan_box(&f, best.x, best.y, 2.0 * step, step / 100.0);
        if better(&fine, &best) {
            best = fine;
        }
    }
    Ok(best)
}

/// Best diagonal two-sided map `(diag(u, v), diag(x, y))` for the swap fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint4 {
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub fidelity: f64,
}

/// Scans `(u, v, x, y)` over `[-bounds, bounds]^4` for a channel whose
/// blocks are all diagonal, then refines twice in `+-2 step` boxes at a
/// tenth of the step.
pub fn grid_search_two_sided_swap(
    gamma: &TwoModeCovariance,
    bounds: f64,
    step: f64,
) -> Result<GridPoint4> {
    let m = gamma.matrix();
    let off = [m[(0, 1)], m[(2, 3)], m[(0, 3)], m[(1, 2)]];
    if off.iter().any(|v| v.abs() > 1e-12) {
        return Err(Error::InvalidParameter("two-sided scan needs diagonal blocks".into()));
    }
    let (a1, a2, b1, b2, c1, c2) = (m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(3, 3)], m[(0, 2)], m[(1, 3)]);
    // E' with diagonal maps on both sides is diag(alpha, beta); the optimal
    // diagonal noises add |1 - uv| + |1 - xy| to sqrt(alpha beta)
    let f = |u: f64, v: f64, x: f64, y: f64| {
        let alpha = u * u * a1 + 2.0 * u * x * c1 + x * x * b1;
        let beta = v * v * a2 - 2.0 * v * y * c2 + y * y * b2;
        let root = (1.0 - u * v).abs() + (1.0 - x * y).abs() + (alpha * beta).max(0.0).sqrt();
        2.0 / root
    };
    let scan = |c: [f64; 4], half: f64, h: f64| -> GridPoint4 {
        let n = (2.0 * half / h).round() as usize;
        let at = |i: usize, k: usize| c[k] - half + i as f64 * h;
        (0..=n)
            .into_par_iter()
            .map(|i| {
                let u = at(i, 0);
                let mut best = GridPoint4 { u, v: 0.0, x: 0.0, y: 0.0, fidelity: f64::NEG_INFINITY };
                for j in 0..=n {
                    let v = at(j, 1);
                    for k in 0..=n {
                        let x = at(k, 2);
                        for l in 0..=n {
                            let y = at(l, 3);
                            let fid = f(u, v, x, y);
                            if fid > best.fidelity {
                                best = GridPoint4 { u, v, x, y, fidelity: fid };
                            }
                        }
                    }
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(|a, b| if b.fidelity > a.fidelity { b } else { a })
            .expect("non-empty scan")
    };
    let mut best = scan([0.0; 4], bounds, step);
    let mut h = step;
    for _ in 0..2 {
        let fine = scan([best.u, best.v, best.x, best.y], 2.0 * h, h / 10.0);
        if fine.fidelity > best.fidelity {
            best = fine;
        }
        h /= 10.0;
    }
    Ok(best)
}
