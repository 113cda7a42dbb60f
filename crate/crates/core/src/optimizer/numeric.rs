use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::one_sided::{bob_frame, from_bob_frame};
use super::simplex::{nelder_mead, NelderMeadOptions, SimplexMinimum};
use super::{
    fidelity_of_objective, CandidateKind, CandidateSolution, Method, OptimizationResult, Side,
    Target,
};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianCpMap, TwoModeCovariance};
use crate::linalg::reflection;

#[derive(Debug, Clone, Copy)]
pub struct FallbackOptions {
    /// Total number of starting points (at least 32).
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub f_tol: f64,
}

impl Default for FallbackOptions {
    fn default() -> Self {
        Self {
            starts: 40,
            seed: 0x5eed,
            max_iter: 5000,
            f_tol: 1e-12,
        }
    }
}

/// `S -> |1 - det S| + sqrt(det M(S))` with
/// `M(S) = 2D + R A R + R C S^T + S C^T R + S B S^T` in the Bob frame.
struct FullObjective {
    fixed: Matrix2<f64>,
    rc: Matrix2<f64>,
    b: Matrix2<f64>,
}

impl FullObjective {
    fn new(gamma: &TwoModeCovariance, d: &Matrix2<f64>) -> Self {
        let r = reflection();
        Self {
            fixed: d * 2.0 + r * gamma.a() * r,
            rc: r * gamma.c(),
            b: gamma.b(),
        }
    }

    fn noise_free(&self, s: &Matrix2<f64>) -> Matrix2<f64> {
        let cross = self.rc * s.transpose();
        let m = self.fixed + cross + cross.transpose() + s * self.b * s.transpose();
        (m + m.transpose()) * 0.5
    }

    fn root(&self, s: &Matrix2<f64>) -> f64 {
        (1.0 - s.determinant()).abs() + self.noise_free(s).determinant().max(0.0).sqrt()
    }

    /// Optimal noise for `s`; when `M` is singular any `G` with
    /// `det G = (1 - det S)^2` that keeps the determinant minimal is fine,
    /// and `|1 - det S| I` is used.
    fn candidate(&self, s: Matrix2<f64>, side: Side) -> CandidateSolution {
        let m = self.noise_free(&s);
        let k = (1.0 - s.determinant()).abs();
        let disc = m.determinant().max(0.0);
        let g = if k == 0.0 {
            Matrix2::zeros()
        } else if disc > super::DEGENERATE_TOL {
            m * (k / disc.sqrt())
        } else {
            Matrix2::identity() * k
        };
        let root = k + disc.sqrt();
        let objective = root * root;
        CandidateSolution {
            kind: CandidateKind::NumericSearch,
            side,
            x: s[(0, 0)],
            y: s[(1, 1)],
            map: from_bob_frame(&GaussianCpMap::from_parts(s, g), side),
            objective,
            fidelity: fidelity_of_objective(objective),
        }
    }
}

fn to_matrix(v: &[f64]) -> Matrix2<f64> {
    Matrix2::new(v[0], v[1], v[2], v[3])
}

fn starting_points(opts: &FallbackOptions) -> Vec<[f64; 4]> {
    let mut starts = vec![[1.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0]];
    for &scale in &[1.0, 0.5] {
        for &(sx, sy) in &[(1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, 1.0)] {
            starts.push([scale * sx, 0.0, 0.0, scale * sy]);
        }
    }
    for &(u, v) in &[(1.0, -1.0), (-1.0, 1.0), (1.0, 1.0), (-1.0, -1.0)] {
        starts.push([0.0, u, v, 0.0]);
    }
    starts.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while starts.len() < opts.starts.max(32) {
        starts.push(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
    }
    starts
}

fn run_start<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &FallbackOptions) -> SimplexMinimum {
    let mut best = nelder_mead(
        f,
        x0,
        &NelderMeadOptions {
            max_iter: opts.max_iter,
            f_tol: opts.f_tol,
            initial_step: 0.3,
        },
    );
    // restarts from the current best shake the simplex out of kinks
    for step in [0.05, 0.01, 1e-3] {
        let next = nelder_mead(
            f,
            &best.x,
            &NelderMeadOptions {
                max_iter: opts.max_iter,
                f_tol: opts.f_tol,
                initial_step: step,
            },
        );
        let converged = best.converged && next.converged;
        if next.f <= best.f {
            best = next;
        }
        best.converged = converged;
    }
    best
}

/// Multi-start Nelder-Mead over all four entries of `S`, with the noise set
/// to its closed-form optimum at every step.
pub fn optimize_numeric_fallback(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
    opts: &FallbackOptions,
) -> Result<OptimizationResult> {
    if side == Side::Both {
        return Err(Error::InvalidParameter("numeric search is one-sided".into()));
    }
    gamma.require_physical()?;
    target.validate()?;

    let objective = FullObjective::new(&bob_frame(gamma, side), &target.input_matrix());
    let f = |v: &[f64]| objective.root(&to_matrix(v));
    let starts = starting_points(opts);
    let runs: Vec<SimplexMinimum> = starts.par_iter().map(|x0| run_start(&f, x0, opts)).collect();

    let (best_run, _) = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    let converged = runs[best_run].converged;

    let mut identity = objective.candidate(Matrix2::identity(), side);
    identity.kind = CandidateKind::Identity;
    let mut vacuum = objective.candidate(Matrix2::zeros(), side);
    vacuum.kind = CandidateKind::VacuumReplacement;
    let found = objective.candidate(to_matrix(&runs[best_run].x), side);

    let mut diagnostics = Vec::new();
    if !converged {
        diagnostics.push(format!(
            "best start did not converge within {} iterations",
            opts.max_iter
        ));
    }
    Ok(OptimizationResult::from_candidates(
        vec![identity, vacuum, found],
        target,
        side,
        Method::Numeric { converged },
        diagnostics,
    ))
}
