use nalgebra::Matrix2;

use super::numeric::{optimize_numeric_fallback, FallbackOptions};
use super::objective::{objective_determinant, optimal_g_for_s, ObjectiveQuadratic};
use super::roots::{quartic_real_roots, solve_quadratic, RealRoots};
use super::simplex::{nelder_mead, NelderMeadOptions};
use super::{
    fidelity_of_objective, CandidateKind, CandidateSolution, Method, OptimizationResult, Side,
    Target, TIE_TOL,
};
use crate::error::{Error, Result};
use crate::gaussian::{to_standard_form, GaussianCpMap, OneModeCovariance, StandardFormParams, TwoModeCovariance};
use crate::linalg::reflection;

/// Largest off-diagonal input element still treated as diagonal.
const DIAG_TOL: f64 = 1e-9;
/// Relative residual accepted in the unsquared stationarity equations.
const EXTREMAL_TOL: f64 = 1e-7;
/// Distance from the symplectic curve below which either sign branch is accepted.
const KINK_TOL: f64 = 1e-9;

/// One-sided problem for a standard-form channel `(a, b, c1, c2)` and a
/// diagonal input `diag(d11, d22)` (zero for the swap fidelity).
///
/// With `S = diag(x, y)`:
/// `alpha(x) = 2 d11 + a + 2 c1 x + b x^2`,
/// `beta(y) = 2 d22 + a - 2 c2 y + b y^2`, and the square root of the
/// minimized determinant is `f(x, y) = |1 - xy| + sqrt(alpha(x) beta(y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalProblem {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub d11: f64,
    pub d22: f64,
}

/// Stationary points of `f` off the symplectic curve.
///
/// `admitted` satisfy the unsquared stationarity equations with the sign
/// of `1 - xy`; `rejected` are roots introduced by squaring.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteriorSearch {
    pub admitted: Vec<CandidateSolution>,
    pub rejected: Vec<CandidateSolution>,
    pub diagnostics: Vec<String>,
}

fn diagonal_entries(d: &OneModeCovariance) -> Result<(f64, f64)> {
    let m = d.matrix();
    let scale = m.amax().max(1.0);
    if m[(0, 1)].abs() > DIAG_TOL * scale {
        return Err(Error::InvalidParameter(format!(
            "input covariance is not diagonal (d12 = {:.3e})",
            m[(0, 1)]
        )));
    }
    Ok((m[(0, 0)], m[(1, 1)]))
}

fn poly_mul(p: [f64; 2], q: [f64; 2]) -> [f64; 3] {
    [p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1]]
}

impl DiagonalProblem {
    pub fn new(sf: &StandardFormParams, d: &OneModeCovariance) -> Result<Self> {
        let (d11, d22) = diagonal_entries(d)?;
        Ok(Self::from_parts(sf.a, sf.b, sf.c1, sf.c2, d11, d22))
    }

    pub fn from_parts(a: f64, b: f64, c1: f64, c2: f64, d11: f64, d22: f64) -> Self {
        Self {
            a,
            b,
            c1,
            c2,
            d11,
            d22,
        }
    }

    pub fn alpha(&self, x: f64) -> f64 {
        2.0 * self.d11 + self.a + 2.0 * self.c1 * x + self.b * x * x
    }

    pub fn beta(&self, y: f64) -> f64 {
        2.0 * self.d22 + self.a - 2.0 * self.c2 * y + self.b * y * y
    }

    pub fn quadratic(&self, x: f64, y: f64) -> ObjectiveQuadratic {
        ObjectiveQuadratic::new(self.alpha(x), self.beta(y), 0.0)
    }

    /// `|1 - xy| + sqrt(alpha(x) beta(y))`.
    pub fn objective_root(&self, x: f64, y: f64) -> f64 {
        (1.0 - x * y).abs() + (self.alpha(x) * self.beta(y)).max(0.0).sqrt()
    }

    fn scale(&self) -> f64 {
        1.0 + self.a.abs() + self.b.abs() + self.c1.abs() + self.c2.abs() + self.d11 + self.d22
    }

    /// Candidate with `S = diag(x, y)` and the optimal noise, in the
    /// standard frame (acting on Bob).
    pub fn candidate(&self, kind: CandidateKind, x: f64, y: f64) -> Result<CandidateSolution> {
        let s_det = if kind == CandidateKind::BoundaryRoot || kind == CandidateKind::Identity {
            1.0
        } else {
            x * y
        };
        let obj = self.quadratic(x, y);
        let g = optimal_g_for_s(&obj, s_det)?;
        let objective = objective_determinant(&obj, s_det)?;
        Ok(CandidateSolution {
            kind,
            side: Side::Bob,
            x,
            y,
            map: GaussianCpMap::from_parts(Matrix2::new(x, 0.0, 0.0, y), g),
            objective,
            fidelity: fidelity_of_objective(objective),
        })
    }

    /// Checks `x = s sqrt(alpha/beta) (b y - c2)` and
    /// `y = s sqrt(beta/alpha) (b x + c1)` with `s = sign(1 - xy)`.
    pub fn is_stationary(&self, x: f64, y: f64) -> bool {
        let (al, be) = (self.alpha(x), self.beta(y));
        if !(al > 0.0 && be > 0.0) {
            return false;
        }
        let t = 1.0 - x * y;
        let signs: &[f64] = if t.abs() <= KINK_TOL {
            &[1.0, -1.0]
        } else if t > 0.0 {
            &[1.0]
        } else {
            &[-1.0]
        };
        let ratio = (al / be).sqrt();
        let tol = EXTREMAL_TOL * (1.0 + x.abs() + y.abs()) * self.scale();
        signs.iter().any(|&s| {
            let rx = x - s * ratio * (self.b * y - self.c2);
            let ry = y - s / ratio * (self.b * x + self.c1);
            rx.abs() <= tol && ry.abs() <= tol
        })
    }

    /// Raw stationary-point guesses `(x, y)` off the symplectic curve.
    fn interior_points(&self, diagnostics: &mut Vec<String>) -> Vec<(f64, f64)> {
        let &Self { b, c1, c2, .. } = self;
        let b0 = 2.0 * self.d22 + self.a;
        let den = [b * c1, b * b - 1.0];
        let k = [c1, b];
        let mut points = Vec::new();

        match solve_quadratic(interior_quadratic(self), self.scale().powi(4)) {
            RealRoots::Roots(xs) => {
                for x in xs {
                    let den_x = den[0] + den[1] * x;
                    let k_x = k[0] + k[1] * x;
                    if den_x.abs() > 1e-12 * self.scale() * self.scale() {
                        points.push((x, c2 * k_x / den_x));
                    } else {
                        // y drops out of the product relation; take it from the
                        // squared y-equation y^2 alpha = beta(y) k^2 instead
                        let k2 = k_x * k_x;
                        let coeffs = [-b0 * k2, 2.0 * c2 * k2, self.alpha(x) - b * k2];
                        match solve_quadratic(coeffs, self.scale().powi(3)) {
                            RealRoots::Roots(ys) => points.extend(ys.into_iter().map(|y| (x, y))),
                            RealRoots::Indeterminate => {
                                diagnostics.push(format!("x = {x:.6}: y undetermined, skipped"));
                            }
                        }
                    }
                }
            }
            RealRoots::Indeterminate => {
                diagnostics.push("stationarity quadratic vanishes identically; numeric scan".into());
                points.extend(self.scan_local_minima());
            }
        }
        // branch b x + c1 = 0 is divided out of the quadratic
        if b != 0.0 {
            points.push((-c1 / b, 0.0));
        }

        points.retain(|(x, y)| x.is_finite() && y.is_finite());
        let mut unique: Vec<(f64, f64)> = Vec::new();
        for p in points {
            if !unique
                .iter()
                .any(|q| (p.0 - q.0).abs() <= 1e-9 * (1.0 + p.0.abs()) && (p.1 - q.1).abs() <= 1e-9 * (1.0 + p.1.abs()))
            {
                unique.push(p);
            }
        }
        unique
    }

    /// Best local minimum of the objective off the symplectic curve, from a
    /// grid of simplex starts.
    fn scan_local_minima(&self) -> Option<(f64, f64)> {
        let grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        let opts = NelderMeadOptions {
            initial_step: 0.1,
            ..Default::default()
        };
        let mut best: Option<(f64, (f64, f64))> = None;
        for &x0 in &grid {
            for &y0 in &grid {
                let m = nelder_mead(|v| self.objective_root(v[0], v[1]), &[x0, y0], &opts);
                if (1.0 - m.x[0] * m.x[1]).abs() > 1e-6 && best.is_none_or(|(f, _)| m.f < f) {
                    best = Some((m.f, (m.x[0], m.x[1])));
                }
            }
        }
        best.map(|(_, p)| p)
    }

    pub fn interior_search(&self) -> InteriorSearch {
        let mut search = InteriorSearch::default();
        for (x, y) in self.interior_points(&mut search.diagnostics) {
            match self.candidate(CandidateKind::InteriorRoot, x, y) {
                Ok(c) if self.is_stationary(x, y) => search.admitted.push(c),
                Ok(c) => search.rejected.push(c),
                Err(e) => search.diagnostics.push(format!("interior ({x:.6}, {y:.6}): {e}")),
            }
        }
        search
    }

    /// Stationary points of `alpha(x) beta(1/x)`, sorted by objective.
    pub fn boundary_search(&self) -> Vec<CandidateSolution> {
        let mut out: Vec<CandidateSolution> = quartic_real_roots(boundary_quartic(self))
            .into_iter()
            .filter(|x| *x != 0.0)
            .filter_map(|x| self.candidate(CandidateKind::BoundaryRoot, x, 1.0 / x).ok())
            .collect();
        out.sort_by(|p, q| p.objective.total_cmp(&q.objective));
        out
    }
}

/// Coefficients (ascending) of the quadratic whose roots are the `x` of
/// interior stationary points:
/// `c2^2 alpha(x) - [den^2 (2 d22 + a) - 2 c2^2 k den + b c2^2 k^2] = 0`
/// with `den = (b^2 - 1) x + b c1` and `k = b x + c1`.
pub fn interior_quadratic(p: &DiagonalProblem) -> [f64; 3] {
    let &DiagonalProblem { a, b, c1, c2, d11, d22 } = p;
    let a0 = 2.0 * d11 + a;
    let b0 = 2.0 * d22 + a;
    let den = [b * c1, b * b - 1.0];
    let k = [c1, b];
    let den2 = poly_mul(den, den);
    let kden = poly_mul(k, den);
    let k2 = poly_mul(k, k);
    let alpha = [a0, 2.0 * c1, b];
    let c22 = c2 * c2;
    let mut q = [0.0; 3];
    for i in 0..3 {
        q[i] = c22 * alpha[i] - b0 * den2[i] + 2.0 * c22 * kden[i] - b * c22 * k2[i];
    }
    q
}

/// Coefficients (ascending) of `x^3 d/dx[alpha(x) beta(1/x)]`.
///
/// With `alpha(x) x^2 beta(1/x) = sum_k e_k x^k`, the numerator is
/// `sum_k (k - 2) e_k x^k`, so the `x^2` term vanishes.
pub fn boundary_quartic(p: &DiagonalProblem) -> [f64; 5] {
    let &DiagonalProblem { a, b, c1, c2, d11, d22 } = p;
    let a0 = 2.0 * d11 + a;
    let b0 = 2.0 * d22 + a;
    let e0 = a0 * b;
    let e1 = -2.0 * c2 * a0 + 2.0 * c1 * b;
    let e3 = 2.0 * c1 * b0 - 2.0 * b * c2;
    let e4 = b * b0;
    [-2.0 * e0, -e1, 0.0, e3, 2.0 * e4]
}

/// Interior stationary candidates for a standard-form channel and a
/// diagonal input (`diag(0, 0)` selects the swap fidelity).
pub fn interior_candidates(sf: &StandardFormParams, d: &OneModeCovariance) -> Result<InteriorSearch> {
    Ok(DiagonalProblem::new(sf, d)?.interior_search())
}

/// Symplectic candidates `(x, 1/x)` on the boundary of the CP region.
pub fn boundary_candidates(sf: &StandardFormParams, d: &OneModeCovariance) -> Result<Vec<CandidateSolution>> {
    Ok(DiagonalProblem::new(sf, d)?.boundary_search())
}

/// Bob-frame view of a one-sided problem.
///
/// Alice's problem on `[[A, C], [C^T, B]]` is Bob's problem on
/// `[[R B R, R C^T R], [R C R, R A R]]` with the map conjugated by `R`.
pub(crate) fn bob_frame(gamma: &TwoModeCovariance, side: Side) -> TwoModeCovariance {
    match side {
        Side::Alice => {
            let r = reflection();
            let mut m = crate::linalg::direct_sum(&(r * gamma.b() * r), &(r * gamma.a() * r));
            let c = r * gamma.c().transpose() * r;
            m.fixed_view_mut::<2, 2>(0, 2).copy_from(&c);
            m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
            TwoModeCovariance::from_symmetric(m)
        }
        _ => *gamma,
    }
}

/// Converts a map found in the Bob frame back to the requested side.
pub(crate) fn from_bob_frame(map: &GaussianCpMap, side: Side) -> GaussianCpMap {
    match side {
        Side::Alice => {
            let r = reflection();
            GaussianCpMap::from_parts(r * map.s() * r, r * map.g() * r)
        }
        _ => *map,
    }
}

struct Reduction {
    sf: StandardFormParams,
    /// `R S_A^{-1} R`.
    p: Matrix2<f64>,
    /// Input covariance in the standard frame.
    d: Matrix2<f64>,
}

impl Reduction {
    fn new(gamma_bob_frame: &TwoModeCovariance, d: &Matrix2<f64>) -> Result<Self> {
        let sf = to_standard_form(gamma_bob_frame)?;
        let r = reflection();
        let t = r * sf.alice_symplectic * r;
        let p = crate::gaussian::inverse_det1(&t);
        let d_std = t * d * t.transpose();
        Ok(Self {
            sf,
            p,
            d: (d_std + d_std.transpose()) * 0.5,
        })
    }

    /// Standard-frame Bob map `(S', G')` to the input frame:
    /// `S = P S' S_B`, `G = P G' P^T`.
    fn lift(&self, c: &CandidateSolution, side: Side) -> CandidateSolution {
        let s = self.p * c.map.s() * self.sf.bob_symplectic;
        let g = self.p * c.map.g() * self.p.transpose();
        let map = from_bob_frame(&GaussianCpMap::from_parts(s, g), side);
        CandidateSolution { side, map, ..*c }
    }
}

/// Best local Gaussian CP map on one side for the given target.
///
/// The channel is reduced to standard form; if the input covariance is not
/// diagonal in that frame the diagonal analysis does not apply and the
/// numeric search is used instead (reported in `method`).
pub fn optimize_one_sided(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
) -> Result<OptimizationResult> {
    optimize_one_sided_with(gamma, target, side, &FallbackOptions::default())
}

/// As [`optimize_one_sided`], with explicit settings for the numeric search.
pub fn optimize_one_sided_with(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
    fallback: &FallbackOptions,
) -> Result<OptimizationResult> {
    if side == Side::Both {
        return Err(Error::InvalidParameter(
            "one-sided optimization needs side bob or alice".into(),
        ));
    }
    gamma.require_physical()?;
    target.validate()?;

    let work = bob_frame(gamma, side);
    let red = Reduction::new(&work, &target.input_matrix())?;
    let d_std = OneModeCovariance::new(red.d)?;
    let problem = match DiagonalProblem::new(&red.sf, &d_std) {
        Ok(p) => p,
        Err(e) => {
            let mut res = optimize_numeric_fallback(gamma, target, side, fallback)?;
            res.diagnostics.push(format!("analytic reduction not applicable: {e}"));
            return Ok(res);
        }
    };

    let mut diagnostics = Vec::new();
    let mut local = Vec::new();
    for (kind, x, y) in [
        (CandidateKind::Identity, 1.0, 1.0),
        (CandidateKind::VacuumReplacement, 0.0, 0.0),
    ] {
        match problem.candidate(kind, x, y) {
            Ok(c) => local.push(c),
            Err(e) => diagnostics.push(format!("{}: {e}", kind.name())),
        }
    }
    let interior = problem.interior_search();
    diagnostics.extend(interior.diagnostics);
    // stationary points that coincide with identity or vacuum add nothing
    let fixed: Vec<CandidateSolution> = local.clone();
    let duplicate = |c: &CandidateSolution| {
        fixed.iter().any(|f| {
            (c.x - f.x).abs() <= 1e-9 && (c.y - f.y).abs() <= 1e-9 && (c.fidelity - f.fidelity).abs() <= TIE_TOL
        })
    };
    local.extend(interior.admitted.into_iter().filter(|c| !duplicate(c)));
    local.extend(problem.boundary_search().into_iter().filter(|c| !duplicate(c)));

    if local.is_empty() {
        return Err(Error::DegenerateObjective(0.0));
    }
    let candidates = local.iter().map(|c| red.lift(c, side)).collect();
    Ok(OptimizationResult::from_candidates(
        candidates,
        target,
        side,
        Method::Analytic,
        diagnostics,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_tmsv_noisy, ChannelParams};

    fn tmsv_problem(r: f64, b0: f64, d: f64) -> DiagonalProblem {
        let g = make_tmsv_noisy(ChannelParams::new(r, b0).unwrap());
        let sf = to_standard_form(&g).unwrap();
        DiagonalProblem::new(&sf, &OneModeCovariance::diagonal(d, d)).unwrap()
    }

    #[test]
    fn symmetric_roots() {
        let p = tmsv_problem(0.2, 0.5, 1.0);
        let s = p.interior_search();
        let all: Vec<f64> = s.admitted.iter().chain(&s.rejected).map(|c| c.x).collect();
        let x1 = p.c2 / (p.b - 1.0);
        let x2 = p.c2 / (p.b + 1.0);
        assert!((x1 - 0.70688).abs() < 1e-4);
        assert!(all.iter().any(|x| (x - x1).abs() < 1e-10));
        assert!(all.iter().any(|x| (x - x2).abs() < 1e-10));
        assert_eq!(s.admitted.len(), 1);
        assert!((s.admitted[0].x - x1).abs() < 1e-10 && (s.admitted[0].y - x1).abs() < 1e-10);
    }

    #[test]
    fn symmetric_boundary_roots_are_plus_minus_one() {
        let p = tmsv_problem(0.4, 0.5, 1.0);
        let b = p.boundary_search();
        let xs: Vec<f64> = b.iter().map(|c| c.x).collect();
        assert_eq!(xs.len(), 2);
        assert!(xs.iter().any(|x| (x - 1.0).abs() < 1e-10));
        assert!(xs.iter().any(|x| (x + 1.0).abs() < 1e-10));
    }

    #[test]
    fn quartic_residual_on_asymmetric_problem() {
        let p = DiagonalProblem::from_parts(2.3, 1.7, 1.1, 0.4, 1.3, 0.8);
        let q = boundary_quartic(&p);
        for c in p.boundary_search() {
            let v = super::super::roots::eval_poly(&q, c.x);
            assert!(v.abs() < 1e-8, "residual {v}");
        }
    }

    #[test]
    fn non_diagonal_input_is_rejected() {
        let sf = to_standard_form(&make_tmsv_noisy(ChannelParams::new(0.3, 0.1).unwrap())).unwrap();
        let d = OneModeCovariance::squeezed(0.4, 0.5);
        assert!(interior_candidates(&sf, &d).is_err());
    }

    #[test]
    fn both_sides_is_not_one_sided() {
        let g = make_tmsv_noisy(ChannelParams::new(0.3, 0.1).unwrap());
        assert!(optimize_one_sided(&g, Target::Coherent, Side::Both).is_err());
    }
}
