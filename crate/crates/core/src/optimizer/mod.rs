//! Optimal local Gaussian CP maps for teleportation.
//!
//! For a fixed homogeneous part `S`, the best noise `G` is known in closed
//! form ([`optimal_g_for_s`]), leaving a search over `S`. With the channel in
//! standard form and a diagonal input, `S = diag(x, y)` and the candidates are
//! the stationary points off the symplectic curve `xy = 1` (roots of a
//! quadratic), the stationary points on it (roots of a quartic), doing
//! nothing, and replacing the mode by vacuum. [`optimize_one_sided`] collects
//! them all and picks the best; [`optimize_swap_two_sided`] reduces the
//! two-sided swap problem to one-sided ones plus a double vacuum replacement.
//! [`optimize_numeric_fallback`] searches the full `S` numerically.

mod numeric;
mod objective;
mod one_sided;
pub mod roots;
pub mod simplex;
mod two_sided;

pub use numeric::{optimize_numeric_fallback, FallbackOptions};
pub use objective::{objective_determinant, optimal_g_for_s, ObjectiveQuadratic, DEGENERATE_TOL};
pub use one_sided::{
    boundary_candidates, boundary_quartic, interior_candidates, interior_quadratic,
    optimize_one_sided, optimize_one_sided_with, DiagonalProblem, InteriorSearch,
};
pub use two_sided::{optimize_swap_two_sided, optimize_swap_two_sided_with};

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::Result;
use crate::fidelity;
use crate::gaussian::cp_map_internal::{transform_alice, transform_bob};
use crate::gaussian::{GaussianCpMap, OneModeCovariance, TwoModeCovariance};

/// Fidelities within this absolute distance are considered tied.
pub const TIE_TOL: f64 = 1e-10;

/// Which fidelity is being maximized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// Coherent input states, `D = I`.
    Coherent,
    /// A pure Gaussian input with the given covariance.
    PureGaussian(OneModeCovariance),
    /// Operation (entanglement swapping) fidelity, formally `D = 0`.
    Swap,
}

impl Target {
    pub fn input_matrix(&self) -> Matrix2<f64> {
        match self {
            Target::Coherent => Matrix2::identity(),
            Target::PureGaussian(d) => *d.matrix(),
            Target::Swap => Matrix2::zeros(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Target::Coherent => "coherent",
            Target::PureGaussian(_) => "pure_gaussian",
            Target::Swap => "swap",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let Target::PureGaussian(d) = self {
            d.require_pure()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Bob,
    Alice,
    Both,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Bob => "bob",
            Side::Alice => "alice",
            Side::Both => "both",
        }
    }
}

/// Origin of a candidate map. The declaration order is the tie-break
/// preference: the least intervention wins among equal fidelities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Identity,
    BoundaryRoot,
    InteriorRoot,
    VacuumReplacement,
    NumericSearch,
}

impl CandidateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CandidateKind::Identity => "identity",
            CandidateKind::BoundaryRoot => "boundary_root",
            CandidateKind::InteriorRoot => "interior_root",
            CandidateKind::VacuumReplacement => "vacuum_replacement",
            CandidateKind::NumericSearch => "numeric_search",
        }
    }
}

/// One candidate local operation and the fidelity it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateSolution {
    pub kind: CandidateKind,
    /// Mode the map acts on; `Both` applies `map` to each mode.
    pub side: Side,
    /// Diagonal of `S` in the standard frame (`s11`, `s22` for numeric results).
    pub x: f64,
    pub y: f64,
    /// The map in the frame of the channel that was passed in.
    pub map: GaussianCpMap,
    /// Minimized determinant; fidelity is `2 / sqrt(objective)`.
    pub objective: f64,
    pub fidelity: f64,
}

impl CandidateSolution {
    /// The channel after applying this candidate's map.
    pub fn transformed_channel(&self, gamma: &TwoModeCovariance) -> TwoModeCovariance {
        match self.side {
            Side::Bob => transform_bob(gamma, &self.map),
            Side::Alice => transform_alice(gamma, &self.map),
            Side::Both => transform_bob(&transform_alice(gamma, &self.map), &self.map),
        }
    }

    /// Fidelity recomputed by transforming the channel explicitly and
    /// evaluating the closed-form fidelity on the result.
    pub fn realized_fidelity(&self, gamma: &TwoModeCovariance, target: &Target) -> Result<f64> {
        let out = self.transformed_channel(gamma);
        Ok(match target {
            Target::Swap => fidelity::swap_fidelity(&out)?.value,
            Target::Coherent => {
                fidelity::teleport_fidelity(&out, &OneModeCovariance::vacuum())?.value
            }
            Target::PureGaussian(d) => fidelity::teleport_fidelity(&out, d)?.value,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric { converged: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best: CandidateSolution,
    pub candidates: Vec<CandidateSolution>,
    pub target: Target,
    pub side: Side,
    pub method: Method,
    pub diagnostics: Vec<String>,
}

impl OptimizationResult {
    pub(crate) fn from_candidates(
        candidates: Vec<CandidateSolution>,
        target: Target,
        side: Side,
        method: Method,
        diagnostics: Vec<String>,
    ) -> Self {
        let best = candidates[select_best(&candidates)];
        Self {
            best,
            candidates,
            target,
            side,
            method,
            diagnostics,
        }
    }

    /// Best fidelity among candidates of the given kinds.
    pub fn best_of_kinds(&self, kinds: &[CandidateKind]) -> Option<CandidateSolution> {
        let subset: Vec<_> = self
            .candidates
            .iter()
            .copied()
            .filter(|c| kinds.contains(&c.kind))
            .collect();
        (!subset.is_empty()).then(|| subset[select_best(&subset)])
    }

    /// Best candidate that is a symplectic (noise-free, `det S = 1`) map.
    pub fn best_symplectic(&self) -> Option<CandidateSolution> {
        self.best_of_kinds(&[CandidateKind::Identity, CandidateKind::BoundaryRoot])
    }
}

/// Deterministic argmax over fidelity with the least-intervention tie-break.
pub fn select_best(candidates: &[CandidateSolution]) -> usize {
    assert!(!candidates.is_empty(), "no candidates to choose from");
    let top = candidates
        .iter()
        .map(|c| c.fidelity)
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.fidelity >= top - TIE_TOL)
        .min_by_key(|(i, c)| (c.kind, c.side, *i))
        .map(|(i, _)| i)
        .expect("non-empty")
}

/// Fidelity for a minimized determinant.
#[inline]
pub(crate) fn fidelity_of_objective(objective: f64) -> f64 {
    2.0 / objective.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(kind: CandidateKind, side: Side, fidelity: f64) -> CandidateSolution {
        CandidateSolution {
            kind,
            side,
            x: 0.0,
            y: 0.0,
            map: GaussianCpMap::identity(),
            objective: 4.0 / (fidelity * fidelity),
            fidelity,
        }
    }

    #[test]
    fn tie_break_prefers_least_intervention() {
        let c = vec![
            cand(CandidateKind::VacuumReplacement, Side::Bob, 0.5),
            cand(CandidateKind::InteriorRoot, Side::Bob, 0.5 + 1e-12),
            cand(CandidateKind::Identity, Side::Bob, 0.5),
            cand(CandidateKind::BoundaryRoot, Side::Bob, 0.4),
        ];
        assert_eq!(select_best(&c), 2);
        let c = vec![
            cand(CandidateKind::VacuumReplacement, Side::Both, 1.0),
            cand(CandidateKind::InteriorRoot, Side::Alice, 1.2),
            cand(CandidateKind::InteriorRoot, Side::Bob, 1.2),
        ];
        assert_eq!(select_best(&c), 2);
        let c = vec![
            cand(CandidateKind::Identity, Side::Bob, 0.6),
            cand(CandidateKind::InteriorRoot, Side::Bob, 0.6 + 1e-8),
        ];
        assert_eq!(select_best(&c), 1);
    }
}
