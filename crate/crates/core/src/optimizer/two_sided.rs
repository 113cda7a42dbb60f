use super::numeric::FallbackOptions;
use super::one_sided::optimize_one_sided_with;
use super::{CandidateKind, CandidateSolution, Method, OptimizationResult, Side, Target};
use crate::error::Result;
use crate::gaussian::{GaussianCpMap, TwoModeCovariance};

/// Best pair of independent local CP maps for the swap fidelity.
///
/// With diagonal maps the objective is piecewise linear in the product
/// `uv` of Alice's scalings, so its minimum sits where Alice does nothing,
/// where Bob's map is symplectic (and can be moved to Alice), or where both
/// modes are replaced by vacuum. The three strategies are evaluated and the
/// best one returned.
pub fn optimize_swap_two_sided(gamma: &TwoModeCovariance) -> Result<OptimizationResult> {
    optimize_swap_two_sided_with(gamma, &FallbackOptions::default())
}

/// As [`optimize_swap_two_sided`], with explicit settings for the numeric search.
pub fn optimize_swap_two_sided_with(
    gamma: &TwoModeCovariance,
    fallback: &FallbackOptions,
) -> Result<OptimizationResult> {
    let bob = optimize_one_sided_with(gamma, Target::Swap, Side::Bob, fallback)?;
    let alice = optimize_one_sided_with(gamma, Target::Swap, Side::Alice, fallback)?;

    // both vacua: Gamma = I, E' = 2I, fidelity exactly 1
    let both_vacuum = CandidateSolution {
        kind: CandidateKind::VacuumReplacement,
        side: Side::Both,
        x: 0.0,
        y: 0.0,
        map: GaussianCpMap::vacuum_replacement(),
        objective: 4.0,
        fidelity: 1.0,
    };

    let method = match (bob.method, alice.method) {
        (Method::Analytic, Method::Analytic) => Method::Analytic,
        (a, b) => {
            let ok = |m: Method| !matches!(m, Method::Numeric { converged: false });
            Method::Numeric {
                converged: ok(a) && ok(b),
            }
        }
    };
    let mut diagnostics = bob.diagnostics;
    diagnostics.extend(alice.diagnostics);
    let mut candidates = bob.candidates;
    candidates.extend(alice.candidates);
    candidates.push(both_vacuum);
    Ok(OptimizationResult::from_candidates(
        candidates,
        Target::Swap,
        Side::Both,
        method,
        diagnostics,
    ))
}
