//! Optimal local Gaussian operations for continuous-variable teleportation.
//!
//! Alice and Bob share a two-mode Gaussian state and run unit-gain
//! Braunstein-Kimble teleportation. This crate evaluates the teleportation
//! fidelity of pure Gaussian inputs and the renormalized fidelity of the
//! teleportation operation itself, and finds the local trace-preserving
//! Gaussian CP maps that maximize them, on one side or on both.
//!
//! **Convention:** covariance matrices hold doubled symmetrized moments,
//! so the vacuum covariance is the identity.
//!
//! - [`gaussian`]: covariance types, CP maps, standard form, PPT test.
//! - [`fidelity`]: closed-form fidelities.
//! - [`optimizer`]: analytic one- and two-sided optima, numeric fallback.
//! - [`oracle`]: brute-force quadrature and grid searches for verification.
//! - [`cli`]: channel/input specifications, sweeps and reports behind the
//!   `cvtele` binary.

pub mod cli;
pub mod error;
pub mod fidelity;
pub mod gaussian;
pub mod linalg;
pub mod optimizer;
pub mod oracle;

pub use error::{Error, Result};
pub use fidelity::{noise_matrix, output_covariance, swap_fidelity, teleport_fidelity, FidelityValue};
pub use gaussian::{
    apply_cp_map_alice, apply_cp_map_bob, is_physical, is_ppt_separable, is_valid_cp_map,
    make_tmsv_noisy, to_standard_form, ChannelParams, ChannelSpec, Covariance, GaussianCpMap,
    OneModeCovariance, StandardFormParams, TwoModeCovariance,
};
pub use optimizer::{
    optimize_numeric_fallback, optimize_one_sided, optimize_swap_two_sided, CandidateKind,
    CandidateSolution, OptimizationResult, Side, Target,
};
