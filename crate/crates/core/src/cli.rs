//! Specifications, sweeps and text reports used by the `cvtele` binary.
//!
//! Sweep CSV layout (gnuplot-compatible with `set datafile separator ","`):
//!
//! ```text
//! r,fidelity_optimal_cp,fidelity_symplectic_only,fidelity_no_op,winner_kind,x_opt,y_opt
//! ```
//!
//! Numbers carry 12 significant digits; columns for modes that were not
//! requested are left empty.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{noise_matrix, swap_fidelity, teleport_fidelity};
use crate::gaussian::{make_tmsv_noisy, ChannelParams, ChannelSpec, OneModeCovariance, TwoModeCovariance};
use crate::optimizer::{
    optimize_one_sided_with, optimize_swap_two_sided_with, CandidateKind, CandidateSolution, FallbackOptions,
    OptimizationResult, Side, Target,
};
use crate::oracle::{swap_fidelity_integral, wigner_overlap_fidelity, PhaseSpaceGrid};
use crate::linalg::{max_eig_sym2, max_eig_sym4};

/// Grid resolution used by `--verify`.
pub const VERIFY_POINTS: usize = 256;
/// Largest accepted gap between a closed-form value and its quadrature.
pub const VERIFY_TOL: f64 = 1e-5;

pub const CSV_HEADER: &str =
    "r,fidelity_optimal_cp,fidelity_symplectic_only,fidelity_no_op,winner_kind,x_opt,y_opt";

/// Reads `--channel`: inline JSON, or `@path` for a file.
pub fn read_channel(arg: &str) -> Result<ChannelSpec> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("cannot read channel file {path}: {e}")))?;
            ChannelSpec::from_json(&text)
        }
        None => ChannelSpec::from_json(arg),
    }
}

/// JSON description of a pure single-mode input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    Coherent,
    /// `Rot(theta) diag(e^{2s}, e^{-2s}) Rot(theta)^T`.
    Squeezed { s: f64, theta: f64 },
    Covariance { d: [[f64; 2]; 2] },
}

impl InputSpec {
    /// Accepts `coherent` or a JSON object.
    pub fn parse(arg: &str) -> Result<Self> {
        if arg.trim() == "coherent" {
            return Ok(InputSpec::Coherent);
        }
        serde_json::from_str(arg).map_err(|e| Error::Spec(format!("input JSON: {e}")))
    }

    pub fn covariance(&self) -> Result<OneModeCovariance> {
        let d = match *self {
            InputSpec::Coherent => OneModeCovariance::vacuum(),
            InputSpec::Squeezed { s, theta } => OneModeCovariance::squeezed(s, theta),
            InputSpec::Covariance { d } => OneModeCovariance::new(Matrix2::new(d[0][0], d[0][1], d[1][0], d[1][1]))?,
        };
        d.require_pure()?;
        Ok(d)
    }
}

/// Outcome of a command: the text to print and whether verification failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub verify_failed: bool,
}

fn fmt_matrix(m: &Matrix2<f64>) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        sig12(m[(0, 0)]),
        sig12(m[(0, 1)]),
        sig12(m[(1, 0)]),
        sig12(m[(1, 1)])
    )
}

/// Decimal rendering with 12 significant digits; zero prints as `0`.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').trim_start_matches(['0', '.']).is_empty() {
        "0".into()
    } else {
        s
    }
}

fn overlap_grid(gamma: &TwoModeCovariance, d: &OneModeCovariance) -> Result<PhaseSpaceGrid> {
    let out = d.matrix() + crate::oracle::kernel_covariance(gamma);
    let sigma = max_eig_sym2(d.matrix()).max(max_eig_sym2(&out)).sqrt();
    PhaseSpaceGrid::for_width(sigma, VERIFY_POINTS)
}

fn swap_grid(gamma: &TwoModeCovariance) -> Result<PhaseSpaceGrid> {
    PhaseSpaceGrid::for_width(max_eig_sym4(gamma.matrix()).sqrt(), VERIFY_POINTS)
}

/// Appends an oracle comparison line; returns true when it fails.
fn verify_line(text: &mut String, label: &str, closed: f64, oracle: f64) -> bool {
    let delta = (closed - oracle).abs();
    let ok = delta <= VERIFY_TOL;
    let _ = writeln!(
        text,
        "verify {label}: oracle = {}, delta = {delta:.3e} {}",
        sig12(oracle),
        if ok { "ok" } else { "FAILED" }
    );
    !ok
}

/// Fidelity report. With neither `input` nor `swap`, both the coherent-state
/// and the swap fidelity are printed.
pub fn cmd_fidelity(
    gamma: &TwoModeCovariance,
    input: Option<&OneModeCovariance>,
    swap: bool,
    verify: bool,
) -> Result<Report> {
    gamma.require_physical()?;
    let e = noise_matrix(gamma)?;
    let mut text = String::new();
    let mut failed = false;
    let _ = writeln!(text, "E' = {}", fmt_matrix(e.matrix()));
    let vacuum = OneModeCovariance::vacuum();
    let (input, swap) = match (input, swap) {
        (None, false) => (Some(&vacuum), true),
        other => other,
    };
    if let Some(d) = input {
        let f = teleport_fidelity(gamma, d)?.value;
        let _ = writeln!(text, "F = {}", sig12(f));
        if verify {
            let q = wigner_overlap_fidelity(gamma, d, &overlap_grid(gamma, d)?)?;
            failed |= verify_line(&mut text, "F", f, q.value);
        }
    }
    if swap {
        let f = swap_fidelity(gamma)?.value;
        let _ = writeln!(text, "swap F = {}", sig12(f));
        if verify {
            let q = swap_fidelity_integral(gamma, &swap_grid(gamma)?)?;
            failed |= verify_line(&mut text, "swap F", f, q.value);
        }
    }
    Ok(Report {
        text,
        verify_failed: failed,
    })
}

/// Runs the optimizer matching `target` and `side`.
pub fn optimize(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
    fallback: &FallbackOptions,
) -> Result<OptimizationResult> {
    match (target, side) {
        (Target::Swap, Side::Both) => optimize_swap_two_sided_with(gamma, fallback),
        (_, Side::Both) => Err(Error::InvalidParameter(
            "side both is only available for the swap target".into(),
        )),
        _ => optimize_one_sided_with(gamma, target, side, fallback),
    }
}

fn candidate_line(c: &CandidateSolution) -> String {
    format!(
        "{:<18} {:<5} F = {}  S = {}  G = {}",
        c.kind.name(),
        c.side.name(),
        sig12(c.fidelity),
        fmt_matrix(c.map.s()),
        fmt_matrix(c.map.g())
    )
}

/// Lists every candidate and the winner. `--verify` re-evaluates the
/// winner's fidelity by quadrature on the explicitly transformed channel.
pub fn cmd_optimize(
    gamma: &TwoModeCovariance,
    target: Target,
    side: Side,
    verify: bool,
    fallback: &FallbackOptions,
) -> Result<Report> {
    let res = optimize(gamma, target, side, fallback)?;
    let mut text = String::new();
    let _ = writeln!(text, "target {} side {}", target.name(), side.name());
    for c in &res.candidates {
        let _ = writeln!(text, "{}", candidate_line(c));
    }
    for d in &res.diagnostics {
        let _ = writeln!(text, "note: {d}");
    }
    let _ = writeln!(text, "winner: {}", candidate_line(&res.best));
    let mut failed = false;
    if verify {
        let out = res.best.transformed_channel(gamma);
        let oracle = match target {
            Target::Swap => swap_fidelity_integral(&out, &swap_grid(&out)?)?.value,
            _ => {
                let d = OneModeCovariance::new(target.input_matrix())?;
                wigner_overlap_fidelity(&out, &d, &overlap_grid(&out, &d)?)?.value
            }
        };
        failed = verify_line(&mut text, "winner", res.best.fidelity, oracle);
    }
    Ok(Report {
        text,
        verify_failed: failed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    Coherent,
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    OptimalCp,
    SymplecticOnly,
    None,
}

/// Squeezing sweep of the noisy two-mode squeezed vacuum family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub b0: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub target: SweepTarget,
    pub modes: Vec<SweepMode>,
}

impl SweepSpec {
    pub fn new(b0: f64, r_min: f64, r_max: f64, r_steps: usize, target: SweepTarget) -> Result<Self> {
        let spec = Self {
            b0,
            r_min,
            r_max,
            r_steps,
            target,
            modes: vec![SweepMode::OptimalCp, SweepMode::SymplecticOnly, SweepMode::None],
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min >= 0.0 && self.r_min.is_finite()) {
            return Err(Error::InvalidParameter(format!("r_min must be >= 0, got {}", self.r_min)));
        }
        if !(self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "r_max must exceed r_min, got {} <= {}",
                self.r_max, self.r_min
            )));
        }
        if self.r_steps < 2 {
            return Err(Error::InvalidParameter(format!("r_steps must be >= 2, got {}", self.r_steps)));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter("no sweep modes selected".into()));
        }
        ChannelParams::new(self.r_min, self.b0)?;
        Ok(())
    }

    pub fn r_values(&self) -> Vec<f64> {
        let n = self.r_steps - 1;
        (0..self.r_steps)
            .map(|i| self.r_min + (self.r_max - self.r_min) * i as f64 / n as f64)
            .collect()
    }

    fn wants(&self, m: SweepMode) -> bool {
        self.modes.contains(&m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub optimal_cp: Option<f64>,
    pub symplectic_only: Option<f64>,
    pub no_op: Option<f64>,
    pub winner: Option<CandidateKind>,
    pub x_opt: Option<f64>,
    pub y_opt: Option<f64>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let num = |v: Option<f64>| v.map(sig12).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            sig12(self.r),
            num(self.optimal_cp),
            num(self.symplectic_only),
            num(self.no_op),
            self.winner.map(|k| k.name()).unwrap_or_default(),
            num(self.x_opt),
            num(self.y_opt)
        )
    }
}

fn sweep_row(spec: &SweepSpec, r: f64, fallback: &FallbackOptions) -> Result<SweepRow> {
    let gamma = make_tmsv_noisy(ChannelParams::new(r, spec.b0)?);
    let mut row = SweepRow {
        r,
        optimal_cp: None,
        symplectic_only: None,
        no_op: None,
        winner: None,
        x_opt: None,
        y_opt: None,
    };
    if spec.wants(SweepMode::None) {
        row.no_op = Some(match spec.target {
            SweepTarget::Coherent => teleport_fidelity(&gamma, &OneModeCovariance::vacuum())?.value,
            SweepTarget::Swap => swap_fidelity(&gamma)?.value,
        });
    }
    if spec.wants(SweepMode::OptimalCp) || spec.wants(SweepMode::SymplecticOnly) {
        let res = match spec.target {
            SweepTarget::Coherent => optimize_one_sided_with(&gamma, Target::Coherent, Side::Bob, fallback)?,
            SweepTarget::Swap => optimize_swap_two_sided_with(&gamma, fallback)?,
        };
        if spec.wants(SweepMode::OptimalCp) {
            row.optimal_cp = Some(res.best.fidelity);
            row.winner = Some(res.best.kind);
            row.x_opt = Some(res.best.x);
            row.y_opt = Some(res.best.y);
        }
        if spec.wants(SweepMode::SymplecticOnly) {
            row.symplectic_only = res.best_symplectic().map(|c| c.fidelity);
        }
    }
    Ok(row)
}

/// Computes every row in parallel; rows come back in `r` order.
pub fn run_sweep(spec: &SweepSpec, fallback: &FallbackOptions) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.r_values()
        .par_iter()
        .map(|&r| sweep_row(spec, r, fallback))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    config: &'a SweepSpec,
    family: &'static str,
    seed: u64,
    r_th: Option<f64>,
    rows: usize,
    columns: Vec<&'static str>,
    crate_version: &'static str,
}

/// Writes the CSV to `path` and the run configuration next to it as
/// `<path>.json` (extension replaced).
pub fn write_sweep(spec: &SweepSpec, rows: &[SweepRow], seed: u64, path: &Path) -> Result<()> {
    std::fs::write(path, sweep_csv(rows)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let sidecar = Sidecar {
        config: spec,
        family: "tmsv_noisy",
        seed,
        r_th: ChannelParams::threshold_squeezing(spec.b0),
        rows: rows.len(),
        columns: CSV_HEADER.split(',').collect(),
        crate_version: env!("CARGO_PKG_VERSION"),
    };
    let json_path = path.with_extension("json");
    let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    std::fs::write(&json_path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", json_path.display())))?;
    Ok(())
}
