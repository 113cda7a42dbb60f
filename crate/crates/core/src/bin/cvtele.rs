use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use cvtele::cli::{self, InputSpec, SweepMode, SweepSpec, SweepTarget};
use cvtele::optimizer::FallbackOptions;
use cvtele::{Side, Target, TwoModeCovariance};

#[derive(Parser)]
#[command(name = "cvtele", version, about = "Optimal local Gaussian operations for CV teleportation")]
struct Cli {
    /// Channel as inline JSON or @file
    #[arg(long, global = true)]
    channel: Option<String>,
    /// Write the report (or sweep CSV) here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cross-check closed-form values against phase-space quadrature
    #[arg(long, global = true)]
    verify: bool,
    /// Seed for the numeric fallback search
    #[arg(long, global = true, default_value_t = FallbackOptions::default().seed)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Bob,
    Alice,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OptimalCp,
    SymplecticOnly,
    None,
}

#[derive(Subcommand)]
enum Cmd {
    /// Teleportation fidelities of the channel
    Fidelity {
        /// `coherent` or a JSON pure input
        #[arg(long)]
        input: Option<String>,
        /// Fidelity of the teleportation operation itself
        #[arg(long)]
        swap: bool,
    },
    /// Best local CP map for a target
    Optimize {
        /// `coherent`, `swap`, or a JSON pure input
        #[arg(long, default_value = "coherent")]
        target: String,
        #[arg(long, value_enum, default_value = "bob")]
        side: SideArg,
    },
    /// Squeezing sweep of the noisy two-mode squeezed vacuum
    Sweep {
        #[arg(long, default_value_t = 0.5)]
        b0: f64,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 1.0)]
        r_max: f64,
        #[arg(long, default_value_t = 101)]
        r_steps: usize,
        /// `coherent` or `swap`
        #[arg(long, default_value = "coherent")]
        target: String,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["optimal-cp", "symplectic-only", "none"])]
        modes: Vec<ModeArg>,
    },
}

fn channel(cli: &Cli) -> anyhow::Result<TwoModeCovariance> {
    let Some(arg) = cli.channel.as_deref() else {
        bail!("--channel is required for this command");
    };
    Ok(cli::read_channel(arg)?.covariance()?)
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns true when a `--verify` comparison failed.
fn run(cli: &Cli) -> anyhow::Result<bool> {
    let fallback = FallbackOptions {
        seed: cli.seed,
        ..FallbackOptions::default()
    };
    match &cli.cmd {
        Cmd::Fidelity { input, swap } => {
            let gamma = channel(cli)?;
            let d = input.as_deref().map(|s| InputSpec::parse(s)?.covariance()).transpose()?;
            let report = cli::cmd_fidelity(&gamma, d.as_ref(), *swap, cli.verify)?;
            emit(cli, &report.text)?;
            Ok(report.verify_failed)
        }
        Cmd::Optimize { target, side } => {
            let gamma = channel(cli)?;
            let target = match target.trim() {
                "swap" => Target::Swap,
                "coherent" => Target::Coherent,
                other => Target::PureGaussian(InputSpec::parse(other)?.covariance()?),
            };
            let side = match side {
                SideArg::Bob => Side::Bob,
                SideArg::Alice => Side::Alice,
                SideArg::Both => Side::Both,
            };
            let report = cli::cmd_optimize(&gamma, target, side, cli.verify, &fallback)?;
            emit(cli, &report.text)?;
            Ok(report.verify_failed)
        }
        Cmd::Sweep {
            b0,
            r_min,
            r_max,
            r_steps,
            target,
            modes,
        } => {
            let target = match target.as_str() {
                "coherent" => SweepTarget::Coherent,
                "swap" => SweepTarget::Swap,
                other => bail!("sweep target must be coherent or swap, got {other}"),
            };
            let mut spec = SweepSpec::new(*b0, *r_min, *r_max, *r_steps, target)?;
            spec.modes = modes
                .iter()
                .map(|m| match m {
                    ModeArg::OptimalCp => SweepMode::OptimalCp,
                    ModeArg::SymplecticOnly => SweepMode::SymplecticOnly,
                    ModeArg::None => SweepMode::None,
                })
                .collect();
            spec.modes.sort();
            spec.modes.dedup();
            let rows = cli::run_sweep(&spec, &fallback)?;
            match &cli.out {
                Some(p) => cli::write_sweep(&spec, &rows, cli.seed, p)?,
                None => print!("{}", cli::sweep_csv(&rows)),
            }
            Ok(false)
        }
    }
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", one_line(first.trim_start_matches("error:")));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: closed-form value differs from the oracle by more than {:e}", cli::VERIFY_TOL);
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {}", one_line(&format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}
