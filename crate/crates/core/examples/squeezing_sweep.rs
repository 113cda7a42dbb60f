//! Writes the coherent-target and swap-target squeezing sweeps as CSV.
//!
//! ```bash
//! cargo run --release --example squeezing_sweep -- out_dir
//! gnuplot -e "set datafile separator ','; plot 'out_dir/coherent.csv' using 1:2 w l, '' using 1:3 w l"
//! ```

use std::path::PathBuf;

use cvtele::cli::{run_sweep, write_sweep, SweepSpec, SweepTarget};
use cvtele::optimizer::FallbackOptions;

fn main() -> cvtele::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sweeps".into()));
    std::fs::create_dir_all(&dir)?;
    let fallback = FallbackOptions::default();

    for (name, target) in [("coherent", SweepTarget::Coherent), ("swap", SweepTarget::Swap)] {
        let spec = SweepSpec::new(0.5, 0.0, 1.0, 1001, target)?;
        let rows = run_sweep(&spec, &fallback)?;
        let path = dir.join(format!("{name}.csv"));
        write_sweep(&spec, &rows, fallback.seed, &path)?;

        let gap = rows
            .iter()
            .filter_map(|r| Some(r.optimal_cp? - r.symplectic_only?))
            .fold(0.0f64, f64::max);
        println!("{}: {} rows, largest CP advantage {gap:.4}", path.display(), rows.len());
    }
    Ok(())
}
