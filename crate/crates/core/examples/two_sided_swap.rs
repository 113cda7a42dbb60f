//! Local operations on both modes for the swap (operation) fidelity.

use cvtele::{make_tmsv_noisy, optimize_swap_two_sided, swap_fidelity, ChannelParams};

fn main() -> cvtele::Result<()> {
    println!("{:>5} {:>10} {:>10}  winner", "r", "no-op", "optimal");
    for i in 0..=8 {
        let r = i as f64 * 0.05;
        let gamma = make_tmsv_noisy(ChannelParams::new(r, 0.5)?);
        let res = optimize_swap_two_sided(&gamma)?;
        println!(
            "{r:>5.2} {:>10.6} {:>10.6}  {} on {}",
            swap_fidelity(&gamma)?.value,
            res.best.fidelity,
            res.best.kind.name(),
            res.best.side.name()
        );
    }
    Ok(())
}
