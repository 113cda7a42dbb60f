//! Best local operation on Bob's mode for coherent-state teleportation.
//!
//! Below the threshold squeezing a noisy attenuation beats doing nothing;
//! above it the identity wins.

use cvtele::{make_tmsv_noisy, optimize_one_sided, ChannelParams, Side, Target};

fn main() -> cvtele::Result<()> {
    let b0 = 0.5;
    let r_th = ChannelParams::threshold_squeezing(b0).expect("b0 < 1");
    println!("threshold squeezing for b0 = {b0}: {r_th:.6}");

    for r in [0.2, r_th, 0.6] {
        let gamma = make_tmsv_noisy(ChannelParams::new(r, b0)?);
        let res = optimize_one_sided(&gamma, Target::Coherent, Side::Bob)?;
        println!("\nr = {r:.4}");
        for c in &res.candidates {
            println!("  {:<18} x = {:>9.6} y = {:>9.6} F = {:.9}", c.kind.name(), c.x, c.y, c.fidelity);
        }
        let best = res.best;
        println!("  best: {} with S = diag({:.6}, {:.6}), G = {}", best.kind.name(), best.x, best.y, best.map.g());
    }
    Ok(())
}
