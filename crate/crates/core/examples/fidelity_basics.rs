//! Teleportation fidelities of the noisy two-mode squeezed vacuum.
//!
//! ```bash
//! cargo run --example fidelity_basics
//! ```

use cvtele::{
    make_tmsv_noisy, output_covariance, swap_fidelity, teleport_fidelity, ChannelParams, OneModeCovariance,
    TwoModeCovariance,
};

fn main() -> cvtele::Result<()> {
    let coherent = OneModeCovariance::vacuum();

    // no entanglement: the classical limit
    let product = TwoModeCovariance::vacuum();
    println!("vacuum channel: F = {}", teleport_fidelity(&product, &coherent)?.value);

    println!("{:>5} {:>10} {:>10} {:>10}", "r", "F(b0=0)", "F(b0=.5)", "swap(b0=0)");
    for i in 0..=10 {
        let r = i as f64 * 0.1;
        let clean = make_tmsv_noisy(ChannelParams::new(r, 0.0)?);
        let noisy = make_tmsv_noisy(ChannelParams::new(r, 0.5)?);
        println!(
            "{r:>5.2} {:>10.6} {:>10.6} {:>10.6}",
            teleport_fidelity(&clean, &coherent)?.value,
            teleport_fidelity(&noisy, &coherent)?.value,
            swap_fidelity(&clean)?.value,
        );
    }

    let squeezed = OneModeCovariance::squeezed(0.3, 0.0);
    let gamma = make_tmsv_noisy(ChannelParams::new(0.7, 0.2)?);
    let out = output_covariance(&gamma, &squeezed)?;
    println!("squeezed input F = {:.6}", teleport_fidelity(&gamma, &squeezed)?.value);
    println!("output covariance = {}", out.matrix());
    Ok(())
}
