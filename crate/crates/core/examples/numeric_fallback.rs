//! A rotated squeezed input is not diagonal in the channel's standard
//! frame, so the optimizer switches to its multi-start simplex search.

use cvtele::optimizer::{optimize_numeric_fallback, FallbackOptions, Method};
use cvtele::{make_tmsv_noisy, optimize_one_sided, ChannelParams, OneModeCovariance, Side, Target};

fn main() -> cvtele::Result<()> {
    let gamma = make_tmsv_noisy(ChannelParams::new(0.3, 0.5)?);
    let target = Target::PureGaussian(OneModeCovariance::squeezed(0.4, 0.6));

    let res = optimize_one_sided(&gamma, target, Side::Bob)?;
    match res.method {
        Method::Analytic => println!("analytic"),
        Method::Numeric { converged } => println!("numeric search, converged = {converged}"),
    }
    for note in &res.diagnostics {
        println!("note: {note}");
    }
    println!("best {} F = {:.9}", res.best.kind.name(), res.best.fidelity);
    println!("S = {}G = {}", res.best.map.s(), res.best.map.g());

    // more starts, another seed
    let opts = FallbackOptions {
        starts: 128,
        seed: 7,
        ..FallbackOptions::default()
    };
    let wide = optimize_numeric_fallback(&gamma, target, Side::Bob, &opts)?;
    println!("128 starts: F = {:.9}", wide.best.fidelity);
    Ok(())
}
