//! Separable states never push the swap fidelity above one.

use cvtele::oracle::sampling::{random_physical_state, rng};
use cvtele::oracle::separable_state_sampler;
use cvtele::{is_ppt_separable, swap_fidelity};

fn main() -> cvtele::Result<()> {
    let separable = separable_state_sampler(7, 500);
    let mut top: f64 = 0.0;
    for s in &separable {
        top = top.max(swap_fidelity(s)?.value);
    }
    println!("largest swap fidelity over {} separable states: {top:.6}", separable.len());

    let mut g = rng(7);
    let (mut above, mut entangled) = (0, 0);
    for _ in 0..2000 {
        let s = random_physical_state(&mut g);
        if swap_fidelity(&s)?.value > 1.0 {
            above += 1;
            if !is_ppt_separable(&s)? {
                entangled += 1;
            }
        }
    }
    println!("{above} random states exceed 1; {entangled} of them are entangled");
    Ok(())
}
