//! Reducing a two-mode state to standard form and undoing the reduction.

use cvtele::oracle::sampling::{random_local_symplectic, random_physical_state, rng};
use cvtele::to_standard_form;

fn main() -> cvtele::Result<()> {
    let mut g = rng(42);
    let gamma = random_physical_state(&mut g);
    println!("input{}", gamma.matrix());

    let sf = to_standard_form(&gamma)?;
    println!("a = {:.6}, b = {:.6}, c1 = {:.6}, c2 = {:.6}", sf.a, sf.b, sf.c1, sf.c2);
    println!("S_A{}S_B{}", sf.alice_symplectic, sf.bob_symplectic);

    let err = (sf.reconstruct().matrix() - gamma.matrix()).abs().max();
    println!("reconstruction error {err:.2e}");

    // local symplectics do not move the standard form
    let moved = gamma.local_transform(&random_local_symplectic(&mut g), &random_local_symplectic(&mut g));
    let again = to_standard_form(&moved)?;
    println!(
        "after local operations: a = {:.6}, b = {:.6}, c1 = {:.6}, c2 = {:.6}",
        again.a, again.b, again.c1, again.c2
    );
    Ok(())
}
