//! Building Gaussian CP maps, checking them two ways, and applying them.

use nalgebra::Matrix2;

use cvtele::{apply_cp_map_bob, is_physical, make_tmsv_noisy, ChannelParams, GaussianCpMap};

fn main() -> cvtele::Result<()> {
    let gamma = make_tmsv_noisy(ChannelParams::new(0.4, 0.1)?);

    // attenuation by t with the least noise that keeps the map CP
    let t: f64 = 0.7;
    let s = Matrix2::from_diagonal_element(t);
    let minimal = GaussianCpMap::new(s, Matrix2::from_diagonal_element(1.0 - t * t))?;
    let too_quiet = GaussianCpMap::new(s, Matrix2::from_diagonal_element(0.3))?;

    for (name, map) in [("minimal noise", minimal), ("too little noise", too_quiet)] {
        println!(
            "{name}: scalar test {}, eigenvalue test {} (margin {:.3e}), slack {:.3e}",
            map.is_valid(),
            map.is_valid_eigen(),
            map.cp_margin_eigen(),
            map.cp_slack()
        );
    }

    let out = apply_cp_map_bob(&gamma, &minimal)?;
    println!("after attenuation: physical = {}", is_physical(&out));
    println!("{}", out.matrix());

    match apply_cp_map_bob(&gamma, &too_quiet) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
