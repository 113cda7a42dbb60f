//! Closed-form values against phase-space quadrature and grid search.

use cvtele::oracle::sampling::{random_diagonal_channel, random_physical_state, random_pure_input, rng};
use cvtele::oracle::{
    default_overlap_grid, default_swap_grid, grid_search_cp, swap_fidelity_integral, wigner_overlap_fidelity,
};
use cvtele::{optimize_one_sided, swap_fidelity, teleport_fidelity, Side, Target};

fn main() -> cvtele::Result<()> {
    let mut g = rng(1);
    for _ in 0..3 {
        let gamma = random_physical_state(&mut g);
        let d = random_pure_input(&mut g);
        let f = teleport_fidelity(&gamma, &d)?.value;
        let q = wigner_overlap_fidelity(&gamma, &d, &default_overlap_grid(&gamma, &d))?;
        let s = swap_fidelity(&gamma)?.value;
        let qs = swap_fidelity_integral(&gamma, &default_swap_grid(&gamma))?;
        println!("F {f:.10} vs {:.10}   swap {s:.10} vs {:.10}", q.value, qs.value);
    }

    let gamma = random_diagonal_channel(&mut g);
    let best = optimize_one_sided(&gamma, Target::Coherent, Side::Bob)?.best;
    let grid = grid_search_cp(&gamma, Target::Coherent, Side::Bob, 3.0, 0.01, true)?;
    let s = best.map.s();
    println!(
        "optimizer {:.10} at S = diag({:.5}, {:.5}); grid {:.10} at ({:.5}, {:.5})",
        best.fidelity,
        s[(0, 0)],
        s[(1, 1)],
        grid.fidelity,
        grid.x,
        grid.y
    );
    Ok(())
}
