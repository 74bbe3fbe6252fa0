//! Radial Dirichlet problems and where they stop being solvable.

use curvbar::compare::{nonexistence_gk_threshold, nonexistence_mean_threshold};
use curvbar::dirichlet::{height_gradient_estimates, solve_cmc_graph, solve_gk_graph};
use curvbar::ModelManifold;

fn main() -> curvbar::Result<()> {
    let m = ModelManifold::builtin("sinh_cubic", 2)?;
    let r = 1.0;
    let h_star = nonexistence_mean_threshold(&m, r)?;
    let k_star = nonexistence_gk_threshold(&m, r)?;
    println!("r = {r}: H0* = {h_star:.10}, K0* = {k_star:.10}");

    let sol = solve_cmc_graph(&m, r, 0.5)?;
    let est = height_gradient_estimates(&sol)?;
    println!(
        "H0 = 0.5: depth {:.6}, boundary slope {:.6}, barrier bound {:?}",
        sol.max_height,
        sol.boundary_gradient(),
        est.barrier_height
    );
    let (dev, _) = sol.recomputed_deviation()?;
    println!("  recomputed H deviates by {dev:.2e}");

    match solve_cmc_graph(&m, r, 1.01 * h_star) {
        Ok(_) => println!("solvable above H0*?"),
        Err(e) => println!("H0 = 1.01 H0*: {} ({e})", e.name()),
    }

    let gk = solve_gk_graph(&m, r, 0.5 * k_star)?;
    println!("K0 = K0*/2: depth {:.6}", gk.max_height);
    Ok(())
}
