//! Rotational spheres of constant mean and Gauss-Kronecker curvature, and the entire graph.

use curvbar::barrier::{cmc_sphere_profile, entire_cmc_graph, gk_sphere_profile, s_inf};
use curvbar::Error;

fn main() -> curvbar::Result<()> {
    let cmc = cmc_sphere_profile(-1.0, 2, 1.0)?;
    println!(
        "H0 = 1 in H^2 x R: radius {:.12} (ln 3 = {:.12})",
        cmc.radius,
        3f64.ln()
    );
    println!(
        "  equator height {:.6}, total height {:.6}",
        cmc.equator_height,
        cmc.total_height()
    );
    println!("  round trip {:.2e}", cmc.round_trip_error(0.999)?);

    let gk = gk_sphere_profile(1.0, 3, 2.0)?;
    println!(
        "K0 = 2 in S^3 x R: radius {:.6}, round trip {:.2e}",
        gk.radius,
        gk.round_trip_error(0.999)?
    );

    let floor = s_inf(-1.0, 3);
    match cmc_sphere_profile(-1.0, 3, floor) {
        Err(Error::NoCompactSphere { .. }) => println!("no compact sphere at H0 = s_inf = {floor}"),
        other => println!("unexpected: {:?}", other.map(|p| p.radius)),
    }

    let entire = entire_cmc_graph(2, 6.0)?;
    let last = entire.samples.last().expect("samples");
    println!("entire graph: nu({:.1}) = {:.12}, h = {:.6}", last.t, last.nu, last.h);
    Ok(())
}
