//! Comparison certificates and transplanting a barrier into another model.

use curvbar::barrier::cmc_sphere_profile;
use curvbar::compare::{slide_contact, transplant, uniform_grid, verify_theorem1, verify_theorem2};
use curvbar::curvature::HeightProfile;
use curvbar::dirichlet::solve_cmc_graph;
use curvbar::{BaseSpec, ModelManifold};

fn main() -> curvbar::Result<()> {
    let grid = uniform_grid(0.1, 2.0, 20);
    let hyp = ModelManifold::space_form(-1.0, 3)?;
    let flat = ModelManifold::space_form(0.0, 3)?;
    let cert = verify_theorem1(
        &hyp,
        &flat,
        &HeightProfile::half_square(),
        BaseSpec::PolarPoint,
        BaseSpec::PolarPoint,
        &grid,
    )?;
    print!("{}", cert.to_table());

    let ripple = ModelManifold::builtin("ripple", 3)?;
    let cert = verify_theorem2(
        &hyp,
        &ripple,
        &HeightProfile::linear(),
        BaseSpec::PolarPoint,
        BaseSpec::PolarPoint,
        &grid,
    )?;
    println!(
        "Ricci comparison against ripple: {:?}, min H margin {:.4}",
        cert.verdict, cert.min_conclusion_margin
    );

    let sphere = cmc_sphere_profile(-1.0, 2, 1.0)?;
    let target = ModelManifold::builtin("sinh_cubic", 2)?;
    let moved = transplant(&sphere, &target)?;
    let (lo, hi) = moved
        .reports
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.mean), hi.max(r.mean))
        });
    println!("H^2 sphere in sinh_cubic: mean curvature in [{lo:.4}, {hi:.4}]");

    let candidate = solve_cmc_graph(&target, 1.2, 0.5)?.profile()?;
    let contact = slide_contact(&moved, &candidate)?;
    println!(
        "slid by {:.4}, first touch at t = {:.4}, candidate H {:.4} vs barrier H {:.4}",
        contact.tau_star, contact.contact_radius, contact.candidate.mean, contact.barrier.mean
    );
    Ok(())
}
