//! Warps and radial curvature of space forms next to a custom warp.

use std::sync::Arc;

use curvbar::ModelManifold;

fn main() -> curvbar::Result<()> {
    for c in [-1.0, 0.0, 1.0] {
        let m = ModelManifold::space_form(c, 3)?;
        println!(
            "{:<18} phi(1) = {:.6}  K(1) = {:+.3}  Ric(1) = {:+.3}",
            m.name(),
            m.warp(1.0),
            m.radial_sectional_curvature(1.0)?,
            m.radial_ricci(1.0)?
        );
    }

    // phi = t + t^3/6, K = -t / (1 + t^2/6)
    let m = ModelManifold::custom(
        2,
        "cubic",
        Arc::new(|t| t + t.powi(3) / 6.0),
        Arc::new(|t| 1.0 + t * t / 2.0),
        Arc::new(|t| t),
        10.0,
    )?;
    let (lo, hi) = m.radial_curvature_range(2.0)?;
    println!("{:<18} K on (0, 2] spans [{lo:.4}, {hi:.4}]", m.name());

    let ripple = ModelManifold::builtin("ripple", 2)?;
    println!(
        "{:<18} K(0.5) = {:+.4}",
        ripple.name(),
        ripple.radial_sectional_curvature(0.5)?
    );
    Ok(())
}
