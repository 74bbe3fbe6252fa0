//! Jacobi fields from a pole and from a geodesic sphere, and the index form check.

use curvbar::jacobi::{check_minimizing, solve_jacobi};
use curvbar::{BaseSpec, ModelManifold, Orientation};

fn main() -> curvbar::Result<()> {
    let m = ModelManifold::space_form(-1.0, 2)?;
    let field = solve_jacobi(&m, BaseSpec::PolarPoint, 2.0)?;
    for t in [0.5, 1.0, 2.0] {
        println!("j({t}) = {:.10}   sinh({t}) = {:.10}", field.amplitude(t), f64::sinh(t));
    }

    let sphere = ModelManifold::space_form(1.0, 2)?;
    let base = BaseSpec::sphere(0.5, Orientation::Outward);
    let field = solve_jacobi(&sphere, base, 0.8)?;
    println!(
        "from a sphere of radius 0.5 in S^2: j'/j at 0.8 = {:.6}",
        field.log_derivative(0.8)
    );

    let report = check_minimizing(&sphere, BaseSpec::PolarPoint, 1.5, 200, 7)?;
    println!(
        "I(J) = {:.6}; {} random competitors, smallest excess {:.3e}",
        report.jacobi_index, report.trials, report.min_margin
    );

    match solve_jacobi(&sphere, BaseSpec::PolarPoint, 4.0) {
        Ok(_) => println!("no conjugate point before 4"),
        Err(e) => println!("past pi: {e}"),
    }
    Ok(())
}
