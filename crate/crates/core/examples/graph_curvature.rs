//! Principal and mean curvatures of a radial graph, checked against finite differences.

use curvbar::curvature::{curvature_report, HeightProfile};
use curvbar::oracle::{fd_oracle_report, report_deviation};
use curvbar::{BaseSpec, ModelManifold};

fn main() -> curvbar::Result<()> {
    let m = ModelManifold::space_form(-1.0, 3)?;
    let f = HeightProfile::log_cosh();
    println!("   t      k_v        k_t        H          GK         oracle dev");
    for t in [0.25, 0.5, 1.0, 1.5] {
        let r = curvature_report(&m, BaseSpec::PolarPoint, &f, t)?;
        let o = fd_oracle_report(&m, BaseSpec::PolarPoint, &f, t)?;
        println!(
            "{t:5.2}  {:+.6}  {:+.6}  {:+.6}  {:+.6}  {:.1e}",
            r.k_vertical,
            r.k_tangential,
            r.mean,
            r.gauss_kronecker,
            report_deviation(&r, &o, 1e-8)
        );
    }

    let ts: Vec<f64> = (0..=20).map(|k| 0.1 * k as f64).collect();
    let hs = ts.iter().map(|t| 0.3 * t * t - 0.02 * t.powi(3)).collect();
    let sampled = HeightProfile::sampled(ts, hs)?;
    let r = curvature_report(&m, BaseSpec::PolarPoint, &sampled, 1.0)?;
    println!("spline profile at t = 1: H = {:+.6}", r.mean);
    Ok(())
}
