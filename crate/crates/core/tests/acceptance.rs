//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are implemented as stated and are
//! expected to fail; the process exits non-zero if any other criterion fails
//! or if a known failure starts passing.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rayon::prelude::*;

use curvbar::barrier::{
    cmc_sphere_profile, cmc_sphere_radius, entire_cmc_graph, gk_sphere_profile, gk_sphere_radius, s_inf, BarrierProfile,
};
use curvbar::compare::{
    nonexistence_gk_threshold, nonexistence_mean_threshold, solvability_boundary, uniform_grid, verify_theorem1,
    verify_theorem2, Verdict,
};
use curvbar::curvature::{curvature_report, HeightProfile};
use curvbar::dirichlet::{solve_cmc_graph, solve_gk_graph, DirichletSolution};
use curvbar::jacobi::{check_minimizing, solve_jacobi};
use curvbar::oracle::{fd_oracle_report, report_deviation};
use curvbar::{BaseSpec, Error, ModelManifold, Orientation};

#[path = "common/cases.rs"]
mod cases;

const KNOWN_UNATTAINABLE: &[&str] = &["7b", "10"];

const BUILTIN_WARPS: &[&str] = &["sinh_cubic", "ripple", "tanh_cigar"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sf(c: f64, n: usize) -> ModelManifold {
    ModelManifold::space_form(c, n).expect("valid space form")
}

/// `sn_c(t)`, written out independently of the library.
fn sn(c: f64, t: f64) -> f64 {
    if c > 0.0 {
        (c.sqrt() * t).sin() / c.sqrt()
    } else if c < 0.0 {
        ((-c).sqrt() * t).sinh() / (-c).sqrt()
    } else {
        t
    }
}

fn profiles() -> Vec<HeightProfile> {
    vec![
        HeightProfile::linear(),
        HeightProfile::half_square(),
        HeightProfile::log_cosh(),
    ]
}

fn jacobi_space_forms() -> Outcome {
    let mut worst = 0.0f64;
    for c in [-2.0, -1.0, 0.0, 1.0] {
        let field = match solve_jacobi(&sf(c, 2), BaseSpec::PolarPoint, 3.0) {
            Ok(f) => f,
            Err(e) => return outcome(false, format!("c = {c}: {e}")),
        };
        for k in 0..=3000 {
            let t = 3.0 * k as f64 / 3000.0;
            worst = worst.max((field.amplitude(t) - sn(c, t)).abs());
        }
    }
    outcome(worst < 1e-8, format!("max |j - sn_c| = {worst:.3e} (tol 1e-8)"))
}

fn lemma_vs_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for c in [-2.0, -1.0, 0.0, 1.0] {
        let m = sf(c, 3);
        for f in profiles() {
            for t in [0.5, 1.0, 1.5] {
                let a = curvature_report(&m, BaseSpec::PolarPoint, &f, t);
                let b = fd_oracle_report(&m, BaseSpec::PolarPoint, &f, t);
                match (a, b) {
                    (Ok(a), Ok(b)) => worst = worst.max(report_deviation(&a, &b, 1e-8)),
                    (Err(e), _) | (_, Err(e)) => return outcome(false, format!("c = {c}, t = {t}: {e}")),
                }
                cases += 1;
            }
        }
    }
    outcome(
        cases == 36 && worst < 1e-5,
        format!("{cases} cases, max relative deviation {worst:.3e} (tol 1e-5)"),
    )
}

fn euclidean_closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2, 3, 4] {
        for h0 in [0.5, 1.0, 2.0] {
            match cmc_sphere_radius(0.0, n, h0) {
                Ok(r) => worst = worst.max((r * h0 - 1.0).abs()),
                Err(e) => return outcome(false, format!("H0 = {h0}: {e}")),
            }
        }
        for k0 in [0.5f64, 1.0, 8.0] {
            match gk_sphere_radius(0.0, n, k0) {
                Ok(r) => worst = worst.max((r * k0.powf(1.0 / n as f64) - 1.0).abs()),
                Err(e) => return outcome(false, format!("K0 = {k0}: {e}")),
            }
        }
    }
    outcome(
        worst < 1e-8,
        format!("max |r H0 - 1|, |r K0^(1/n) - 1| = {worst:.3e} (tol 1e-8)"),
    )
}

fn barrier_suite() -> Vec<(String, curvbar::Result<BarrierProfile>)> {
    let mut out = Vec::new();
    for (c, n, h0) in [
        (0.0, 2, 1.0),
        (-1.0, 2, 1.0),
        (-1.0, 3, 1.2),
        (1.0, 2, 0.5),
        (1.0, 3, 0.7),
        (-2.0, 4, 1.5),
    ] {
        out.push((format!("cmc({c},{n},{h0})"), cmc_sphere_profile(c, n, h0)));
    }
    for (c, n, k0) in [(0.0, 2, 1.0), (-1.0, 2, 0.5), (1.0, 3, 2.0), (-1.0, 3, 0.3)] {
        out.push((format!("gk({c},{n},{k0})"), gk_sphere_profile(c, n, k0)));
    }
    for n in [2, 3, 4] {
        out.push((format!("entire({n})"), entire_cmc_graph(n, 5.0)));
    }
    out
}

fn barrier_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    let suite = barrier_suite();
    let count = suite.len();
    for (name, profile) in suite {
        let err = match profile.and_then(|p| p.round_trip_error(0.999)) {
            Ok(e) => e,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        if err > worst {
            worst = err;
            worst_name = name;
        }
    }
    outcome(
        worst < 1e-6,
        format!("{count} profiles, max deviation {worst:.3e} at {worst_name} (tol 1e-6)"),
    )
}

fn entire_graph() -> Outcome {
    let g = match entire_cmc_graph(2, 20.0) {
        Ok(g) => g,
        Err(e) => return outcome(false, e.to_string()),
    };
    let dev = g
        .samples
        .iter()
        .map(|s| (s.nu - (s.t / 2.0).tanh()).abs())
        .fold(0.0, f64::max);
    let mut min_gap = f64::INFINITY;
    for n in [2, 3, 4] {
        match entire_cmc_graph(n, 20.0) {
            Ok(g) => min_gap = g.samples.iter().map(|s| s.one_minus_nu).fold(min_gap, f64::min),
            Err(e) => return outcome(false, format!("n = {n}: {e}")),
        }
    }
    outcome(
        dev < 1e-8 && min_gap > 0.0,
        format!("max |nu - tanh(t/2)| = {dev:.3e} (tol 1e-8), min (1 - nu) over n = 2,3,4 = {min_gap:.3e}"),
    )
}

fn sectional_certificates() -> Outcome {
    let grid = uniform_grid(0.1, 2.0, 20);
    let mut min_margin = f64::INFINITY;
    let mut max_vertical = 0.0f64;
    let mut count = 0;
    for (c1, c2) in [(-2.0, -1.0), (-2.0, 0.0), (-1.0, 0.0)] {
        for n in [2, 3] {
            for f in profiles() {
                let cert = match verify_theorem1(
                    &sf(c1, n),
                    &sf(c2, n),
                    &f,
                    BaseSpec::PolarPoint,
                    BaseSpec::PolarPoint,
                    &grid,
                ) {
                    Ok(c) => c,
                    Err(e) => return outcome(false, format!("({c1}, {c2}): {e}")),
                };
                if cert.verdict != Verdict::Pass {
                    return outcome(
                        false,
                        format!("({c1}, {c2}, n = {n}, {}): {:?}", f.name(), cert.verdict),
                    );
                }
                min_margin = min_margin.min(cert.min_conclusion_margin);
                max_vertical = max_vertical.max(cert.max_abs_vertical_margin().unwrap_or(f64::INFINITY));
                count += 1;
            }
        }
    }
    outcome(
        min_margin >= -1e-9 && max_vertical == 0.0,
        format!("{count} certificates pass, min margin {min_margin:.3e}, max |vertical margin| = {max_vertical:e}"),
    )
}

fn ricci_certificate_over_warp() -> Outcome {
    let grid = uniform_grid(0.1, 2.0, 20);
    let m1 = sf(-1.0, 3);
    let m2 = ModelManifold::builtin("ripple", 3).expect("builtin");
    let mut detail = Vec::new();
    for f in profiles() {
        let cert = match verify_theorem2(&m1, &m2, &f, BaseSpec::PolarPoint, BaseSpec::PolarPoint, &grid) {
            Ok(c) => c,
            Err(e) => return outcome(false, e.to_string()),
        };
        if cert.verdict != Verdict::Pass || cert.min_hypothesis_margin < 0.0 {
            return outcome(false, format!("{}: {:?}", f.name(), cert.verdict));
        }
        detail.push(format!("{} min margin {:.3e}", f.name(), cert.min_conclusion_margin));
    }
    outcome(
        true,
        format!("M^3(-1) vs ripple, hypothesis holds on the grid: {}", detail.join(", ")),
    )
}

/// Searches for a passing mean-curvature certificate over a non-constant
/// builtin warp whose per-plane (sectional) margins `K2 - K1` take both signs
/// on the points the certificate covers.
fn ricci_certificate_mixed_sign() -> Outcome {
    let grid = uniform_grid(0.1, 2.0, 20);
    let mut searched = 0;
    for warp in BUILTIN_WARPS {
        for n in [2, 3] {
            let m2 = ModelManifold::builtin(warp, n).expect("builtin");
            for c1 in [-2.0, -1.0, 0.0, 1.0] {
                let m1 = sf(c1, n);
                for f in profiles() {
                    searched += 1;
                    let Ok(cert) = verify_theorem2(&m1, &m2, &f, BaseSpec::PolarPoint, BaseSpec::PolarPoint, &grid)
                    else {
                        continue;
                    };
                    if cert.verdict != Verdict::Pass {
                        continue;
                    }
                    let covered: Vec<f64> = cert.margins.iter().filter(|p| p.applicable).map(|p| p.t).collect();
                    let last = covered.last().copied().unwrap_or(0.0);
                    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                    for k in 1..=2000 {
                        let t = last * k as f64 / 2000.0;
                        let d = m2.radial_sectional_curvature(t).unwrap() - m1.radial_sectional_curvature(t).unwrap();
                        lo = lo.min(d);
                        hi = hi.max(d);
                    }
                    if lo < 0.0 && hi > 0.0 {
                        return outcome(
                            true,
                            format!("{warp} vs M^{n}({c1}), {}: K2 - K1 in [{lo:.3}, {hi:.3}]", f.name()),
                        );
                    }
                }
            }
        }
    }
    outcome(
        false,
        format!(
            "{searched} pairs searched; on a model manifold Ric = (n-1) K radially, so a Ricci margin >= 0 forces every per-plane margin >= 0"
        ),
    )
}

fn index_form_minimizing() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut cases = 0;
    let manifolds = [
        sf(-1.0, 2),
        sf(0.0, 3),
        sf(1.0, 2),
        ModelManifold::builtin("ripple", 2).unwrap(),
        ModelManifold::builtin("sinh_cubic", 3).unwrap(),
    ];
    let bases = [BaseSpec::PolarPoint, BaseSpec::sphere(0.5, Orientation::Outward)];
    for m in &manifolds {
        for base in bases {
            for t0 in [0.5, 1.5] {
                match check_minimizing(m, base, t0, 100, 2024 + cases as u64) {
                    Ok(rep) => worst = worst.min(rep.min_margin),
                    Err(e) => return outcome(false, format!("{} t0 = {t0}: {e}", m.name())),
                }
                cases += 1;
            }
        }
    }
    outcome(
        worst >= -1e-9,
        format!("{cases} cases x 100 perturbations, min I(W) - I(J) = {worst:.3e} (tol -1e-9)"),
    )
}

fn solvable(result: curvbar::Result<DirichletSolution>) -> curvbar::Result<bool> {
    match result {
        Ok(_) => Ok(true),
        Err(e) if e.is_non_solvable() => Ok(false),
        Err(e) => Err(e),
    }
}

/// `|boundary - threshold|` for the mean law (`gk = false`) or the Gauss-Kronecker law.
fn boundary_gap(c: f64, n: usize, r: f64, gk: bool) -> curvbar::Result<f64> {
    let m = sf(c, n);
    if gk {
        let kb = solvability_boundary(
            |k0| solvable(solve_gk_graph(&m, r, k0)),
            1e-4,
            50.0 / r.powi(n as i32),
            1e-9,
        )?;
        Ok((kb - nonexistence_gk_threshold(&m, r)?).abs())
    } else {
        let lo = s_inf(c, n).max(1e-3);
        let hb = solvability_boundary(|h0| solvable(solve_cmc_graph(&m, r, h0)), lo, 20.0 / r, 1e-9)?;
        Ok((hb - nonexistence_mean_threshold(&m, r)?).abs())
    }
}

fn threshold_consistency() -> Outcome {
    let mut cases = Vec::new();
    for c in [-1.0, 0.0] {
        for n in [2, 3] {
            for r in [0.5, 1.5] {
                for gk in [false, true] {
                    cases.push((c, n, r, gk));
                }
            }
        }
    }
    let gaps: Vec<_> = cases
        .par_iter()
        .map(|&(c, n, r, gk)| {
            boundary_gap(c, n, r, gk).map_err(|e| format!("c = {c}, n = {n}, r = {r}, gk = {gk}: {e}"))
        })
        .collect();
    let mut worst = 0.0f64;
    for gap in gaps {
        match gap {
            Ok(g) => worst = worst.max(g),
            Err(e) => return outcome(false, e),
        }
    }
    outcome(
        worst < 1e-6,
        format!(
            "{} boundaries, max |boundary - threshold| = {worst:.3e} (tol 1e-6)",
            cases.len()
        ),
    )
}

/// Smallest successive difference `sign * (v[k+1] - v[k])`.
fn min_step(values: &[f64], sign: f64) -> f64 {
    values
        .windows(2)
        .map(|w| sign * (w[1] - w[0]))
        .fold(f64::INFINITY, f64::min)
}

struct Monotonicity {
    radius_in_h0: f64,
    radius_in_c: f64,
    radius_against_c: f64,
    threshold_in_r: f64,
    depth_in_h0: f64,
}

fn monotonicity_margins() -> curvbar::Result<Monotonicity> {
    let h0_grid = [0.6, 0.8, 1.0, 1.5, 2.0, 3.0];
    let c_grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0];
    let mut radius_in_h0 = f64::INFINITY;
    let mut radius_in_c = f64::INFINITY;
    let mut radius_against_c = f64::INFINITY;
    for n in [2, 3] {
        for c in c_grid {
            let radii: Vec<f64> = h0_grid
                .iter()
                .filter(|&&h| h > s_inf(c, n))
                .map(|&h| cmc_sphere_radius(c, n, h))
                .collect::<curvbar::Result<_>>()?;
            radius_in_h0 = radius_in_h0.min(min_step(&radii, -1.0));
        }
        for h0 in h0_grid {
            let radii: Vec<f64> = c_grid
                .iter()
                .filter(|&&c| h0 > s_inf(c, n))
                .map(|&c| cmc_sphere_radius(c, n, h0))
                .collect::<curvbar::Result<_>>()?;
            radius_in_c = radius_in_c.min(min_step(&radii, 1.0));
            radius_against_c = radius_against_c.min(min_step(&radii, -1.0));
        }
    }
    let mut threshold_in_r = f64::INFINITY;
    let r_grid = [0.25, 0.5, 1.0, 1.5, 2.0];
    for m in [
        sf(-1.0, 2),
        sf(0.0, 3),
        sf(1.0, 2),
        ModelManifold::builtin("ripple", 2)?,
    ] {
        let mean: Vec<f64> = r_grid
            .iter()
            .map(|&r| nonexistence_mean_threshold(&m, r))
            .collect::<curvbar::Result<_>>()?;
        threshold_in_r = threshold_in_r.min(min_step(&mean, -1.0));
        let gk: Vec<f64> = r_grid
            .iter()
            .map(|&r| nonexistence_gk_threshold(&m, r))
            .take_while(|v| !matches!(v, Err(Error::NoThreshold { .. })))
            .collect::<curvbar::Result<_>>()?;
        threshold_in_r = threshold_in_r.min(min_step(&gk, -1.0));
    }
    let mut depth_in_h0 = f64::INFINITY;
    for m in [sf(-1.0, 2), sf(0.0, 3), ModelManifold::builtin("ripple", 2)?] {
        let depths: Vec<f64> = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
            .iter()
            .map(|&h| solve_cmc_graph(&m, 1.0, h).map(|s| s.max_height))
            .collect::<curvbar::Result<_>>()?;
        depth_in_h0 = depth_in_h0.min(min_step(&depths, 1.0));
    }
    Ok(Monotonicity {
        radius_in_h0,
        radius_in_c,
        radius_against_c,
        threshold_in_r,
        depth_in_h0,
    })
}

fn monotonicity(m: &curvbar::Result<Monotonicity>) -> Outcome {
    let m = match m {
        Ok(m) => m,
        Err(e) => return outcome(false, e.to_string()),
    };
    let tol = 1e-10;
    let checks = [
        ("r decreasing in H0", m.radius_in_h0),
        ("r increasing in c", m.radius_in_c),
        ("thresholds decreasing in r", m.threshold_in_r),
        ("|h(0)| increasing in H0", m.depth_in_h0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, v)| !(*v > tol)).map(|(n, _)| *n).collect();
    let margins: Vec<String> = checks.iter().map(|(n, v)| format!("{n}: {v:.3e}")).collect();
    let mut detail = margins.join(", ");
    if !failed.is_empty() {
        detail = format!("failed [{}]; {detail}", failed.join(", "));
    }
    outcome(failed.is_empty(), detail)
}

fn monotonicity_true_direction(m: &curvbar::Result<Monotonicity>) -> Outcome {
    match m {
        Ok(m) => outcome(
            m.radius_against_c > 1e-10,
            format!("min step of r as c decreases: {:.3e} (tol 1e-10)", m.radius_against_c),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn s_inf_formula() -> Outcome {
    let exact = s_inf(-1.0, 2) == 0.5;
    let refused = matches!(cmc_sphere_profile(-1.0, 2, 0.5), Err(Error::NoCompactSphere { .. }));
    outcome(
        exact && refused,
        format!("s_inf(-1,2) = {}, H0 = 0.5 refused: {refused}", s_inf(-1.0, 2)),
    )
}

fn cli_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_curvbar"))
            .current_dir(&dir)
            .args(args)
            .env_remove("CURVBAR_TMAX")
            .output()
            .map(|o| (o.status.code(), o.stdout))
    };
    let mut checked = 0;
    for case in cases::CASES {
        let (Ok(a), Ok(b)) = (run(case.args), run(case.args)) else {
            return outcome(false, format!("{}: binary did not run", case.name));
        };
        let golden = std::fs::read(dir.join("tests/golden").join(format!("{}.out", case.name)));
        if a != b || a.0 != Some(case.code) || golden.as_deref().ok() != Some(a.1.as_slice()) {
            return outcome(
                false,
                format!("{}: output differs between runs or from golden", case.name),
            );
        }
        checked += 1;
    }
    outcome(
        true,
        format!("{checked} command lines, two runs each, byte-identical to golden files"),
    )
}

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let mono = std::cell::OnceCell::new();
    let criteria: Vec<Criterion> = vec![
        ("1", "space-form Jacobi fields equal sn_c", Box::new(jacobi_space_forms)),
        (
            "2",
            "curvature reports match the finite-difference oracle",
            Box::new(lemma_vs_oracle),
        ),
        (
            "3",
            "Euclidean sphere radii in closed form",
            Box::new(euclidean_closed_forms),
        ),
        (
            "4",
            "barrier profiles reproduce their curvature",
            Box::new(barrier_round_trip),
        ),
        (
            "5",
            "entire graph tilt tanh(t/2) and stays a graph",
            Box::new(entire_graph),
        ),
        (
            "6",
            "sectional comparison certificates on space-form pairs",
            Box::new(sectional_certificates),
        ),
        (
            "7a",
            "Ricci comparison certificate over a non-constant warp",
            Box::new(ricci_certificate_over_warp),
        ),
        (
            "7b",
            "same, with per-plane margins of both signs",
            Box::new(ricci_certificate_mixed_sign),
        ),
        (
            "8",
            "Jacobi fields minimize the index form",
            Box::new(index_form_minimizing),
        ),
        (
            "9",
            "Dirichlet solvability boundary equals the threshold",
            Box::new(threshold_consistency),
        ),
        (
            "10",
            "monotonicity suite as stated",
            Box::new(|| monotonicity(mono.get_or_init(monotonicity_margins))),
        ),
        (
            "10*",
            "sphere radius strictly decreasing in c",
            Box::new(|| monotonicity_true_direction(mono.get_or_init(monotonicity_margins))),
        ),
        ("11", "s_inf formula and refusal at s_inf", Box::new(s_inf_formula)),
        ("12", "CLI output byte-identical across runs", Box::new(cli_determinism)),
    ];
    let mut unexpected = Vec::new();
    for (id, title, check) in &criteria {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:<4} {title}: {} [{secs:.1}s]", out.detail);
        let known = KNOWN_UNATTAINABLE.contains(id);
        if out.pass == known {
            unexpected.push(*id);
        }
    }
    if unexpected.is_empty() {
        println!(
            "acceptance: all outcomes as expected (known unattainable: {})",
            KNOWN_UNATTAINABLE.join(", ")
        );
    } else {
        println!("acceptance: unexpected outcome for {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
