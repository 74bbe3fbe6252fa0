//! Command dispatch shared by the `curvbar` binary and JSON scenario files.
//!
//! Every command produces a primary artifact (printed to stdout) and
//! optionally named side files. Mathematical non-solvability is reported as
//! data with [`Status::NonSolvable`].

use std::path::Path;

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::barrier::{
    cmc_sphere_profile_in, cmc_sphere_radius_in, entire_cmc_graph_in, gk_sphere_profile_in, gk_sphere_radius_in, s_inf,
};
use crate::compare::{
    comparison_curvature, nonexistence_gk_threshold, nonexistence_mean_threshold, slide_contact, transplant,
    verify_theorem1, verify_theorem2,
};
use crate::curvature::{CurvatureEvaluator, HeightProfile};
use crate::dirichlet::{height_gradient_estimates, solve_cmc_graph, solve_gk_graph};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, CsvTable};
use crate::jacobi::{check_minimizing, solve_jacobi};
use crate::manifold::{BaseSpec, ManifoldSpec, ModelManifold, Orientation, DEFAULT_T_MAX};
use crate::oracle::{fd_oracle_report, report_deviation};

/// Environment variable overriding the radial domain cap.
pub const TMAX_ENV: &str = "CURVBAR_TMAX";

/// Domain cap from [`TMAX_ENV`], or the default.
pub fn domain_cap() -> Result<f64> {
    match std::env::var(TMAX_ENV) {
        Ok(text) => {
            let cap: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{TMAX_ENV} is not a number: '{text}'")))?;
            if !(cap.is_finite() && cap > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{TMAX_ENV} must be positive, got {cap}"
                )));
            }
            Ok(cap)
        }
        Err(_) => Ok(DEFAULT_T_MAX),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureKind {
    Mean,
    Gk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SweepQuantity {
    Radius,
    Threshold,
    Dirichlet,
}

fn default_base() -> String {
    "point".into()
}
fn default_grid() -> String {
    "0.1:2:20".into()
}
fn default_trials() -> usize {
    100
}
fn default_samples() -> usize {
    31
}
fn default_theorem() -> u8 {
    1
}
fn default_candidate() -> String {
    "barrier".into()
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SpaceFormArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    /// Last radius of the table (default `min(3, t_max)`).
    #[arg(long)]
    #[serde(default)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = default_samples())]
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CurvatureReportArgs {
    /// `space_form:<c>:<n>` or `custom:<warp>:<n>`.
    #[arg(long, allow_hyphen_values = true)]
    pub manifold: String,
    /// Height profile: `t`, `tsq` or `logcosh`.
    #[arg(long)]
    pub f: String,
    /// Radii, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    /// `point` or `sphere:<rho>:<outward|inward>`.
    #[arg(long, default_value_t = default_base())]
    #[serde(default = "default_base")]
    pub base: String,
    /// Also evaluate the finite-difference oracle.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct JacobiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub manifold: String,
    #[arg(long, default_value_t = default_base())]
    #[serde(default = "default_base")]
    pub base: String,
    #[arg(long)]
    pub t0: f64,
    #[arg(long, default_value_t = default_trials())]
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SphereProfileArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    /// Constant mean curvature sphere.
    #[arg(long = "H0")]
    #[serde(default, rename = "H0")]
    pub h0: Option<f64>,
    /// Constant Gauss-Kronecker curvature sphere.
    #[arg(long = "K0")]
    #[serde(default, rename = "K0")]
    pub k0: Option<f64>,
    /// Entire graph of mean curvature `(n-1)/n` (requires `c = -1`).
    #[arg(long)]
    #[serde(default)]
    pub entire: bool,
    /// Radial extent of the entire graph.
    #[arg(long)]
    #[serde(default)]
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RadiusArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "H0")]
    #[serde(default, rename = "H0")]
    pub h0: Option<f64>,
    #[arg(long = "K0")]
    #[serde(default, rename = "K0")]
    pub k0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub kind: CurvatureKind,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub c: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub n: Option<usize>,
    /// Alternative to `--c/--n`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "c")]
    #[serde(default)]
    pub manifold: Option<String>,
    #[arg(long)]
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// 1: sectional curvature, principal curvatures; 2: Ricci curvature, mean curvature.
    #[arg(long, default_value_t = default_theorem())]
    #[serde(default = "default_theorem")]
    pub theorem: u8,
    #[arg(long, allow_hyphen_values = true)]
    pub m1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: String,
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = default_base())]
    #[serde(default = "default_base")]
    pub base1: String,
    #[arg(long, default_value_t = default_base())]
    #[serde(default = "default_base")]
    pub base2: String,
    /// `lo:hi:count`.
    #[arg(long, default_value_t = default_grid())]
    #[serde(default = "default_grid")]
    pub grid: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SlideArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "H0")]
    #[serde(rename = "H0")]
    pub h0: f64,
    /// Manifold the barrier is transplanted into.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// `barrier` (the barrier's own profile), `flat`, `t`, `tsq` or `logcosh`.
    #[arg(long, default_value_t = default_candidate())]
    #[serde(default = "default_candidate")]
    pub candidate: String,
    /// Vertical shift added to the candidate.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DirichletArgs {
    #[arg(long, value_enum)]
    pub kind: CurvatureKind,
    #[arg(long, allow_hyphen_values = true)]
    pub manifold: String,
    #[arg(long)]
    pub r: f64,
    /// `H0` or `K0`.
    #[arg(long)]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub quantity: SweepQuantity,
    #[arg(long, value_enum)]
    pub kind: CurvatureKind,
    #[arg(long, allow_hyphen_values = true)]
    pub manifold: String,
    /// Ball radius (dirichlet only).
    #[arg(long)]
    #[serde(default)]
    pub r: Option<f64>,
    /// Swept values `lo:hi:count`: curvatures, or radii for `threshold`.
    #[arg(long)]
    pub values: String,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Warp, its derivatives and radial curvatures of `M^n(c)`.
    SpaceForm(SpaceFormArgs),
    /// Principal, mean, r-mean and Gauss-Kronecker curvatures of a radial graph.
    CurvatureReport(CurvatureReportArgs),
    /// Jacobi field along a radial geodesic and its index-form minimizing check.
    Jacobi(JacobiArgs),
    /// Rotational CMC or Gauss-Kronecker sphere, or the entire CMC graph.
    SphereProfile(SphereProfileArgs),
    /// Radius of a rotational sphere.
    Radius(RadiusArgs),
    /// Non-existence threshold over a geodesic ball.
    Threshold(ThresholdArgs),
    /// Comparison certificate on a radius grid.
    Verify(VerifyArgs),
    /// First contact of a transplanted CMC sphere with a candidate graph.
    Slide(SlideArgs),
    /// Rotational Dirichlet problem with zero boundary values.
    Dirichlet(DirichletArgs),
    /// Parameter sweep over a grid, evaluated in parallel.
    Sweep(SweepArgs),
}

/// A scenario file: one command plus where its artifacts go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub run: Command,
    /// Directory for artifact files.
    #[serde(default)]
    pub output: Option<String>,
    /// Radial domain cap, overriding the environment.
    #[serde(default)]
    pub t_max: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// JSON schema of scenario files.
pub fn scenario_schema() -> String {
    let schema = schemars::schema_for!(ScenarioConfig);
    serde_json::to_string_pretty(&schema).expect("schema serializes") + "\n"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    NonSolvable,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::NonSolvable => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub status: Status,
    pub stdout: String,
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    fn ok(stdout: String) -> Self {
        Self {
            status: Status::Success,
            stdout,
            files: Vec::new(),
        }
    }

    fn with(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.to_string(), contents));
        self
    }

    /// Writes the primary artifact as `primary_name` and every side file into `dir`.
    pub fn write_to(&self, dir: &Path, primary_name: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(primary_name), &self.stdout)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

fn json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("artifacts serialize") + "\n"
}

pub fn parse_base(text: &str) -> Result<BaseSpec> {
    let bad = || Error::InvalidParameter(format!("cannot parse base '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["point"] => Ok(BaseSpec::PolarPoint),
        ["sphere", rho, o] => {
            let orientation = match *o {
                "outward" => Orientation::Outward,
                "inward" => Orientation::Inward,
                _ => return Err(bad()),
            };
            Ok(BaseSpec::sphere(rho.parse().map_err(|_| bad())?, orientation))
        }
        _ => Err(bad()),
    }
}

/// Parses `lo:hi:count` into an evenly spaced grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse grid '{text}' (expected lo:hi:count)"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if count == 0 || !(lo <= hi) || (count == 1 && lo != hi) {
        return Err(bad());
    }
    Ok(crate::numeric::linspace(lo, hi, count))
}

fn manifold(text: &str, cap: f64) -> Result<ModelManifold> {
    ManifoldSpec::parse(text)?.build(cap)
}

/// Runs one command. Non-solvability becomes a JSON record with [`Status::NonSolvable`].
pub fn execute(command: &Command, cap: f64) -> Result<Artifacts> {
    match dispatch(command, cap) {
        Err(e) if e.is_non_solvable() => Ok(Artifacts {
            status: Status::NonSolvable,
            stdout: json(&non_solvable_record(&e)),
            files: Vec::new(),
        }),
        other => other,
    }
}

fn non_solvable_record(e: &Error) -> serde_json::Value {
    let mut v = serde_json::json!({ "solvable": false, "error": e.name(), "message": e.to_string() });
    let extra = match *e {
        Error::GradientBlowup { t } | Error::ConvexityLoss { t } => serde_json::json!({ "t_event": t }),
        Error::Marginal { t_event, r } => serde_json::json!({ "t_event": t_event, "r": r }),
        Error::NoCompactSphere { h0, s_inf } => serde_json::json!({ "H0": h0, "s_inf": s_inf }),
        Error::NoThreshold { r } => serde_json::json!({ "r": r }),
        _ => serde_json::json!({}),
    };
    if let (Some(m), serde_json::Value::Object(x)) = (v.as_object_mut(), extra) {
        m.extend(x);
    }
    v
}

fn dispatch(command: &Command, cap: f64) -> Result<Artifacts> {
    match command {
        Command::SpaceForm(a) => space_form_table(a, cap),
        Command::CurvatureReport(a) => curvature_reports(a, cap),
        Command::Jacobi(a) => jacobi(a, cap),
        Command::SphereProfile(a) => sphere_profile(a, cap),
        Command::Radius(a) => radius(a, cap),
        Command::Threshold(a) => threshold(a, cap),
        Command::Verify(a) => verify(a, cap),
        Command::Slide(a) => slide(a, cap),
        Command::Dirichlet(a) => dirichlet(a, cap),
        Command::Sweep(a) => sweep(a, cap),
    }
}

fn space_form_table(a: &SpaceFormArgs, cap: f64) -> Result<Artifacts> {
    let m = ModelManifold::space_form_with_cap(a.c, a.n, cap)?;
    let t_end = a.t_end.unwrap_or(3.0f64.min(m.t_max() * (1.0 - 1e-9)));
    if !(t_end > 0.0 && t_end < m.t_max()) || a.samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "table needs 0 < t_end < {} and 2+ samples",
            m.t_max()
        )));
    }
    let meta = serde_json::json!({ "c": a.c, "n": a.n, "t_max": m.t_max() });
    let mut table = CsvTable::with_header(&meta, &["t", "phi", "phi_d1", "phi_d2", "K", "Ric"]);
    let ric = a.n as f64 - 1.0;
    for t in crate::numeric::linspace(0.0, t_end, a.samples) {
        let k = m.radial_curvature_unchecked(t);
        table.row(&[t, m.warp(t), m.warp_d1(t), m.warp_d2(t), k, ric * k]);
    }
    Ok(Artifacts::ok(table.finish()))
}

fn curvature_reports(a: &CurvatureReportArgs, cap: f64) -> Result<Artifacts> {
    let m = manifold(&a.manifold, cap)?;
    let base = parse_base(&a.base)?;
    let f = HeightProfile::named(&a.f)?;
    let t_end = a.t.iter().copied().fold(0.0, f64::max);
    let eval = CurvatureEvaluator::new(&m, base, t_end)?;
    let mut rows = Vec::with_capacity(a.t.len());
    for &t in &a.t {
        let report = eval.report(&f, t)?;
        let mut row = serde_json::to_value(&report).expect("report serializes");
        if a.oracle {
            let oracle = fd_oracle_report(&m, base, &f, t)?;
            if let Some(obj) = row.as_object_mut() {
                obj.insert(
                    "oracle_deviation".into(),
                    report_deviation(&report, &oracle, 1e-8).into(),
                );
                obj.insert(
                    "oracle".into(),
                    serde_json::to_value(&oracle).expect("report serializes"),
                );
            }
        }
        rows.push(row);
    }
    Ok(Artifacts::ok(json(&serde_json::json!({
        "manifold": m.name(),
        "base": base,
        "profile": f.name(),
        "reports": rows,
    }))))
}

fn jacobi(a: &JacobiArgs, cap: f64) -> Result<Artifacts> {
    let m = manifold(&a.manifold, cap)?;
    let base = parse_base(&a.base)?;
    let field = solve_jacobi(&m, base, a.t0)?;
    let report = check_minimizing(&m, base, a.t0, a.trials, a.seed)?;
    let summary = serde_json::json!({
        "manifold": m.name(),
        "base": base,
        "t0": a.t0,
        "j_t0": field.amplitude(a.t0),
        "j_prime_t0": field.derivative(a.t0),
        "max_ode_residual": field.max_ode_residual(),
        "jacobi_index": report.jacobi_index,
        "trials": report.trials,
        "seed": report.seed,
        "min_margin": report.min_margin,
    });
    Ok(Artifacts::ok(json(&summary))
        .with("jacobi.csv", field.to_csv())
        .with("margins.json", json(&report)))
}

fn sphere_profile(a: &SphereProfileArgs, cap: f64) -> Result<Artifacts> {
    let m = ModelManifold::space_form_with_cap(a.c, a.n, cap)?;
    let profile = match (a.h0, a.k0, a.entire) {
        (Some(h0), None, false) => cmc_sphere_profile_in(&m, h0)?,
        (None, Some(k0), false) => gk_sphere_profile_in(&m, k0)?,
        (None, None, true) => entire_cmc_graph_in(&m, a.t_end.unwrap_or(20.0))?,
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one of --H0, --K0 or --entire".into(),
            ))
        }
    };
    Ok(Artifacts::ok(profile.to_csv()?).with("metadata.json", json(&profile.metadata())))
}

fn radius(a: &RadiusArgs, cap: f64) -> Result<Artifacts> {
    let m = ModelManifold::space_form_with_cap(a.c, a.n, cap)?;
    let out = match (a.h0, a.k0) {
        (Some(h0), None) => serde_json::json!({
            "c": a.c, "n": a.n, "H0": h0, "s_inf": s_inf(a.c, a.n), "radius": cmc_sphere_radius_in(&m, h0)?,
        }),
        (None, Some(k0)) => serde_json::json!({
            "c": a.c, "n": a.n, "K0": k0, "radius": gk_sphere_radius_in(&m, k0)?,
        }),
        _ => return Err(Error::InvalidParameter("give exactly one of --H0 or --K0".into())),
    };
    Ok(Artifacts::ok(json(&out)))
}

fn threshold(a: &ThresholdArgs, cap: f64) -> Result<Artifacts> {
    let m = match (&a.manifold, a.c, a.n) {
        (Some(spec), None, None) => manifold(spec, cap)?,
        (None, Some(c), Some(n)) => ModelManifold::space_form_with_cap(c, n, cap)?,
        _ => {
            return Err(Error::InvalidParameter(
                "give either --manifold or both --c and --n".into(),
            ))
        }
    };
    let c = comparison_curvature(&m, a.r)?;
    let out = match a.kind {
        CurvatureKind::Mean => serde_json::json!({
            "kind": "mean", "manifold": m.name(), "r": a.r, "comparison_c": c,
            "H0": nonexistence_mean_threshold(&m, a.r)?,
        }),
        CurvatureKind::Gk => serde_json::json!({
            "kind": "gk", "manifold": m.name(), "r": a.r, "comparison_c": c,
            "K0": nonexistence_gk_threshold(&m, a.r)?,
        }),
    };
    Ok(Artifacts::ok(json(&out)))
}

fn verify(a: &VerifyArgs, cap: f64) -> Result<Artifacts> {
    let m1 = manifold(&a.m1, cap)?;
    let m2 = manifold(&a.m2, cap)?;
    let f = HeightProfile::named(&a.f)?;
    let (b1, b2) = (parse_base(&a.base1)?, parse_base(&a.base2)?);
    let grid = parse_grid(&a.grid)?;
    let cert = match a.theorem {
        1 => verify_theorem1(&m1, &m2, &f, b1, b2, &grid)?,
        2 => verify_theorem2(&m1, &m2, &f, b1, b2, &grid)?,
        other => return Err(Error::InvalidParameter(format!("theorem must be 1 or 2, got {other}"))),
    };
    Ok(Artifacts::ok(json(&cert)).with("certificate.txt", cert.to_table()))
}

fn slide(a: &SlideArgs, cap: f64) -> Result<Artifacts> {
    let space = ModelManifold::space_form_with_cap(a.c, a.n, cap)?;
    let barrier = cmc_sphere_profile_in(&space, a.h0)?;
    let target = manifold(&a.target, cap)?;
    let graph = transplant(&barrier, &target)?;
    let shifted = |p: HeightProfile| -> Result<HeightProfile> {
        let (_, hi) = p.domain();
        let ts = crate::numeric::linspace(0.0, barrier.radius.min(hi), 401);
        let mut hs = Vec::with_capacity(ts.len());
        let mut nus = Vec::with_capacity(ts.len());
        let mut dnus = Vec::with_capacity(ts.len());
        for &t in &ts {
            hs.push(p.value(t)? + a.shift);
            let (nu, dnu) = p.tilt(t)?;
            nus.push(nu);
            dnus.push(dnu);
        }
        HeightProfile::sampled_with_tilt(ts, hs, nus, dnus)
    };
    let candidate = match a.candidate.as_str() {
        "barrier" => {
            let own = barrier.height_profile()?;
            if a.shift == 0.0 {
                own
            } else {
                let s = &barrier.samples;
                HeightProfile::sampled_with_tilt(
                    s.iter().map(|x| x.t).collect(),
                    s.iter().map(|x| x.h + a.shift).collect(),
                    s.iter().map(|x| x.nu).collect(),
                    s.iter().map(|x| x.dnu).collect(),
                )?
            }
        }
        "flat" => HeightProfile::constant(a.shift),
        name => shifted(HeightProfile::named(name)?)?,
    };
    let contact = slide_contact(&graph, &candidate)?;
    Ok(Artifacts::ok(json(&contact)))
}

fn dirichlet(a: &DirichletArgs, cap: f64) -> Result<Artifacts> {
    let m = manifold(&a.manifold, cap)?;
    let sol = match a.kind {
        CurvatureKind::Mean => solve_cmc_graph(&m, a.r, a.value)?,
        CurvatureKind::Gk => solve_gk_graph(&m, a.r, a.value)?,
    };
    let est = height_gradient_estimates(&sol)?;
    Ok(Artifacts::ok(sol.to_csv()?)
        .with("summary.json", json(&sol.summary()))
        .with("estimates.json", json(&est)))
}

fn sweep_point(a: &SweepArgs, m: &ModelManifold, value: f64) -> Result<f64> {
    match (a.quantity, a.kind) {
        (SweepQuantity::Radius, CurvatureKind::Mean) => cmc_sphere_radius_in(m, value),
        (SweepQuantity::Radius, CurvatureKind::Gk) => gk_sphere_radius_in(m, value),
        (SweepQuantity::Threshold, CurvatureKind::Mean) => nonexistence_mean_threshold(m, value),
        (SweepQuantity::Threshold, CurvatureKind::Gk) => nonexistence_gk_threshold(m, value),
        (SweepQuantity::Dirichlet, kind) => {
            let r =
                a.r.ok_or_else(|| Error::InvalidParameter("dirichlet sweeps need --r".into()))?;
            let sol = match kind {
                CurvatureKind::Mean => solve_cmc_graph(m, r, value)?,
                CurvatureKind::Gk => solve_gk_graph(m, r, value)?,
            };
            Ok(sol.max_height)
        }
    }
}

fn sweep(a: &SweepArgs, cap: f64) -> Result<Artifacts> {
    let m = manifold(&a.manifold, cap)?;
    let values = parse_grid(&a.values)?;
    if a.quantity == SweepQuantity::Dirichlet && a.r.is_none() {
        return Err(Error::InvalidParameter("dirichlet sweeps need --r".into()));
    }
    let results: Vec<Result<f64>> = values.par_iter().map(|&v| sweep_point(a, &m, v)).collect();
    let result_name = match a.quantity {
        SweepQuantity::Radius => "radius",
        SweepQuantity::Threshold => "threshold",
        SweepQuantity::Dirichlet => "max_height",
    };
    let mut table = CsvTable::new(&["index", "value", "status", result_name]);
    for (k, (v, res)) in values.iter().zip(results).enumerate() {
        let (status, cell) = match res {
            Ok(x) => ("ok".to_string(), fmt_f64(x)),
            Err(e) if e.is_non_solvable() => (e.name().to_string(), String::new()),
            Err(e) => return Err(e),
        };
        table.raw_row(&[k.to_string(), fmt_f64(*v), status, cell]);
    }
    Ok(Artifacts::ok(table.finish()))
}

/// Name of the primary artifact when written to a directory.
pub fn primary_file_name(command: &Command) -> &'static str {
    match command {
        Command::SpaceForm(_) => "space_form.csv",
        Command::CurvatureReport(_) => "curvature_report.json",
        Command::Jacobi(_) => "jacobi.json",
        Command::SphereProfile(_) => "profile.csv",
        Command::Radius(_) => "radius.json",
        Command::Threshold(_) => "threshold.json",
        Command::Verify(_) => "certificate.json",
        Command::Slide(_) => "contact.json",
        Command::Dirichlet(_) => "solution.csv",
        Command::Sweep(_) => "sweep.csv",
    }
}
