//! Transplanting rotational profiles between model manifolds, grid
//! certificates for the curvature comparisons, non-existence thresholds and
//! the first-contact experiment.
//!
//! A certificate checks, on an explicit grid, that where the curvature of
//! `M1` stays below that of `M2` along the whole radial geodesic, the graph
//! over `M1` is at least as curved as the graph over `M2`: family by family
//! for sectional curvature, in mean curvature for Ricci curvature.

use serde::Serialize;

use crate::barrier::{cmc_sphere_profile_in, BarrierProfile};
use crate::curvature::{center_report, CurvatureEvaluator, CurvatureReport, HeightProfile, POLAR_CUTOFF};
use crate::error::{Error, Result};
use crate::jacobi::{base_curvature, radial_curvature_along};
use crate::manifold::{BaseSpec, ModelManifold};
use crate::numeric::{bisect, integrate_piecewise, Tolerance};

/// Default tolerance for certificate verdicts.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Hypothesis samples per unit length along each geodesic.
const HYPOTHESIS_DENSITY: f64 = 400.0;

/// A barrier profile placed over polar coordinates of another manifold.
#[derive(Debug, Clone, Serialize)]
pub struct TransplantedGraph {
    pub source: BarrierProfile,
    #[serde(skip)]
    pub target: ModelManifold,
    pub base: BaseSpec,
    pub reports: Vec<CurvatureReport>,
}

/// Keeps the height function of `profile` and recomputes its curvatures over `target`.
pub fn transplant(profile: &BarrierProfile, target: &ModelManifold) -> Result<TransplantedGraph> {
    if target.dim() != profile.n {
        return Err(Error::DimensionMismatch(profile.n, target.dim()));
    }
    let needed = profile.samples.last().map_or(profile.radius, |s| s.t);
    if !(target.t_max() > needed) {
        return Err(Error::DomainTooSmall {
            needed,
            available: target.t_max(),
        });
    }
    Ok(TransplantedGraph {
        source: profile.clone(),
        target: target.clone(),
        base: BaseSpec::PolarPoint,
        reports: profile.curvature_reports_in(target)?,
    })
}

impl TransplantedGraph {
    pub fn radius(&self) -> f64 {
        self.source.radius
    }

    pub fn sample_radii(&self) -> Vec<f64> {
        self.source.samples.iter().map(|s| s.t).collect()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.source.samples.iter().map(|s| s.h).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Sectional curvature hypothesis, all principal curvatures compared.
    PrincipalCurvatures,
    /// Ricci curvature hypothesis, mean curvatures compared.
    MeanCurvature,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginPoint {
    pub t: f64,
    /// Minimum over `(0, t]` of the curvature difference `M2 - M1`.
    pub hypothesis: f64,
    /// Whether the hypotheses hold up to `t` and the point counts toward the verdict.
    pub applicable: bool,
    /// `k_vertical(M1) - k_vertical(M2)` (principal comparison only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertical: Option<f64>,
    /// `k_tangential(M1) - k_tangential(M2)` (principal comparison only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangential: Option<f64>,
    /// `H(M1) - H(M2)` (mean comparison only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
}

impl MarginPoint {
    /// Smallest conclusion margin at this point.
    pub fn conclusion(&self) -> f64 {
        [self.vertical, self.tangential, self.mean]
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonCertificate {
    pub comparison: Comparison,
    pub m1: String,
    pub m2: String,
    pub profile: String,
    pub tolerance: f64,
    /// `II(H2) - II(H1)` for sphere bases (must be nonnegative).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_margin: Option<f64>,
    pub margins: Vec<MarginPoint>,
    pub min_hypothesis_margin: f64,
    /// Minimum conclusion margin over applicable points.
    pub min_conclusion_margin: f64,
    pub verdict: Verdict,
}

impl ComparisonCertificate {
    pub fn min_vertical_margin(&self) -> Option<f64> {
        self.margins.iter().filter_map(|m| m.vertical).reduce(f64::min)
    }

    pub fn max_abs_vertical_margin(&self) -> Option<f64> {
        self.margins
            .iter()
            .filter_map(|m| m.vertical.map(f64::abs))
            .reduce(f64::max)
    }

    pub fn min_tangential_margin(&self) -> Option<f64> {
        self.margins.iter().filter_map(|m| m.tangential).reduce(f64::min)
    }

    pub fn min_mean_margin(&self) -> Option<f64> {
        self.margins.iter().filter_map(|m| m.mean).reduce(f64::min)
    }

    /// Human-readable summary table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("comparison      {:?}\n", self.comparison));
        out.push_str(&format!("m1              {}\n", self.m1));
        out.push_str(&format!("m2              {}\n", self.m2));
        out.push_str(&format!("profile         {}\n", self.profile));
        out.push_str(&format!("grid points     {}\n", self.margins.len()));
        if let Some(b) = self.base_margin {
            out.push_str(&format!("base margin     {b:.6e}\n"));
        }
        out.push_str(&format!("min hypothesis  {:.6e}\n", self.min_hypothesis_margin));
        if let Some(v) = self.min_vertical_margin() {
            out.push_str(&format!("min vertical    {v:.6e}\n"));
        }
        if let Some(v) = self.min_tangential_margin() {
            out.push_str(&format!("min tangential  {v:.6e}\n"));
        }
        if let Some(v) = self.min_mean_margin() {
            out.push_str(&format!("min mean        {v:.6e}\n"));
        }
        out.push_str(&format!("min conclusion  {:.6e}\n", self.min_conclusion_margin));
        out.push_str(&format!("tolerance       {:.1e}\n", self.tolerance));
        out.push_str(&format!("verdict         {:?}\n", self.verdict));
        out
    }
}

fn check_pair(m1: &ModelManifold, m2: &ModelManifold, base1: &BaseSpec, base2: &BaseSpec) -> Result<()> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
    }
    match (base1, base2) {
        (BaseSpec::PolarPoint, BaseSpec::PolarPoint) => Ok(()),
        (BaseSpec::GeodesicSphere { .. }, BaseSpec::GeodesicSphere { .. }) => Ok(()),
        _ => Err(Error::InvalidParameter(
            "both bases must be points or both geodesic spheres".into(),
        )),
    }
}

/// Running minimum of `K2 - K1` (scaled by `weight`) over a fine grid, read at each `t` of `grid`.
fn hypothesis_margins(
    m1: &ModelManifold,
    m2: &ModelManifold,
    base1: &BaseSpec,
    base2: &BaseSpec,
    grid: &[f64],
    weight: f64,
) -> Vec<f64> {
    let diff = |s: f64| weight * (radial_curvature_along(m2, base2, s) - radial_curvature_along(m1, base1, s));
    let mut out = Vec::with_capacity(grid.len());
    let mut running = diff(0.0);
    let mut s_prev = 0.0;
    for &t in grid {
        let steps = (((t - s_prev) * HYPOTHESIS_DENSITY).ceil() as usize).max(1);
        for k in 1..=steps {
            running = running.min(diff(s_prev + (t - s_prev) * k as f64 / steps as f64));
        }
        s_prev = t;
        out.push(running);
    }
    out
}

fn certify(
    comparison: Comparison,
    m1: &ModelManifold,
    m2: &ModelManifold,
    f: &HeightProfile,
    base1: BaseSpec,
    base2: BaseSpec,
    grid: &[f64],
) -> Result<ComparisonCertificate> {
    check_pair(m1, m2, &base1, &base2)?;
    let mut grid: Vec<f64> = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let Some(&t_end) = grid.last() else {
        return Err(Error::InvalidParameter("empty certificate grid".into()));
    };
    if grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("certificate grid must be positive".into()));
    }
    for &t in &grid {
        if f.slope(t)? < 0.0 {
            return Err(Error::InvalidProfile(format!("negative slope at t = {t}")));
        }
    }
    let n = m1.dim() as f64;
    let (weight, mean_weight) = match comparison {
        Comparison::PrincipalCurvatures => (1.0, None),
        // Ricci of a model manifold in the radial direction
        Comparison::MeanCurvature => (n - 1.0, Some(())),
    };
    let hyp = hypothesis_margins(m1, m2, &base1, &base2, &grid, weight);
    let base_margin = match base1 {
        BaseSpec::PolarPoint => None,
        BaseSpec::GeodesicSphere { .. } => Some(base_curvature(m2, &base2)? - base_curvature(m1, &base1)?),
    };
    let e1 = CurvatureEvaluator::new(m1, base1, t_end)?;
    let e2 = CurvatureEvaluator::new(m2, base2, t_end)?;
    let mut margins = Vec::with_capacity(grid.len());
    for (&t, &h) in grid.iter().zip(&hyp) {
        let r1 = e1.report(f, t)?;
        let r2 = e2.report(f, t)?;
        let applicable = h >= 0.0 && base_margin.is_none_or(|b| b >= 0.0);
        margins.push(match mean_weight {
            None => MarginPoint {
                t,
                hypothesis: h,
                applicable,
                vertical: Some(r1.k_vertical - r2.k_vertical),
                tangential: Some(r1.k_tangential - r2.k_tangential),
                mean: None,
            },
            Some(()) => MarginPoint {
                t,
                hypothesis: h,
                applicable,
                vertical: None,
                tangential: None,
                mean: Some(r1.mean - r2.mean),
            },
        });
    }
    let min_hypothesis_margin = hyp.iter().copied().fold(f64::INFINITY, f64::min);
    let min_conclusion_margin = margins
        .iter()
        .filter(|m| m.applicable)
        .map(MarginPoint::conclusion)
        .fold(f64::INFINITY, f64::min);
    let verdict = if !margins.iter().any(|m| m.applicable) {
        Verdict::NotApplicable
    } else if min_conclusion_margin >= -CERTIFICATE_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ComparisonCertificate {
        comparison,
        m1: m1.name(),
        m2: m2.name(),
        profile: f.name().to_string(),
        tolerance: CERTIFICATE_TOL,
        base_margin,
        margins,
        min_hypothesis_margin,
        min_conclusion_margin,
        verdict,
    })
}

/// Sectional curvature comparison: where `K1 <= K2` along the geodesic,
/// both principal curvature families of the graph over `M1` dominate those over `M2`.
pub fn verify_theorem1(
    m1: &ModelManifold,
    m2: &ModelManifold,
    f: &HeightProfile,
    base1: BaseSpec,
    base2: BaseSpec,
    grid: &[f64],
) -> Result<ComparisonCertificate> {
    certify(Comparison::PrincipalCurvatures, m1, m2, f, base1, base2, grid)
}

/// Ricci curvature comparison: where `Ric1 <= Ric2` along the geodesic,
/// the mean curvature of the graph over `M1` dominates that over `M2`.
pub fn verify_theorem2(
    m1: &ModelManifold,
    m2: &ModelManifold,
    f: &HeightProfile,
    base1: BaseSpec,
    base2: BaseSpec,
    grid: &[f64],
) -> Result<ComparisonCertificate> {
    certify(Comparison::MeanCurvature, m1, m2, f, base1, base2, grid)
}

fn check_radius(manifold: &ModelManifold, r: f64) -> Result<()> {
    if !(r > 0.0 && r < manifold.t_max()) {
        return Err(Error::OutsideDomain {
            t: r,
            lo: 0.0,
            hi: manifold.t_max(),
        });
    }
    Ok(())
}

/// Curvature of the comparison space form: `min Ric/(n-1)` (equivalently the
/// minimum radial sectional curvature) over `(0, r]`.
pub fn comparison_curvature(manifold: &ModelManifold, r: f64) -> Result<f64> {
    Ok(manifold.radial_curvature_range(r)?.0)
}

/// `int_0^r g` to near machine precision.
fn radial_integral<F: Fn(f64) -> f64>(g: F, r: f64) -> Result<f64> {
    let breaks = crate::numeric::linspace(0.0, r, 33);
    Ok(integrate_piecewise(g, &breaks, Tolerance::new(1e-300, 1e-14))?)
}

/// The value `H0` such that no vertical graph over the ball of radius `r`
/// has mean curvature at least `H0`: the CMC sphere of the comparison space
/// form with radius exactly `r`, `H0 = phi(r)^{n-1} / (n int_0^r phi^{n-1})`.
pub fn nonexistence_mean_threshold(manifold: &ModelManifold, r: f64) -> Result<f64> {
    check_radius(manifold, r)?;
    let n = manifold.dim();
    let c = comparison_curvature(manifold, r)?;
    let space = ModelManifold::space_form_with_cap(c, n, manifold.t_max().max(crate::manifold::DEFAULT_T_MAX))?;
    if !(r < space.t_max()) {
        return Err(Error::NoThreshold { r });
    }
    let p = n as i32 - 1;
    let area = radial_integral(|t| space.warp(t).powi(p), r)?;
    Ok(space.warp(r).powi(p) / (n as f64 * area))
}

/// The value `K0` such that no vertical graph over the ball of radius `r`
/// with a point of definite second fundamental form has Gauss-Kronecker
/// curvature at least `K0`: `K0 = 1 / (n int_0^r (sn_c/sn_c')^{n-1})`.
pub fn nonexistence_gk_threshold(manifold: &ModelManifold, r: f64) -> Result<f64> {
    check_radius(manifold, r)?;
    let n = manifold.dim();
    let c = comparison_curvature(manifold, r)?;
    if c > 0.0 && r >= std::f64::consts::FRAC_PI_2 / c.sqrt() {
        return Err(Error::NoThreshold { r });
    }
    let space = ModelManifold::space_form_with_cap(c, n, manifold.t_max().max(crate::manifold::DEFAULT_T_MAX))?;
    let p = n as i32 - 1;
    let b = radial_integral(|t| (space.warp(t) / space.warp_d1(t)).powi(p), r)?;
    Ok(1.0 / (n as f64 * b))
}

/// Half the extrinsic diameter of the CMC sphere `H0` in `M^n(c) x R`.
pub fn mean_convex_ball_bound(c: f64, n: usize, h0: f64) -> Result<f64> {
    let profile = cmc_sphere_profile_in(&ModelManifold::space_form(c, n)?, h0)?;
    Ok(semi_diameter(&profile, 1))
}

/// Semi-diameter over every `stride`-th sample pair of both hemispheres.
/// Points are placed at antipodal angles in an axial plane, so their distance
/// in the base is `t_p + t_q` (measured the short way around for `c > 0`).
pub fn semi_diameter(profile: &BarrierProfile, stride: usize) -> f64 {
    let stride = stride.max(1);
    let top = 2.0 * profile.equator_height;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let last = profile.samples.len() - 1;
    for (k, s) in profile.samples.iter().enumerate() {
        if k % stride == 0 || k == last {
            pts.push((s.t, s.h));
            pts.push((s.t, top - s.h));
        }
    }
    let circumference = if profile.c > 0.0 {
        Some(2.0 * std::f64::consts::PI / profile.c.sqrt())
    } else {
        None
    };
    let mut best = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i..] {
            let mut d = p.0 + q.0;
            if let Some(len) = circumference {
                d = d.min(len - d);
            }
            let dh = p.1 - q.1;
            best = best.max((d * d + dh * dh).sqrt());
        }
    }
    0.5 * best
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport {
    /// `max_t (candidate(t) - barrier(t))`: the upward shift of the barrier at first contact.
    pub tau_star: f64,
    pub contact_radius: f64,
    /// Samples where the maximum is attained (to `1e-12`).
    pub contact_count: usize,
    pub samples: usize,
    pub candidate: CurvatureReport,
    pub barrier: CurvatureReport,
    pub candidate_mean_at_least_barrier: bool,
}

/// Slides the transplanted barrier vertically until it first touches `candidate` from above.
pub fn slide_contact(barrier: &TransplantedGraph, candidate: &HeightProfile) -> Result<ContactReport> {
    let radius = barrier.radius();
    let (lo, hi) = candidate.domain();
    if lo > 0.0 || hi < radius {
        return Err(Error::DomainTooSmall {
            needed: radius,
            available: hi,
        });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0;
    let mut diffs = Vec::with_capacity(barrier.source.samples.len());
    for (k, s) in barrier.source.samples.iter().enumerate() {
        let d = candidate.value(s.t)? - s.h;
        if d > best {
            best = d;
            best_k = k;
        }
        diffs.push(d);
    }
    let contact_count = diffs.iter().filter(|d| (**d - best).abs() <= 1e-12).count();
    let t_c = barrier.source.samples[best_k].t;
    let n = barrier.target.dim();
    let cand = if t_c < POLAR_CUTOFF {
        let (nu, dnu) = candidate.tilt(t_c)?;
        if t_c == 0.0 {
            center_report(n, dnu)
        } else {
            let kt = nu * barrier.target.warp_d1(t_c) / barrier.target.warp(t_c);
            CurvatureReport::assemble(n, t_c, nu, dnu, kt)
        }
    } else {
        CurvatureEvaluator::new(&barrier.target, BaseSpec::PolarPoint, t_c)?.report(candidate, t_c)?
    };
    let bar = barrier.reports[best_k].clone();
    Ok(ContactReport {
        tau_star: best,
        contact_radius: t_c,
        contact_count,
        samples: diffs.len(),
        candidate_mean_at_least_barrier: cand.mean >= bar.mean,
        candidate: cand,
        barrier: bar,
    })
}

/// Sample radius grid `[lo, hi]` with `count` points.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    crate::numeric::linspace(lo, hi, count)
}

/// Bisects the largest parameter in `[lo, hi]` for which `solvable` holds,
/// assuming solvability is monotone (true below, false above).
pub fn solvability_boundary<F>(solvable: F, lo: f64, hi: f64, x_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let root = bisect(|x| solvable(x).map(|ok| if ok { 1.0 } else { -1.0 }), lo, hi, x_tol)?;
    root.ok_or_else(|| Error::InvalidParameter(format!("solvability does not change on [{lo}, {hi}]")))
}
