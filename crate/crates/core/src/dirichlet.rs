//! Rotational Dirichlet problems over geodesic balls: graphs of constant mean
//! or constant Gauss-Kronecker curvature with zero boundary values.
//!
//! Solutions are bowls below the slice, `h(t) = -int_t^r nu/sqrt(1-nu^2)`,
//! with the tilt `nu` read off the radial first integral. A solution exists
//! exactly when `nu` stays below 1 on `[0, r]`.

use std::sync::Arc;

use serde::Serialize;

use crate::curvature::{center_report, CurvatureEvaluator, CurvatureReport, HeightProfile, POLAR_CUTOFF};
use crate::error::{Error, Result};
use crate::io::CsvTable;
use crate::manifold::{BaseSpec, ModelManifold};
use crate::radial::RadialIntegral;

/// Width of the undecided band around the boundary radius.
pub const MARGINAL_BAND: f64 = 1e-8;

const SAMPLES: usize = 800;

/// Fraction of `r` trimmed at both ends of the trusted subdomain.
const TRUSTED_TRIM: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Prescribed {
    #[serde(rename = "mean")]
    MeanCurvature {
        #[serde(rename = "H0")]
        h0: f64,
    },
    #[serde(rename = "gauss_kronecker")]
    GaussKronecker {
        #[serde(rename = "K0")]
        k0: f64,
    },
}

impl Prescribed {
    pub fn value(&self) -> f64 {
        match *self {
            Prescribed::MeanCurvature { h0 } => h0,
            Prescribed::GaussKronecker { k0 } => k0,
        }
    }

    pub fn read(&self, report: &CurvatureReport) -> f64 {
        match self {
            Prescribed::MeanCurvature { .. } => report.mean,
            Prescribed::GaussKronecker { .. } => report.gauss_kronecker,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletSample {
    pub t: f64,
    pub h: f64,
    pub nu: f64,
    pub one_minus_nu: f64,
    pub dnu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletSolution {
    #[serde(skip)]
    pub manifold: ModelManifold,
    pub manifold_name: String,
    pub n: usize,
    pub r: f64,
    pub prescribed: Prescribed,
    pub samples: Vec<DirichletSample>,
    /// `sup |h'|`.
    pub max_gradient: f64,
    /// `|h(0)|`.
    pub max_height: f64,
    /// Extreme radial sectional curvatures on the ball.
    pub curvature_range: (f64, f64),
}

fn check_ball(manifold: &ModelManifold, r: f64) -> Result<()> {
    if !(r > 0.0 && r < manifold.t_max()) {
        return Err(Error::OutsideDomain {
            t: r,
            lo: 0.0,
            hi: manifold.t_max(),
        });
    }
    Ok(())
}

fn classify(equator: Option<f64>, r: f64) -> Result<()> {
    match equator {
        Some(t) if (t - r).abs() <= MARGINAL_BAND => Err(Error::Marginal { t_event: t, r }),
        Some(t) => Err(Error::GradientBlowup { t }),
        None => Ok(()),
    }
}

/// Constant mean curvature `h0 >= 0` over the geodesic ball of radius `r` about the pole.
pub fn solve_cmc_graph(manifold: &ModelManifold, r: f64, h0: f64) -> Result<DirichletSolution> {
    check_ball(manifold, r)?;
    if !(h0.is_finite() && h0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("H0 must be nonnegative, got {h0}")));
    }
    let prescribed = Prescribed::MeanCurvature { h0 };
    if h0 == 0.0 {
        return flat_solution(manifold, r, prescribed);
    }
    let mut integral = RadialIntegral::mean(manifold, h0, manifold.t_max())?;
    classify(integral.first_equator(r + MARGINAL_BAND)?, r)?;
    assemble(manifold, r, prescribed, &mut integral)
}

/// First radius where the polar Jacobi field stops growing, `j'(t) = phi'(t) = 0`.
fn convexity_limit(manifold: &ModelManifold) -> Result<f64> {
    let t_max = manifold.t_max();
    if let Some(c) = manifold.space_form_c() {
        if c > 0.0 {
            return Ok((std::f64::consts::FRAC_PI_2 / c.sqrt()).min(t_max));
        }
        return Ok(t_max);
    }
    let step = 1e-2;
    let mut t = 0.0;
    while t < t_max {
        let next = (t + step).min(t_max);
        if manifold.warp_d1(next) <= 0.0 {
            return crate::numeric::bisect(|s| Ok::<f64, Error>(manifold.warp_d1(s)), t, next, 0.0)?
                .ok_or_else(|| Error::Internal("convexity limit not bracketed".into()));
        }
        t = next;
    }
    Ok(t_max)
}

/// Constant Gauss-Kronecker curvature `k0 > 0`, strictly convex, over the ball of radius `r`.
pub fn solve_gk_graph(manifold: &ModelManifold, r: f64, k0: f64) -> Result<DirichletSolution> {
    check_ball(manifold, r)?;
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::InvalidParameter(format!("K0 must be positive, got {k0}")));
    }
    let limit = convexity_limit(manifold)?;
    let m = manifold.clone();
    // polar Jacobi amplitude of a model manifold is the warp
    let ratio = Arc::new(move |t: f64| m.warp(t) / m.warp_d1(t));
    let mut integral = RadialIntegral::gauss_kronecker(manifold, k0, ratio, limit * (1.0 - 1e-9));
    classify(integral.first_equator(r + MARGINAL_BAND)?, r)?;
    if r >= integral.t_limit() {
        return Err(Error::ConvexityLoss { t: limit });
    }
    let sol = assemble(manifold, r, Prescribed::GaussKronecker { k0 }, &mut integral)?;
    if let Some(s) = sol.samples.iter().find(|s| !(s.dnu > 0.0)) {
        return Err(Error::ConvexityLoss { t: s.t });
    }
    Ok(sol)
}

fn flat_solution(manifold: &ModelManifold, r: f64, prescribed: Prescribed) -> Result<DirichletSolution> {
    let samples = crate::numeric::linspace(0.0, r, SAMPLES + 1)
        .into_iter()
        .map(|t| DirichletSample {
            t,
            h: 0.0,
            nu: 0.0,
            one_minus_nu: 1.0,
            dnu: 0.0,
        })
        .collect();
    Ok(DirichletSolution {
        manifold: manifold.clone(),
        manifold_name: manifold.name(),
        n: manifold.dim(),
        r,
        prescribed,
        samples,
        max_gradient: 0.0,
        max_height: 0.0,
        curvature_range: manifold.radial_curvature_range(r)?,
    })
}

fn assemble(
    manifold: &ModelManifold,
    r: f64,
    prescribed: Prescribed,
    integral: &mut RadialIntegral,
) -> Result<DirichletSolution> {
    integral.extend_to(r)?;
    let ts = crate::numeric::linspace(0.0, r, SAMPLES + 1);
    integral.add_knots(&ts)?;
    let mut depth = vec![0.0; ts.len()];
    for k in (0..ts.len() - 1).rev() {
        depth[k] = depth[k + 1] + integral.height_forward(ts[k], ts[k + 1])?;
    }
    let mut samples = Vec::with_capacity(ts.len());
    let mut max_gradient = 0.0f64;
    for (&t, &d) in ts.iter().zip(&depth) {
        let (nu, gap) = integral.tilt(t)?;
        if !(gap > 0.0) {
            return Err(Error::GradientBlowup { t });
        }
        max_gradient = max_gradient.max(nu / (gap * (1.0 + nu)).sqrt());
        samples.push(DirichletSample {
            t,
            h: -d,
            nu,
            one_minus_nu: gap,
            dnu: integral.dnu(t, nu),
        });
    }
    Ok(DirichletSolution {
        manifold: manifold.clone(),
        manifold_name: manifold.name(),
        n: manifold.dim(),
        r,
        prescribed,
        max_gradient,
        max_height: depth[0],
        samples,
        curvature_range: manifold.radial_curvature_range(r)?,
    })
}

impl DirichletSolution {
    pub fn target(&self) -> f64 {
        self.prescribed.value()
    }

    /// `|h'(r)|`.
    pub fn boundary_gradient(&self) -> f64 {
        let s = self.samples.last().expect("solutions are sampled");
        s.nu / (s.one_minus_nu * (1.0 + s.nu)).sqrt()
    }

    pub fn profile(&self) -> Result<HeightProfile> {
        HeightProfile::sampled_with_tilt(
            self.samples.iter().map(|s| s.t).collect(),
            self.samples.iter().map(|s| s.h).collect(),
            self.samples.iter().map(|s| s.nu).collect(),
            self.samples.iter().map(|s| s.dnu).collect(),
        )
    }

    /// Curvature reports at every sample, from the sampled profile.
    pub fn curvature_reports(&self) -> Result<Vec<CurvatureReport>> {
        let profile = self.profile()?;
        let eval = CurvatureEvaluator::new(&self.manifold, BaseSpec::PolarPoint, self.r.max(POLAR_CUTOFF))?;
        self.samples
            .iter()
            .map(|s| {
                if s.t == 0.0 {
                    Ok(center_report(self.n, s.dnu))
                } else if s.t < POLAR_CUTOFF {
                    let kt = s.nu * self.manifold.warp_d1(s.t) / self.manifold.warp(s.t);
                    Ok(CurvatureReport::assemble(self.n, s.t, s.nu, s.dnu, kt))
                } else {
                    eval.report(&profile, s.t)
                }
            })
            .collect()
    }

    /// Reports of the reflected graph `-h` with its normal pointing down.
    pub fn reflected_reports(&self) -> Result<Vec<CurvatureReport>> {
        Ok(self.curvature_reports()?.iter().map(CurvatureReport::flipped).collect())
    }

    /// Recomputed prescribed curvature on `[1e-3 r, (1 - 1e-3) r]`:
    /// maximum deviation from the target and standard deviation.
    pub fn recomputed_deviation(&self) -> Result<(f64, f64)> {
        let reports = self.curvature_reports()?;
        let lo = TRUSTED_TRIM * self.r;
        let hi = (1.0 - TRUSTED_TRIM) * self.r;
        let values: Vec<f64> = self
            .samples
            .iter()
            .zip(&reports)
            .filter(|(s, _)| s.t >= lo && s.t <= hi)
            .map(|(_, rep)| self.prescribed.read(rep))
            .collect();
        let count = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / count;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
        let dev = values.iter().map(|v| (v - self.target()).abs()).fold(0.0, f64::max);
        Ok((dev, var.sqrt()))
    }

    pub fn summary(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "solvable": true,
            "manifold": self.manifold_name,
            "n": self.n,
            "r": self.r,
            "max_height": self.max_height,
            "max_gradient": self.max_gradient,
            "boundary_gradient": self.boundary_gradient(),
            "min_radial_curvature": self.curvature_range.0,
            "max_radial_curvature": self.curvature_range.1,
        });
        let threshold = match self.prescribed {
            Prescribed::MeanCurvature { .. } => crate::compare::nonexistence_mean_threshold(&self.manifold, self.r),
            Prescribed::GaussKronecker { .. } => crate::compare::nonexistence_gk_threshold(&self.manifold, self.r),
        };
        if let Some(m) = v.as_object_mut() {
            if let serde_json::Value::Object(p) = serde_json::to_value(self.prescribed).expect("serializes") {
                m.extend(p);
            }
            m.insert(
                "threshold_distance".into(),
                threshold.map_or(serde_json::Value::Null, |t| (t - self.target()).into()),
            );
        }
        v
    }

    /// CSV with columns `t, h, nu` and the recomputed prescribed curvature.
    pub fn to_csv(&self) -> Result<String> {
        let reports = self.curvature_reports()?;
        let col = match self.prescribed {
            Prescribed::MeanCurvature { .. } => "H",
            Prescribed::GaussKronecker { .. } => "K",
        };
        let mut table = CsvTable::with_header(&self.summary(), &["t", "h", "nu", col]);
        for (s, rep) in self.samples.iter().zip(&reports) {
            table.row(&[s.t, s.h, s.nu, self.prescribed.read(rep)]);
        }
        Ok(table.finish())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientEstimates {
    pub max_height: f64,
    pub boundary_gradient: f64,
    /// Curvature of the space form the barrier comes from.
    pub barrier_curvature: f64,
    /// Prescribed curvature of the barrier graph.
    pub barrier_value: f64,
    /// Height of the barrier over the ball, when the barrier reaches the boundary.
    pub barrier_height: Option<f64>,
    pub within_barrier: Option<bool>,
}

/// Depth `int_0^r nu/sqrt(1-nu^2)` of a radial graph, or `None` if it turns vertical first.
fn radial_depth(mut integral: RadialIntegral, r: f64) -> Result<Option<f64>> {
    if integral.first_equator(r)?.is_some() || r >= integral.t_limit() {
        return Ok(None);
    }
    let ts = crate::numeric::linspace(0.0, r, SAMPLES + 1);
    let mut h = 0.0;
    for w in ts.windows(2) {
        h += integral.height_forward(w[0], w[1])?;
    }
    Ok(Some(h))
}

/// Height and boundary-gradient estimates, with the rotational barrier from the
/// space form of the largest radial sectional curvature on the ball.
///
/// For mean curvature `H0 <= s_{c,n}` the barrier is the entire graph of
/// mean curvature `s_{c,n}`; otherwise it is the CMC graph of the same `H0`.
/// For Gauss-Kronecker curvature it is the sphere of the same `K0`.
pub fn height_gradient_estimates(sol: &DirichletSolution) -> Result<GradientEstimates> {
    let c = sol.curvature_range.1;
    let n = sol.n;
    let cap = sol.manifold.t_max().max(crate::manifold::DEFAULT_T_MAX);
    let space = ModelManifold::space_form_with_cap(c, n, cap)?;
    let (value, depth) = match sol.prescribed {
        Prescribed::MeanCurvature { h0 } if h0 == 0.0 => (0.0, Some(0.0)),
        Prescribed::MeanCurvature { h0 } => {
            let value = h0.max(crate::barrier::s_inf(c, n));
            (
                value,
                radial_depth(RadialIntegral::mean(&space, value, space.t_max())?, sol.r)?,
            )
        }
        Prescribed::GaussKronecker { k0 } => {
            let limit = convexity_limit(&space)?;
            let m = space.clone();
            let ratio = Arc::new(move |t: f64| m.warp(t) / m.warp_d1(t));
            let integral = RadialIntegral::gauss_kronecker(&space, k0, ratio, limit * (1.0 - 1e-9));
            (k0, radial_depth(integral, sol.r)?)
        }
    };
    Ok(GradientEstimates {
        max_height: sol.max_height,
        boundary_gradient: sol.boundary_gradient(),
        barrier_curvature: c,
        barrier_value: value,
        barrier_height: depth,
        within_barrier: depth.map(|d| sol.max_height <= d + 1e-12),
    })
}

/// Smallest `K - K0` over the samples of the Gauss-Kronecker sphere of the
/// space form of maximal radial curvature on the ball, transplanted into `manifold`.
pub fn gk_subsolution_margin(manifold: &ModelManifold, r: f64, k0: f64) -> Result<f64> {
    check_ball(manifold, r)?;
    let c = manifold.radial_curvature_range(r)?.1;
    let space = ModelManifold::space_form_with_cap(c, manifold.dim(), manifold.t_max())?;
    let sphere = crate::barrier::gk_sphere_profile_in(&space, k0)?;
    let graph = crate::compare::transplant(&sphere, manifold)?;
    Ok(graph
        .reports
        .iter()
        .zip(&sphere.samples)
        .filter(|(_, s)| s.nu <= 0.999)
        .map(|(rep, _)| rep.gauss_kronecker - k0)
        .fold(f64::INFINITY, f64::min))
}
