//! Rotational barriers in `M^n(c) x R`: spheres of constant mean curvature,
//! spheres of constant Gauss-Kronecker curvature, and the entire graph of
//! mean curvature `(n-1)/n` in `H^n x R`.
//!
//! Profiles describe the lower hemisphere as a radial graph `h(t)` over the
//! geodesic ball of radius `radius`, with `h(0) = 0` and the upper
//! hemisphere obtained by reflection through the slice `h = h(radius)`.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curvature::{center_report, CurvatureEvaluator, CurvatureReport, HeightProfile, POLAR_CUTOFF};
use crate::error::{Error, Result};
use crate::io::CsvTable;
use crate::manifold::{BaseSpec, ModelManifold};
use crate::radial::RadialIntegral;

const UNIFORM_SAMPLES: usize = 800;
const EQUATOR_SAMPLES: usize = 80;
const EQUATOR_GAP_START: f64 = 0.05;
const EQUATOR_GAP_END: f64 = 1e-6;
const ENTIRE_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BarrierKind {
    Cmc {
        #[serde(rename = "H0")]
        h0: f64,
    },
    GaussKronecker {
        #[serde(rename = "K0")]
        k0: f64,
    },
    EntireCmc {
        #[serde(rename = "H0")]
        h0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierSample {
    pub t: f64,
    pub h: f64,
    pub nu: f64,
    /// `1 - nu`, carried separately to keep precision near the equator.
    pub one_minus_nu: f64,
    pub dnu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BarrierProfile {
    pub c: f64,
    pub n: usize,
    pub kind: BarrierKind,
    /// Radius of the supporting geodesic ball (the cap radius for entire graphs).
    pub radius: f64,
    /// `h(radius)`.
    pub equator_height: f64,
    pub samples: Vec<BarrierSample>,
    #[serde(skip)]
    t_cap: f64,
}

/// Infimum of mean curvatures of compact rotational spheres, `((n-1)/n) sqrt(-c)` for `c < 0`.
pub fn s_inf(c: f64, n: usize) -> f64 {
    if c < 0.0 {
        (n as f64 - 1.0) / n as f64 * (-c).sqrt()
    } else {
        0.0
    }
}

fn require_space_form(manifold: &ModelManifold) -> Result<f64> {
    manifold
        .space_form_c()
        .ok_or_else(|| Error::InvalidParameter(format!("barriers live in space forms, got {}", manifold.name())))
}

fn check_mean(c: f64, n: usize, h0: f64) -> Result<()> {
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(Error::InvalidParameter(format!("H0 must be positive, got {h0}")));
    }
    let s = s_inf(c, n);
    if c < 0.0 && h0 <= s {
        return Err(Error::NoCompactSphere { h0, s_inf: s });
    }
    Ok(())
}

fn mean_integral(manifold: &ModelManifold, h0: f64) -> Result<RadialIntegral> {
    let c = require_space_form(manifold)?;
    check_mean(c, manifold.dim(), h0)?;
    RadialIntegral::mean(manifold, h0, manifold.t_max())
}

/// Polar Jacobi ratio `j/j' = sn_c/sn_c'` and the radius where it blows up.
fn gk_integral(manifold: &ModelManifold, k0: f64) -> Result<RadialIntegral> {
    let c = require_space_form(manifold)?;
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::InvalidParameter(format!("K0 must be positive, got {k0}")));
    }
    let limit = if c > 0.0 {
        (FRAC_PI_2 / c.sqrt() * (1.0 - 1e-9)).min(manifold.t_max())
    } else {
        manifold.t_max()
    };
    let m = manifold.clone();
    let ratio = Arc::new(move |t: f64| m.warp(t) / m.warp_d1(t));
    Ok(RadialIntegral::gauss_kronecker(manifold, k0, ratio, limit))
}

fn equator(integral: &mut RadialIntegral, what: &str) -> Result<f64> {
    let limit = integral.t_limit();
    integral.first_equator(limit)?.ok_or_else(|| Error::RootNotBracketed {
        what: what.to_string(),
        t_max: limit,
    })
}

/// Radius of the constant mean curvature `h0` sphere in `manifold x R` (a space form).
pub fn cmc_sphere_radius_in(manifold: &ModelManifold, h0: f64) -> Result<f64> {
    let mut integral = mean_integral(manifold, h0)?;
    equator(&mut integral, "CMC sphere radius")
}

pub fn cmc_sphere_radius(c: f64, n: usize, h0: f64) -> Result<f64> {
    cmc_sphere_radius_in(&ModelManifold::space_form(c, n)?, h0)
}

pub fn cmc_sphere_profile_in(manifold: &ModelManifold, h0: f64) -> Result<BarrierProfile> {
    let mut integral = mean_integral(manifold, h0)?;
    let radius = equator(&mut integral, "CMC sphere radius")?;
    sphere_profile(manifold, &integral, radius, BarrierKind::Cmc { h0 })
}

pub fn cmc_sphere_profile(c: f64, n: usize, h0: f64) -> Result<BarrierProfile> {
    cmc_sphere_profile_in(&ModelManifold::space_form(c, n)?, h0)
}

pub fn gk_sphere_radius_in(manifold: &ModelManifold, k0: f64) -> Result<f64> {
    let mut integral = gk_integral(manifold, k0)?;
    equator(&mut integral, "Gauss-Kronecker sphere radius")
}

pub fn gk_sphere_radius(c: f64, n: usize, k0: f64) -> Result<f64> {
    gk_sphere_radius_in(&ModelManifold::space_form(c, n)?, k0)
}

pub fn gk_sphere_profile_in(manifold: &ModelManifold, k0: f64) -> Result<BarrierProfile> {
    let mut integral = gk_integral(manifold, k0)?;
    let radius = equator(&mut integral, "Gauss-Kronecker sphere radius")?;
    sphere_profile(manifold, &integral, radius, BarrierKind::GaussKronecker { k0 })
}

pub fn gk_sphere_profile(c: f64, n: usize, k0: f64) -> Result<BarrierProfile> {
    gk_sphere_profile_in(&ModelManifold::space_form(c, n)?, k0)
}

fn sphere_profile(
    manifold: &ModelManifold,
    integral: &RadialIntegral,
    radius: f64,
    kind: BarrierKind,
) -> Result<BarrierProfile> {
    // switch point between uniform and equator-refined sampling
    let t_switch = crate::numeric::bisect(
        |t| integral.tilt(t).map(|(_, gap)| gap - EQUATOR_GAP_START),
        0.0,
        radius,
        1e-14 * radius,
    )?
    .ok_or_else(|| Error::Internal("tilt does not reach the equator band".into()))?;

    let uniform = crate::numeric::linspace(0.0, t_switch, UNIFORM_SAMPLES + 1);
    let mut samples = Vec::with_capacity(uniform.len() + EQUATOR_SAMPLES + 1);
    let mut h = 0.0;
    for (k, &t) in uniform.iter().enumerate() {
        if k > 0 {
            h += integral.height_forward(uniform[k - 1], t)?;
        }
        let (nu, gap) = integral.tilt(t)?;
        samples.push(BarrierSample {
            t,
            h,
            nu,
            one_minus_nu: gap,
            dnu: integral.dnu(t, nu),
        });
    }

    // depths s = sqrt(radius - t) with the gap geometric down to EQUATOR_GAP_END, then the equator
    let ratio = (EQUATOR_GAP_END / EQUATOR_GAP_START).powf(1.0 / EQUATOR_SAMPLES as f64);
    let mut s_prev = (radius - t_switch).max(0.0).sqrt();
    let mut depths = Vec::with_capacity(EQUATOR_SAMPLES + 1);
    for j in 1..=EQUATOR_SAMPLES {
        let target = EQUATOR_GAP_START * ratio.powi(j as i32);
        let s = crate::numeric::bisect(
            |s| integral.tilt_at_depth(s, radius).map(|(_, gap)| gap - target),
            0.0,
            s_prev,
            0.0,
        )?
        .ok_or_else(|| Error::Internal(format!("gap {target} not bracketed")))?;
        if s < s_prev {
            depths.push(s);
            s_prev = s;
        }
    }
    depths.push(0.0);
    let mut s_prev = (radius - t_switch).max(0.0).sqrt();
    for s in depths {
        h += integral.height_between_depths(s_prev, s, radius)?;
        let (nu, gap) = integral.tilt_at_depth(s, radius)?;
        let t = if s == 0.0 { radius } else { radius - s * s };
        if t <= samples.last().map_or(0.0, |p| p.t) {
            s_prev = s;
            continue;
        }
        samples.push(BarrierSample {
            t,
            h,
            nu,
            one_minus_nu: gap,
            dnu: integral.dnu(t, nu),
        });
        s_prev = s;
    }
    let h = samples.last().map_or(0.0, |p| p.h);
    let c = require_space_form(manifold)?;
    Ok(BarrierProfile {
        c,
        n: manifold.dim(),
        kind,
        radius,
        equator_height: h,
        samples,
        t_cap: manifold.t_max(),
    })
}

/// The entire graph of mean curvature `(n-1)/n` in `H^n x R` on `[0, t_end]`.
pub fn entire_cmc_graph(n: usize, t_end: f64) -> Result<BarrierProfile> {
    entire_cmc_graph_in(&ModelManifold::space_form(-1.0, n)?, t_end)
}

pub fn entire_cmc_graph_in(manifold: &ModelManifold, t_end: f64) -> Result<BarrierProfile> {
    if manifold.space_form_c() != Some(-1.0) {
        return Err(Error::InvalidParameter("the entire graph lives in H^n x R".into()));
    }
    if !(t_end > 0.0 && t_end < manifold.t_max()) {
        return Err(Error::OutsideDomain {
            t: t_end,
            lo: 0.0,
            hi: manifold.t_max(),
        });
    }
    let n = manifold.dim();
    let h0 = s_inf(-1.0, n);
    let mut integral = RadialIntegral::mean(manifold, h0, manifold.t_max())?;
    integral.extend_to(t_end)?;
    let ts = crate::numeric::linspace(0.0, t_end, ENTIRE_SAMPLES + 1);
    let mut samples = Vec::with_capacity(ts.len());
    let mut h = 0.0;
    for (k, &t) in ts.iter().enumerate() {
        if k > 0 {
            h += integral.height_forward(ts[k - 1], t)?;
        }
        let (nu, gap) = integral.tilt(t)?;
        if !(gap > 0.0) {
            return Err(Error::Internal(format!("entire graph reached nu = 1 at t = {t}")));
        }
        samples.push(BarrierSample {
            t,
            h,
            nu,
            one_minus_nu: gap,
            dnu: integral.dnu(t, nu),
        });
    }
    Ok(BarrierProfile {
        c: -1.0,
        n,
        kind: BarrierKind::EntireCmc { h0 },
        radius: t_end,
        equator_height: h,
        samples,
        t_cap: manifold.t_max(),
    })
}

impl BarrierProfile {
    /// The space form this profile was built in.
    pub fn manifold(&self) -> Result<ModelManifold> {
        ModelManifold::space_form_with_cap(self.c, self.n, self.t_cap)
    }

    pub fn is_sphere(&self) -> bool {
        !matches!(self.kind, BarrierKind::EntireCmc { .. })
    }

    /// Height of the whole bigraph (twice the equator height for spheres).
    pub fn total_height(&self) -> f64 {
        if self.is_sphere() {
            2.0 * self.equator_height
        } else {
            self.equator_height
        }
    }

    /// The prescribed curvature value.
    pub fn target(&self) -> f64 {
        match self.kind {
            BarrierKind::Cmc { h0 } | BarrierKind::EntireCmc { h0 } => h0,
            BarrierKind::GaussKronecker { k0 } => k0,
        }
    }

    /// The curvature this profile prescribes, read off a report.
    pub fn defining_curvature(&self, report: &CurvatureReport) -> f64 {
        match self.kind {
            BarrierKind::Cmc { .. } | BarrierKind::EntireCmc { .. } => report.mean,
            BarrierKind::GaussKronecker { .. } => report.gauss_kronecker,
        }
    }

    pub fn height_profile(&self) -> Result<HeightProfile> {
        HeightProfile::sampled_with_tilt(
            self.samples.iter().map(|s| s.t).collect(),
            self.samples.iter().map(|s| s.h).collect(),
            self.samples.iter().map(|s| s.nu).collect(),
            self.samples.iter().map(|s| s.dnu).collect(),
        )
    }

    /// Curvature reports at every sample, evaluated in `manifold x R`.
    pub fn curvature_reports_in(&self, manifold: &ModelManifold) -> Result<Vec<CurvatureReport>> {
        if manifold.dim() != self.n {
            return Err(Error::DimensionMismatch(manifold.dim(), self.n));
        }
        let last = self.samples.last().map_or(0.0, |s| s.t);
        if !(last < manifold.t_max()) {
            return Err(Error::DomainTooSmall {
                needed: last,
                available: manifold.t_max(),
            });
        }
        let eval = CurvatureEvaluator::new(manifold, BaseSpec::PolarPoint, last.max(POLAR_CUTOFF))?;
        self.samples
            .iter()
            .map(|s| {
                if s.t == 0.0 {
                    Ok(center_report(self.n, s.dnu))
                } else if s.t < POLAR_CUTOFF {
                    // polar Jacobi amplitude is the warp itself
                    let kt = s.nu * manifold.warp_d1(s.t) / manifold.warp(s.t);
                    Ok(CurvatureReport::assemble(self.n, s.t, s.nu, s.dnu, kt))
                } else {
                    eval.report_from_tilt(s.t, s.nu, s.dnu)
                }
            })
            .collect()
    }

    pub fn curvature_reports(&self) -> Result<Vec<CurvatureReport>> {
        self.curvature_reports_in(&self.manifold()?)
    }

    /// Largest `|recomputed - target|` over samples with `nu <= nu_max`.
    pub fn round_trip_error(&self, nu_max: f64) -> Result<f64> {
        let reports = self.curvature_reports()?;
        Ok(self
            .samples
            .iter()
            .zip(&reports)
            .filter(|(s, _)| s.nu <= nu_max)
            .map(|(_, r)| (self.defining_curvature(r) - self.target()).abs())
            .fold(0.0, f64::max))
    }

    pub fn metadata(&self) -> serde_json::Value {
        let mut meta = serde_json::json!({
            "c": self.c,
            "n": self.n,
            "radius": self.radius,
            "equator_height": self.equator_height,
        });
        let kind = serde_json::to_value(self.kind).expect("kind serializes");
        if let (Some(m), serde_json::Value::Object(k)) = (meta.as_object_mut(), kind) {
            m.extend(k);
        }
        meta
    }

    /// CSV with a `# {metadata}` header and columns `t, h, nu, k_vertical, k_tangential, H, K`.
    pub fn to_csv(&self) -> Result<String> {
        let reports = self.curvature_reports()?;
        let mut table = CsvTable::with_header(
            &self.metadata(),
            &["t", "h", "nu", "k_vertical", "k_tangential", "H", "K"],
        );
        for (s, r) in self.samples.iter().zip(&reports) {
            table.row(&[s.t, s.h, s.nu, r.k_vertical, r.k_tangential, r.mean, r.gauss_kronecker]);
        }
        Ok(table.finish())
    }
}
