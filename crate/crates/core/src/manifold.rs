//! Rotationally symmetric model manifolds `dt^2 + phi(t)^2 g_0` and the
//! space forms `M^n(c)`.
//!
//! Along a radial geodesic every plane containing the velocity has the same
//! sectional curvature `-phi''/phi`, so a single scalar describes the radial
//! geometry. Second fundamental forms follow `II(X, Y) = <-D_X N, Y>` for an
//! explicitly chosen unit normal `N`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Domain cap for manifolds whose radial coordinate is unbounded.
pub const DEFAULT_T_MAX: f64 = 30.0;

/// Below this radius space-form warps switch to their Taylor expansion.
const TAYLOR_CUTOFF: f64 = 1e-6;

/// Radial curvature is a smooth function of `t`; below this radius the
/// `0/0` quotient of custom warps is evaluated at the cutoff instead.
const CURVATURE_CUTOFF: f64 = 1e-6;

#[derive(Clone)]
enum Warp {
    SpaceForm {
        c: f64,
    },
    Custom {
        name: String,
        phi: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
    },
}

impl fmt::Debug for Warp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warp::SpaceForm { c } => write!(f, "SpaceForm(c = {c})"),
            Warp::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelManifold {
    n: usize,
    t_max: f64,
    warp: Warp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Outward,
    Inward,
}

/// Where the radial geodesics start: a single point (polar coordinates) or
/// the geodesic sphere of radius `radius` around the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSpec {
    PolarPoint,
    GeodesicSphere { radius: f64, orientation: Orientation },
}

impl BaseSpec {
    pub fn sphere(radius: f64, orientation: Orientation) -> Self {
        BaseSpec::GeodesicSphere { radius, orientation }
    }
}

/// `sn_c(t)`, `sn_c'(t)`, `sn_c''(t)`.
pub fn sn_c(c: f64, t: f64) -> (f64, f64, f64) {
    if t.abs() < TAYLOR_CUTOFF {
        return (t - c * t * t * t / 6.0, 1.0 - c * t * t / 2.0, -c * t);
    }
    if c == 0.0 {
        (t, 1.0, 0.0)
    } else if c < 0.0 {
        let k = (-c).sqrt();
        let s = (k * t).sinh() / k;
        (s, (k * t).cosh(), -c * s)
    } else {
        let k = c.sqrt();
        let s = (k * t).sin() / k;
        (s, (k * t).cos(), -c * s)
    }
}

impl ModelManifold {
    /// The complete simply connected space form of curvature `c`.
    pub fn space_form(c: f64, n: usize) -> Result<Self> {
        Self::space_form_with_cap(c, n, DEFAULT_T_MAX)
    }

    /// Like [`space_form`](Self::space_form) with an explicit cap for the
    /// unbounded cases `c <= 0`. For `c > 0` the domain always ends just short
    /// of the antipodal point `pi/sqrt(c)`.
    pub fn space_form_with_cap(c: f64, n: usize, cap: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("curvature must be finite, got {c}")));
        }
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "domain cap must be positive, got {cap}"
            )));
        }
        let t_max = if c > 0.0 {
            let antipode = PI / c.sqrt();
            antipode * (1.0 - 1e-9)
        } else {
            cap
        };
        Ok(Self {
            n,
            t_max,
            warp: Warp::SpaceForm { c },
        })
    }

    /// A model manifold from an analytic warp and its first two derivatives.
    ///
    /// The triple is checked against centered finite differences and polar
    /// smoothness (`phi(t)/t -> 1`) before it is accepted.
    pub fn custom(
        n: usize,
        name: impl Into<String>,
        phi: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
        t_max: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let name = name.into();
        let invalid = |reason: String| Error::InvalidWarp {
            name: name.clone(),
            reason,
        };
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(invalid(format!("t_max must be positive and finite, got {t_max}")));
        }
        let t0 = 1e-4;
        let ratio = phi(t0) / t0;
        if (ratio - 1.0).abs() > 1e-6 {
            return Err(invalid(format!("phi(t)/t = {ratio} at t = {t0}, expected 1")));
        }
        let hi = t_max.min(10.0);
        for k in 0..32 {
            let t = 1e-3 + (hi - 1e-3) * k as f64 / 31.0;
            let t = t.min(t_max * (1.0 - 1e-6));
            let v = phi(t);
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("phi({t}) = {v} is not positive")));
            }
            let h = 1e-5 * t.max(1.0);
            let fd1 = (phi(t + h) - phi(t - h)) / (2.0 * h);
            let fd2 = (d1(t + h) - d1(t - h)) / (2.0 * h);
            for (label, exact, fd) in [("phi'", d1(t), fd1), ("phi''", d2(t), fd2)] {
                let scale = exact.abs().max(fd.abs()).max(1.0);
                if (exact - fd).abs() > 1e-6 * scale {
                    return Err(invalid(format!(
                        "{label}({t}) = {exact} disagrees with finite difference {fd}"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            t_max,
            warp: Warp::Custom { name, phi, d1, d2 },
        })
    }

    /// One of the named test warps in [`BUILTIN_WARPS`].
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        Self::builtin_with_cap(name, n, DEFAULT_T_MAX)
    }

    pub fn builtin_with_cap(name: &str, n: usize, cap: f64) -> Result<Self> {
        let (phi, d1, d2): (ScalarFn, ScalarFn, ScalarFn) = match name {
            "sinh_cubic" => (
                Arc::new(|t: f64| t.sinh() + t * t * t / 6.0),
                Arc::new(|t: f64| t.cosh() + t * t / 2.0),
                Arc::new(|t: f64| t.sinh() + t),
            ),
            "ripple" => (
                Arc::new(|t: f64| (1.0 - RIPPLE_AMP) * t + RIPPLE_AMP * (RIPPLE_FREQ * t).sin() / RIPPLE_FREQ),
                Arc::new(|t: f64| (1.0 - RIPPLE_AMP) + RIPPLE_AMP * (RIPPLE_FREQ * t).cos()),
                Arc::new(|t: f64| -RIPPLE_AMP * RIPPLE_FREQ * (RIPPLE_FREQ * t).sin()),
            ),
            "tanh_cigar" => (
                Arc::new(|t: f64| t.tanh()),
                Arc::new(|t: f64| 1.0 / (t.cosh() * t.cosh())),
                Arc::new(|t: f64| -2.0 * t.tanh() / (t.cosh() * t.cosh())),
            ),
            _ => return Err(Error::UnknownWarp(name.to_string())),
        };
        Self::custom(n, name, phi, d1, d2, cap)
    }

    pub fn with_t_max(mut self, t_max: f64) -> Result<Self> {
        let limit = match self.warp {
            Warp::SpaceForm { c } if c > 0.0 => PI / c.sqrt(),
            _ => f64::INFINITY,
        };
        if !(t_max > 0.0 && t_max < limit) {
            return Err(Error::InvalidParameter(format!("t_max {t_max} outside (0, {limit})")));
        }
        self.t_max = t_max;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn space_form_c(&self) -> Option<f64> {
        match self.warp {
            Warp::SpaceForm { c } => Some(c),
            Warp::Custom { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.warp {
            Warp::SpaceForm { c } => format!("space_form:{c}:{}", self.n),
            Warp::Custom { name, .. } => format!("custom:{name}:{}", self.n),
        }
    }

    pub fn warp(&self, t: f64) -> f64 {
        match &self.warp {
            Warp::SpaceForm { c } => sn_c(*c, t).0,
            Warp::Custom { phi, .. } => phi(t),
        }
    }

    pub fn warp_d1(&self, t: f64) -> f64 {
        match &self.warp {
            Warp::SpaceForm { c } => sn_c(*c, t).1,
            Warp::Custom { d1, .. } => d1(t),
        }
    }

    pub fn warp_d2(&self, t: f64) -> f64 {
        match &self.warp {
            Warp::SpaceForm { c } => sn_c(*c, t).2,
            Warp::Custom { d2, .. } => d2(t),
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t > 0.0 && t < self.t_max {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                t,
                lo: 0.0,
                hi: self.t_max,
            })
        }
    }

    /// Sectional curvature of every plane containing the radial direction at radius `t`.
    pub fn radial_sectional_curvature(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.radial_curvature_unchecked(t))
    }

    /// `-phi''/phi` without domain checks; continuous at the pole.
    pub(crate) fn radial_curvature_unchecked(&self, t: f64) -> f64 {
        match &self.warp {
            Warp::SpaceForm { c } => *c,
            Warp::Custom { phi, d2, .. } => {
                let t = t.max(CURVATURE_CUTOFF);
                -d2(t) / phi(t)
            }
        }
    }

    /// Ricci curvature in the radial direction: the sum of the `n - 1` radial sectional curvatures.
    pub fn radial_ricci(&self, t: f64) -> Result<f64> {
        Ok((self.n as f64 - 1.0) * self.radial_sectional_curvature(t)?)
    }

    /// Umbilic principal curvature of the geodesic sphere of radius `rho`.
    pub fn geodesic_sphere_curvature(&self, rho: f64, orientation: Orientation) -> Result<f64> {
        self.check_domain(rho)?;
        let outward = -self.warp_d1(rho) / self.warp(rho);
        Ok(match orientation {
            Orientation::Outward => outward,
            Orientation::Inward => -outward,
        })
    }

    /// Minimum (resp. maximum) radial sectional curvature on `(0, r]`, sampled densely.
    pub fn radial_curvature_range(&self, r: f64) -> Result<(f64, f64)> {
        self.check_domain(r)?;
        if let Some(c) = self.space_form_c() {
            return Ok((c, c));
        }
        let samples = 4000;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..=samples {
            let t = (r * k as f64 / samples as f64).max(CURVATURE_CUTOFF);
            let v = self.radial_curvature_unchecked(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok((lo, hi))
    }
}

const RIPPLE_AMP: f64 = 0.2;
const RIPPLE_FREQ: f64 = 3.0;

/// Named warps available to configuration files and the command line.
///
/// - `sinh_cubic`: `sinh t + t^3/6`, radial curvature pinched in `[-2, -1]`.
/// - `ripple`: `0.8 t + 0.2 sin(3t)/3`, radial curvature oscillates in sign and stays above `-0.8`.
/// - `tanh_cigar`: `tanh t`, radial curvature `2 sech^2 t` in `(0, 2]`.
pub const BUILTIN_WARPS: &[&str] = &["sinh_cubic", "ripple", "tanh_cigar"];

/// Serializable description of a manifold, as used in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldSpec {
    SpaceForm { c: f64, n: usize },
    Custom { n: usize, warp: String },
}

impl ManifoldSpec {
    /// Parses the compact command-line form `space_form:<c>:<n>` or `custom:<warp>:<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::InvalidParameter(format!("cannot parse manifold '{text}'"));
        match parts.as_slice() {
            ["space_form", c, n] => Ok(ManifoldSpec::SpaceForm {
                c: c.parse().map_err(|_| bad())?,
                n: n.parse().map_err(|_| bad())?,
            }),
            ["custom", warp, n] => Ok(ManifoldSpec::Custom {
                n: n.parse().map_err(|_| bad())?,
                warp: warp.to_string(),
            }),
            _ => Err(bad()),
        }
    }

    pub fn build(&self, cap: f64) -> Result<ModelManifold> {
        match self {
            ManifoldSpec::SpaceForm { c, n } => ModelManifold::space_form_with_cap(*c, *n, cap),
            ManifoldSpec::Custom { n, warp } => ModelManifold::builtin_with_cap(warp, *n, cap),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent RK4 for phi'' = -c phi, phi(0)=0, phi'(0)=1 on a fine fixed grid.
    fn rk4_warp(c: f64, t_end: f64) -> (f64, f64) {
        let steps = 20_000;
        let h = t_end / steps as f64;
        let (mut y, mut v) = (0.0f64, 1.0f64);
        for _ in 0..steps {
            let f = |y: f64, v: f64| (v, -c * y);
            let k1 = f(y, v);
            let k2 = f(y + 0.5 * h * k1.0, v + 0.5 * h * k1.1);
            let k3 = f(y + 0.5 * h * k2.0, v + 0.5 * h * k2.1);
            let k4 = f(y + h * k3.0, v + h * k3.1);
            y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        (y, v)
    }

    #[test]
    fn euclidean_warp() {
        let m = ModelManifold::space_form(0.0, 3).unwrap();
        assert_eq!(m.warp(2.5), 2.5);
        assert_eq!(m.warp_d1(2.5), 1.0);
        assert_eq!(m.warp_d2(2.5), 0.0);
        assert_eq!(m.t_max(), DEFAULT_T_MAX);
    }

    #[test]
    fn hyperbolic_warp_matches_ode_oracle() {
        let m = ModelManifold::space_form(-1.0, 2).unwrap();
        let (y, _) = rk4_warp(-1.0, 1.0);
        assert!((m.warp(1.0) - y).abs() < 1e-12);
        assert!((m.warp(1.0) - 1.1752012).abs() < 1e-7);
    }

    #[test]
    fn spherical_warp_at_quarter_period() {
        let m = ModelManifold::space_form(1.0, 3).unwrap();
        let (y, v) = rk4_warp(1.0, PI / 2.0);
        assert!((m.warp(PI / 2.0) - 1.0).abs() < 1e-15);
        assert!(m.warp_d1(PI / 2.0).abs() < 1e-15);
        assert!((y - 1.0).abs() < 1e-12 && v.abs() < 1e-12);
        assert!(m.t_max() < PI && m.t_max() > PI - 1e-8);
    }

    #[test]
    fn space_form_rejects_bad_input() {
        assert!(matches!(
            ModelManifold::space_form(f64::NAN, 3),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            ModelManifold::space_form(0.0, 1),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn radial_curvatures() {
        let flat = ModelManifold::space_form(0.0, 3).unwrap();
        assert_eq!(flat.radial_sectional_curvature(1.0).unwrap(), 0.0);
        let hyp = ModelManifold::space_form(-1.0, 2).unwrap();
        assert_eq!(hyp.radial_sectional_curvature(0.7).unwrap(), -1.0);
        assert_eq!(
            ModelManifold::space_form(-1.0, 3).unwrap().radial_ricci(1.0).unwrap(),
            -2.0
        );
        assert_eq!(
            ModelManifold::space_form(1.0, 2).unwrap().radial_ricci(1.0).unwrap(),
            1.0
        );
        assert_eq!(
            ModelManifold::space_form(0.0, 4).unwrap().radial_ricci(3.3).unwrap(),
            0.0
        );
        assert!(matches!(
            hyp.radial_sectional_curvature(0.0),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(hyp.radial_ricci(31.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn sinh_cubic_curvature_cross_checked_by_finite_differences() {
        let m = ModelManifold::builtin("sinh_cubic", 3).unwrap();
        let phi = |t: f64| t.sinh() + t * t * t / 6.0;
        let h = 1e-4;
        let d2 = (phi(1.0 + h) - 2.0 * phi(1.0) + phi(1.0 - h)) / (h * h);
        let expected = -d2 / phi(1.0);
        let k = m.radial_sectional_curvature(1.0).unwrap();
        assert!((k - expected).abs() < 1e-6, "{k} vs {expected}");
        assert!((k + (1f64.sinh() + 1.0) / (1f64.sinh() + 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn geodesic_sphere_curvatures() {
        let flat = ModelManifold::space_form(0.0, 3).unwrap();
        assert_eq!(flat.geodesic_sphere_curvature(2.0, Orientation::Outward).unwrap(), -0.5);
        let hyp = ModelManifold::space_form(-1.0, 2).unwrap();
        let k = hyp.geodesic_sphere_curvature(1.0, Orientation::Outward).unwrap();
        assert!((k + 1f64.cosh() / 1f64.sinh()).abs() < 1e-15);
        let sph = ModelManifold::space_form(1.0, 2).unwrap();
        assert!(
            sph.geodesic_sphere_curvature(PI / 2.0, Orientation::Outward)
                .unwrap()
                .abs()
                < 1e-15
        );
        for rho in [0.1, 0.9, 2.0] {
            let o = hyp.geodesic_sphere_curvature(rho, Orientation::Outward).unwrap();
            let i = hyp.geodesic_sphere_curvature(rho, Orientation::Inward).unwrap();
            assert_eq!(o, -i);
        }
    }

    #[test]
    fn polar_smoothness_and_taylor_branch() {
        for c in [-2.0, -1.0, 0.0, 1.0] {
            let m = ModelManifold::space_form(c, 2).unwrap();
            assert!((m.warp(1e-4) / 1e-4 - 1.0).abs() < 1e-6);
            // continuity across the Taylor cutoff
            let below = m.warp(0.999_999e-6);
            let above = m.warp(1.000_001e-6);
            assert!((above - below - 2e-12).abs() < 1e-18);
        }
    }

    #[test]
    fn builtin_warps_validate_and_unknown_is_rejected() {
        for name in BUILTIN_WARPS {
            let m = ModelManifold::builtin(name, 3).unwrap();
            assert!(m.space_form_c().is_none());
            assert!(m.radial_sectional_curvature(0.5).unwrap().is_finite());
        }
        assert!(matches!(ModelManifold::builtin("nope", 3), Err(Error::UnknownWarp(_))));
    }

    #[test]
    fn inconsistent_custom_warp_is_rejected() {
        let r = ModelManifold::custom(
            2,
            "bad",
            Arc::new(|t: f64| t.sinh()),
            Arc::new(|t: f64| t.cosh()),
            Arc::new(|t: f64| t.cosh()),
            10.0,
        );
        assert!(matches!(r, Err(Error::InvalidWarp { .. })));
        let r = ModelManifold::custom(
            2,
            "not_polar",
            Arc::new(|t: f64| 2.0 * t),
            Arc::new(|_| 2.0),
            Arc::new(|_| 0.0),
            10.0,
        );
        assert!(matches!(r, Err(Error::InvalidWarp { .. })));
    }

    #[test]
    fn ripple_oscillates_above_minus_one() {
        let m = ModelManifold::builtin("ripple", 3).unwrap();
        let (lo, hi) = m.radial_curvature_range(10.0).unwrap();
        assert!(lo < 0.0 && lo > -1.0, "lo = {lo}");
        assert!(hi > 0.0);
    }

    #[test]
    fn manifold_spec_parsing() {
        assert_eq!(
            ManifoldSpec::parse("space_form:-1:2").unwrap(),
            ManifoldSpec::SpaceForm { c: -1.0, n: 2 }
        );
        assert_eq!(
            ManifoldSpec::parse("custom:ripple:3").unwrap(),
            ManifoldSpec::Custom {
                n: 3,
                warp: "ripple".into()
            }
        );
        assert!(ManifoldSpec::parse("space_form:x:2").is_err());
        let json: ManifoldSpec = serde_json::from_str(r#"{"kind": "space_form", "c": -1.0, "n": 3}"#).unwrap();
        assert_eq!(json, ManifoldSpec::SpaceForm { c: -1.0, n: 3 });
        assert!(serde_json::from_str::<ManifoldSpec>(r#"{"kind": "space_form", "c": -1.0, "n": 3, "x": 1}"#).is_err());
    }
}
