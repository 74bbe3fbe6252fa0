//! Principal, mean, r-mean and Gauss-Kronecker curvatures of radial graphs
//! `(p, f(t(p)))` in `M x R` with the upward unit normal.
//!
//! The vertical direction has principal curvature `f''/(1+f'^2)^{3/2}` and
//! the `n - 1` directions tangent to the geodesic spheres share
//! `nu * j'/j`, with `nu = f'/sqrt(1+f'^2)` and `j` the Jacobi amplitude.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::{max_parameter, solve_jacobi, JacobiField};
use crate::manifold::{BaseSpec, ModelManifold, ScalarFn};
use crate::numeric::{binomial, PiecewiseHermite};

/// Closest admissible radius to the pole of a polar graph.
pub const POLAR_CUTOFF: f64 = 1e-3;

const MIN_SAMPLES: usize = 8;
const SLOPE_CHECK_TOL: f64 = 1e-4;

#[derive(Clone)]
enum Repr {
    ClosedForm {
        f: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
    },
    /// Heights through shape-preserving cubics; slopes from the same interpolant.
    Sampled {
        height: PiecewiseHermite,
    },
    /// Heights through shape-preserving cubics; tilt through Hermite cubics
    /// with its known derivative.
    SampledTilt {
        height: PiecewiseHermite,
        tilt: PiecewiseHermite,
    },
}

/// Height function of a radial graph on `[t_lo, t_hi]`.
#[derive(Clone)]
pub struct HeightProfile {
    name: String,
    t_lo: f64,
    t_hi: f64,
    repr: Repr,
}

impl std::fmt::Debug for HeightProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeightProfile")
            .field("name", &self.name)
            .field("domain", &(self.t_lo, self.t_hi))
            .finish()
    }
}

fn check_grid(ts: &[f64]) -> Result<()> {
    if ts.len() < MIN_SAMPLES {
        return Err(Error::InvalidProfile(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            ts.len()
        )));
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) || ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidProfile(
            "sample radii must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Three-point slope at interior sample `k` of a non-uniform grid.
fn fd_slope(ts: &[f64], hs: &[f64], k: usize) -> f64 {
    let (h0, h1) = (ts[k] - ts[k - 1], ts[k + 1] - ts[k]);
    (-h1 / (h0 * (h0 + h1))) * hs[k - 1] + ((h1 - h0) / (h0 * h1)) * hs[k] + (h0 / (h1 * (h0 + h1))) * hs[k + 1]
}

impl HeightProfile {
    /// A closed-form profile with analytic first and second derivatives.
    /// The slope must be nonnegative on the domain.
    pub fn closed_form(
        name: impl Into<String>,
        f: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
        t_lo: f64,
        t_hi: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(t_lo >= 0.0 && t_hi > t_lo) {
            return Err(Error::InvalidProfile(format!("empty domain [{t_lo}, {t_hi}]")));
        }
        let probe_hi = t_hi.min(t_lo + 50.0);
        for k in 0..=64 {
            let t = t_lo + (probe_hi - t_lo) * k as f64 / 64.0;
            let s = d1(t);
            if !(s >= 0.0) {
                return Err(Error::InvalidProfile(format!("'{name}' has slope {s} < 0 at t = {t}")));
            }
        }
        Ok(Self {
            name,
            t_lo,
            t_hi,
            repr: Repr::ClosedForm { f, d1, d2 },
        })
    }

    /// `f(t) = value`.
    pub fn constant(value: f64) -> Self {
        Self::closed_form(
            "constant",
            Arc::new(move |_| value),
            Arc::new(|_| 0.0),
            Arc::new(|_| 0.0),
            0.0,
            f64::INFINITY,
        )
        .expect("constant profile is valid")
    }

    /// `f(t) = t`.
    pub fn linear() -> Self {
        Self::closed_form(
            "t",
            Arc::new(|t| t),
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.0),
            0.0,
            f64::INFINITY,
        )
        .expect("linear profile is valid")
    }

    /// `f(t) = t^2/2`.
    pub fn half_square() -> Self {
        Self::closed_form(
            "tsq",
            Arc::new(|t| 0.5 * t * t),
            Arc::new(|t| t),
            Arc::new(|_| 1.0),
            0.0,
            f64::INFINITY,
        )
        .expect("quadratic profile is valid")
    }

    /// `f(t) = log cosh t`.
    pub fn log_cosh() -> Self {
        Self::closed_form(
            "logcosh",
            Arc::new(|t: f64| t.abs() + (-2.0 * t.abs()).exp().ln_1p() - std::f64::consts::LN_2),
            Arc::new(|t: f64| t.tanh()),
            Arc::new(|t: f64| 1.0 / (t.cosh() * t.cosh())),
            0.0,
            f64::INFINITY,
        )
        .expect("log cosh profile is valid")
    }

    /// Named closed forms accepted on the command line: `t`, `tsq`, `logcosh`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "t" => Ok(Self::linear()),
            "tsq" => Ok(Self::half_square()),
            "logcosh" => Ok(Self::log_cosh()),
            other => Err(Error::InvalidParameter(format!(
                "unknown height profile '{other}' (expected t, tsq or logcosh)"
            ))),
        }
    }

    /// Profile through samples `(t_k, h_k)` with shape-preserving cubic interpolation.
    pub fn sampled(ts: Vec<f64>, hs: Vec<f64>) -> Result<Self> {
        check_grid(&ts)?;
        if hs.len() != ts.len() {
            return Err(Error::InvalidProfile("radii and heights differ in length".into()));
        }
        if hs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidProfile("heights must be nondecreasing".into()));
        }
        let (t_lo, t_hi) = (ts[0], ts[ts.len() - 1]);
        Ok(Self {
            name: "sampled".into(),
            t_lo,
            t_hi,
            repr: Repr::Sampled {
                height: PiecewiseHermite::monotone(ts, hs),
            },
        })
    }

    /// Profile through samples of height `h`, tilt `nu` and its derivative `nu'`.
    ///
    /// Where `nu <= 0.9` the slope `nu/sqrt(1-nu^2)` must agree with a
    /// three-point finite difference of the heights to relative `1e-4`.
    pub fn sampled_with_tilt(ts: Vec<f64>, hs: Vec<f64>, nus: Vec<f64>, dnus: Vec<f64>) -> Result<Self> {
        check_grid(&ts)?;
        let n = ts.len();
        if hs.len() != n || nus.len() != n || dnus.len() != n {
            return Err(Error::InvalidProfile("sample columns differ in length".into()));
        }
        if nus.iter().any(|v| !(*v >= 0.0 && *v <= 1.0)) {
            return Err(Error::InvalidProfile("tilt must lie in [0, 1]".into()));
        }
        for k in 1..n - 1 {
            if nus[k + 1] > 0.9 || nus[k - 1] > 0.9 {
                continue;
            }
            let stored = nus[k] / (1.0 - nus[k] * nus[k]).sqrt();
            let fd = fd_slope(&ts, &hs, k);
            if (stored - fd).abs() > SLOPE_CHECK_TOL * stored.abs().max(fd.abs()).max(1e-3) {
                return Err(Error::InvalidProfile(format!(
                    "slope {stored} disagrees with finite difference {fd} at t = {}",
                    ts[k]
                )));
            }
        }
        let (t_lo, t_hi) = (ts[0], ts[n - 1]);
        Ok(Self {
            name: "sampled".into(),
            t_lo,
            t_hi,
            repr: Repr::SampledTilt {
                height: PiecewiseHermite::monotone(ts.clone(), hs),
                tilt: PiecewiseHermite::new(ts, nus, dnus),
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    fn check(&self, t: f64) -> Result<()> {
        if t >= self.t_lo && t <= self.t_hi {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                t,
                lo: self.t_lo,
                hi: self.t_hi,
            })
        }
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(match &self.repr {
            Repr::ClosedForm { f, .. } => f(t),
            Repr::Sampled { height } | Repr::SampledTilt { height, .. } => height.eval(t),
        })
    }

    pub fn slope(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(match &self.repr {
            Repr::ClosedForm { d1, .. } => d1(t),
            Repr::Sampled { height } => height.derivative(t),
            Repr::SampledTilt { tilt, .. } => {
                let nu = tilt.eval(t);
                nu / (1.0 - nu * nu).sqrt()
            }
        })
    }

    pub fn second_derivative(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(match &self.repr {
            Repr::ClosedForm { d2, .. } => d2(t),
            Repr::Sampled { height } => height.second_derivative(t),
            Repr::SampledTilt { tilt, .. } => {
                let nu = tilt.eval(t);
                tilt.derivative(t) / (1.0 - nu * nu).powf(1.5)
            }
        })
    }

    /// `(nu, nu')` with `nu = f'/sqrt(1+f'^2)`; `nu'` is the vertical principal curvature.
    pub fn tilt(&self, t: f64) -> Result<(f64, f64)> {
        self.check(t)?;
        match &self.repr {
            Repr::SampledTilt { tilt, .. } => Ok((tilt.eval(t), tilt.derivative(t))),
            _ => {
                let d1 = self.slope(t)?;
                let d2 = self.second_derivative(t)?;
                let w = (1.0 + d1 * d1).sqrt();
                Ok((d1 / w, d2 / (w * w * w)))
            }
        }
    }
}

/// Curvatures of a radial graph at radius `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub t: f64,
    pub k_vertical: f64,
    pub k_tangential: f64,
    #[serde(rename = "H")]
    pub mean: f64,
    /// `H_1, ..., H_n`.
    #[serde(rename = "H_r")]
    pub h_r: Vec<f64>,
    #[serde(rename = "K")]
    pub gauss_kronecker: f64,
    pub nu: f64,
}

impl CurvatureReport {
    /// Assembles the report from the two principal curvatures. `H_r` is the
    /// elementary symmetric function `sigma_r` divided by `C(n, r)`.
    pub fn assemble(n: usize, t: f64, nu: f64, k_vertical: f64, k_tangential: f64) -> Self {
        let h_r: Vec<f64> = (1..=n)
            .map(|r| {
                let sigma = binomial(n - 1, r) * k_tangential.powi(r as i32)
                    + binomial(n - 1, r - 1) * k_vertical * k_tangential.powi(r as i32 - 1);
                sigma / binomial(n, r)
            })
            .collect();
        Self {
            t,
            k_vertical,
            k_tangential,
            mean: h_r[0],
            gauss_kronecker: h_r[n - 1],
            h_r,
            nu,
        }
    }

    pub fn dim(&self) -> usize {
        self.h_r.len()
    }

    /// The report for the opposite unit normal.
    pub fn flipped(&self) -> Self {
        Self::assemble(self.dim(), self.t, -self.nu, -self.k_vertical, -self.k_tangential)
    }

    pub fn csv_columns(n: usize) -> Vec<String> {
        let mut cols: Vec<String> = ["t", "k_vertical", "k_tangential", "H", "K"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        cols.extend((1..=n).map(|r| format!("H_{r}")));
        cols
    }

    pub fn csv_row(&self) -> Vec<f64> {
        let mut row = vec![
            self.t,
            self.k_vertical,
            self.k_tangential,
            self.mean,
            self.gauss_kronecker,
        ];
        row.extend(&self.h_r);
        row
    }
}

/// `f''/(1+f'^2)^{3/2}`.
pub fn vertical_curvature(f: &HeightProfile, t: f64) -> Result<f64> {
    Ok(f.tilt(t)?.1)
}

/// `nu(t) j'(t)/j(t)` for the Jacobi amplitude `j` leaving `base`.
pub fn tangential_curvature(manifold: &ModelManifold, base: BaseSpec, f: &HeightProfile, t: f64) -> Result<f64> {
    Ok(curvature_report(manifold, base, f, t)?.k_tangential)
}

pub fn curvature_report(
    manifold: &ModelManifold,
    base: BaseSpec,
    f: &HeightProfile,
    t: f64,
) -> Result<CurvatureReport> {
    CurvatureEvaluator::new(manifold, base, t)?.report(f, t)
}

/// Report from the tilt data directly.
pub fn curvature_report_from_tilt(
    manifold: &ModelManifold,
    base: BaseSpec,
    t: f64,
    nu: f64,
    dnu: f64,
) -> Result<CurvatureReport> {
    CurvatureEvaluator::new(manifold, base, t)?.report_from_tilt(t, nu, dnu)
}

/// Umbilic report at the pole of a polar graph: both principal curvatures equal `nu'(0)`.
pub fn center_report(n: usize, dnu0: f64) -> CurvatureReport {
    CurvatureReport::assemble(n, 0.0, 0.0, dnu0, dnu0)
}

/// Solves the Jacobi field once and evaluates curvature reports on `[0, t_end]`.
#[derive(Debug, Clone)]
pub struct CurvatureEvaluator {
    base: BaseSpec,
    n: usize,
    field: JacobiField,
}

impl CurvatureEvaluator {
    pub fn new(manifold: &ModelManifold, base: BaseSpec, t_end: f64) -> Result<Self> {
        if base == BaseSpec::PolarPoint && t_end < POLAR_CUTOFF {
            return Err(Error::PolarSingularity { t: t_end });
        }
        let limit = max_parameter(manifold, &base);
        if !(t_end < limit) {
            return Err(Error::OutsideDomain {
                t: t_end,
                lo: 0.0,
                hi: limit,
            });
        }
        let field = solve_jacobi(manifold, base, t_end)?;
        Ok(Self {
            base,
            n: manifold.dim(),
            field,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.field.t0()
    }

    pub fn jacobi(&self) -> &JacobiField {
        &self.field
    }

    fn check(&self, t: f64) -> Result<()> {
        if self.base == BaseSpec::PolarPoint && t < POLAR_CUTOFF {
            return Err(Error::PolarSingularity { t });
        }
        if !(t >= 0.0 && t <= self.t_end()) {
            return Err(Error::OutsideDomain {
                t,
                lo: 0.0,
                hi: self.t_end(),
            });
        }
        Ok(())
    }

    pub fn report_from_tilt(&self, t: f64, nu: f64, dnu: f64) -> Result<CurvatureReport> {
        self.check(t)?;
        let k_tangential = nu * self.field.log_derivative(t);
        Ok(CurvatureReport::assemble(self.n, t, nu, dnu, k_tangential))
    }

    pub fn report(&self, f: &HeightProfile, t: f64) -> Result<CurvatureReport> {
        let (nu, dnu) = f.tilt(t)?;
        self.report_from_tilt(t, nu, dnu)
    }
}
