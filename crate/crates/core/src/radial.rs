//! First integrals of rotational graphs with prescribed mean or
//! Gauss-Kronecker curvature over a polar base.
//!
//! With `nu` the tilt and `w` the log-derivative weight of the geodesic
//! spheres, constant mean curvature integrates to
//! `nu phi^{n-1} = n H0 A`, `A = int phi^{n-1}`, and constant Gauss-Kronecker
//! curvature to `nu^n = n K0 B`, `B = int (j/j')^{n-1}`.
//!
//! For the mean case the gap `1 - nu` is carried as `D/phi^{n-1}` with
//! `D' = phi^{n-2} ((n-1)(phi' - kappa phi) + n (s - H0) phi)`. In `M^n(c)`,
//! `c < 0`, `kappa = sqrt(-c)`, `s = (n-1) kappa / n` and `phi' - kappa phi = e^{-kappa t}`.

use crate::error::{Error, Result};
use crate::manifold::{ModelManifold, ScalarFn};
use crate::numeric::{adaptive_simpson, bisect, Tolerance};

const QUAD_REL: f64 = 1e-13;
/// Intervals at most this long first try a single Simpson panel.
const SHORT_PANEL: f64 = 1e-2;

/// Relative tolerance, with an absolute floor proportional to the size of the integrand.
fn integrate_scaled<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> Result<f64> {
    integrate_with_floor(g, a, b, 0.0)
}

/// As `integrate_scaled`, never asking for more than `floor` absolute accuracy.
fn integrate_with_floor<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, floor: f64) -> Result<f64> {
    let (ga, gm, gb) = (g(a), g(0.5 * (a + b)), g(b));
    let scale = (b - a).abs() * ga.abs().max(gm.abs()).max(gb.abs());
    let tol = Tolerance::new((1e-15 * scale).max(floor).max(1e-300), QUAD_REL);
    if (b - a).abs() <= SHORT_PANEL {
        let whole = (b - a) / 6.0 * (ga + 4.0 * gm + gb);
        let (gl, gr) = (g(0.75 * a + 0.25 * b), g(0.25 * a + 0.75 * b));
        let halves = (b - a) / 12.0 * (ga + 4.0 * gl + 2.0 * gm + 4.0 * gr + gb);
        let delta = halves - whole;
        if halves.is_finite() && delta.abs() <= 15.0 * tol.abs.max(tol.rel * halves.abs()) {
            return Ok(halves + delta / 15.0);
        }
    }
    Ok(adaptive_simpson(g, a, b, tol)?)
}
const KNOT_SPACING: f64 = 0.05;
const FIRST_KNOT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Law {
    Mean(f64),
    GaussKronecker(f64),
}

/// Running integral `int_0^t g` anchored at knots.
struct Cumulative {
    g: ScalarFn,
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl Cumulative {
    fn new(g: ScalarFn) -> Self {
        Self {
            g,
            knots: vec![0.0],
            values: vec![0.0],
        }
    }

    /// Increment from `a` to `b`, accurate relative to the running total `base`.
    fn between(&self, a: f64, b: f64, base: f64) -> Result<f64> {
        integrate_with_floor(|s| (self.g)(s), a, b, 1e-16 * base.abs())
    }

    fn push(&mut self, t: f64) -> Result<f64> {
        let last = *self.knots.last().expect("knots start at 0");
        let base = *self.values.last().expect("values start at 0");
        let v = base + self.between(last, t, base)?;
        self.knots.push(t);
        self.values.push(v);
        Ok(v)
    }

    fn insert(&mut self, t: f64) -> Result<()> {
        let k = match self.knots.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(_) => return Ok(()),
            Err(k) => k,
        };
        if k == self.knots.len() {
            return self.push(t).map(|_| ());
        }
        let v = self.values[k - 1] + self.between(self.knots[k - 1], t, self.values[k - 1])?;
        self.knots.insert(k, t);
        self.values.insert(k, v);
        Ok(())
    }

    fn at(&self, t: f64) -> Result<f64> {
        let k = match self.knots.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(k) => return Ok(self.values[k]),
            Err(0) => 0,
            Err(k) => k - 1,
        };
        Ok(self.values[k] + self.between(self.knots[k], t, self.values[k])?)
    }
}

/// The first integral for one law on one manifold.
pub(crate) struct RadialIntegral {
    n: usize,
    law: Law,
    warp: ScalarFn,
    warp_d1: ScalarFn,
    /// `j/j'` along the polar geodesic (Gauss-Kronecker law only).
    ratio: ScalarFn,
    /// `A` (mean) or `B` (Gauss-Kronecker).
    primary: Cumulative,
    /// `D` (mean only).
    defect: Option<Cumulative>,
    t_limit: f64,
}

/// Knots double away from the pole and halve the remaining distance toward
/// `t_limit`, where the Gauss-Kronecker integrand may blow up.
fn next_knot(t: f64, t_limit: f64) -> f64 {
    let step = if t < KNOT_SPACING {
        (2.0 * t).max(FIRST_KNOT).min(KNOT_SPACING) - t
    } else {
        KNOT_SPACING
    };
    let room = t_limit - t;
    if room < 2.0 * step && room > 1e-12 * t_limit {
        t + 0.5 * room
    } else {
        t + step
    }
}

impl RadialIntegral {
    /// Constant mean curvature `h0` over a polar base of `manifold`.
    pub fn mean(manifold: &ModelManifold, h0: f64, t_limit: f64) -> Result<Self> {
        let n = manifold.dim();
        let nf = n as f64;
        let m1 = manifold.clone();
        let m2 = manifold.clone();
        let m3 = manifold.clone();
        let warp: ScalarFn = std::sync::Arc::new(move |t| m1.warp(t));
        let warp_d1: ScalarFn = std::sync::Arc::new(move |t| m2.warp_d1(t));
        let power = n as i32 - 1;
        let w = warp.clone();
        let weight: ScalarFn = std::sync::Arc::new(move |t| w(t).powi(power));
        let (kappa, s) = match manifold.space_form_c() {
            Some(c) if c < 0.0 => {
                let k = (-c).sqrt();
                (k, (nf - 1.0) * k / nf)
            }
            _ => (0.0, 0.0),
        };
        let defect: ScalarFn = std::sync::Arc::new(move |t: f64| {
            let phi = m3.warp(t);
            let lead = if kappa > 0.0 { (-kappa * t).exp() } else { m3.warp_d1(t) };
            phi.powi(power - 1) * ((nf - 1.0) * lead + nf * (s - h0) * phi)
        });
        Ok(Self {
            n,
            law: Law::Mean(h0),
            warp,
            warp_d1,
            ratio: std::sync::Arc::new(|_| f64::NAN),
            primary: Cumulative::new(weight),
            defect: Some(Cumulative::new(defect)),
            t_limit,
        })
    }

    /// Constant Gauss-Kronecker curvature `k0`, with `ratio = j/j'` of the polar Jacobi field.
    pub fn gauss_kronecker(manifold: &ModelManifold, k0: f64, ratio: ScalarFn, t_limit: f64) -> Self {
        let n = manifold.dim();
        let m1 = manifold.clone();
        let m2 = manifold.clone();
        let r = ratio.clone();
        let power = n as i32 - 1;
        Self {
            n,
            law: Law::GaussKronecker(k0),
            warp: std::sync::Arc::new(move |t| m1.warp(t)),
            warp_d1: std::sync::Arc::new(move |t| m2.warp_d1(t)),
            ratio,
            primary: Cumulative::new(std::sync::Arc::new(move |t| r(t).powi(power))),
            defect: None,
            t_limit,
        }
    }

    pub fn t_limit(&self) -> f64 {
        self.t_limit
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Signed quantity that is positive before the equator and vanishes there:
    /// `D` for the mean law, `1 - n K0 B` for Gauss-Kronecker.
    fn indicator_from(&self, primary: f64, defect: Option<f64>) -> f64 {
        match self.law {
            Law::Mean(_) => defect.expect("mean law carries D"),
            Law::GaussKronecker(k0) => 1.0 - self.nf() * k0 * primary,
        }
    }

    fn indicator(&self, t: f64) -> Result<f64> {
        let p = self.primary.at(t)?;
        let d = match &self.defect {
            Some(d) => Some(d.at(t)?),
            None => None,
        };
        Ok(self.indicator_from(p, d))
    }

    /// First radius in `(0, min(limit, t_limit)]` where `nu` reaches 1, if any.
    pub fn first_equator(&mut self, limit: f64) -> Result<Option<f64>> {
        let limit = limit.min(self.t_limit);
        let mut prev = 0.0;
        // knots already built
        for k in 1..self.primary.knots.len() {
            let t = self.primary.knots[k];
            if t > limit {
                break;
            }
            let d = self.defect.as_ref().map(|d| d.values[k]);
            if self.indicator_from(self.primary.values[k], d) <= 0.0 {
                return self.refine(prev, t).map(Some);
            }
            prev = t;
        }
        let mut t = *self.primary.knots.last().expect("nonempty");
        while t < limit {
            let next = next_knot(t, self.t_limit).min(limit);
            let p = self.primary.push(next)?;
            let d = match &mut self.defect {
                Some(d) => Some(d.push(next)?),
                None => None,
            };
            if self.indicator_from(p, d) <= 0.0 {
                return self.refine(t, next).map(Some);
            }
            t = next;
        }
        Ok(None)
    }

    fn refine(&self, lo: f64, hi: f64) -> Result<f64> {
        let lo = if lo == 0.0 { hi * 1e-9 } else { lo };
        bisect(|t| self.indicator(t), lo, hi, 0.0)?
            .ok_or_else(|| Error::Internal(format!("equator not bracketed in [{lo}, {hi}]")))
    }

    /// Makes sure knots cover `[0, t]`.
    pub fn extend_to(&mut self, t: f64) -> Result<()> {
        let mut last = *self.primary.knots.last().expect("nonempty");
        while last < t {
            let next = next_knot(last, self.t_limit).min(t.max(last));
            let next = if next <= last { t } else { next };
            self.primary.push(next)?;
            if let Some(d) = &mut self.defect {
                d.push(next)?;
            }
            last = next;
        }
        Ok(())
    }

    /// Adds knots at `ts` (increasing, positive).
    pub fn add_knots(&mut self, ts: &[f64]) -> Result<()> {
        for &t in ts.iter().filter(|&&t| t > 0.0) {
            self.primary.insert(t)?;
            if let Some(d) = &mut self.defect {
                d.insert(t)?;
            }
        }
        Ok(())
    }

    /// `(nu, 1 - nu)` from the forward integrals.
    pub fn tilt(&self, t: f64) -> Result<(f64, f64)> {
        if t <= 0.0 {
            return Ok((0.0, 1.0));
        }
        let nf = self.nf();
        match self.law {
            Law::Mean(h0) => {
                let w = (self.warp)(t).powi(self.n as i32 - 1);
                let d = self.defect.as_ref().expect("mean law carries D").at(t)?;
                let gap = d / w;
                if gap < 0.5 {
                    Ok((1.0 - gap, gap))
                } else {
                    let nu = nf * h0 * self.primary.at(t)? / w;
                    Ok((nu, 1.0 - nu))
                }
            }
            Law::GaussKronecker(k0) => {
                let p = nf * k0 * self.primary.at(t)?;
                let nu = p.powf(1.0 / nf);
                Ok((nu, 1.0 - nu))
            }
        }
    }

    /// `(nu, 1 - nu)` at `t = radius - s^2`, integrating back from the equator in `s`.
    pub fn tilt_at_depth(&self, s: f64, radius: f64) -> Result<(f64, f64)> {
        if s <= 0.0 {
            return Ok((1.0, 0.0));
        }
        let nf = self.nf();
        let t = radius - s * s;
        let back = |g: &ScalarFn| -> Result<f64> { integrate_scaled(|x| 2.0 * x * g(radius - x * x), 0.0, s) };
        match self.law {
            Law::Mean(_) => {
                let w = (self.warp)(t).powi(self.n as i32 - 1);
                let gap = -back(&self.defect.as_ref().expect("mean law carries D").g)? / w;
                Ok((1.0 - gap, gap))
            }
            Law::GaussKronecker(k0) => {
                // q = 1 - nu^n; 1 - nu = q / (1 + nu + ... + nu^{n-1})
                let q = nf * k0 * back(&self.primary.g)?;
                let nu = (1.0 - q).max(0.0).powf(1.0 / nf);
                let sum: f64 = (0..self.n).map(|k| nu.powi(k as i32)).sum();
                let gap = q / sum;
                Ok((1.0 - gap, gap))
            }
        }
    }

    /// `nu'` given `nu(t)`.
    pub fn dnu(&self, t: f64, nu: f64) -> f64 {
        let nf = self.nf();
        match self.law {
            Law::Mean(h0) => {
                if t <= 0.0 {
                    h0
                } else {
                    nf * h0 - (nf - 1.0) * nu * (self.warp_d1)(t) / (self.warp)(t)
                }
            }
            Law::GaussKronecker(k0) => {
                if t <= 0.0 {
                    k0.powf(1.0 / nf)
                } else {
                    k0 * ((self.ratio)(t) / nu).powi(self.n as i32 - 1)
                }
            }
        }
    }

    /// `int_a^b nu/sqrt(1 - nu^2)` using the forward tilt, in the variable `w` with `t = b - w^2`.
    pub fn height_forward(&self, a: f64, b: f64) -> Result<f64> {
        let integrand = |w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            match self.tilt(b - w * w) {
                Ok((nu, gap)) => 2.0 * w * nu / (gap * (1.0 + nu)).sqrt(),
                Err(_) => f64::NAN,
            }
        };
        Ok(adaptive_simpson(
            integrand,
            0.0,
            (b - a).sqrt(),
            Tolerance::new(1e-14, 1e-10),
        )?)
    }

    /// `int nu/sqrt(1 - nu^2) dt` between depths `s_near < s_far` below the
    /// equator, with `t = radius - s^2`.
    pub fn height_between_depths(&self, s_far: f64, s_near: f64, radius: f64) -> Result<f64> {
        let dnu_r = self.dnu(radius, 1.0);
        if !(dnu_r > 0.0) {
            return Err(Error::Internal(format!(
                "tilt not increasing at the equator (nu' = {dnu_r})"
            )));
        }
        let limit = (2.0 / dnu_r).sqrt();
        let integrand = |s: f64| {
            if s <= 0.0 {
                return limit;
            }
            match self.tilt_at_depth(s, radius) {
                Ok((nu, gap)) => 2.0 * s * nu / (gap * (1.0 + nu)).sqrt(),
                Err(_) => f64::NAN,
            }
        };
        Ok(adaptive_simpson(
            integrand,
            s_near,
            s_far,
            Tolerance::new(1e-14, 1e-12),
        )?)
    }
}
