//! Perpendicular Jacobi fields along radial geodesics and the index form.
//!
//! In a model manifold a perpendicular Jacobi field with parallel direction
//! has a scalar amplitude solving `j'' + K(t) j = 0`, where `K` is the radial
//! sectional curvature met along the geodesic. The base decides the initial
//! data: `j(0) = 0, j'(0) = 1` from a point, `j(0) = 1, j'(0) = -II` from a
//! geodesic sphere with second fundamental form `II` in the direction of travel.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::CsvTable;
use crate::manifold::{BaseSpec, ModelManifold, Orientation, ScalarFn};
use crate::numeric::{self, bisect, integrate_piecewise, DenseSolution, NaturalSpline, OdeOptions, Tolerance};

/// Quadrature tolerance for index forms.
pub const INDEX_FORM_TOL: f64 = 1e-10;

/// Radial sectional curvature met at parameter `s` along the geodesic leaving `base`.
pub fn radial_curvature_along(manifold: &ModelManifold, base: &BaseSpec, s: f64) -> f64 {
    match *base {
        BaseSpec::PolarPoint => manifold.radial_curvature_unchecked(s),
        BaseSpec::GeodesicSphere {
            radius,
            orientation: Orientation::Outward,
        } => manifold.radial_curvature_unchecked(radius + s),
        BaseSpec::GeodesicSphere {
            radius,
            orientation: Orientation::Inward,
        } => manifold.radial_curvature_unchecked(radius - s),
    }
}

/// Scalar second fundamental form of the base (zero for a point).
pub fn base_curvature(manifold: &ModelManifold, base: &BaseSpec) -> Result<f64> {
    match *base {
        BaseSpec::PolarPoint => Ok(0.0),
        BaseSpec::GeodesicSphere { radius, orientation } => manifold.geodesic_sphere_curvature(radius, orientation),
    }
}

/// Largest parameter the geodesic from `base` may reach inside the manifold.
pub fn max_parameter(manifold: &ModelManifold, base: &BaseSpec) -> f64 {
    match *base {
        BaseSpec::PolarPoint => manifold.t_max(),
        BaseSpec::GeodesicSphere {
            radius,
            orientation: Orientation::Outward,
        } => manifold.t_max() - radius,
        BaseSpec::GeodesicSphere {
            radius,
            orientation: Orientation::Inward,
        } => radius,
    }
}

fn validate_base(manifold: &ModelManifold, base: &BaseSpec) -> Result<()> {
    if let BaseSpec::GeodesicSphere { radius, .. } = *base {
        if !(radius > 0.0 && radius < manifold.t_max()) {
            return Err(Error::OutsideDomain {
                t: radius,
                lo: 0.0,
                hi: manifold.t_max(),
            });
        }
    }
    Ok(())
}

/// `(j(0), j'(0))` for the base.
pub fn initial_conditions(manifold: &ModelManifold, base: &BaseSpec) -> Result<(f64, f64)> {
    validate_base(manifold, base)?;
    Ok(match base {
        BaseSpec::PolarPoint => (0.0, 1.0),
        BaseSpec::GeodesicSphere { .. } => (1.0, -base_curvature(manifold, base)?),
    })
}

fn ode_options() -> OdeOptions {
    OdeOptions::default()
}

/// Integrates `j'' + k(t) j = 0` on `[0, t_end]`.
pub fn solve_scalar_jacobi<K>(k: K, j0: f64, dj0: f64, t_end: f64) -> Result<DenseSolution<2>>
where
    K: Fn(f64) -> f64,
{
    let rhs = |t: f64, y: &[f64; 2]| [y[1], -k(t) * y[0]];
    Ok(numeric::integrate(rhs, 0.0, [j0, dj0], t_end, &ode_options())?)
}

#[derive(Debug, Clone)]
pub struct JacobiField {
    t0: f64,
    base: BaseSpec,
    manifold: ModelManifold,
    solution: DenseSolution<2>,
}

/// Solves the Jacobi equation along the radial geodesic leaving `base` up to `t0`.
///
/// Fails with [`Error::ConjugatePoint`] if the amplitude vanishes in `(0, t0]`.
pub fn solve_jacobi(manifold: &ModelManifold, base: BaseSpec, t0: f64) -> Result<JacobiField> {
    let (j0, dj0) = initial_conditions(manifold, &base)?;
    let limit = max_parameter(manifold, &base);
    if !(t0 > 0.0 && t0 < limit) {
        return Err(Error::OutsideDomain {
            t: t0,
            lo: 0.0,
            hi: limit,
        });
    }
    let solution = solve_scalar_jacobi(|s| radial_curvature_along(manifold, &base, s), j0, dj0, t0)?;
    let field = JacobiField {
        t0,
        base,
        manifold: manifold.clone(),
        solution,
    };
    field.check_no_conjugate_point()?;
    Ok(field)
}

/// First zero of the amplitude in `(0, t_end]`, bracketed as `[lo, hi]`.
pub fn first_conjugate_point(solution: &DenseSolution<2>) -> Result<Option<(f64, f64)>> {
    let ts = solution.nodes();
    let ys = solution.states();
    for k in 1..ts.len() {
        if ys[k][0] <= 0.0 {
            let (lo, hi) = (ts[k - 1], ts[k]);
            let root = bisect(|t| Ok::<_, Error>(solution.eval(t)[0]), lo, hi, 1e-12)?.unwrap_or(hi);
            return Ok(Some(((root - 1e-12).max(lo), (root + 1e-12).min(hi))));
        }
    }
    Ok(None)
}

impl JacobiField {
    fn check_no_conjugate_point(&self) -> Result<()> {
        match first_conjugate_point(&self.solution)? {
            Some((lo, hi)) => Err(Error::ConjugatePoint { lo, hi }),
            None => Ok(()),
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn base(&self) -> BaseSpec {
        self.base
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        self.solution.eval(t)[0]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.solution.eval(t)[1]
    }

    /// `j'(t)/j(t)`.
    pub fn log_derivative(&self, t: f64) -> f64 {
        let [j, dj] = self.solution.eval(t);
        dj / j
    }

    /// Accepted integrator steps as `(t, j, j')`.
    pub fn samples(&self) -> Vec<(f64, f64, f64)> {
        self.solution
            .nodes()
            .iter()
            .zip(self.solution.states())
            .map(|(t, y)| (*t, y[0], y[1]))
            .collect()
    }

    /// Largest `|j'' + K j|` at step midpoints, with `j''` taken from the
    /// derivative of the interpolated `j'`.
    pub fn max_ode_residual(&self) -> f64 {
        let ts = self.solution.nodes();
        let mut worst = 0.0f64;
        for w in ts.windows(2) {
            let t = 0.5 * (w[0] + w[1]);
            let j = self.amplitude(t);
            let ddj = self.solution.eval_derivative(t)[1];
            let k = radial_curvature_along(&self.manifold, &self.base, t);
            worst = worst.max((ddj + k * j).abs());
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        let mut table = CsvTable::new(&["t", "j", "j_prime"]);
        for (t, j, dj) in self.samples() {
            table.row(&[t, j, dj]);
        }
        table.finish()
    }
}

/// Index form of a Jacobi field: the integrand is `(j j')'`, so it telescopes to `j(t0) j'(t0)`.
pub fn index_form_of_jacobi(field: &JacobiField) -> f64 {
    let [j, dj] = field.solution.eval(field.t0);
    j * dj
}

/// Scalar amplitude `w` of a perpendicular vector field along a radial geodesic.
#[derive(Clone)]
pub struct PerturbationField {
    t0: f64,
    value: ScalarFn,
    derivative: ScalarFn,
    /// Points where `w` may fail to be smooth; quadrature splits there.
    breaks: Vec<f64>,
}

impl std::fmt::Debug for PerturbationField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PerturbationField")
            .field("t0", &self.t0)
            .field("breaks", &self.breaks.len())
            .finish()
    }
}

impl PerturbationField {
    pub fn new(t0: f64, value: ScalarFn, derivative: ScalarFn, mut breaks: Vec<f64>) -> Self {
        breaks.retain(|b| *b > 0.0 && *b < t0);
        breaks.insert(0, 0.0);
        breaks.push(t0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Self {
            t0,
            value,
            derivative,
            breaks,
        }
    }

    pub fn zero(t0: f64) -> Self {
        Self::new(t0, Arc::new(|_| 0.0), Arc::new(|_| 0.0), Vec::new())
    }

    pub fn from_jacobi(field: &JacobiField) -> Self {
        let a = Arc::new(field.clone());
        let b = Arc::clone(&a);
        Self::new(
            field.t0,
            Arc::new(move |t| a.amplitude(t)),
            Arc::new(move |t| b.derivative(t)),
            Vec::new(),
        )
    }

    /// `jacobi + spline`, with quadrature breaks at the spline knots.
    pub fn jacobi_plus_spline(field: &JacobiField, spline: NaturalSpline) -> Self {
        let breaks = spline.knots().to_vec();
        let jf = Arc::new(field.clone());
        let sp = Arc::new(spline);
        let (jf2, sp2) = (Arc::clone(&jf), Arc::clone(&sp));
        Self::new(
            field.t0,
            Arc::new(move |t| jf.amplitude(t) + sp.eval(t)),
            Arc::new(move |t| jf2.derivative(t) + sp2.derivative(t)),
            breaks,
        )
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }
}

/// Index form `B + integral_0^t0 (w'^2 - K w^2) dt`.
///
/// The boundary term `B` vanishes for a point base. For a geodesic sphere it
/// is `-II w(0)^2`, which equals `w(0) w'(0)` whenever `w` satisfies the
/// Jacobi initial condition of the base.
pub fn index_form(manifold: &ModelManifold, base: BaseSpec, t0: f64, field: &PerturbationField) -> Result<f64> {
    validate_base(manifold, &base)?;
    let limit = max_parameter(manifold, &base);
    if !(t0 > 0.0 && t0 < limit) {
        return Err(Error::OutsideDomain {
            t: t0,
            lo: 0.0,
            hi: limit,
        });
    }
    let boundary = match base {
        BaseSpec::PolarPoint => 0.0,
        BaseSpec::GeodesicSphere { .. } => {
            let w0 = field.value(0.0);
            -base_curvature(manifold, &base)? * w0 * w0
        }
    };
    let integrand = |t: f64| {
        let w = field.value(t);
        let dw = field.derivative(t);
        dw * dw - radial_curvature_along(manifold, &base, t) * w * w
    };
    let mut breaks = field.breaks.clone();
    breaks.retain(|b| *b <= t0);
    if *breaks.last().unwrap_or(&0.0) < t0 {
        breaks.push(t0);
    }
    let integral = integrate_piecewise(integrand, &breaks, Tolerance::new(INDEX_FORM_TOL, 1e-12))?;
    Ok(boundary + integral)
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizingReport {
    pub t0: f64,
    pub trials: usize,
    pub seed: u64,
    /// `I(J, J)`.
    pub jacobi_index: f64,
    /// `I(W, W) - I(J, J)` per trial.
    pub margins: Vec<f64>,
    pub min_margin: f64,
}

/// Compares the Jacobi field against `trials` random competitors with the
/// same endpoint value. Competitors are `j + s` with `s` a natural cubic
/// spline through five equally spaced control values drawn from `[-1, 1]`,
/// pinned to zero at `t0` (and at 0 for a point base).
pub fn check_minimizing(
    manifold: &ModelManifold,
    base: BaseSpec,
    t0: f64,
    trials: usize,
    seed: u64,
) -> Result<MinimizingReport> {
    let field = solve_jacobi(manifold, base, t0)?;
    let jacobi_index = index_form_of_jacobi(&field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let knots = numeric::linspace(0.0, t0, 5);
    let mut margins = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut values: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        values[4] = 0.0;
        if base == BaseSpec::PolarPoint {
            values[0] = 0.0;
        }
        let spline = NaturalSpline::new(knots.clone(), values);
        let competitor = PerturbationField::jacobi_plus_spline(&field, spline);
        margins.push(index_form(manifold, base, t0, &competitor)? - jacobi_index);
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(MinimizingReport {
        t0,
        trials,
        seed,
        jacobi_index,
        margins,
        min_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(c: f64, n: usize, t0: f64) -> JacobiField {
        solve_jacobi(&ModelManifold::space_form(c, n).unwrap(), BaseSpec::PolarPoint, t0).unwrap()
    }

    #[test]
    fn flat_polar_field_is_linear() {
        let f = polar(0.0, 3, 2.0);
        for t in [0.0, 0.5, 1.3, 2.0] {
            assert!((f.amplitude(t) - t).abs() < 1e-12);
            assert!((f.derivative(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_polar_field_is_sinh() {
        let f = polar(-1.0, 2, 2.0);
        for k in 0..=40 {
            let t = 2.0 * k as f64 / 40.0;
            assert!((f.amplitude(t) - t.sinh()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn sphere_base_field_matches_shifted_sinh() {
        let m = ModelManifold::space_form(-1.0, 2).unwrap();
        let base = BaseSpec::sphere(1.0, Orientation::Outward);
        let f = solve_jacobi(&m, base, 1.0).unwrap();
        assert_eq!(f.amplitude(0.0), 1.0);
        assert!((f.derivative(0.0) - 1f64.cosh() / 1f64.sinh()).abs() < 1e-15);
        for t in [0.25f64, 0.5, 1.0] {
            let exact = (1.0 + t).sinh() / 1f64.sinh();
            assert!((f.amplitude(t) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn inward_sphere_focuses_at_center() {
        let m = ModelManifold::space_form(0.0, 3).unwrap();
        let base = BaseSpec::sphere(2.0, Orientation::Inward);
        let f = solve_jacobi(&m, base, 1.5).unwrap();
        // j(t) = (2 - t)/2
        assert!((f.amplitude(1.5) - 0.25).abs() < 1e-10);
        assert!(matches!(solve_jacobi(&m, base, 2.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn conjugate_point_is_bracketed() {
        let sol = solve_scalar_jacobi(|_| 1.0, 0.0, 1.0, 4.0).unwrap();
        let (lo, hi) = first_conjugate_point(&sol).unwrap().unwrap();
        let pi = std::f64::consts::PI;
        assert!(lo <= pi + 1e-9 && hi >= pi - 1e-9 && hi - lo < 1e-8, "[{lo}, {hi}]");
        let short = solve_scalar_jacobi(|_| 1.0, 0.0, 1.0, 3.0).unwrap();
        assert!(first_conjugate_point(&short).unwrap().is_none());
    }

    #[test]
    fn index_form_examples() {
        let flat = ModelManifold::space_form(0.0, 3).unwrap();
        let w = PerturbationField::new(2.0, Arc::new(|t| t), Arc::new(|_| 1.0), vec![]);
        assert!((index_form(&flat, BaseSpec::PolarPoint, 2.0, &w).unwrap() - 2.0).abs() < 1e-12);

        let hyp = ModelManifold::space_form(-1.0, 2).unwrap();
        let j = solve_jacobi(&hyp, BaseSpec::PolarPoint, 1.0).unwrap();
        let quad = index_form(&hyp, BaseSpec::PolarPoint, 1.0, &PerturbationField::from_jacobi(&j)).unwrap();
        let exact = 1f64.sinh() * 1f64.cosh();
        assert!((quad - exact).abs() < 1e-8);
        assert!((index_form_of_jacobi(&j) - exact).abs() < 1e-9);
        assert!((exact - 1.8134302).abs() < 1e-7);

        for base in [BaseSpec::PolarPoint, BaseSpec::sphere(0.5, Orientation::Outward)] {
            let z = index_form(&hyp, base, 1.0, &PerturbationField::zero(1.0)).unwrap();
            assert_eq!(z, 0.0);
        }
    }

    #[test]
    fn index_form_of_jacobi_closed_forms() {
        assert!((index_form_of_jacobi(&polar(0.0, 3, 3.0)) - 3.0).abs() < 1e-10);
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(index_form_of_jacobi(&polar(1.0, 2, half_pi)).abs() < 1e-9);
    }

    #[test]
    fn telescoping_holds_for_sphere_bases() {
        let m = ModelManifold::builtin("sinh_cubic", 3).unwrap();
        for base in [
            BaseSpec::sphere(0.8, Orientation::Outward),
            BaseSpec::sphere(1.5, Orientation::Inward),
        ] {
            let j = solve_jacobi(&m, base, 0.9).unwrap();
            let quad = index_form(&m, base, 0.9, &PerturbationField::from_jacobi(&j)).unwrap();
            assert!((quad - index_form_of_jacobi(&j)).abs() < 1e-8);
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let m = ModelManifold::builtin("ripple", 2).unwrap();
        let k = |t: f64| m.radial_sectional_curvature(t.max(1e-9)).unwrap_or(0.0);
        let a = solve_scalar_jacobi(k, 0.0, 1.0, 4.0).unwrap();
        let b = solve_scalar_jacobi(k, 1.0, 0.3, 4.0).unwrap();
        let w0 = {
            let (x, y) = (a.eval(0.0), b.eval(0.0));
            x[0] * y[1] - y[0] * x[1]
        };
        for i in 0..=80 {
            let t = 4.0 * i as f64 / 80.0;
            let (x, y) = (a.eval(t), b.eval(t));
            let w = x[0] * y[1] - y[0] * x[1];
            assert!((w - w0).abs() < 1e-8 * w0.abs(), "t={t}: {w} vs {w0}");
        }
    }

    #[test]
    fn ode_residual_is_small() {
        for c in [-2.0, 0.0, 1.0] {
            assert!(polar(c, 2, 2.0).max_ode_residual() < 1e-6);
        }
        let m = ModelManifold::builtin("tanh_cigar", 3).unwrap();
        let f = solve_jacobi(&m, BaseSpec::PolarPoint, 3.0).unwrap();
        assert!(f.max_ode_residual() < 1e-6);
    }

    #[test]
    fn minimizing_property_on_random_competitors() {
        for (c, t0) in [(0.0, 1.0), (-1.0, 2.0)] {
            let m = ModelManifold::space_form(c, 2).unwrap();
            let rep = check_minimizing(&m, BaseSpec::PolarPoint, t0, 100, 7).unwrap();
            assert_eq!(rep.margins.len(), 100);
            assert!(rep.min_margin >= -1e-9, "c={c}: {}", rep.min_margin);
        }
        let m = ModelManifold::space_form(1.0, 3).unwrap();
        let rep = check_minimizing(&m, BaseSpec::sphere(0.5, Orientation::Outward), 0.8, 30, 3).unwrap();
        assert!(rep.min_margin >= -1e-9);
    }

    #[test]
    fn jacobi_itself_has_zero_margin() {
        let m = ModelManifold::space_form(-1.0, 2).unwrap();
        let j = solve_jacobi(&m, BaseSpec::PolarPoint, 1.5).unwrap();
        let i = index_form(&m, BaseSpec::PolarPoint, 1.5, &PerturbationField::from_jacobi(&j)).unwrap();
        assert!((i - index_form_of_jacobi(&j)).abs() < 1e-9);
    }

    #[test]
    fn minimizing_check_is_reproducible() {
        let m = ModelManifold::space_form(-1.0, 2).unwrap();
        let a = check_minimizing(&m, BaseSpec::PolarPoint, 1.0, 10, 42).unwrap();
        let b = check_minimizing(&m, BaseSpec::PolarPoint, 1.0, 10, 42).unwrap();
        assert_eq!(a.margins, b.margins);
    }

    #[test]
    fn csv_export_has_expected_columns() {
        let csv = polar(0.0, 2, 0.1).to_csv();
        assert!(csv.starts_with("t,j,j_prime\n"));
        assert!(csv.lines().count() > 2);
    }
}
