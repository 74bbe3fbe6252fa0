//! Independent finite-difference check of graph curvatures.
//!
//! Works in an ambient chart `(t, x, h)` of `M x R`, with `x` stereographic
//! coordinates on the unit sphere, so the product metric is
//! `diag(1, phi(t)^2 * 4/(1+|x|^2)^2 * I, 1)`. Christoffel symbols come from
//! differentiating this metric numerically, the shape operator from
//! `II_ab = <D_a X_b, N>` and the graph metric, and the principal curvatures
//! from a symmetric generalized eigenproblem. Nothing here uses Jacobi fields.

use nalgebra::{DMatrix, DVector};

use crate::curvature::{CurvatureReport, HeightProfile};
use crate::error::{Error, Result};
use crate::manifold::{BaseSpec, ModelManifold};

/// Relative step for metric derivatives.
const METRIC_STEP: f64 = 1e-5;
/// Step for second derivatives of the immersion.
const IMMERSION_STEP: f64 = 1e-3;

/// Oracle output: the assembled report plus the raw tangential eigenvalues.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub report: CurvatureReport,
    pub tangential_eigenvalues: Vec<f64>,
}

struct Chart<'a> {
    manifold: &'a ModelManifold,
    n: usize,
}

impl Chart<'_> {
    fn dim(&self) -> usize {
        self.n + 1
    }

    /// Diagonal of the ambient metric at `p = (t, x_1..x_{n-1}, h)`.
    fn metric_diag(&self, p: &[f64]) -> Vec<f64> {
        let phi = self.manifold.warp(p[0]);
        let r2: f64 = p[1..self.n].iter().map(|x| x * x).sum();
        let conformal = 2.0 / (1.0 + r2);
        let sphere = phi * phi * conformal * conformal;
        let mut g = vec![sphere; self.dim()];
        g[0] = 1.0;
        g[self.n] = 1.0;
        g
    }

    /// `d_m G_kk` at `p` by central differences with one Richardson level.
    fn metric_derivatives(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let d = self.dim();
        let step = METRIC_STEP * p[0].abs().max(1.0);
        (0..d)
            .map(|m| {
                let central = |h: f64| {
                    let mut plus = p.to_vec();
                    let mut minus = p.to_vec();
                    plus[m] += h;
                    minus[m] -= h;
                    let gp = self.metric_diag(&plus);
                    let gm = self.metric_diag(&minus);
                    gp.iter()
                        .zip(&gm)
                        .map(|(a, b)| (a - b) / (2.0 * h))
                        .collect::<Vec<f64>>()
                };
                let coarse = central(step);
                let fine = central(0.5 * step);
                fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
            })
            .collect()
    }

    /// `Gamma^k_ij` for the diagonal metric, indexed `[k][i][j]`.
    fn christoffel(&self, p: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let d = self.dim();
        let g = self.metric_diag(p);
        let dg = self.metric_derivatives(p);
        let mut gamma = vec![vec![vec![0.0; d]; d]; d];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    // d_i G_jk + d_j G_ik - d_k G_ij, diagonal entries only
                    let mut s = 0.0;
                    if j == k {
                        s += dg[i][k];
                    }
                    if i == k {
                        s += dg[j][k];
                    }
                    if i == j {
                        s -= dg[k][i];
                    }
                    gk[i][j] = 0.5 * s / g[k];
                }
            }
        }
        gamma
    }
}

fn generic_sphere_point(dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|i| 0.31 * (-0.67f64).powi(i as i32) + 0.05 * i as f64)
        .collect()
}

/// Curvatures of the radial graph of `f` at radius `t`, computed from the embedding.
pub fn fd_oracle(manifold: &ModelManifold, base: BaseSpec, f: &HeightProfile, t: f64) -> Result<OracleReport> {
    if base != BaseSpec::PolarPoint {
        return Err(Error::Oracle("only polar bases are supported".into()));
    }
    let margin = 10.0 * IMMERSION_STEP * t.abs().max(1.0);
    let (f_lo, f_hi) = f.domain();
    if t < margin || t + margin > manifold.t_max() || t - margin < f_lo || t + margin > f_hi {
        return Err(Error::Oracle(format!("t = {t} is within {margin} of a domain edge")));
    }
    let n = manifold.dim();
    let chart = Chart { manifold, n };
    let d = n + 1;
    let x0 = generic_sphere_point(n - 1);

    // graph coordinates u = (t, x); immersion X(u) = (t, x, f(t))
    let immersion = |u: &[f64]| -> Result<Vec<f64>> {
        let mut p = u.to_vec();
        p.push(f.value(u[0])?);
        Ok(p)
    };
    let mut u0 = vec![t];
    u0.extend(&x0);
    let p0 = immersion(&u0)?;

    let h1 = METRIC_STEP * t.max(1.0);
    let first = |a: usize, h: f64| -> Result<Vec<f64>> {
        let mut up = u0.clone();
        let mut um = u0.clone();
        up[a] += h;
        um[a] -= h;
        let (xp, xm) = (immersion(&up)?, immersion(&um)?);
        Ok(xp.iter().zip(&xm).map(|(p, m)| (p - m) / (2.0 * h)).collect())
    };
    let mut tangents = Vec::with_capacity(n);
    for a in 0..n {
        let c = first(a, h1)?;
        let fi = first(a, 0.5 * h1)?;
        tangents.push(
            fi.iter()
                .zip(&c)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect::<Vec<f64>>(),
        );
    }

    let h2 = IMMERSION_STEP * t.max(1.0);
    let second = |a: usize, b: usize, h: f64| -> Result<Vec<f64>> {
        let shifted = |sa: f64, sb: f64| -> Result<Vec<f64>> {
            let mut u = u0.clone();
            u[a] += sa;
            u[b] += sb;
            immersion(&u)
        };
        let (pp, pm, mp, mm) = (shifted(h, h)?, shifted(h, -h)?, shifted(-h, h)?, shifted(-h, -h)?);
        Ok((0..d)
            .map(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h))
            .collect())
    };

    let g = chart.metric_diag(&p0);
    let gamma = chart.christoffel(&p0);
    let inner = |v: &[f64], w: &[f64]| -> f64 { (0..d).map(|k| g[k] * v[k] * w[k]).sum() };

    // unit normal: kernel of the map v -> (<v, X_a>)_a, oriented upward
    let mut a_mat = DMatrix::<f64>::zeros(n, d);
    for (a, x_a) in tangents.iter().enumerate() {
        for k in 0..d {
            a_mat[(a, k)] = g[k] * x_a[k];
        }
    }
    let gram = a_mat.transpose() * &a_mat;
    let eig = gram.symmetric_eigen();
    let (kmin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .ok_or_else(|| Error::Oracle("empty eigenproblem".into()))?;
    let mut normal: Vec<f64> = eig.eigenvectors.column(kmin).iter().copied().collect();
    let norm = inner(&normal, &normal).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Oracle("degenerate normal".into()));
    }
    let sign = if normal[n] < 0.0 { -1.0 } else { 1.0 };
    for v in &mut normal {
        *v *= sign / norm;
    }

    let mut metric = DMatrix::<f64>::zeros(n, n);
    let mut second_form = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            metric[(a, b)] = inner(&tangents[a], &tangents[b]);
            metric[(b, a)] = metric[(a, b)];
            let coarse = second(a, b, h2)?;
            let fine = second(a, b, 0.5 * h2)?;
            let mut accel: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
            for (k, acc) in accel.iter_mut().enumerate() {
                for i in 0..d {
                    for j in 0..d {
                        *acc += gamma[k][i][j] * tangents[a][i] * tangents[b][j];
                    }
                }
            }
            second_form[(a, b)] = inner(&accel, &normal);
            second_form[(b, a)] = second_form[(a, b)];
        }
    }

    // S = g^{-1} II via L^{-1} II L^{-T}
    let chol = metric
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Oracle("graph metric is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Oracle("ill-conditioned graph metric".into()))?;
    let sym = &l_inv * &second_form * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut best = 0;
    let mut best_score = -1.0;
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let w: DVector<f64> = l_inv.transpose() * eig.eigenvectors.column(i);
        let gnorm = (w.transpose() * &metric * &w)[(0, 0)].sqrt();
        let score = w[0].abs() / gnorm;
        if score > best_score {
            best_score = score;
            best = i;
        }
        pairs.push(eig.eigenvalues[i]);
    }
    let k_vertical = pairs[best];
    let mut tangential: Vec<f64> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, v)| *v)
        .collect();
    tangential.sort_by(f64::total_cmp);
    let k_tangential = tangential.iter().sum::<f64>() / tangential.len() as f64;
    let nu = -inner(&normal, &{
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    });
    Ok(OracleReport {
        report: CurvatureReport::assemble(n, t, nu, k_vertical, k_tangential),
        tangential_eigenvalues: tangential,
    })
}

/// [`fd_oracle`] reduced to its report.
pub fn fd_oracle_report(
    manifold: &ModelManifold,
    base: BaseSpec,
    f: &HeightProfile,
    t: f64,
) -> Result<CurvatureReport> {
    Ok(fd_oracle(manifold, base, f, t)?.report)
}

/// Largest componentwise deviation `|a - b| / max(|a|, |b|, floor)` between two reports.
pub fn report_deviation(a: &CurvatureReport, b: &CurvatureReport, floor: f64) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(floor);
    let mut worst = rel(a.k_vertical, b.k_vertical)
        .max(rel(a.k_tangential, b.k_tangential))
        .max(rel(a.mean, b.mean))
        .max(rel(a.gauss_kronecker, b.gauss_kronecker))
        .max(rel(a.nu, b.nu));
    for (x, y) in a.h_r.iter().zip(&b.h_r) {
        worst = worst.max(rel(*x, *y));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_report;

    #[test]
    fn matches_lemma_on_quadratic_flat_case() {
        let m = ModelManifold::space_form(0.0, 2).unwrap();
        let f = HeightProfile::half_square();
        let a = fd_oracle_report(&m, BaseSpec::PolarPoint, &f, 1.0).unwrap();
        let b = curvature_report(&m, BaseSpec::PolarPoint, &f, 1.0).unwrap();
        assert!(report_deviation(&a, &b, 1e-8) < 1e-5, "{a:?} vs {b:?}");
    }

    #[test]
    fn constant_profile_gives_zero() {
        let m = ModelManifold::space_form(-1.0, 3).unwrap();
        let r = fd_oracle_report(&m, BaseSpec::PolarPoint, &HeightProfile::constant(0.4), 1.0).unwrap();
        for v in [r.k_vertical, r.k_tangential, r.mean, r.gauss_kronecker, r.nu] {
            assert!(v.abs() < 1e-7, "{r:?}");
        }
    }

    #[test]
    fn hyperbolic_linear_case_and_umbilicity() {
        let m = ModelManifold::space_form(-1.0, 3).unwrap();
        let f = HeightProfile::linear();
        let o = fd_oracle(&m, BaseSpec::PolarPoint, &f, 1.5).unwrap();
        let b = curvature_report(&m, BaseSpec::PolarPoint, &f, 1.5).unwrap();
        assert!(report_deviation(&o.report, &b, 1e-8) < 1e-5);
        let e = &o.tangential_eigenvalues;
        assert!((e[0] - e[1]).abs() < 1e-6);
    }

    #[test]
    fn sign_of_sphere_curvature_matches_oracle() {
        // positive curvature warp: the sign of j'/j enters k_tangential
        let m = ModelManifold::builtin("tanh_cigar", 3).unwrap();
        let f = HeightProfile::log_cosh();
        let a = fd_oracle_report(&m, BaseSpec::PolarPoint, &f, 0.7).unwrap();
        let b = curvature_report(&m, BaseSpec::PolarPoint, &f, 0.7).unwrap();
        assert!(report_deviation(&a, &b, 1e-8) < 1e-5);
    }

    #[test]
    fn agrees_on_space_form_grid() {
        let mut worst = 0.0f64;
        for c in [-2.0, -1.0, 0.0, 1.0] {
            for n in [2, 4] {
                let m = ModelManifold::space_form(c, n).unwrap();
                for f in [
                    HeightProfile::linear(),
                    HeightProfile::half_square(),
                    HeightProfile::log_cosh(),
                ] {
                    for t in [0.5, 1.0, 1.5] {
                        let a = fd_oracle_report(&m, BaseSpec::PolarPoint, &f, t).unwrap();
                        let b = curvature_report(&m, BaseSpec::PolarPoint, &f, t).unwrap();
                        worst = worst.max(report_deviation(&a, &b, 1e-8));
                    }
                }
            }
        }
        assert!(worst < 1e-6, "worst deviation {worst}");
    }

    #[test]
    fn refuses_sphere_bases_and_edges() {
        let m = ModelManifold::space_form(0.0, 2).unwrap();
        let f = HeightProfile::linear();
        assert!(fd_oracle_report(&m, BaseSpec::sphere(1.0, crate::Orientation::Outward), &f, 1.0).is_err());
        assert!(fd_oracle_report(&m, BaseSpec::PolarPoint, &f, 1e-3).is_err());
    }
}
