//! Adaptive Simpson quadrature with a hard subdivision cap.

/// Maximum number of subintervals a single integration may create.
pub const MAX_INTERVALS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance {tol:e} within {MAX_INTERVALS} intervals on [{a}, {b}]")]
    ToleranceNotMet { a: f64, b: f64, tol: f64 },
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-12)
    }
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]`. The effective tolerance is
/// `max(tol.abs, tol.rel * |coarse estimate|)`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_simpson(f, b, a, tol).map(|v| -v);
    }
    let eval = |x: f64| -> Result<f64, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };

    // seed with a uniform 8-panel split; the coarse sum scales the relative tolerance
    const SEED: usize = 8;
    let width = (b - a) / SEED as f64;
    let mut panels = Vec::with_capacity(64);
    let mut coarse = 0.0;
    let mut fa = eval(a)?;
    for k in 0..SEED {
        let pa = a + width * k as f64;
        let pb = if k + 1 == SEED { b } else { a + width * (k + 1) as f64 };
        let pm = 0.5 * (pa + pb);
        let fm = eval(pm)?;
        let fb = eval(pb)?;
        let whole = simpson(pa, pb, fa, fm, fb);
        coarse += whole;
        panels.push(Panel {
            a: pa,
            m: pm,
            b: pb,
            fa,
            fm,
            fb,
            whole,
            tol: 0.0,
            depth: 0,
        });
        fa = fb;
    }
    let total_tol = tol.abs.max(tol.rel * coarse.abs());
    for p in &mut panels {
        p.tol = total_tol / SEED as f64;
    }

    let mut intervals = SEED;
    let mut sum = 0.0;
    let mut compensation = 0.0;
    while let Some(p) = panels.pop() {
        let lm = 0.5 * (p.a + p.m);
        let rm = 0.5 * (p.m + p.b);
        let flm = eval(lm)?;
        let frm = eval(rm)?;
        let left = simpson(p.a, p.m, p.fa, flm, p.fm);
        let right = simpson(p.m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let tiny = (p.b - p.a) <= 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs()).max(1.0);
        if delta.abs() <= 15.0 * p.tol || p.depth >= 60 || tiny {
            // Kahan-summed Richardson-corrected panel
            let value = left + right + delta / 15.0;
            let y = value - compensation;
            let t = sum + y;
            compensation = (t - sum) - y;
            sum = t;
            continue;
        }
        intervals += 1;
        if intervals > MAX_INTERVALS {
            return Err(QuadError::ToleranceNotMet { a, b, tol: total_tol });
        }
        let half = 0.5 * p.tol;
        panels.push(Panel {
            a: p.a,
            m: lm,
            b: p.m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol: half,
            depth: p.depth + 1,
        });
        panels.push(Panel {
            a: p.m,
            m: rm,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol: half,
            depth: p.depth + 1,
        });
    }
    Ok(sum)
}

/// Integrates over consecutive pieces `[x_k, x_{k+1}]` of `breaks`, returning the total.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: Tolerance) -> Result<f64, QuadError> {
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    let piece_tol = Tolerance::new(tol.abs / pieces, tol.rel);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += adaptive_simpson(&f, w[0], w[1], piece_tol)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_transcendental_integrals() {
        let v = adaptive_simpson(|x| x * x, 0.0, 3.0, Tolerance::absolute(1e-12)).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, Tolerance::absolute(1e-12)).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(f64::exp, 0.0, 20.0, Tolerance::new(0.0, 1e-13)).unwrap();
        let exact = 20f64.exp_m1();
        assert!(((v - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, Tolerance::default()).unwrap(), 0.0);
        let v = adaptive_simpson(|x| x, 2.0, 0.0, Tolerance::default()).unwrap();
        assert!((v + 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(QuadError::NonFinite { .. })));
    }

    #[test]
    fn kink_is_resolved() {
        let v = adaptive_simpson(|x: f64| (x - 0.3).abs(), 0.0, 1.0, Tolerance::absolute(1e-12)).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-11);
    }
}
