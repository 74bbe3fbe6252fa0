//! Numerical building blocks: ODE integration, quadrature, root bracketing
//! and piecewise cubic interpolation.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;

pub use interp::{NaturalSpline, PiecewiseHermite};
pub use ode::{integrate, DenseSolution, OdeError, OdeOptions};
pub use quad::{adaptive_simpson, integrate_piecewise, QuadError, Tolerance};
pub use roots::bisect;

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
