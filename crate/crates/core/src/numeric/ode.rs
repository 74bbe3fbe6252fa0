//! Adaptive Dormand-Prince 5(4) integrator with cubic Hermite dense output.

use super::interp::{hermite_cubic, hermite_cubic_derivative};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_step: f64,
    /// Upper bound on accepted steps. Also bounds the Hermite interpolation
    /// error of the dense output, which is O(h^4).
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            initial_step: 1e-4,
            max_step: 5e-3,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("exceeded {max_steps} steps before reaching t = {t_end}")]
    TooManySteps { max_steps: usize, t_end: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

/// Accepted steps of an integration, interpolable anywhere in `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    ts: Vec<f64>,
    ys: Vec<[f64; N]>,
    dys: Vec<[f64; N]>,
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.ts.last().expect("non-empty solution")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.ts
    }

    pub fn states(&self) -> &[[f64; N]] {
        &self.ys
    }

    pub fn derivatives(&self) -> &[[f64; N]] {
        &self.dys
    }

    /// Index `k` of the step `[ts[k], ts[k+1]]` containing `t` (clamped).
    fn segment(&self, t: f64) -> usize {
        let last = self.ts.len() - 1;
        if last == 0 {
            return 0;
        }
        match self.ts.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => k.min(last - 1),
            Err(0) => 0,
            Err(k) => (k - 1).min(last - 1),
        }
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.ts.len() == 1 {
            return self.ys[0];
        }
        let k = self.segment(t);
        let (t0, t1) = (self.ts[k], self.ts[k + 1]);
        std::array::from_fn(|i| {
            hermite_cubic(
                t0,
                t1,
                self.ys[k][i],
                self.ys[k + 1][i],
                self.dys[k][i],
                self.dys[k + 1][i],
                t,
            )
        })
    }

    /// Derivative of the Hermite interpolant (not a fresh right-hand side evaluation).
    pub fn eval_derivative(&self, t: f64) -> [f64; N] {
        if self.ts.len() == 1 {
            return self.dys[0];
        }
        let k = self.segment(t);
        let (t0, t1) = (self.ts[k], self.ts[k + 1]);
        std::array::from_fn(|i| {
            hermite_cubic_derivative(
                t0,
                t1,
                self.ys[k][i],
                self.ys[k + 1][i],
                self.dys[k][i],
                self.dys[k + 1][i],
                t,
            )
        })
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order solution minus embedded fourth-order solution
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| {
        let mut acc = 0.0;
        for (coef, k) in terms {
            acc += coef * k[i];
        }
        y[i] + h * acc
    })
}

/// Integrates `y' = rhs(t, y)` from `t_start` to `t_end > t_start`.
pub fn integrate<const N: usize, F>(
    rhs: F,
    t_start: f64,
    y_start: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<DenseSolution<N>, OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    assert!(t_end >= t_start, "integration must run forward");
    let mut t = t_start;
    let mut y = y_start;
    let mut k1 = rhs(t, &y);
    let mut sol = DenseSolution {
        ts: vec![t],
        ys: vec![y],
        dys: vec![k1],
    };
    if t_end == t_start {
        return Ok(sol);
    }

    let span = t_end - t_start;
    let mut h = opts.initial_step.min(opts.max_step).min(span);
    let h_min = 1e-14 * span.max(1.0);
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(OdeError::TooManySteps {
                max_steps: opts.max_steps,
                t_end,
            });
        }
        steps += 1;
        // land exactly on t_end
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { t_end } else { t + h };
        let k7 = rhs(t_new, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if h <= h_min {
                return Err(OdeError::NonFinite { t });
            }
            h *= 0.2;
            continue;
        }

        if err <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k7;
            sol.ts.push(t);
            sol.ys.push(y);
            sol.dys.push(k1);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        let next = (h * factor).min(opts.max_step);
        if err > 1.0 && next <= h_min {
            return Err(OdeError::StepUnderflow { t });
        }
        h = next;
    }
    Ok(sol)
}
