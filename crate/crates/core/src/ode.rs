//! Adaptive explicit Runge–Kutta integrator (Dormand–Prince 5(4)).
//!
//! One embedded RK pair serves both the six-variable mean-field flow and the
//! flattened density-matrix evolution of the exact oracle, so the stepper
//! works on plain `&[f64]` slices. The controller is the classic elementary
//! one: scaled max-norm error, step factor 0.9·err^(−1/5) clamped to
//! [0.2, 5], first-same-as-last (FSAL) stage reuse.
//!
//! Two optional stop rules beyond reaching `t_end`:
//! * settling — the driver reports convergence once ‖f(y)‖∞ drops below a
//!   threshold over a full accepted step (the FSAL stage gives this for free);
//! * divergence — any component leaving ±bound ends the run with a diverged
//!   verdict recording the escape time and the last finite state.

use crate::error::Error;

/// Butcher tableau of the Dormand–Prince 5(4) pair.
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
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
/// 5th-order weights (also row 7 of A — FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
/// Embedded 4th-order weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

/// Integration controls. `Default` gives rel_tol 1e-8, abs_tol 1e-10 and no
/// settling/divergence rules.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Relative tolerance (per component, scaled max-norm).
    pub rel_tol: f64,
    /// Absolute tolerance.
    pub abs_tol: f64,
    /// Stop early once ‖f(y)‖∞ < this value on an accepted step.
    pub settle_threshold: Option<f64>,
    /// Declare divergence once any |component| exceeds this bound.
    pub divergence_bound: Option<f64>,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            settle_threshold: None,
            divergence_bound: None,
            max_steps: 10_000_000,
        }
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// ‖f(y)‖∞ fell below the settle threshold.
    Settled,
    /// Reached `t_end`.
    TimeReached,
    /// A component left the divergence bound (or turned non-finite).
    Diverged,
}

/// Accepted-step samples plus the stop verdict.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Strictly increasing accepted times, starting at `t0`.
    pub times: Vec<f64>,
    /// State at each accepted time (same length as `times`).
    pub states: Vec<Vec<f64>>,
    /// Stop verdict.
    pub reason: StopReason,
}

impl Solution {
    /// Final accepted time.
    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("solution holds at least t0")
    }

    /// Final accepted state.
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("solution holds at least y0")
    }
}

fn inf_norm(y: &[f64]) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Integrates dy/dt = f(t, y) from `t0` to `t_end` (t_end > t0).
///
/// `f` writes the derivative of `y` into its third argument. Errors on step
/// underflow (carrying the last accepted state) and on step-budget
/// exhaustion; tolerances must lie in (0, 1).
pub fn dopri5<F>(
    mut f: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &Options,
) -> Result<Solution, Error>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    assert!(t_end > t0, "t_end must exceed t0");
    assert!(
        opts.rel_tol > 0.0 && opts.rel_tol < 1.0 && opts.abs_tol > 0.0 && opts.abs_tol < 1.0,
        "tolerances must lie in (0, 1)"
    );
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    f(t, &y, &mut k1);

    let mut solution = Solution {
        times: vec![t0],
        states: vec![y.clone()],
        reason: StopReason::TimeReached,
    };

    // Early exits at the initial point.
    if let Some(th) = opts.settle_threshold {
        if inf_norm(&k1) < th {
            solution.reason = StopReason::Settled;
            return Ok(solution);
        }
    }
    if let Some(bound) = opts.divergence_bound {
        if inf_norm(&y) > bound {
            solution.reason = StopReason::Diverged;
            return Ok(solution);
        }
    }

    // Cheap starting-step guess; the controller corrects it within a step or two.
    let mut h = {
        let d0 = inf_norm(&y);
        let d1 = inf_norm(&k1);
        let guess = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        guess.min(t_end - t0)
    };

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(solution);
        }
        h = h.min(t_end - t);
        if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, last: y });
        }

        // Six derivative stages (k1 carried over via FSAL).
        for i in 0..dim {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &stage, &mut k2);
        for i in 0..dim {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &stage, &mut k3);
        for i in 0..dim {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &stage, &mut k4);
        for i in 0..dim {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &stage, &mut k5);
        for i in 0..dim {
            stage[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &stage, &mut k6);
        for i in 0..dim {
            y_new[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        f(t + h, &y_new, &mut k7);

        // Scaled max-norm of the 5(4) defect. `f64::max` ignores NaN, so
        // non-finite defects must be detected explicitly or they would be
        // silently accepted.
        let mut err: f64 = 0.0;
        let mut defect_finite = true;
        for i in 0..dim {
            let e5 = B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i];
            let e4 = E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i];
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            let e = (h * (e5 - e4) / scale).abs();
            if e.is_finite() {
                err = err.max(e);
            } else {
                defect_finite = false;
                break;
            }
        }
        if !defect_finite {
            // Derivative blew up inside the step: treat as a hard reject
            // unless the state itself has escaped, which is divergence.
            if !y_new.iter().all(|v| v.is_finite()) && opts.divergence_bound.is_some() {
                solution.reason = StopReason::Diverged;
                return Ok(solution);
            }
            h *= 0.2;
            continue;
        }

        if err <= 1.0 {
            // Accept.
            t += h;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            solution.times.push(t);
            solution.states.push(y.clone());

            if let Some(bound) = opts.divergence_bound {
                if inf_norm(&y) > bound {
                    solution.reason = StopReason::Diverged;
                    return Ok(solution);
                }
            }
            if let Some(th) = opts.settle_threshold {
                if inf_norm(&k1) < th {
                    solution.reason = StopReason::Settled;
                    return Ok(solution);
                }
            }
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= factor;
    }
    Err(Error::StepBudgetExhausted {
        t,
        steps: opts.max_steps,
    })
}
