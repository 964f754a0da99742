//! Mean-field equations of motion and trajectory integration.
//!
//! After mean-field decoupling, the open system closes on six real moments.
//! With ⟨X⟩ = ⟨a² + a†²⟩ = x real and the anti-Hermitian ⟨Y⟩ = ⟨a² − a†²⟩
//! written as i·v (v real), the flow is
//!
//! ```text
//! dx/dt  = −κ x + 2ω_c v
//! dv/dt  = −κ v − 2ω_c x − 4 g √N jx (1 + 2n)
//! dn/dt  = −2 g √N jx v − κ n
//! djx/dt = −2ω_0 jy − Γ′ jx
//! djy/dt =  2ω_0 jx − Γ′ jy − (2g/√N) jz x
//! djz/dt =  (2g/√N) jy x − Γ↓ jz − Γ↓
//! ```
//!
//! where n = ⟨a†a⟩ and j_u = ⟨(1/N) Σ σ_u⟩. The de-complexification keeps
//! every coefficient real, so the Jacobians of the flow are real too. The
//! flow is Z₂-equivariant under (x, v, jx, jy) → −(x, v, jx, jy) — the
//! mean-field shadow of the four-fold symmetry a → ia, σx → −σx.

use std::path::Path;

use crate::error::Error;
use crate::model::ModelParams;
use crate::ode::{self, Options, StopReason};
use crate::textio;

/// Any mean-field component beyond this magnitude counts as divergence
/// (dimensionless in ω_c units; instability growth is exponential, so any
/// bound ≫ 1 gives the same verdict).
pub const DIVERGENCE_BOUND: f64 = 1e6;

/// The six real mean-field variables.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanFieldState {
    /// ⟨a² + a†²⟩.
    pub x: f64,
    /// v in ⟨a² − a†²⟩ = i·v.
    pub v: f64,
    /// Photon number ⟨a†a⟩.
    pub n: f64,
    /// Collective spin ⟨J_x⟩ ∈ [−1, 1] when physical.
    pub jx: f64,
    /// Collective spin ⟨J_y⟩.
    pub jy: f64,
    /// Collective spin ⟨J_z⟩.
    pub jz: f64,
}

impl MeanFieldState {
    /// Builds a state from the component order (x, v, n, jx, jy, jz).
    pub const fn new(x: f64, v: f64, n: f64, jx: f64, jy: f64, jz: f64) -> Self {
        Self { x, v, n, jx, jy, jz }
    }

    /// The normal fixed point: zero field, fully polarized spins.
    pub const fn normal() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0)
    }

    /// Components as an array in canonical order.
    pub const fn to_array(self) -> [f64; 6] {
        [self.x, self.v, self.n, self.jx, self.jy, self.jz]
    }

    /// Inverse of [`MeanFieldState::to_array`].
    pub const fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    /// Max-norm of the component-wise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        a.iter()
            .zip(b)
            .fold(0.0_f64, |m, (ai, bi)| m.max((ai - bi).abs()))
    }

    /// Max-norm of the components.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Image under the Z₂ symmetry (x, v, jx, jy) → −(x, v, jx, jy).
    pub fn z2_flipped(&self) -> Self {
        Self::new(-self.x, -self.v, self.n, -self.jx, -self.jy, self.jz)
    }

    /// True when all components are finite.
    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

/// Time derivative of the mean-field state.
pub fn rhs(state: &MeanFieldState, params: &ModelParams) -> MeanFieldState {
    let MeanFieldState { x, v, n, jx, jy, jz } = *state;
    let ModelParams {
        omega_c,
        omega_0,
        g,
        kappa,
        gamma_down,
        ..
    } = *params;
    let gp = params.gamma_prime();
    let g_rt_n = g * params.sqrt_n();
    let g_over_rt_n = g / params.sqrt_n();

    MeanFieldState {
        x: -kappa * x + 2.0 * omega_c * v,
        v: -kappa * v - 2.0 * omega_c * x - 4.0 * g_rt_n * jx * (1.0 + 2.0 * n),
        n: -2.0 * g_rt_n * jx * v - kappa * n,
        jx: -2.0 * omega_0 * jy - gp * jx,
        jy: 2.0 * omega_0 * jx - gp * jy - 2.0 * g_over_rt_n * jz * x,
        jz: 2.0 * g_over_rt_n * jy * x - gamma_down * jz - gamma_down,
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// ‖rhs‖∞ dropped below 10·abs_tol over a full accepted step.
    Converged,
    /// Integrated to t_max without settling or escaping.
    MaxTimeReached,
    /// A component exceeded [`DIVERGENCE_BOUND`]; records the escape time.
    /// The trajectory keeps the last finite state.
    Diverged { escape_time: f64 },
}

/// Accepted-step samples of one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    /// One state per sample time.
    pub states: Vec<MeanFieldState>,
    /// Final verdict.
    pub outcome: Outcome,
}

impl Trajectory {
    /// Final state (the last finite one for diverged runs).
    pub fn final_state(&self) -> MeanFieldState {
        *self.states.last().expect("trajectory holds at least t0")
    }

    /// Final sample time.
    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t0")
    }

    /// Renders the trajectory as CSV with header `t,x,v,n,jx,jy,jz` and
    /// 17-significant-digit floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,v,n,jx,jy,jz\n");
        for (t, s) in self.times.iter().zip(&self.states) {
            let row = [*t, s.x, s.v, s.n, s.jx, s.jy, s.jz]
                .map(textio::format_float)
                .join(",");
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    /// Writes [`Trajectory::to_csv`] to a file.
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        textio::write_text(path, &self.to_csv())
    }
}

/// Integrates the mean-field flow from `state0` over [0, t_max] with an
/// adaptive Dormand–Prince 5(4) stepper.
///
/// Convergence is declared when ‖rhs‖∞ < 10·abs_tol on an accepted step;
/// divergence when any component exceeds [`DIVERGENCE_BOUND`]. Step-size
/// underflow surfaces as [`Error::StepUnderflow`] carrying the last state.
pub fn integrate(
    state0: &MeanFieldState,
    params: &ModelParams,
    t_max: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Trajectory, Error> {
    assert!(t_max > 0.0, "t_max must be positive");
    let opts = Options {
        rel_tol,
        abs_tol,
        settle_threshold: Some(10.0 * abs_tol),
        divergence_bound: Some(DIVERGENCE_BOUND),
        ..Options::default()
    };
    let f = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let d = rhs(
            &MeanFieldState::new(y[0], y[1], y[2], y[3], y[4], y[5]),
            params,
        );
        dy.copy_from_slice(&d.to_array());
    };
    let sol = ode::dopri5(f, &state0.to_array(), 0.0, t_max, &opts)?;
    let outcome = match sol.reason {
        StopReason::Settled => Outcome::Converged,
        StopReason::TimeReached => Outcome::MaxTimeReached,
        StopReason::Diverged => Outcome::Diverged {
            escape_time: sol.t_end(),
        },
    };
    Ok(Trajectory {
        times: sol.times,
        states: sol
            .states
            .into_iter()
            .map(|y| MeanFieldState::new(y[0], y[1], y[2], y[3], y[4], y[5]))
            .collect(),
        outcome,
    })
}

///// Endpoint-only wrapper over [`integrate`]: rel_tol = tol, abs_tol = tol/100
/// (so the settle rule ‖rhs‖∞ < tol/10 tightens with `tol`).
///
/// Near large-amplitude fixed points the integration noise floor on ‖rhs‖∞
/// (≈ rel_tol × local stiffness × amplitude) can exceed the settle
/// threshold, in which case the run uses the whole `t_max` budget and
/// reports [`Outcome::MaxTimeReached`] even though the endpoint is an
/// accurate fixed-point estimate. Callers that only need the endpoint
/// should treat both outcomes as usable and judge by distance.
pub fn settle(
    state0: &MeanFieldState,
    params: &ModelParams,
    t_max: f64,
    tol: f64,
) -> Result<(MeanFieldState, Outcome), Error> {
    let traj = integrate(state0, params, t_max, tol, tol / 100.0)?;
    Ok((traj.final_state(), traj.outcome))
}
