//! Closed-form steady-state branches and their physicality screening.
//!
//! Setting the six mean-field derivatives to zero yields, besides the normal
//! fixed point (0, 0, 0, 0, 0, −1), a pair of symmetry-broken branches. The
//! spin inversion solves the quadratic (re-derived from the fixed-point
//! conditions; note the g² in the last coefficient)
//!
//! ```text
//! jz² + (1 + β) jz + β g_t²/g² = 0,      β = ω_c Γ′ / (2 ω_0 N Γ↓),
//! ```
//!
//! whose physical root is jz = −(1+β)/2 + √[((1+β)/2)² − β g_t²/g²]. The
//! remaining components follow in closed form:
//!
//! ```text
//! jx² = (κ² + 4ω_c²)/(16 g² N) + 2 ω_0 ω_c jz / (N (4ω_0² + Γ′²))
//! jy  = −(Γ′/2ω_0) jx
//! x   = 8 g ω_c √N jx / (16 g² N jx² − (κ² + 4ω_c²))
//! v   = κ x / (2ω_c)
//! n   = −g √N jx x / ω_c
//! ```
//!
//! Both sign branches of jx are returned; they map onto each other under the
//! Z₂ flip. When the jz discriminant or jx² turns negative the branch pair is
//! complex-valued and does not exist as a real steady state (the small-g
//! regime). The second root of the quadratic is available behind
//! [`RootChoice::Diagnostic`] but never enters phase classification.

use crate::dynamics::{rhs, MeanFieldState};
use crate::error::Error;
use crate::model::{ModelParams, ValidationScope};
use crate::stability;

/// Physicality tolerance on n ≥ 0 and |j_u| ≤ 1 (absorbs floating-point
/// noise without masking real violations).
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Which steady-state branch a record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    /// The zero-field branch.
    Normal,
    /// Symmetry-broken branch with jx > 0.
    SuperradiantPlus,
    /// Symmetry-broken branch with jx < 0.
    SuperradiantMinus,
    /// Second root of the jz quadratic (diagnostic only; not part of the
    /// phase classification).
    DiagnosticSecondRoot,
}

/// Root selection for the jz quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootChoice {
    /// The physical “+” root (default everywhere).
    #[default]
    Physical,
    /// The “−” root, exposed for diagnostics only. It yields a real state
    /// only between the existence edge and the g where jx² crosses zero
    /// (near the decoupling point); outside that window the pair is
    /// reported as complex-valued.
    Diagnostic,
}

/// One steady-state branch with its physicality verdict.
#[derive(Debug, Clone)]
pub struct SteadyStateBranch {
    /// Which branch this is.
    pub label: BranchLabel,
    /// The six mean-field components.
    pub state: MeanFieldState,
    /// True when the state passes [`is_physical`].
    pub physical: bool,
    /// Violated physicality conditions (empty when `physical`).
    pub defects: Vec<String>,
}

impl SteadyStateBranch {
    fn screened(label: BranchLabel, state: MeanFieldState) -> Self {
        let (physical, defects) = is_physical(&state);
        Self {
            label,
            state,
            physical,
            defects,
        }
    }

    /// ‖rhs‖∞ at the branch — the defining residual.
    pub fn residual(&self, params: &ModelParams) -> f64 {
        rhs(&self.state, params).norm()
    }

    /// One-line record: label, six components, physical flag, residual.
    pub fn report(&self, params: &ModelParams) -> String {
        let s = self.state;
        format!(
            "{:?} x={:.10e} v={:.10e} n={:.10e} jx={:.10e} jy={:.10e} jz={:.10e} physical={} residual={:.3e}",
            self.label, s.x, s.v, s.n, s.jx, s.jy, s.jz, self.physical, self.residual(params)
        )
    }
}

/// Why no superradiant branch pair exists at the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonexistenceReason {
    /// jz discriminant or jx² negative: the closed-form solution is
    /// complex-valued (small-g regime).
    ComplexValued,
}

/// The normal branch (0, 0, 0, 0, 0, −1); exists for every parameter set
/// and is physical by construction.
pub fn normal_branch(_params: &ModelParams) -> SteadyStateBranch {
    SteadyStateBranch::screened(BranchLabel::Normal, MeanFieldState::normal())
}

/// Outcome of the branch computation: either the Z₂ pair or the reason no
/// real branch exists at these parameters.
#[derive(Debug, Clone)]
pub enum Branches {
    /// Both sign branches, Plus first.
    Pair([SteadyStateBranch; 2]),
    /// No real solution.
    None(NonexistenceReason),
}

impl Branches {
    /// The branch pair, or the nonexistence reason.
    pub fn into_pair(self) -> Result<[SteadyStateBranch; 2], NonexistenceReason> {
        match self {
            Branches::Pair(pair) => Ok(pair),
            Branches::None(reason) => Err(reason),
        }
    }

    /// Borrowing accessor for the pair.
    pub fn pair(&self) -> Option<&[SteadyStateBranch; 2]> {
        match self {
            Branches::Pair(pair) => Some(pair),
            Branches::None(_) => None,
        }
    }

    /// True when a real branch pair exists.
    pub fn exists(&self) -> bool {
        matches!(self, Branches::Pair(_))
    }
}

/// The symmetry-broken branch pair (exactly two entries, Plus then Minus),
/// or the reason none exists.
///
/// Requires κ > 0, Γ↓ > 0 and g > 0 (the closed forms divide by them).
pub fn superradiant_branches(params: &ModelParams) -> Result<Branches, Error> {
    superradiant_branches_with(params, RootChoice::Physical)
}

/// [`superradiant_branches`] with an explicit jz root choice. The diagnostic
/// root is reported with [`BranchLabel::DiagnosticSecondRoot`] on both signs.
pub fn superradiant_branches_with(
    params: &ModelParams,
    root: RootChoice,
) -> Result<Branches, Error> {
    let params = params.validated(ValidationScope::SteadyState)?;
    let d = params.derived_rates()?;
    let (beta, g_t, gp) = (d.beta, d.g_t, d.gamma_prime);
    let ModelParams {
        omega_c,
        omega_0,
        g,
        kappa,
        ..
    } = params;
    let n_f = params.n();
    let sqrt_n = params.sqrt_n();

    let half = 0.5 * (1.0 + beta);
    let disc = half * half - beta * g_t * g_t / (g * g);
    if disc < 0.0 {
        return Ok(Branches::None(NonexistenceReason::ComplexValued));
    }
    let jz = match root {
        RootChoice::Physical => -half + disc.sqrt(),
        RootChoice::Diagnostic => -half - disc.sqrt(),
    };

    let jx2 = (kappa * kappa + 4.0 * omega_c * omega_c) / (16.0 * g * g * n_f)
        + 2.0 * omega_0 * omega_c * jz / (n_f * (4.0 * omega_0 * omega_0 + gp * gp));
    if jx2 < 0.0 {
        return Ok(Branches::None(NonexistenceReason::ComplexValued));
    }

    let build = |sign: f64| {
        let jx = sign * jx2.sqrt();
        let jy = -gp / (2.0 * omega_0) * jx;
        let x = 8.0 * g * omega_c * sqrt_n * jx
            / (16.0 * g * g * n_f * jx * jx - (kappa * kappa + 4.0 * omega_c * omega_c));
        let v = kappa * x / (2.0 * omega_c);
        let n = -g * sqrt_n * jx * x / omega_c;
        let label = match (root, sign > 0.0) {
            (RootChoice::Physical, true) => BranchLabel::SuperradiantPlus,
            (RootChoice::Physical, false) => BranchLabel::SuperradiantMinus,
            (RootChoice::Diagnostic, _) => BranchLabel::DiagnosticSecondRoot,
        };
        SteadyStateBranch::screened(label, MeanFieldState::new(x, v, n, jx, jy, jz))
    };

    Ok(Branches::Pair([build(1.0), build(-1.0)]))
}

/// Physicality screen: n ≥ −tol, |j_u| ≤ 1 + tol, all components finite.
/// Returns the verdict together with every violated condition.
pub fn is_physical(state: &MeanFieldState) -> (bool, Vec<String>) {
    let mut defects = Vec::new();
    if !state.is_finite() {
        defects.push("non-finite component".to_string());
    }
    if state.n < -PHYSICALITY_TOL {
        defects.push(format!("negative photon number (n = {:.6e})", state.n));
    }
    for (name, value) in [("jx", state.jx), ("jy", state.jy), ("jz", state.jz)] {
        if value.abs() > 1.0 + PHYSICALITY_TOL {
            defects.push(format!(
                "Bloch component out of range ({name} = {value:.6e})"
            ));
        }
    }
    (defects.is_empty(), defects)
}

/// Damped Newton iteration on rhs = 0, using the analytic flow Jacobian.
///
/// Halves the step (up to 40 times) until the residual decreases, and stops
/// once ‖rhs‖∞ < `tol`. Fails after 100 iterations or on a singular
/// Jacobian.
pub fn refine_fixed_point(
    guess: &MeanFieldState,
    params: &ModelParams,
    tol: f64,
) -> Result<MeanFieldState, Error> {
    const MAX_ITERS: usize = 100;
    let mut y = *guess;
    let mut res = rhs(&y, params);
    let mut res_norm = res.norm();
    assert!(res_norm.is_finite(), "rhs must be finite at the guess");

    for iter in 0..MAX_ITERS {
        if res_norm < tol {
            return Ok(y);
        }
        let jac = stability::jacobian_at(&y, params);
        let minus_f = nalgebra::SVector::<f64, 6>::from_column_slice(&res.to_array()) * -1.0;
        let step = jac
            .lu()
            .solve(&minus_f)
            .ok_or(Error::SingularJacobian { iter })?;

        // Backtracking line search on the residual norm.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = MeanFieldState::from_array(std::array::from_fn(|i| {
                y.to_array()[i] + lambda * step[i]
            }));
            let trial_res = rhs(&trial, params);
            let trial_norm = trial_res.norm();
            if trial_norm.is_finite() && trial_norm < res_norm {
                y = trial;
                res = trial_res;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonStalled {
                iters: iter + 1,
                best: res_norm,
                tol,
            });
        }
    }
    if res_norm < tol {
        Ok(y)
    } else {
        Err(Error::NewtonStalled {
            iters: MAX_ITERS,
            best: res_norm,
            tol,
        })
    }
}
