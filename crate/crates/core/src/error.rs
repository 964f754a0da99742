//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the laboratory's fallible operations.
///
/// Verdict-style checks (parameter validation, physicality screening) return
/// their findings as data instead of errors; this enum covers genuine failure
/// paths: domain preconditions, numerical non-convergence, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters violate one or more invariants.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    /// β = ω_c Γ′ / (2 ω_0 N Γ↓) divides by Γ↓.
    #[error("beta undefined: gamma_down must be > 0")]
    BetaUndefined,

    /// An operation needs a strictly positive rate or coupling.
    #[error("{context} requires {name} > 0")]
    RequiresPositive {
        context: &'static str,
        name: &'static str,
    },

    /// Adaptive integrator drove the step size below the useful resolution.
    /// Carries the time and the last accepted state vector.
    #[error("step size underflow at t = {t:.6e}")]
    StepUnderflow { t: f64, last: Vec<f64> },

    /// Integration consumed its step budget before reaching the end time.
    #[error("step budget ({steps}) exhausted at t = {t:.6e}")]
    StepBudgetExhausted { t: f64, steps: usize },

    /// Newton refinement did not reach the requested residual.
    #[error("fixed-point refinement stalled after {iters} iterations (best residual {best:.3e}, target {tol:.3e})")]
    NewtonStalled { iters: usize, best: f64, tol: f64 },

    /// Newton refinement hit a numerically singular Jacobian.
    #[error("singular Jacobian during fixed-point refinement (iteration {iter})")]
    SingularJacobian { iter: usize },

    /// QR iteration failed to converge on the spectrum.
    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,

    /// An eigenpair failed its backward-error certificate.
    #[error("eigenpair backward error {err:.3e} exceeds bound {bound:.3e}")]
    EigenBackwardError { err: f64, bound: f64 },

    /// Stability analysis of a branch that failed physicality screening.
    #[error("{op} rejects a non-physical branch ({defects})", defects = .defects.join("; "))]
    NonPhysicalBranch {
        op: &'static str,
        defects: Vec<String>,
    },

    /// Bisection cannot start: predicate identical at both bracket ends.
    #[error("predicate is constant over the bracket [{lo}, {hi}]")]
    PredicateConstant { lo: f64, hi: f64 },

    /// A sweep axis names a parameter that cannot be swept.
    #[error("unknown sweep parameter '{0}'")]
    UnknownAxis(String),

    /// Requested Hilbert space exceeds the desk-scale cap.
    #[error("Hilbert dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// Superoperator matrix would exceed the materialization cap.
    #[error("superoperator side {side} exceeds cap² = {cap}²")]
    SuperopCap { side: usize, cap: usize },

    /// A density matrix violated Hermiticity, trace or positivity tolerances.
    #[error("density-matrix invariant violated: {0}")]
    InvalidDensity(String),

    /// Moment-equation check requested on a state with too much population
    /// near the Fock cutoff for the truncation to be faithful.
    #[error("population {pop:.3e} beyond fock_cutoff - 4 exceeds limit {limit:.3e}")]
    SupportLeakage { pop: f64, limit: f64 },

    /// The Liouvillian null space is (numerically) more than one-dimensional.
    #[error("degenerate steady-state space: second singular value {sigma:.3e}")]
    DegenerateSteadyState { sigma: f64 },

    /// File output failure, with the offending path.
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Config-file parse problem.
    #[error("config: {0}")]
    Config(String),
}
