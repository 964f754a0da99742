//! Mean-field laboratory for the driven-dissipative two-photon Dicke model.
//!
//! N two-level systems couple to a single bosonic mode through pair
//! creation/annihilation terms,
//!
//! ```text
//! H = ω_c a†a + ω_0 Σ_j σ_z^j + (g/√N) Σ_j σ_x^j (a² + a†²),
//! ```
//!
//! with Markovian photon loss κ, individual qubit decay Γ↓ and dephasing Γφ.
//! The crate computes, for the mean-field limit of this open system:
//!
//! * trajectories of the six real moment variables ([`dynamics`]),
//! * closed-form steady-state branches ([`steady_state`]),
//! * linear stability and the N/S/B/I phase classification ([`stability`]),
//! * phase-diagram grids, photon-number curves and threshold scans ([`sweep`]),
//!
//! and cross-validates the moment equations against an exact, small-scale
//! Lindblad simulation on a truncated Fock space ([`oracle`]).

pub mod dynamics;
pub mod error;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod stability;
pub mod steady_state;
pub mod sweep;
pub mod textio;

pub use dynamics::{integrate, rhs, settle, MeanFieldState, Outcome, Trajectory};
pub use error::Error;
pub use model::{DerivedRates, ModelParams, QuadraturePotential};
pub use oracle::{
    build_liouvillian, ehrenfest_residual, evolve, run_suite, run_suite_for,
    steady_state_small, suite_params, symmetry_check, symmetry_negative_control,
    z4_generator, DensityState, EhrenfestReport, HilbertSpec, LiouvillianAction,
    OracleSuiteReport, SymmetryReport,
};
pub use stability::{
    classify, classify_with_margin, eigenvalues, jacobian_at, jacobian_normal,
    jacobian_superradiant, spectrum_distance, Classification, PhaseLabel,
    StabilityReport,
};
pub use steady_state::{
    is_physical, normal_branch, refine_fixed_point, superradiant_branches,
    superradiant_branches_with, BranchLabel, Branches, NonexistenceReason, RootChoice,
    SteadyStateBranch,
};
pub use sweep::{
    grid_sweep, photon_curve, render_svg, threshold_scan, write_csv, AxisSpec, Cell,
    CellOutcome, CrossingType, CsvArtifact, ParamAxis, PhaseDiagram, PhotonCurve,
    PhotonPoint, ScanPredicate, SweepConfig, ThresholdScan,
};
