//! Linear stability of the mean-field fixed points and phase classification.
//!
//! The flow Jacobian in the real variables (x, v, n, jx, jy, jz) reads
//!
//! ```text
//!      ⎡ −κ      2ω_c     0        0            0        0      ⎤
//!      ⎢ −2ω_c   −κ      −8g√N jx  −4g√N(1+2n)  0        0      ⎥
//! J =  ⎢ 0       −2g√N jx −κ       −2g√N v      0        0      ⎥
//!      ⎢ 0       0        0        −Γ′          −2ω_0    0      ⎥
//!      ⎢ −2g̃ jz  0        0        2ω_0         −Γ′      −2g̃ x  ⎥
//!      ⎣ 2g̃ jy   0        0        0            2g̃ x     −Γ↓    ⎦
//! ```
//!
//! with g̃ = g/√N. Evaluated at the normal state this is M_N (whose spectrum
//! is independent of N: jx = jy = x = v = n = 0 kills every N-dependent
//! entry except the pair −4g√N / 2g/√N whose product is N-free); evaluated
//! at a symmetry-broken branch it is M_S. A fixed point is stable when every
//! eigenvalue real part lies strictly below −margin; marginal spectra
//! (|max real part| ≤ margin) are flagged and never counted as stable.
//!
//! The spectrum comes from a Hessenberg-reduction + shifted-QR backend
//! (nalgebra's real Schur decomposition). Every eigenvalue is certified
//! a posteriori: an inverse-iteration eigenvector with Rayleigh-quotient
//! polish must satisfy ‖Mq − λq‖₂ ≤ 10⁻¹⁰ ‖M‖_F, otherwise the solver
//! reports failure instead of returning silently wrong values.

use nalgebra::{Complex, DMatrix, DVector, SMatrix};

use crate::dynamics::MeanFieldState;
use crate::error::Error;
use crate::model::ModelParams;
use crate::steady_state::{superradiant_branches, Branches, SteadyStateBranch};

/// 6×6 real matrix of the linearized flow.
pub type Mat6 = SMatrix<f64, 6, 6>;

type C64 = Complex<f64>;

/// Default stability margin: spectra with |max Re λ| at or below this are
/// treated as marginal.
pub const DEFAULT_MARGIN: f64 = 1e-9;

/// Relative backward-error bound each certified eigenpair must satisfy.
pub const BACKWARD_ERROR_BOUND: f64 = 1e-10;

/// Flow Jacobian at an arbitrary state (not necessarily a fixed point).
pub fn jacobian_at(state: &MeanFieldState, params: &ModelParams) -> Mat6 {
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
    let gt = g / params.sqrt_n();

    #[rustfmt::skip]
    let m = Mat6::from_row_slice(&[
        -kappa,        2.0 * omega_c,     0.0,               0.0,                          0.0,           0.0,
        -2.0 * omega_c, -kappa,           -8.0 * g_rt_n * jx, -4.0 * g_rt_n * (1.0 + 2.0 * n), 0.0,       0.0,
        0.0,           -2.0 * g_rt_n * jx, -kappa,            -2.0 * g_rt_n * v,            0.0,           0.0,
        0.0,           0.0,               0.0,               -gp,                          -2.0 * omega_0, 0.0,
        -2.0 * gt * jz, 0.0,              0.0,               2.0 * omega_0,                -gp,           -2.0 * gt * x,
        2.0 * gt * jy, 0.0,               0.0,               0.0,                          2.0 * gt * x,  -gamma_down,
    ]);
    m
}

/// M_N: the Jacobian at the normal fixed point.
pub fn jacobian_normal(params: &ModelParams) -> Mat6 {
    jacobian_at(&MeanFieldState::normal(), params)
}

/// M_S: the Jacobian at a symmetry-broken branch. Rejects branches that
/// failed the physicality screen.
pub fn jacobian_superradiant(
    params: &ModelParams,
    branch: &SteadyStateBranch,
) -> Result<Mat6, Error> {
    if !branch.physical {
        return Err(Error::NonPhysicalBranch {
            op: "jacobian_superradiant",
            defects: branch.defects.clone(),
        });
    }
    Ok(jacobian_at(&branch.state, params))
}

/// Full spectrum of a real 6×6 matrix, backward-error certified.
///
/// The matrix is first balanced by an exact power-of-two diagonal
/// similarity (Parlett–Reinsch), which matters here: at large qubit number
/// the Jacobian mixes entries of size g√N and g/√N, and the unbalanced
/// Schur sweep loses several digits on such scaling.
///
/// Returned sorted by (Re, Im) ascending. Conjugate symmetry is inherited
/// from the real Schur form; the Rayleigh polish preserves it to roundoff.
pub fn eigenvalues(m: &Mat6) -> Result<[C64; 6], Error> {
    let balanced = balance(m);
    let norm = balanced.norm(); // Frobenius
    if norm == 0.0 {
        return Ok([C64::new(0.0, 0.0); 6]);
    }
    let schur = balanced
        .try_schur(f64::EPSILON * 16.0, 100_000)
        .ok_or(Error::EigenNoConvergence)?;
    let raw = schur.complex_eigenvalues();

    let mc: DMatrix<C64> = DMatrix::from_fn(6, 6, |i, j| C64::new(balanced[(i, j)], 0.0));
    let bound = BACKWARD_ERROR_BOUND * norm;
    let mut out = [C64::new(0.0, 0.0); 6];
    for (idx, &lambda) in raw.iter().enumerate() {
        out[idx] = certify_eigenpair(&mc, lambda, norm, bound)?;
    }
    out.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("certified eigenvalues are finite")
    });
    Ok(out)
}

/// Parlett–Reinsch balancing: a diagonal similarity D⁻¹MD with powers of
/// two (exact in floating point) that roughly equalizes the 1-norms of each
/// row/column pair. Leaves the spectrum unchanged.
fn balance(m: &Mat6) -> Mat6 {
    const RADIX: f64 = 2.0;
    let mut a = *m;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..6 {
            let mut c: f64 = (0..6).filter(|&j| j != i).map(|j| a[(j, i)].abs()).sum();
            let mut r: f64 = (0..6).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 || !(c.is_finite() && r.is_finite()) {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                c *= RADIX;
                r /= RADIX;
                f *= RADIX;
            }
            while c >= r * RADIX {
                c /= RADIX;
                r *= RADIX;
                f /= RADIX;
            }
            if c + r < 0.95 * s {
                converged = false;
                for j in 0..6 {
                    a[(i, j)] /= f;
                }
                for j in 0..6 {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

/// Inverse iteration + Rayleigh polish; returns the polished eigenvalue once
/// its residual passes the bound.
fn certify_eigenpair(
    mc: &DMatrix<C64>,
    lambda0: C64,
    norm: f64,
    bound: f64,
) -> Result<C64, Error> {
    let dim = mc.nrows();
    let id = DMatrix::<C64>::identity(dim, dim);
    let mut lambda = lambda0;
    let mut worst = f64::INFINITY;
    // A couple of deterministic starting vectors guard against an unlucky
    // start that is orthogonal to the eigenvector.
    for attempt in 0..4u32 {
        let mut q = DVector::<C64>::from_fn(dim, |i, _| {
            C64::new(
                1.0 + (i as f64 + 1.3) * 0.17 * f64::from(attempt + 1),
                0.3 * (i as f64) - 0.1 * f64::from(attempt),
            )
        });
        q /= C64::new(q.norm(), 0.0);
        // Tiny shift keeps the solve nonsingular at an exact eigenvalue.
        let shift = lambda + C64::new(norm * 1e-13, norm * 1e-13);
        for _ in 0..3 {
            let lu = (mc - &id * shift).lu();
            match lu.solve(&q) {
                Some(next) => {
                    let len = next.norm();
                    if !len.is_finite() || len == 0.0 {
                        break;
                    }
                    q = next / C64::new(len, 0.0);
                }
                None => break,
            }
            // Rayleigh quotient (q is unit length).
            let mq = mc * &q;
            let rq = q.dotc(&mq);
            let residual = (&mq - &q * rq).norm();
            if residual <= bound {
                return Ok(rq);
            }
            worst = worst.min(residual);
            lambda = rq;
        }
    }
    Err(Error::EigenBackwardError { err: worst, bound })
}

/// Spectrum, abscissa and verdict for one fixed point.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// The six eigenvalues, sorted by (Re, Im).
    pub eigenvalues: [C64; 6],
    /// Maximum real part.
    pub spectral_abscissa: f64,
    /// True iff `spectral_abscissa < -margin`.
    pub stable: bool,
    /// Margin used for the verdict.
    pub margin: f64,
}

impl StabilityReport {
    /// Builds a report from a Jacobian with the given margin.
    pub fn from_matrix(m: &Mat6, margin: f64) -> Result<Self, Error> {
        let eigenvalues = eigenvalues(m)?;
        let spectral_abscissa = eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            eigenvalues,
            spectral_abscissa,
            stable: spectral_abscissa < -margin,
            margin,
        })
    }

    /// |max Re λ| ≤ margin: on the stability boundary within resolution.
    pub fn marginal(&self) -> bool {
        self.spectral_abscissa.abs() <= self.margin
    }

    /// Eigenvalues as (re, im) pairs, for serialization.
    pub fn eigenvalue_pairs(&self) -> [(f64, f64); 6] {
        std::array::from_fn(|i| (self.eigenvalues[i].re, self.eigenvalues[i].im))
    }
}

/// Bottleneck distance between two spectra as unordered multisets:
/// the minimum over pairings of the largest pairwise |aᵢ − b_π(i)|.
///
/// Spectra are compared this way because any fixed sort order is unstable
/// under last-ulp perturbations when eigenvalues cluster, which would make
/// elementwise comparison report O(1) errors for identical spectra.
pub fn spectrum_distance(a: &[C64; 6], b: &[C64; 6]) -> f64 {
    fn go(a: &[C64; 6], b: &[C64; 6], used: &mut [bool; 6], i: usize, worst: f64, best: &mut f64) {
        if worst >= *best {
            return; // prune: this pairing is already no better
        }
        if i == 6 {
            *best = worst;
            return;
        }
        for j in 0..6 {
            if !used[j] {
                used[j] = true;
                go(a, b, used, i + 1, worst.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, &mut [false; 6], 0, 0.0, &mut best);
    best
}

/// Four-way phase label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    /// Only the normal fixed point is stable.
    Normal,
    /// Only the symmetry-broken fixed points are stable (and physical).
    Superradiant,
    /// Both are stable.
    Bistable,
    /// Neither is stable.
    Instability,
}

impl PhaseLabel {
    /// Single-letter code used in CSV artifacts and figures.
    pub fn code(&self) -> char {
        match self {
            PhaseLabel::Normal => 'N',
            PhaseLabel::Superradiant => 'S',
            PhaseLabel::Bistable => 'B',
            PhaseLabel::Instability => 'I',
        }
    }

    /// Inverse of [`PhaseLabel::code`].
    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'N' => Some(PhaseLabel::Normal),
            'S' => Some(PhaseLabel::Superradiant),
            'B' => Some(PhaseLabel::Bistable),
            'I' => Some(PhaseLabel::Instability),
            _ => None,
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Phase label plus the evidence it was derived from.
#[derive(Debug, Clone)]
pub struct Classification {
    /// The four-way verdict.
    pub label: PhaseLabel,
    /// Stability of the normal fixed point.
    pub normal: StabilityReport,
    /// Stability of the (physical) Plus branch, when one exists.
    pub superradiant: Option<StabilityReport>,
    /// The Plus branch itself, when it exists (physical or not).
    pub branch: Option<SteadyStateBranch>,
    /// True when either spectrum sits on the margin — the verdict is then a
    /// boundary call, not a robust phase assignment.
    pub marginal: bool,
}

impl Classification {
    /// Steady superradiant photon number, when a physical branch exists.
    pub fn n_ss(&self) -> Option<f64> {
        self.branch
            .as_ref()
            .filter(|b| b.physical)
            .map(|b| b.state.n)
    }
}

/// Classifies the phase at `params` with the default margin.
pub fn classify(params: &ModelParams) -> Result<Classification, Error> {
    classify_with_margin(params, DEFAULT_MARGIN)
}

/// [`classify`] with an explicit stability margin.
///
/// The normal fixed point is always analyzed. The superradiant pair is
/// analyzed when it exists and passes physicality (the Plus branch stands in
/// for both — the Minus spectrum is identical by Z₂ conjugacy); nonexistent,
/// complex-valued or unphysical branches count as not-stable. Parameters for
/// which the closed-form branch is undefined (g = 0, κ = 0 or Γ↓ = 0) are
/// classified on the normal branch alone.
pub fn classify_with_margin(params: &ModelParams, margin: f64) -> Result<Classification, Error> {
    let normal = StabilityReport::from_matrix(&jacobian_normal(params), margin)?;

    let branch = match superradiant_branches(params) {
        Ok(Branches::Pair([plus, _minus])) => Some(plus),
        Ok(Branches::None(_)) => None,
        Err(Error::InvalidParams(_)) | Err(Error::BetaUndefined) => None,
        Err(e) => return Err(e),
    };
    let superradiant = match &branch {
        Some(b) if b.physical => Some(StabilityReport::from_matrix(
            &jacobian_superradiant(params, b)?,
            margin,
        )?),
        _ => None,
    };

    let normal_stable = normal.stable;
    let super_stable = superradiant.as_ref().is_some_and(|r| r.stable);
    let label = match (normal_stable, super_stable) {
        (true, false) => PhaseLabel::Normal,
        (false, true) => PhaseLabel::Superradiant,
        (true, true) => PhaseLabel::Bistable,
        (false, false) => PhaseLabel::Instability,
    };
    let marginal =
        normal.marginal() || superradiant.as_ref().is_some_and(|r| r.marginal());

    Ok(Classification {
        label,
        normal,
        superradiant,
        branch,
        marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::rhs;
    use approx::assert_relative_eq;

    fn fig1_params(g: f64) -> ModelParams {
        ModelParams {
            omega_c: 1.0,
            omega_0: 1.0,
            g,
            n_qubits: 100,
            kappa: 1.0,
            gamma_down: 3.0,
            gamma_phi: 3.0,
        }
    }

    #[test]
    fn decoupled_spectrum_at_zero_coupling() {
        let p = fig1_params(0.0);
        let eig = eigenvalues(&jacobian_normal(&p)).unwrap();
        let gp = p.gamma_prime();
        let expected = [
            C64::new(-p.kappa, 2.0 * p.omega_c),
            C64::new(-p.kappa, -2.0 * p.omega_c),
            C64::new(-p.kappa, 0.0),
            C64::new(-gp, 2.0 * p.omega_0),
            C64::new(-gp, -2.0 * p.omega_0),
            C64::new(-p.gamma_down, 0.0),
        ];
        let d = spectrum_distance(&eig, &expected);
        assert!(d < 1e-12, "spectrum distance {d:.3e}");
    }

    #[test]
    fn normal_spectrum_is_qubit_number_free() {
        let eig_small = eigenvalues(&jacobian_normal(&fig1_params(2.7))).unwrap();
        let p_large = ModelParams {
            n_qubits: 1_000_000,
            ..fig1_params(2.7)
        };
        let eig_large = eigenvalues(&jacobian_normal(&p_large)).unwrap();
        let d = spectrum_distance(&eig_small, &eig_large);
        assert!(d < 1e-9, "spectrum distance {d:.3e}");
    }

    #[test]
    fn coupled_block_determinant_vanishes_at_threshold() {
        let mut p = fig1_params(1.0);
        let det4 = |p: &ModelParams| {
            let m = jacobian_normal(p);
            let idx = [0usize, 1, 3, 4]; // x, v, jx, jy
            let sub = SMatrix::<f64, 4, 4>::from_fn(|i, j| m[(idx[i], idx[j])]);
            sub.determinant()
        };
        // Closed form: (κ² + 4ω_c²)(Γ′² + 4ω_0²) − 32 ω_0 ω_c g².
        let gp = p.gamma_prime();
        for g in [0.7, 2.3, 5.0] {
            p.g = g;
            let expected = (p.kappa.powi(2) + 4.0 * p.omega_c.powi(2))
                * (gp.powi(2) + 4.0 * p.omega_0.powi(2))
                - 32.0 * p.omega_0 * p.omega_c * g * g;
            assert_relative_eq!(det4(&p), expected, max_relative = 1e-12);
        }
        p.g = p.g_t();
        assert!(det4(&p).abs() < 1e-9, "det = {:.3e}", det4(&p));
    }

    #[test]
    fn plus_and_minus_branches_share_a_spectrum() {
        let p = fig1_params(4.0);
        let [plus, minus] = superradiant_branches(&p)
            .unwrap()
            .into_pair()
            .unwrap();
        let ep = eigenvalues(&jacobian_superradiant(&p, &plus).unwrap()).unwrap();
        let em = eigenvalues(&jacobian_superradiant(&p, &minus).unwrap()).unwrap();
        let d = spectrum_distance(&ep, &em);
        assert!(d < 1e-9, "spectrum distance {d:.3e}");
    }

    #[test]
    fn spectrum_distance_matches_across_orderings() {
        let a = [
            C64::new(-1.0, 2.0),
            C64::new(-1.0, -2.0),
            C64::new(-1.0, 0.0),
            C64::new(-0.5, 0.1),
            C64::new(-0.5, -0.1),
            C64::new(-3.0, 0.0),
        ];
        let mut b = a;
        b.reverse();
        assert_eq!(spectrum_distance(&a, &b), 0.0);
        b[0] += C64::new(1e-7, 0.0);
        let d = spectrum_distance(&a, &b);
        assert!((d - 1e-7).abs() < 1e-12, "distance {d:.3e}");
    }

    #[test]
    fn superradiant_jacobian_rejects_unphysical_branch() {
        let p = fig1_params(4.0);
        let [mut plus, _] = superradiant_branches(&p).unwrap().into_pair().unwrap();
        plus.physical = false;
        plus.defects = vec!["negative photon number (n = -1)".into()];
        assert!(matches!(
            jacobian_superradiant(&p, &plus),
            Err(Error::NonPhysicalBranch { .. })
        ));
    }

    #[test]
    fn stable_superradiant_branch_at_reference_coupling() {
        let p = fig1_params(4.0);
        let [plus, _] = superradiant_branches(&p).unwrap().into_pair().unwrap();
        let report =
            StabilityReport::from_matrix(&jacobian_superradiant(&p, &plus).unwrap(), 1e-9)
                .unwrap();
        assert!(report.stable, "abscissa {:.3e}", report.spectral_abscissa);
        assert!(report.spectral_abscissa < 0.0);
    }

    #[test]
    fn jacobian_matches_central_finite_differences() {
        let p = fig1_params(4.0);
        let [plus, _] = superradiant_branches(&p).unwrap().into_pair().unwrap();
        for state in [MeanFieldState::normal(), plus.state] {
            let analytic = jacobian_at(&state, &p);
            let h = 1e-6;
            let scale = analytic.norm();
            for j in 0..6 {
                let mut fwd = state.to_array();
                let mut bwd = state.to_array();
                fwd[j] += h;
                bwd[j] -= h;
                let df = rhs(&MeanFieldState::from_array(fwd), &p).to_array();
                let db = rhs(&MeanFieldState::from_array(bwd), &p).to_array();
                for i in 0..6 {
                    let fd = (df[i] - db[i]) / (2.0 * h);
                    assert!(
                        (analytic[(i, j)] - fd).abs() <= 1e-6 * scale.max(1.0),
                        "entry ({i},{j}): analytic {} vs fd {}",
                        analytic[(i, j)],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from_column_slice(&[
            -3.0, -2.0, -1.0, 0.5, 1.5, 2.5,
        ]));
        let eig = eigenvalues(&m).unwrap();
        let expected = [-3.0, -2.0, -1.0, 0.5, 1.5, 2.5];
        for (a, b) in eig.iter().zip(expected) {
            assert_relative_eq!(a.re, b, epsilon = 1e-12);
            assert_relative_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_embedded_rotation_block() {
        let mut m = Mat6::zeros();
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        for (i, d) in [(2, -4.0), (3, -3.0), (4, -2.0), (5, -1.0)] {
            m[(i, i)] = d;
        }
        let eig = eigenvalues(&m).unwrap();
        assert!(eig
            .iter()
            .any(|l| (l - C64::new(0.0, 1.0)).norm() < 1e-12));
        assert!(eig
            .iter()
            .any(|l| (l - C64::new(0.0, -1.0)).norm() < 1e-12));
    }

    #[test]
    fn conjugate_pair_symmetry() {
        let p = fig1_params(2.2);
        let eig = eigenvalues(&jacobian_normal(&p)).unwrap();
        for l in &eig {
            if l.im.abs() > 1e-12 {
                assert!(
                    eig.iter().any(|m| (m - l.conj()).norm() < 1e-9),
                    "missing conjugate of {l}"
                );
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&fig1_params(1e-3)).unwrap().label, PhaseLabel::Normal);
        assert_eq!(classify(&fig1_params(2.0)).unwrap().label, PhaseLabel::Bistable);
        assert_eq!(
            classify(&fig1_params(3.1)).unwrap().label,
            PhaseLabel::Superradiant
        );
        let unstable = ModelParams {
            n_qubits: 1000,
            gamma_down: 1.5,
            gamma_phi: 1.5,
            ..fig1_params(2.5)
        };
        assert_eq!(
            classify(&unstable).unwrap().label,
            PhaseLabel::Instability
        );
    }

    #[test]
    fn classify_handles_zero_coupling() {
        // g = 0 has no closed-form superradiant branch; the verdict comes
        // from the normal spectrum alone.
        let c = classify(&fig1_params(0.0)).unwrap();
        assert_eq!(c.label, PhaseLabel::Normal);
        assert!(c.superradiant.is_none() && c.branch.is_none());
    }

    #[test]
    fn classify_flags_marginal_at_the_threshold() {
        let mut p = fig1_params(1.0);
        p.g = p.g_t();
        let c = classify(&p).unwrap();
        assert!(c.marginal, "abscissa {:.3e}", c.normal.spectral_abscissa);
        assert!(!c.normal.stable);
    }

    #[test]
    fn classification_is_z2_invariant() {
        // The Minus branch carries the same verdict as the Plus branch.
        let p = fig1_params(2.0);
        let c = classify(&p).unwrap();
        let [_, minus] = superradiant_branches(&p).unwrap().into_pair().unwrap();
        let minus_report =
            StabilityReport::from_matrix(&jacobian_superradiant(&p, &minus).unwrap(), 1e-9)
                .unwrap();
        assert_eq!(c.superradiant.unwrap().stable, minus_report.stable);
    }

    #[test]
    fn n_ss_positive_in_bistable_window() {
        let c = classify(&fig1_params(2.0)).unwrap();
        assert!(c.n_ss().unwrap() > 0.0);
    }

    #[test]
    fn phase_label_codes_round_trip() {
        for label in [
            PhaseLabel::Normal,
            PhaseLabel::Superradiant,
            PhaseLabel::Bistable,
            PhaseLabel::Instability,
        ] {
            assert_eq!(PhaseLabel::from_code(label.code()), Some(label));
        }
        assert_eq!(PhaseLabel::from_code('X'), None);
    }
}
