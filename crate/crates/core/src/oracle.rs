//! Exact Lindblad dynamics on a small qubits ⊗ Fock Hilbert space.
//!
//! This module is the cross-check for the mean-field flow: it builds the
//! full Hamiltonian H = ω_c a†a + ω_0 Σσz + (g/√N) Σσx (a² + a†²) and the
//! three dissipation channels as dense complex matrices, and verifies that
//! the first-moment equations of motion hold *exactly* (no factorization)
//! on states with controlled Fock support. It is desk-scale by design:
//! dense matrices, hard dimension caps, no sparsity.
//!
//! Conventions: qubit basis index 0 = |e⟩ (σz = +1), 1 = |g⟩; lowering
//! operator σ₋ = |g⟩⟨e| = (σx − iσy)/2, so Γ↓ D[σ₋] relaxes the qubit at
//! rate Γ↓ and the transverse damping comes out as Γ′ = 2Γφ + Γ↓/2.
//! Tensor order is qubit₁ ⊗ … ⊗ qubit_N ⊗ Fock (Fock index fastest).

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::model::{ModelParams, ValidationScope};
use crate::ode::{self, Options};

type C64 = Complex<f64>;
type CMat = DMatrix<C64>;

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Hermiticity tolerance for a valid density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace-one tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for approximate positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-10;
/// Fock population allowed above `cutoff − 4` in Ehrenfest checks.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Dimensions of the truncated Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpec {
    /// Number of two-level systems (1–3).
    pub n_qubits: usize,
    /// Highest retained Fock level n_ph (≥ 4); the ladder has n_ph + 1 rungs.
    pub fock_cutoff: usize,
    /// Hard cap on the total dimension.
    pub cap: usize,
}

impl HilbertSpec {
    /// Default dimension cap: the oracle is desk-scale by design.
    pub const DEFAULT_CAP: usize = 256;

    /// A spec with the default cap. Errors when out of range.
    pub fn new(n_qubits: usize, fock_cutoff: usize) -> Result<Self, Error> {
        Self::with_cap(n_qubits, fock_cutoff, Self::DEFAULT_CAP)
    }

    /// A spec with an explicit cap. Errors when out of range.
    pub fn with_cap(n_qubits: usize, fock_cutoff: usize, cap: usize) -> Result<Self, Error> {
        let spec = Self {
            n_qubits,
            fock_cutoff,
            cap,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Re-checks the invariants (fields are public, so entry points call
    /// this rather than trusting construction history).
    pub fn validate(&self) -> Result<(), Error> {
        let mut v = Vec::new();
        if !(1..=3).contains(&self.n_qubits) {
            v.push(format!("n_qubits must be 1–3 (got {})", self.n_qubits));
        }
        if self.fock_cutoff < 4 {
            v.push(format!("fock_cutoff must be ≥ 4 (got {})", self.fock_cutoff));
        }
        if !v.is_empty() {
            return Err(Error::InvalidParams(v));
        }
        if self.dim() > self.cap {
            return Err(Error::DimensionCap {
                dim: self.dim(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Total dimension 2^N · (n_ph + 1).
    pub fn dim(&self) -> usize {
        (1 << self.n_qubits) * (self.fock_cutoff + 1)
    }

    /// Composite basis index of (qubit bitstring, Fock level).
    fn index(&self, qubit_bits: usize, fock: usize) -> usize {
        qubit_bits * (self.fock_cutoff + 1) + fock
    }

    /// Fock level of a composite basis index.
    fn fock_of(&self, index: usize) -> usize {
        index % (self.fock_cutoff + 1)
    }
}

fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Truncated annihilation operator on the Fock factor.
fn annihilation(fock_cutoff: usize) -> CMat {
    let d = fock_cutoff + 1;
    CMat::from_fn(d, d, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// σ₋ = |g⟩⟨e| = (σx − iσy)/2.
fn sigma_minus() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// The operator algebra of one truncated model instance.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    /// Annihilation operator on the full space.
    pub a: CMat,
    /// Two-photon quadrature X = a² + a†².
    pub x: CMat,
    /// Two-photon quadrature Y = a² − a†² (anti-Hermitian).
    pub y: CMat,
    /// Photon number a†a.
    pub number: CMat,
    /// Collective spin J_x = (1/N) Σ σx.
    pub jx: CMat,
    /// Collective spin J_y = (1/N) Σ σy.
    pub jy: CMat,
    /// Collective spin J_z = (1/N) Σ σz.
    pub jz: CMat,
    /// The Hamiltonian.
    pub hamiltonian: CMat,
    /// Jump operators with their rates: (κ, a), (Γ↓, σ₋ᵏ), (Γφ, σzᵏ).
    pub jumps: Vec<(f64, CMat)>,
}

/// Embeds a single-qubit operator on qubit `k` of the full space.
fn qubit_op(spec: &HilbertSpec, op: &CMat, k: usize) -> CMat {
    let mut out = CMat::identity(1, 1);
    for q in 0..spec.n_qubits {
        let factor = if q == k {
            op.clone()
        } else {
            identity(2)
        };
        out = out.kronecker(&factor);
    }
    out.kronecker(&identity(spec.fock_cutoff + 1))
}

fn build_operators(params: &ModelParams, spec: &HilbertSpec) -> OperatorSet {
    let nq = spec.n_qubits;
    let a1 = annihilation(spec.fock_cutoff);
    let mut a = identity(1);
    for _ in 0..nq {
        a = a.kronecker(&identity(2));
    }
    let a = a.kronecker(&a1);

    let ad = a.adjoint();
    let x = &a * &a + &ad * &ad;
    let y = &a * &a - &ad * &ad;
    let number = &ad * &a;

    let (sx, sy, sz, sm) = (pauli_x(), pauli_y(), pauli_z(), sigma_minus());
    let sum_of = |op: &CMat| -> CMat {
        (0..nq)
            .map(|k| qubit_op(spec, op, k))
            .reduce(|acc, m| acc + m)
            .expect("n_qubits ≥ 1")
    };
    let sum_x = sum_of(&sx);
    let sum_y = sum_of(&sy);
    let sum_z = sum_of(&sz);
    let n_f = nq as f64;

    let hamiltonian = &number * C64::new(params.omega_c, 0.0)
        + &sum_z * C64::new(params.omega_0, 0.0)
        + (&sum_x * &x) * C64::new(params.g / n_f.sqrt(), 0.0);

    let mut jumps = vec![(params.kappa, a.clone())];
    for k in 0..nq {
        jumps.push((params.gamma_down, qubit_op(spec, &sm, k)));
        jumps.push((params.gamma_phi, qubit_op(spec, &sz, k)));
    }

    let scale = C64::new(1.0 / n_f, 0.0);
    OperatorSet {
        a,
        x,
        y,
        number,
        jx: sum_x * scale,
        jy: sum_y * scale,
        jz: sum_z * scale,
        hamiltonian,
        jumps,
    }
}

/// The Lindblad generator ρ ↦ L(ρ), applied matrix-free (with an optional
/// materialized superoperator for null-space work).
#[derive(Debug, Clone)]
pub struct LiouvillianAction {
    spec: HilbertSpec,
    ops: OperatorSet,
}

/// Builds the generator for `params` on the truncated space.
///
/// The qubit count is `spec.n_qubits` — it both sizes the Hilbert space and
/// sets N in the g/√N coupling; `params.n_qubits` is not consulted.
pub fn build_liouvillian(params: &ModelParams, spec: &HilbertSpec) -> Result<LiouvillianAction, Error> {
    spec.validate()?;
    let params = params.validated(ValidationScope::Dynamics)?;
    Ok(LiouvillianAction {
        spec: *spec,
        ops: build_operators(&params, spec),
    })
}

impl LiouvillianAction {
    /// The Hilbert-space dimensions.
    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    /// The underlying operator algebra.
    pub fn ops(&self) -> &OperatorSet {
        &self.ops
    }

    /// L(ρ) = −i\[H,ρ\] + Σ γ (LρL† − ½{L†L, ρ}).
    pub fn apply(&self, rho: &CMat) -> CMat {
        let h = &self.ops.hamiltonian;
        let mut out = (h * rho - rho * h) * (-I);
        for (rate, l) in &self.ops.jumps {
            if *rate == 0.0 {
                continue;
            }
            let ld = l.adjoint();
            let ldl = &ld * l;
            let g = C64::new(*rate, 0.0);
            out += (l * rho * ld - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0)) * g;
        }
        out
    }

    /// The materialized superoperator on column-major vec(ρ), using
    /// vec(AρB) = (Bᵀ ⊗ A) vec(ρ). Gated by the dimension cap.
    pub fn superoperator(&self) -> Result<CMat, Error> {
        let d = self.spec.dim();
        if d * d > self.spec.cap * self.spec.cap {
            return Err(Error::SuperopCap {
                side: d * d,
                cap: self.spec.cap * self.spec.cap,
            });
        }
        let id = identity(d);
        let h = &self.ops.hamiltonian;
        let mut s = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-I);
        for (rate, l) in &self.ops.jumps {
            if *rate == 0.0 {
                continue;
            }
            let ld = l.adjoint();
            let ldl = &ld * l;
            let g = C64::new(*rate, 0.0);
            s += (l.conjugate().kronecker(l)
                - (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * C64::new(0.5, 0.0))
                * g;
        }
        Ok(s)
    }
}

/// A validated density matrix on the truncated space.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: CMat,
}

impl DensityState {
    /// Wraps a matrix after checking Hermiticity (10⁻¹²), unit trace
    /// (10⁻¹²) and approximate positivity (eigenvalues ≥ −10⁻¹⁰).
    pub fn new(matrix: CMat) -> Result<Self, Error> {
        Self::checked(matrix, HERMITIAN_TOL, TRACE_TOL, PSD_TOL)
    }

    /// [`DensityState::new`] with explicit tolerances (used by the
    /// integrator, whose output drifts at its own error scale).
    pub fn checked(
        matrix: CMat,
        hermitian_tol: f64,
        trace_tol: f64,
        psd_tol: f64,
    ) -> Result<Self, Error> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        let herm_defect = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_defect > hermitian_tol {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity defect {herm_defect:.3e} exceeds {hermitian_tol:.1e}"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > trace_tol {
            return Err(Error::InvalidDensity(format!(
                "trace defect {:.3e} exceeds {trace_tol:.1e}",
                (trace - ONE).norm()
            )));
        }
        let lambda_min = hermitian_min_eigenvalue(&matrix);
        if lambda_min < -psd_tol {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {lambda_min:.3e} below −{psd_tol:.1e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// tr(op · ρ).
    pub fn expectation(&self, op: &CMat) -> C64 {
        (op * &self.matrix).trace()
    }

    /// All qubits in |g⟩, cavity in vacuum: the dark state of every
    /// dissipation channel.
    pub fn ground_vacuum(spec: &HilbertSpec) -> Self {
        let d = spec.dim();
        let all_ground = (1 << spec.n_qubits) - 1; // bit 1 = |g⟩ on each qubit
        let idx = spec.index(all_ground, 0);
        let mut m = CMat::zeros(d, d);
        m[(idx, idx)] = ONE;
        Self { matrix: m }
    }

    /// Seeded Ginibre state supported exactly on Fock levels ≤ `support`
    /// (all qubit configurations): draws G with i.i.d. complex-normal
    /// entries on the sub-block, forms GG†/tr, and embeds.
    pub fn random_supported(
        spec: &HilbertSpec,
        support: usize,
        seed: u64,
    ) -> Result<Self, Error> {
        if support > spec.fock_cutoff {
            return Err(Error::InvalidParams(vec![format!(
                "support {support} exceeds fock_cutoff {}",
                spec.fock_cutoff
            )]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
        let d_sub = (1 << spec.n_qubits) * (support + 1);
        let mut g = CMat::zeros(d_sub, d_sub);
        for j in 0..d_sub {
            for i in 0..d_sub {
                g[(i, j)] = C64::new(normal(), normal());
            }
        }
        let mut r = &g * g.adjoint();
        let tr = r.trace().re;
        r /= C64::new(tr, 0.0);

        let d = spec.dim();
        let mut m = CMat::zeros(d, d);
        let indices: Vec<usize> = (0..(1 << spec.n_qubits))
            .flat_map(|q| (0..=support).map(move |f| (q, f)))
            .map(|(q, f)| spec.index(q, f))
            .collect();
        for (i_sub, &i_full) in indices.iter().enumerate() {
            for (j_sub, &j_full) in indices.iter().enumerate() {
                m[(i_full, j_full)] = r[(i_sub, j_sub)];
            }
        }
        Self::new(m)
    }

    /// Total population on Fock levels strictly above `level`.
    pub fn fock_population_above(&self, spec: &HilbertSpec, level: usize) -> f64 {
        (0..spec.dim())
            .filter(|&i| spec.fock_of(i) > level)
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }
}

/// Smallest eigenvalue of a (numerically) Hermitian complex matrix via the
/// real symmetric embedding [[Re, −Im], [Im, Re]], which has the same
/// spectrum with doubled multiplicity.
fn hermitian_min_eigenvalue(m: &CMat) -> f64 {
    let d = m.nrows();
    let mut e = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for j in 0..d {
        for i in 0..d {
            let z = m[(i, j)];
            e[(i, j)] = z.re;
            e[(i, j + d)] = -z.im;
            e[(i + d, j)] = z.im;
            e[(i + d, j + d)] = z.re;
        }
    }
    e.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Residuals of the six exact first-moment equations of motion.
#[derive(Debug, Clone)]
pub struct EhrenfestReport {
    /// (observable, |tr(A·L(ρ)) − exact RHS|) for the six observables.
    pub residuals: [(&'static str, f64); 6],
}

impl EhrenfestReport {
    /// The worst residual.
    pub fn max(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }
}

/// Checks the exact (un-factorized) moment equations on `rho`:
/// d⟨A⟩/dt = tr(A·L(ρ)) must equal the closed-form right-hand sides built
/// from the same state's correlators. The identity only holds when `rho`
/// has negligible population within 4 rungs of the cutoff (the two-photon
/// terms hop n → n±2, and products of two of them reach ±4), so that is a
/// precondition, not a tolerance.
pub fn ehrenfest_residual(
    rho: &DensityState,
    params: &ModelParams,
    spec: &HilbertSpec,
) -> Result<EhrenfestReport, Error> {
    spec.validate()?;
    let leak = rho.fock_population_above(spec, spec.fock_cutoff - 4);
    if leak > SUPPORT_TOL {
        return Err(Error::SupportLeakage {
            pop: leak,
            limit: SUPPORT_TOL,
        });
    }

    let lv = build_liouvillian(params, spec)?;
    let ops = lv.ops();
    let l_rho = lv.apply(rho.matrix());
    let d = spec.dim();

    let n_f = spec.n_qubits as f64;
    let sqrt_n = n_f.sqrt();
    let gp = 2.0 * params.gamma_phi + params.gamma_down / 2.0;
    let (wc, w0, g, kappa, gd) = (
        params.omega_c,
        params.omega_0,
        params.g,
        params.kappa,
        params.gamma_down,
    );

    let ex = |op: &CMat| rho.expectation(op);
    let lhs = |op: &CMat| (op * &l_rho).trace();

    let two_n_plus_one = &ops.number * C64::new(2.0, 0.0) + identity(d);
    let c = |re: f64| C64::new(re, 0.0);

    let rhs_x = -c(kappa) * ex(&ops.x) - c(2.0 * wc) * I * ex(&ops.y);
    let rhs_y = -c(kappa) * ex(&ops.y)
        - c(2.0 * wc) * I * ex(&ops.x)
        - c(4.0 * g * sqrt_n) * I * ex(&(&ops.jx * &two_n_plus_one));
    let rhs_n = -c(kappa) * ex(&ops.number) + c(2.0 * g * sqrt_n) * I * ex(&(&ops.jx * &ops.y));
    let rhs_jx = -c(gp) * ex(&ops.jx) - c(2.0 * w0) * ex(&ops.jy);
    let rhs_jy = -c(gp) * ex(&ops.jy) + c(2.0 * w0) * ex(&ops.jx)
        - c(2.0 * g / sqrt_n) * ex(&(&ops.x * &ops.jz));
    let rhs_jz = -c(gd) * (ex(&ops.jz) + ONE) + c(2.0 * g / sqrt_n) * ex(&(&ops.x * &ops.jy));

    let residuals = [
        ("X", (lhs(&ops.x) - rhs_x).norm()),
        ("Y", (lhs(&ops.y) - rhs_y).norm()),
        ("n", (lhs(&ops.number) - rhs_n).norm()),
        ("Jx", (lhs(&ops.jx) - rhs_jx).norm()),
        ("Jy", (lhs(&ops.jy) - rhs_jy).norm()),
        ("Jz", (lhs(&ops.jz) - rhs_jz).norm()),
    ];
    Ok(EhrenfestReport { residuals })
}

/// The Z₄ generator U = (σz on every qubit) ⊗ exp(−iπ/2 · a†a), built
/// entrywise so that U⁴ = 1 exactly on the truncated space.
pub fn z4_generator(spec: &HilbertSpec) -> CMat {
    let d = spec.dim();
    let n_ph = spec.fock_cutoff + 1;
    CMat::from_fn(d, d, |i, j| {
        if i != j {
            return ZERO;
        }
        let q = i / n_ph;
        let f = i % n_ph;
        let qubit_sign = if q.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let fock_phase = match f % 4 {
            0 => ONE,
            1 => -I,
            2 => -ONE,
            _ => I,
        };
        fock_phase * C64::new(qubit_sign, 0.0)
    })
}

/// Result of a symmetry sweep over random states.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryReport {
    /// max over samples of ‖L(UρU†) − U L(ρ) U†‖_F.
    pub max_defect: f64,
    /// Number of random states tested.
    pub n_samples: usize,
}

/// Measures the Z₄ covariance defect of the implemented generator over
/// `n_samples` seeded random states.
pub fn symmetry_check(
    params: &ModelParams,
    spec: &HilbertSpec,
    n_samples: usize,
) -> Result<SymmetryReport, Error> {
    symmetry_defect(params, spec, n_samples, false)
}

/// Negative control: the same sweep against a deliberately broken
/// generator (a one-photon drive ω_c/2 · (a + a†) added to H), which must
/// produce a macroscopic defect if the detector works.
pub fn symmetry_negative_control(
    params: &ModelParams,
    spec: &HilbertSpec,
    n_samples: usize,
) -> Result<SymmetryReport, Error> {
    symmetry_defect(params, spec, n_samples, true)
}

fn symmetry_defect(
    params: &ModelParams,
    spec: &HilbertSpec,
    n_samples: usize,
    break_symmetry: bool,
) -> Result<SymmetryReport, Error> {
    let mut lv = build_liouvillian(params, spec)?;
    if break_symmetry {
        let one_photon = (&lv.ops.a + lv.ops.a.adjoint()) * C64::new(0.5 * params.omega_c, 0.0);
        lv.ops.hamiltonian += one_photon;
    }
    let u = z4_generator(spec);
    let ud = u.adjoint();

    let mut max_defect: f64 = 0.0;
    let support = spec.fock_cutoff.saturating_sub(2);
    for k in 0..n_samples {
        let rho = DensityState::random_supported(spec, support, 0xD1CE + k as u64)?;
        let conjugated = &u * rho.matrix() * &ud;
        let defect = (lv.apply(&conjugated) - &u * lv.apply(rho.matrix()) * &ud).norm();
        max_defect = max_defect.max(defect);
    }
    Ok(SymmetryReport {
        max_defect,
        n_samples,
    })
}

/// Integrates ρ̇ = L(ρ) to time `t` with the adaptive Runge–Kutta core,
/// then re-validates the result (Hermiticity and trace at 100× the
/// integration tolerance, positivity at [`PSD_TOL`]).
pub fn evolve(
    rho0: &DensityState,
    params: &ModelParams,
    spec: &HilbertSpec,
    t: f64,
    tol: f64,
) -> Result<DensityState, Error> {
    if !(t.is_finite() && t >= 0.0) || !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParams(vec![format!(
            "evolve needs finite t ≥ 0 and tol > 0 (got t = {t}, tol = {tol})"
        )]));
    }
    let lv = build_liouvillian(params, spec)?;
    let d = spec.dim();
    let n2 = d * d;

    // Real state vector: [Re vec(ρ) | Im vec(ρ)], column-major.
    let mut y0 = vec![0.0; 2 * n2];
    for (k, z) in rho0.matrix().iter().enumerate() {
        y0[k] = z.re;
        y0[n2 + k] = z.im;
    }
    let mut rho_buf = CMat::zeros(d, d);
    let f = |_t: f64, y: &[f64], dy: &mut [f64]| {
        for (k, z) in rho_buf.iter_mut().enumerate() {
            *z = C64::new(y[k], y[n2 + k]);
        }
        let out = lv.apply(&rho_buf);
        for (k, z) in out.iter().enumerate() {
            dy[k] = z.re;
            dy[n2 + k] = z.im;
        }
    };
    let opts = Options {
        rel_tol: tol,
        abs_tol: tol * 1e-2,
        settle_threshold: None,
        divergence_bound: None,
        ..Options::default()
    };
    let sol = ode::dopri5(f, &y0, 0.0, t, &opts)?;
    let last = sol.last();
    let m = CMat::from_fn(d, d, |i, j| {
        let k = j * d + i;
        C64::new(last[k], last[n2 + k])
    });
    let drift_tol = (100.0 * tol).max(TRACE_TOL);
    DensityState::checked(m, drift_tol, drift_tol, PSD_TOL)
}

/// Steady state of the materialized superoperator: the right singular
/// vector of the smallest singular value, hermitized and trace-normalized.
/// A (near-)degenerate null space is reported as an error, as is a
/// residual ‖L(ρ_ss)‖_F above 10⁻⁹.
pub fn steady_state_small(
    params: &ModelParams,
    spec: &HilbertSpec,
) -> Result<DensityState, Error> {
    let lv = build_liouvillian(params, spec)?;
    let s = lv.superoperator()?;
    let d = spec.dim();

    let svd = s
        .try_svd(false, true, f64::EPSILON * 16.0, 100_000)
        .ok_or(Error::EigenNoConvergence)?;
    let sv = &svd.singular_values;
    let v_t = svd.v_t.as_ref().ok_or(Error::EigenNoConvergence)?;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].partial_cmp(&sv[j]).expect("finite singular values"));
    let sigma_max = sv[order[sv.len() - 1]];
    let second = sv[order[1]];
    if second <= 1e-9 * sigma_max.max(1.0) {
        return Err(Error::DegenerateSteadyState { sigma: second });
    }

    // Right singular vector = conjugated row of V†.
    let row = v_t.row(order[0]);
    let mut m = CMat::from_fn(d, d, |i, j| row[j * d + i].conj());
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::DegenerateSteadyState { sigma: second });
    }
    m /= tr;

    let residual = lv.apply(&m).norm();
    if residual > 1e-9 {
        return Err(Error::InvalidDensity(format!(
            "steady-state residual {residual:.3e} exceeds 1e-9"
        )));
    }
    DensityState::new(m)
}

/// One line of the oracle validation suite.
#[derive(Debug, Clone)]
pub struct SuiteLine {
    /// Which check this is.
    pub name: String,
    /// The measured figure of merit.
    pub measured: f64,
    /// The acceptance bound.
    pub bound: f64,
    /// True when the check passes if measured exceeds the bound (negative
    /// controls); false when it must stay below.
    pub pass_above: bool,
}

impl SuiteLine {
    /// Whether the check passed.
    pub fn pass(&self) -> bool {
        if self.pass_above {
            self.measured > self.bound
        } else {
            self.measured < self.bound
        }
    }
}

/// Outcome of [`run_suite`]: the flat summary the CLI prints.
#[derive(Debug, Clone)]
pub struct OracleSuiteReport {
    /// All checks, in execution order.
    pub lines: Vec<SuiteLine>,
}

impl OracleSuiteReport {
    /// True when every line passed.
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(SuiteLine::pass)
    }

    /// Flat text summary: one line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let rel = if l.pass_above { ">" } else { "<" };
            out.push_str(&format!(
                "{:<28} {:>12.4e} {} {:>8.1e}  {}\n",
                l.name,
                l.measured,
                rel,
                l.bound,
                if l.pass() { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Runs the full validation suite at a fixed representative parameter set:
/// Ehrenfest identities (one and two qubits), Z₄ covariance, its negative
/// control, and trace preservation over random states and parameters.
pub fn run_suite() -> Result<OracleSuiteReport, Error> {
    let params = suite_params(1);
    let mut lines = Vec::new();

    // Ehrenfest, one qubit, deep Fock ladder.
    let spec1 = HilbertSpec::new(1, 24)?;
    let mut worst = 0.0_f64;
    for seed in 0..5 {
        let rho = DensityState::random_supported(&spec1, spec1.fock_cutoff - 4, 41 + seed)?;
        worst = worst.max(ehrenfest_residual(&rho, &params, &spec1)?.max());
    }
    lines.push(SuiteLine {
        name: "ehrenfest_n1_cutoff24".into(),
        measured: worst,
        bound: 1e-10,
        pass_above: false,
    });

    // Ehrenfest, two qubits: collective-operator bookkeeping.
    let params2 = suite_params(2);
    let spec2 = HilbertSpec::new(2, 12)?;
    let mut worst = 0.0_f64;
    for seed in 0..5 {
        let rho = DensityState::random_supported(&spec2, spec2.fock_cutoff - 4, 137 + seed)?;
        worst = worst.max(ehrenfest_residual(&rho, &params2, &spec2)?.max());
    }
    lines.push(SuiteLine {
        name: "ehrenfest_n2_cutoff12".into(),
        measured: worst,
        bound: 1e-10,
        pass_above: false,
    });

    // Z₄ covariance and its negative control.
    let spec_sym = HilbertSpec::new(1, 12)?;
    lines.push(SuiteLine {
        name: "z4_symmetry_defect".into(),
        measured: symmetry_check(&params, &spec_sym, 20)?.max_defect,
        bound: 1e-12,
        pass_above: false,
    });
    lines.push(SuiteLine {
        name: "z4_negative_control".into(),
        measured: symmetry_negative_control(&params, &spec_sym, 5)?.max_defect,
        bound: 1e-3,
        pass_above: true,
    });

    // Trace preservation over random states and random rates.
    let mut worst = 0.0_f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7AC3);
    let mut uniform = |lo: f64, hi: f64| -> f64 { rng.gen_range(lo..hi) };
    for k in 0..100 {
        let p = ModelParams {
            omega_c: 1.0,
            omega_0: uniform(0.1, 3.0),
            g: uniform(0.1, 3.0),
            n_qubits: 1,
            kappa: uniform(0.1, 3.0),
            gamma_down: uniform(0.1, 3.0),
            gamma_phi: uniform(0.1, 3.0),
        };
        let lv = build_liouvillian(&p, &spec_sym)?;
        let rho = DensityState::random_supported(&spec_sym, spec_sym.fock_cutoff, 9000 + k)?;
        worst = worst.max(lv.apply(rho.matrix()).trace().norm());
    }
    lines.push(SuiteLine {
        name: "trace_preservation".into(),
        measured: worst,
        bound: 1e-12,
        pass_above: false,
    });

    Ok(OracleSuiteReport { lines })
}

/// Runs the validation checks on one caller-chosen Hilbert space and
/// parameter set: Ehrenfest identities, Z₄ covariance plus negative control,
/// and trace preservation. [`run_suite`] is the fixed two-size version used
/// for acceptance.
pub fn run_suite_for(
    params: &ModelParams,
    spec: &HilbertSpec,
) -> Result<OracleSuiteReport, Error> {
    spec.validate()?;
    let mut lines = Vec::new();

    let mut worst = 0.0_f64;
    for seed in 0..5 {
        let rho = DensityState::random_supported(spec, spec.fock_cutoff - 4, 41 + seed)?;
        worst = worst.max(ehrenfest_residual(&rho, params, spec)?.max());
    }
    lines.push(SuiteLine {
        name: format!("ehrenfest_n{}_cutoff{}", spec.n_qubits, spec.fock_cutoff),
        measured: worst,
        bound: 1e-10,
        pass_above: false,
    });

    lines.push(SuiteLine {
        name: "z4_symmetry_defect".into(),
        measured: symmetry_check(params, spec, 10)?.max_defect,
        bound: 1e-12,
        pass_above: false,
    });
    lines.push(SuiteLine {
        name: "z4_negative_control".into(),
        measured: symmetry_negative_control(params, spec, 3)?.max_defect,
        bound: 1e-3,
        pass_above: true,
    });

    let lv = build_liouvillian(params, spec)?;
    let mut worst = 0.0_f64;
    for k in 0..20 {
        let rho = DensityState::random_supported(spec, spec.fock_cutoff, 9000 + k)?;
        worst = worst.max(lv.apply(rho.matrix()).trace().norm());
    }
    lines.push(SuiteLine {
        name: "trace_preservation".into(),
        measured: worst,
        bound: 1e-12,
        pass_above: false,
    });

    Ok(OracleSuiteReport { lines })
}

/// The representative parameter set used by the validation suite.
pub fn suite_params(n_qubits: usize) -> ModelParams {
    ModelParams {
        omega_c: 1.0,
        omega_0: 2.0,
        g: 1.3,
        n_qubits,
        kappa: 0.7,
        gamma_down: 0.9,
        gamma_phi: 0.4,
    }
}
