//! Model parameters, derived rates, and the spectral-collapse heuristic.
//!
//! The model couples N two-level systems to one bosonic mode through
//! two-photon terms:
//!
//! ```text
//! H = ω_c a†a + ω_0 Σ_j σ_z^j + (g/√N) Σ_j σ_x^j (a² + a†²)
//! ```
//!
//! with photon loss κ, individual qubit decay Γ↓ and dephasing Γφ. Everything
//! downstream (dynamics, steady states, stability, sweeps, the exact oracle)
//! consumes the types defined here.

use crate::error::Error;

/// The seven physical parameters plus the qubit number N.
///
/// All frequencies and rates are angular (rad/time and 1/time); the crate's
/// reference convention is ω_c = 1, and [`ModelParams::in_omega_c_units`]
/// rescales arbitrary inputs into it. The formulas themselves are
/// unit-covariant, so raw values are stored unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Boson frequency ω_c (> 0).
    pub omega_c: f64,
    /// Qubit frequency ω_0 (> 0).
    pub omega_0: f64,
    /// Two-photon coupling g (≥ 0).
    pub g: f64,
    /// Number of qubits N (≥ 1).
    pub n_qubits: usize,
    /// Photon loss rate κ (≥ 0).
    pub kappa: f64,
    /// Individual qubit decay rate Γ↓ (≥ 0).
    pub gamma_down: f64,
    /// Individual qubit dephasing rate Γφ (≥ 0).
    pub gamma_phi: f64,
}

/// Validation scope: some formulas (the closed-form steady state) divide by
/// κ and Γ↓ and therefore need them strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationScope {
    /// Trajectories and Jacobians: rates may be zero.
    Dynamics,
    /// Closed-form steady-state formulas: κ > 0, Γ↓ > 0, g > 0 required.
    SteadyState,
}

impl ModelParams {
    /// Lists every violated invariant; empty means the parameters are valid
    /// for the given scope. Verdict-returning: never errors.
    pub fn violations(&self, scope: ValidationScope) -> Vec<String> {
        let mut out = Vec::new();
        let finite = [
            ("omega_c", self.omega_c),
            ("omega_0", self.omega_0),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma_down", self.gamma_down),
            ("gamma_phi", self.gamma_phi),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                out.push(format!("{name} must be finite"));
            }
        }
        if self.omega_c <= 0.0 {
            out.push("omega_c must be > 0".into());
        }
        if self.omega_0 <= 0.0 {
            out.push("omega_0 must be > 0".into());
        }
        if self.g < 0.0 {
            out.push("g must be >= 0".into());
        }
        if self.n_qubits == 0 {
            out.push("n_qubits must be >= 1".into());
        }
        if self.kappa < 0.0 {
            out.push("kappa must be >= 0".into());
        }
        if self.gamma_down < 0.0 {
            out.push("gamma_down must be >= 0".into());
        }
        if self.gamma_phi < 0.0 {
            out.push("gamma_phi must be >= 0".into());
        }
        if scope == ValidationScope::SteadyState {
            if self.kappa == 0.0 {
                out.push("kappa must be > 0 for the steady-state formulas".into());
            }
            if self.gamma_down == 0.0 {
                out.push("gamma_down must be > 0 for the steady-state formulas".into());
            }
            if self.g == 0.0 {
                out.push("g must be > 0 for the steady-state formulas".into());
            }
        }
        out
    }

    /// Returns `self` if valid for the scope, else [`Error::InvalidParams`].
    pub fn validated(self, scope: ValidationScope) -> Result<Self, Error> {
        let violations = self.violations(scope);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    /// N as a float, for the √N factors that appear everywhere.
    #[inline]
    pub fn n(&self) -> f64 {
        self.n_qubits as f64
    }

    /// √N.
    #[inline]
    pub fn sqrt_n(&self) -> f64 {
        self.n().sqrt()
    }

    /// Derived rates Γ′, β and the threshold coupling g_t.
    ///
    /// Errors with [`Error::BetaUndefined`] when Γ↓ = 0 (β divides by it).
    pub fn derived_rates(&self) -> Result<DerivedRates, Error> {
        if self.gamma_down <= 0.0 {
            return Err(Error::BetaUndefined);
        }
        Ok(DerivedRates {
            gamma_prime: self.gamma_prime(),
            beta: self.omega_c * self.gamma_prime()
                / (2.0 * self.omega_0 * self.n() * self.gamma_down),
            g_t: self.g_t(),
        })
    }

    /// Combined transverse spin damping Γ′ = 2Γφ + Γ↓/2.
    ///
    /// Available even when Γ↓ = 0 (unlike β).
    #[inline]
    pub fn gamma_prime(&self) -> f64 {
        2.0 * self.gamma_phi + 0.5 * self.gamma_down
    }

    /// Threshold coupling where the normal phase loses linear stability:
    ///
    /// ```text
    /// g_t = √[ (2ω_c + κ²/2ω_c)(2ω_0 + Γ′²/2ω_0) / 8 ]
    /// ```
    #[inline]
    pub fn g_t(&self) -> f64 {
        let gp = self.gamma_prime();
        let fc = 2.0 * self.omega_c + self.kappa * self.kappa / (2.0 * self.omega_c);
        let fq = 2.0 * self.omega_0 + gp * gp / (2.0 * self.omega_0);
        (fc * fq / 8.0).sqrt()
    }

    /// Quadrature-potential coefficients at this coupling (collapse heuristic).
    pub fn quadrature_potential(&self) -> QuadraturePotential {
        let gn = self.g * self.sqrt_n();
        QuadraturePotential {
            coeff_x: 0.25 * (self.omega_c - gn),
            coeff_p: 0.25 * (self.omega_c + gn),
        }
    }

    /// Coupling g_collapse = ω_c/√N at which the x-quadrature potential
    /// coefficient vanishes and the closed-system spectrum collapses.
    #[inline]
    pub fn collapse_coupling(&self) -> f64 {
        self.omega_c / self.sqrt_n()
    }

    /// Same physics, expressed in units of ω_c: every frequency and rate is
    /// divided by ω_c. All derived quantities scale covariantly (Γ′ and g_t
    /// by 1/ω_c, β unchanged), so this is a pure relabeling.
    pub fn in_omega_c_units(&self) -> Self {
        let w = self.omega_c;
        Self {
            omega_c: 1.0,
            omega_0: self.omega_0 / w,
            g: self.g / w,
            n_qubits: self.n_qubits,
            kappa: self.kappa / w,
            gamma_down: self.gamma_down / w,
            gamma_phi: self.gamma_phi / w,
        }
    }
}

/// Rates derived from [`ModelParams`]; see the field docs for definitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    /// Γ′ = 2Γφ + Γ↓/2 — transverse spin damping.
    pub gamma_prime: f64,
    /// β = ω_c Γ′ / (2 ω_0 N Γ↓) — dimensionless; → 0 as N → ∞.
    pub beta: f64,
    /// g_t — coupling where the normal phase destabilizes.
    pub g_t: f64,
}

/// Coefficients of the effective quadratic quadrature potential
/// V ∝ coeff_x·x̂² + coeff_p·p̂², with coeff_{x,p} = (ω_c ∓ g√N)/4.
///
/// Their sum is ω_c/2 for every g; coeff_x crosses zero at the collapse
/// coupling g√N = ω_c, beyond which the potential is inverted and the
/// closed-system spectrum is no longer bounded from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePotential {
    /// (ω_c − g√N)/4; negative means inverted potential.
    pub coeff_x: f64,
    /// (ω_c + g√N)/4.
    pub coeff_p: f64,
}

impl QuadraturePotential {
    /// True once g√N > ω_c: the x-quadrature potential turns concave.
    #[inline]
    pub fn is_inverted(&self) -> bool {
        self.coeff_x < 0.0
    }
}
