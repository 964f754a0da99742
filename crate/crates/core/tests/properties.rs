//! Property-based tests of the structural invariants: symmetries of the
//! flow, covariance under unit rescaling, branch-pair relations, spectrum
//! bookkeeping, and text-artifact round trips.

use dicke2p::model::ValidationScope;
use dicke2p::textio::format_float;
use dicke2p::{
    classify, eigenvalues, jacobian_normal, normal_branch, photon_curve, rhs,
    spectrum_distance, superradiant_branches, AxisSpec, Branches, MeanFieldState,
    ModelParams, ParamAxis, PhaseLabel,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

/// Log-uniform ratio to ω_c in [0.1, 10].
fn ratio() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0).prop_map(|e| 10f64.powf(e))
}

fn params() -> impl Strategy<Value = ModelParams> {
    (
        ratio(),
        ratio(),
        prop_oneof![Just(10usize), Just(100), Just(1000)],
        ratio(),
        ratio(),
        ratio(),
    )
        .prop_map(
            |(omega_0, g, n_qubits, kappa, gamma_down, gamma_phi)| ModelParams {
                omega_c: 1.0,
                omega_0,
                g,
                n_qubits,
                kappa,
                gamma_down,
                gamma_phi,
            },
        )
}

fn state() -> impl Strategy<Value = MeanFieldState> {
    (
        -10.0f64..10.0,
        -10.0f64..10.0,
        0.0f64..20.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
        .prop_map(|(x, v, n, jx, jy, jz)| MeanFieldState::new(x, v, n, jx, jy, jz))
}

proptest! {
    /// The flow commutes with the residual Z₂ symmetry
    /// (x, v, jx, jy) → −(x, v, jx, jy): flipping the state flips the
    /// derivative, exactly.
    #[test]
    fn rhs_is_z2_equivariant(p in params(), s in state()) {
        let flipped = rhs(&s.z2_flipped(), &p);
        let direct = rhs(&s, &p).z2_flipped();
        prop_assert_eq!(flipped.to_array(), direct.to_array());
    }

    /// Every term of the flow is linear in exactly one frequency or rate, so
    /// doubling all of them doubles the derivative — exactly, since scaling
    /// by 2 only shifts exponents.
    #[test]
    fn rhs_scales_linearly_with_all_rates(p in params(), s in state()) {
        let doubled = ModelParams {
            omega_c: 2.0 * p.omega_c,
            omega_0: 2.0 * p.omega_0,
            g: 2.0 * p.g,
            n_qubits: p.n_qubits,
            kappa: 2.0 * p.kappa,
            gamma_down: 2.0 * p.gamma_down,
            gamma_phi: 2.0 * p.gamma_phi,
        };
        let direct = rhs(&s, &doubled).to_array();
        let scaled = rhs(&s, &p).to_array().map(|d| 2.0 * d);
        prop_assert_eq!(direct, scaled);
    }

    /// The fully polarized zero-photon state is a fixed point at any
    /// parameters, with zero residual to the last bit.
    #[test]
    fn normal_state_is_an_exact_fixed_point(p in params()) {
        prop_assert_eq!(rhs(&MeanFieldState::normal(), &p).to_array(), [0.0; 6]);
        prop_assert_eq!(normal_branch(&p).residual(&p), 0.0);
    }

    /// Re-expressing the same physics in units of ω_c leaves the
    /// dimensionless combinations invariant and scales the rest by 1/ω_c.
    #[test]
    fn unit_rescaling_is_covariant(p0 in params(), w in 0.25f64..8.0) {
        let p = ModelParams { omega_c: w, omega_0: w * p0.omega_0, g: w * p0.g,
            kappa: w * p0.kappa, gamma_down: w * p0.gamma_down,
            gamma_phi: w * p0.gamma_phi, ..p0 };
        let scaled = p.in_omega_c_units();
        prop_assert!((scaled.g_t() - p.g_t() / w).abs() <= 1e-12 * scaled.g_t());
        prop_assert!(
            (scaled.gamma_prime() - p.gamma_prime() / w).abs()
                <= 1e-12 * scaled.gamma_prime()
        );
        let beta = p.derived_rates().unwrap().beta;
        let beta_scaled = scaled.derived_rates().unwrap().beta;
        prop_assert!((beta - beta_scaled).abs() <= 1e-12 * beta.abs());
    }

    /// The two quadrature stiffnesses average to ω_c/4 regardless of g, and
    /// the potential inverts exactly when g√N exceeds ω_c.
    #[test]
    fn quadrature_potential_bookkeeping(p in params()) {
        let q = p.quadrature_potential();
        let sum = q.coeff_x + q.coeff_p;
        prop_assert!((sum - 0.5 * p.omega_c).abs() <= 1e-12 * p.omega_c);
        prop_assert_eq!(q.is_inverted(), p.g * p.sqrt_n() > p.omega_c);
        prop_assert!((p.collapse_coupling() * p.sqrt_n() - p.omega_c).abs()
            <= 1e-12 * p.omega_c);
    }

    /// Parameter validation is a verdict, not a side effect: `validated`
    /// succeeds exactly when `violations` is empty.
    #[test]
    fn validation_verdicts_agree(p in params()) {
        for scope in [ValidationScope::Dynamics, ValidationScope::SteadyState] {
            prop_assert_eq!(
                p.violations(scope).is_empty(),
                p.validated(scope).is_ok()
            );
        }
    }

    /// The symmetry-broken pair maps onto itself under the residual Z₂:
    /// the minus branch is the flipped plus branch, bit for bit.
    #[test]
    fn branch_pair_is_z2_conjugate(p in params()) {
        if let Ok(Branches::Pair([plus, minus])) = superradiant_branches(&p) {
            prop_assert_eq!(
                minus.state.to_array(),
                plus.state.z2_flipped().to_array()
            );
            // Both carry the same jz root and photon number.
            prop_assert_eq!(plus.state.jz, minus.state.jz);
            prop_assert_eq!(plus.state.n, minus.state.n);
        }
    }

    /// Where a physical branch exists, it solves the fixed-point equations
    /// to the documented residual bound.
    #[test]
    fn physical_branches_have_tiny_residuals(p in params()) {
        if let Ok(Branches::Pair(pair)) = superradiant_branches(&p) {
            for branch in pair.iter().filter(|b| b.physical) {
                let scale = 1.0 + branch.state.norm();
                prop_assert!(branch.residual(&p) <= 1e-9 * scale,
                    "residual {:.3e} at {:?}", branch.residual(&p), p);
            }
        }
    }

    /// A real matrix has a self-conjugate spectrum, its eigenvalue sum is
    /// the trace, and the multiset distance obeys metric axioms.
    #[test]
    fn spectrum_bookkeeping(p in params()) {
        let m = jacobian_normal(&p);
        let spectrum = eigenvalues(&m).unwrap();
        let conjugated = spectrum.map(|z| z.conj());
        let scale = m.norm().max(1.0);
        prop_assert!(spectrum_distance(&spectrum, &conjugated) <= 1e-9 * scale);
        let sum: C64 = spectrum.iter().sum();
        prop_assert!((sum.re - m.trace()).abs() <= 1e-9 * scale);
        prop_assert!(sum.im.abs() <= 1e-9 * scale);
        prop_assert_eq!(spectrum_distance(&spectrum, &spectrum), 0.0);
        let mut reversed = spectrum;
        reversed.reverse();
        prop_assert_eq!(spectrum_distance(&spectrum, &reversed), 0.0);
    }

    /// The four-way phase label is exactly the (normal-stable,
    /// superradiant-stable) truth table.
    #[test]
    fn phase_label_matches_the_stability_table(p in params()) {
        let verdict = classify(&p).unwrap();
        let normal_stable = verdict.normal.stable;
        let super_stable = verdict.superradiant.as_ref().is_some_and(|r| r.stable);
        let expected = match (normal_stable, super_stable) {
            (true, false) => PhaseLabel::Normal,
            (false, true) => PhaseLabel::Superradiant,
            (true, true) => PhaseLabel::Bistable,
            (false, false) => PhaseLabel::Instability,
        };
        prop_assert_eq!(verdict.label, expected);
    }

    /// Axis grids contain exactly the requested number of strictly
    /// increasing values with both endpoints hit exactly.
    #[test]
    fn axis_values_are_sorted_and_pinned(
        min in 0.01f64..10.0,
        span in 0.1f64..100.0,
        points in 2usize..40,
        log in any::<bool>(),
    ) {
        let max = min + span;
        let axis = if log {
            AxisSpec::log(ParamAxis::G, min, max, points)
        } else {
            AxisSpec::linear(ParamAxis::G, min, max, points)
        };
        let values = axis.values();
        prop_assert_eq!(values.len(), points);
        prop_assert_eq!(values[0], min);
        prop_assert_eq!(values[points - 1], max);
        prop_assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    /// The photon-number column uses NaN as its only sentinel: a point is
    /// NaN exactly when no physical branch exists there.
    #[test]
    fn photon_curve_sentinels_are_consistent(p in params(), hi in 1.5f64..12.0) {
        let curve = photon_curve(&p, (0.05, hi), 24).unwrap();
        prop_assert_eq!(curve.len(), 24);
        for point in curve.iter() {
            prop_assert_eq!(point.n_ss.is_nan(), !point.physical);
            if point.stable {
                prop_assert!(point.physical);
            }
        }
    }

    /// Every finite f64 round-trips bit-exactly through the CSV float
    /// format.
    #[test]
    fn csv_floats_round_trip(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        let text = format_float(x);
        let back: f64 = text.parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
