//! States produced by a beam splitter acting on two squeezed vacua,
//! `B(θ, φ) S1(ζ1) S2(ζ2) |00⟩`, and their closed-form entropies.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{CveError, Result};
use crate::gaussian::{
    entropy_from_lambda, prefactor_form_entropy, GaussianCoeffState, ReducedGaussian,
    LAMBDA_EDGE,
};
use crate::matcore::{quad_roots_unit_product, C2Mat};

/// Default cap on `|ζ|`.
pub const MAX_SQUEEZING: f64 = 5.0;

/// `|δ|` at or below this is a product state.
pub const PRODUCT_DELTA_TOL: f64 = 1e-12;

/// Tolerance for `φ = l·π/2` in [`special_case_entropy`].
pub const PHASE_TOL: f64 = 1e-9;

/// Beam-splitter angle and phase plus the two squeezing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    pub theta: f64,
    pub phi: f64,
    pub zeta1: Complex64,
    pub zeta2: Complex64,
}

impl CircuitParams {
    pub fn new(theta: f64, phi: f64, zeta1: Complex64, zeta2: Complex64) -> Result<Self> {
        Self::with_max_squeezing(theta, phi, zeta1, zeta2, MAX_SQUEEZING)
    }

    pub fn with_max_squeezing(
        theta: f64,
        phi: f64,
        zeta1: Complex64,
        zeta2: Complex64,
        max_squeezing: f64,
    ) -> Result<Self> {
        if !theta.is_finite() {
            return Err(CveError::param("theta", "must be finite"));
        }
        if !phi.is_finite() {
            return Err(CveError::param("phi", "must be finite"));
        }
        for (name, z) in [("zeta1", zeta1), ("zeta2", zeta2)] {
            if !z.is_finite() {
                return Err(CveError::param(name, "must be finite"));
            }
            if z.norm() >= max_squeezing {
                return Err(CveError::param(
                    name,
                    format!("|{name}| = {} exceeds the maximum {max_squeezing}", z.norm()),
                ));
            }
        }
        Ok(CircuitParams {
            theta,
            phi,
            zeta1,
            zeta2,
        })
    }

    /// 50:50 splitter with `ζ1 = −r`, `ζ2 = r`: the two-mode squeezed vacuum.
    pub fn tmsv(r: f64) -> Result<Self> {
        Self::new(
            std::f64::consts::FRAC_PI_4,
            0.0,
            Complex64::new(-r, 0.0),
            Complex64::new(r, 0.0),
        )
    }
}

/// The coefficients α, β, δ of the two-mode exponent
/// `exp{−½(α a1†² + β a2†² + 2δ a1† a2†)}|00⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitCoeffs {
    pub alpha: Complex64,
    pub beta_c: Complex64,
    pub delta: Complex64,
}

/// `ζ/|ζ| · tanh|ζ|`, taken as 0 at `ζ = 0`.
pub fn phasor_tanh(zeta: Complex64) -> Complex64 {
    let r = zeta.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        zeta * (r.tanh() / r)
    }
}

pub fn circuit_coeffs(p: &CircuitParams) -> CircuitCoeffs {
    let t1 = phasor_tanh(p.zeta1);
    let t2 = phasor_tanh(p.zeta2);
    let (s, c) = p.theta.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let e_phi = Complex64::from_polar(1.0, p.phi);
    let e_2phi = e_phi * e_phi;
    CircuitCoeffs {
        alpha: t1 * c2 + e_2phi * t2 * s2,
        beta_c: e_2phi.conj() * t1 * s2 + t2 * c2,
        delta: (t2 * e_phi - t1 * e_phi.conj()) * (0.5 * (2.0 * p.theta).sin()),
    }
}

/// Normalization `1/(cosh|ζ1| cosh|ζ2|)` of the circuit state.
pub fn circuit_a0(p: &CircuitParams) -> f64 {
    1.0 / (p.zeta1.norm().cosh() * p.zeta2.norm().cosh())
}

/// Normally ordered coefficients of `|ψ⟩⟨ψ|` for the circuit state.
pub fn bs_squeeze_coeffs(p: &CircuitParams) -> GaussianCoeffState {
    let k = circuit_coeffs(p);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    GaussianCoeffState {
        m1: -C2Mat::new(k.alpha, one, one, k.alpha.conj()),
        m2: -C2Mat::new(k.beta_c, one, one, k.beta_c.conj()),
        m12: -C2Mat::new(k.delta, zero, zero, k.delta.conj()),
        a0: circuit_a0(p),
    }
}

/// Reduced state straight from α, β, δ:
/// `c = (1 − |β|²)/|δ|²`, `d = (δ² β* + α(1 − |β|²))/|δ|²`, `b = −d*`,
/// `A = 1/(|δ| cosh|ζ1| cosh|ζ2|)`.
pub fn reduced_from_circuit(p: &CircuitParams) -> Result<ReducedGaussian> {
    let k = circuit_coeffs(p);
    let delta_abs = k.delta.norm();
    if delta_abs <= PRODUCT_DELTA_TOL {
        return Err(CveError::ProductState { delta: delta_abs });
    }
    let delta2 = delta_abs * delta_abs;
    let one_minus_beta2 = 1.0 - k.beta_c.norm_sqr();
    let c = one_minus_beta2 / delta2;
    let d = (k.delta * k.delta * k.beta_c.conj() + k.alpha * one_minus_beta2) / delta2;
    let amp = circuit_a0(p) / delta_abs;
    ReducedGaussian::from_cdb(c, d, -d.conj(), amp)
}

fn closed_form_with(p: &CircuitParams, flip_sign: bool) -> Result<f64> {
    let red = match reduced_from_circuit(p) {
        Ok(red) => red,
        Err(CveError::ProductState { .. }) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let (lambda, _) = quad_roots_unit_product(red.a + red.c)?;
    if lambda >= 1.0 - LAMBDA_EDGE {
        return Err(CveError::EntropyDiverges { lambda });
    }
    let amp = if flip_sign { 1.0 / red.amp } else { red.amp };
    Ok(prefactor_form_entropy(amp, lambda))
}

/// Closed-form entanglement entropy (nats) of the circuit state,
/// `A √λ/|λ−1| · [−ln A − (1+λ)/(2(1−λ)) ln λ]` with `λ` the small root of
/// `λ² − (a + c)λ + 1 = 0`. Product states give 0.
pub fn entropy_closed_form(p: &CircuitParams) -> Result<f64> {
    closed_form_with(p, false)
}

/// [`entropy_closed_form`] with the sign of `ln A` flipped; a deliberately
/// wrong variant used to check that the verification harness notices.
pub fn entropy_closed_form_mutated(p: &CircuitParams) -> Result<f64> {
    closed_form_with(p, true)
}

/// `cosh²x ln cosh²x − sinh²x ln sinh²x`.
fn cosh_sinh_entropy(x: f64) -> f64 {
    let ch = x.cosh().powi(2);
    let sh = x.sinh().powi(2);
    let sh_term = if sh == 0.0 { 0.0 } else { sh * sh.ln() };
    ch * ch.ln() - sh_term
}

/// Entropy of the 50:50 splitter with `ζi = si e^{iφ}`, `φ = l·π/2`, as
/// `cosh²|s| ln cosh²|s| − sinh²|s| ln sinh²|s|` with
/// `s = ½(s1 e^{iφ} + s2 e^{−iφ})`.
///
/// This formula equals [`entropy_closed_form`] at
/// `(θ = π/4, φ, ζ1 = s1 e^{iφ}, ζ2 = −s2 e^{iφ})`; see
/// [`special_case_params`]. Taking `ζ2 = +s2 e^{iφ}` instead makes it
/// disagree (e.g. it predicts 0 for the two-mode squeezed vacuum).
pub fn special_case_entropy(s1: f64, s2: f64, phi: f64, l_check: i64) -> Result<f64> {
    if !(s1.is_finite() && s2.is_finite()) {
        return Err(CveError::param("s", "must be finite"));
    }
    if !phi.is_finite() || (phi - l_check as f64 * FRAC_PI_2).abs() > PHASE_TOL {
        return Err(CveError::InvalidPhase { phi, l: l_check });
    }
    let e = Complex64::from_polar(1.0, phi);
    let s = (e * s1 + e.conj() * s2) * 0.5;
    Ok(cosh_sinh_entropy(s.norm()))
}

/// Circuit parameters at which [`special_case_entropy`] holds.
pub fn special_case_params(s1: f64, s2: f64, phi: f64) -> Result<CircuitParams> {
    let e = Complex64::from_polar(1.0, phi);
    CircuitParams::new(std::f64::consts::FRAC_PI_4, phi, e * s1, -e * s2)
}

/// Two-mode squeezed vacuum entropy `cosh²r ln cosh²r − sinh²r ln sinh²r`.
pub fn tmsv_entropy(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(CveError::param("r", "must be finite and non-negative"));
    }
    Ok(cosh_sinh_entropy(r))
}

/// Check that `λ` of `reduced_from_circuit` reproduces the geometric form;
/// exposed for reports.
pub fn closed_form_lambda(p: &CircuitParams) -> Result<f64> {
    match reduced_from_circuit(p) {
        Ok(red) => Ok(red.lambda()),
        Err(CveError::ProductState { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// `E(λ)` for the circuit, the stable primary route.
pub fn entropy_lambda_route(p: &CircuitParams) -> Result<f64> {
    let lambda = closed_form_lambda(p)?;
    if lambda >= 1.0 - LAMBDA_EDGE {
        return Err(CveError::EntropyDiverges { lambda });
    }
    Ok(entropy_from_lambda(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{reduce, Reduction};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cz(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tmsv_coefficients() {
        let k = circuit_coeffs(&CircuitParams::tmsv(1.0).unwrap());
        assert!(k.alpha.norm() < 1e-15);
        assert!(k.beta_c.norm() < 1e-15);
        assert_relative_eq!(k.delta.re, 1f64.tanh(), epsilon = 1e-15);
        assert_relative_eq!(k.delta.re, 0.76159, epsilon = 1e-5);
        assert!(k.delta.im.abs() < 1e-15);

        let s = bs_squeeze_coeffs(&CircuitParams::tmsv(1.0).unwrap());
        let t = 1f64.tanh();
        assert!(s.m12.max_diff(&C2Mat::diag(cz(-t), cz(-t))) < 1e-15);
        assert!(s.m1.max_diff(&-C2Mat::sigma1()) < 1e-15);
        assert!(s.m2.max_diff(&-C2Mat::sigma1()) < 1e-15);
    }

    #[test]
    fn no_beam_splitter_means_no_delta() {
        let p = CircuitParams::new(0.0, 0.3, cz(-0.7), Complex64::new(0.2, 0.4)).unwrap();
        let k = circuit_coeffs(&p);
        assert_eq!(k.delta.norm(), 0.0);
        assert!((k.alpha - cz(-(0.7f64.tanh()))).norm() < 1e-15);
        assert!((k.beta_c - phasor_tanh(p.zeta2)).norm() < 1e-15);
        let p = CircuitParams::new(0.0, 0.0, cz(0.5), cz(0.0)).unwrap();
        assert_eq!(bs_squeeze_coeffs(&p).m12.max_abs(), 0.0);
    }

    #[test]
    fn equal_real_squeezing_is_separable() {
        for theta in [0.1, 0.7, 1.3, 2.9] {
            let p = CircuitParams::new(theta, 0.0, cz(0.8), cz(0.8)).unwrap();
            assert!(circuit_coeffs(&p).delta.norm() < 1e-16);
            assert!(matches!(
                reduced_from_circuit(&p),
                Err(CveError::ProductState { .. })
            ));
            assert_eq!(entropy_closed_form(&p).unwrap(), 0.0);
        }
    }

    #[test]
    fn tmsv_reduced_values() {
        let red = reduced_from_circuit(&CircuitParams::tmsv(1.0).unwrap()).unwrap();
        assert_relative_eq!(red.a, 0.580_026, epsilon = 1e-6);
        assert_relative_eq!(red.c, 1.724_062, epsilon = 1e-6);
        assert_relative_eq!(red.amp, 0.551_441, epsilon = 1e-6);
        assert!(red.b.norm() < 1e-15 && red.d.norm() < 1e-15);
    }

    #[test]
    fn tmsv_entropy_values() {
        assert_eq!(tmsv_entropy(0.0).unwrap(), 0.0);
        assert_relative_eq!(tmsv_entropy(1.0).unwrap(), 1.6199, epsilon = 1e-4);
        let l = 0.5f64.tanh().powi(2);
        let expected = -(1.0 - l).ln() - l / (1.0 - l) * l.ln();
        assert_relative_eq!(tmsv_entropy(0.5).unwrap(), expected, epsilon = 1e-12);
        assert_relative_eq!(
            entropy_closed_form(&CircuitParams::tmsv(1.0).unwrap()).unwrap(),
            tmsv_entropy(1.0).unwrap(),
            epsilon = 1e-12
        );
        assert!(tmsv_entropy(-0.1).is_err());
    }

    #[test]
    fn tmsv_entropy_is_increasing() {
        let values: Vec<f64> = (0..=60).map(|i| tmsv_entropy(i as f64 * 0.05).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn special_case_literal_values() {
        assert_eq!(special_case_entropy(0.0, 0.0, 0.0, 0).unwrap(), 0.0);
        assert_eq!(special_case_entropy(-1.0, 1.0, 0.0, 0).unwrap(), 0.0);
        assert_relative_eq!(
            special_case_entropy(1.0, 1.0, 0.0, 0).unwrap(),
            1.6199,
            epsilon = 1e-4
        );
        assert!(matches!(
            special_case_entropy(1.0, 1.0, 0.3, 0),
            Err(CveError::InvalidPhase { .. })
        ));
        assert!(matches!(
            special_case_entropy(1.0, 1.0, PI, 1),
            Err(CveError::InvalidPhase { .. })
        ));
    }

    #[test]
    fn special_case_reconciled_identification() {
        for (l, phi) in [(0, 0.0), (1, FRAC_PI_2), (2, PI), (3, 3.0 * FRAC_PI_2)] {
            for (s1, s2) in [(0.3, 0.9), (-1.0, 0.4), (1.2, -0.2)] {
                let literal = special_case_entropy(s1, s2, phi, l).unwrap();
                let p = special_case_params(s1, s2, phi).unwrap();
                assert_relative_eq!(literal, entropy_closed_form(&p).unwrap(), epsilon = 1e-9);
            }
        }
        // TMSV: ζ2 = −ζ1 = r corresponds to s1 = s2 = −r under this identification
        assert_relative_eq!(
            special_case_entropy(-1.0, -1.0, 0.0, 0).unwrap(),
            tmsv_entropy(1.0).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn zeta_cap_is_enforced() {
        let err = CircuitParams::new(0.0, 0.0, cz(5.5), cz(0.0)).unwrap_err();
        assert!(matches!(err, CveError::InvalidParameter { ref name, .. } if name == "zeta1"));
        assert!(CircuitParams::new(f64::NAN, 0.0, cz(0.1), cz(0.0)).is_err());
    }

    fn params() -> impl Strategy<Value = CircuitParams> {
        (
            0.0..2.0 * PI,
            0.0..2.0 * PI,
            0.0..1.5f64,
            0.0..2.0 * PI,
            0.0..1.5f64,
            0.0..2.0 * PI,
        )
            .prop_map(|(theta, phi, r1, a1, r2, a2)| {
                CircuitParams::new(
                    theta,
                    phi,
                    Complex64::from_polar(r1, a1),
                    Complex64::from_polar(r2, a2),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn coefficient_state_passes_invariants(p in params()) {
            prop_assert!(bs_squeeze_coeffs(&p).validate().is_ok());
            let k = circuit_coeffs(&p);
            prop_assert!(k.alpha.norm() < 1.0 && k.beta_c.norm() < 1.0);
        }

        #[test]
        fn two_reduction_routes_agree(p in params()) {
            prop_assume!(circuit_coeffs(&p).delta.norm() > 1e-6);
            let direct = reduced_from_circuit(&p).unwrap();
            let generic = match reduce(&bs_squeeze_coeffs(&p)).unwrap() {
                Reduction::Entangled(r) => r,
                Reduction::Product => panic!("unexpected product state"),
            };
            // entries of M are compared relative to the matrix scale: `a` is
            // a difference of terms of size |d|²/c when |δ| is small
            let m_scale = direct.m_matrix().max_abs().max(1.0);
            prop_assert!(direct.m_matrix().max_diff(&generic.m_matrix()) < 1e-10 * m_scale);
            prop_assert!((direct.amp - generic.amp).abs() < 1e-10 * direct.amp.max(1.0));
            prop_assert!((direct.lambda() - generic.lambda()).abs() < 1e-10);
        }

        #[test]
        fn reduced_determinant_is_one(p in params()) {
            prop_assume!(circuit_coeffs(&p).delta.norm() > 1e-6);
            let red = reduced_from_circuit(&p).unwrap();
            let det = Complex64::new(red.a * red.c, 0.0) - red.b * red.d;
            prop_assert!((det - 1.0).norm() < 1e-10 * (1.0 + red.c.abs() * red.a.abs()));
        }

        #[test]
        fn closed_form_matches_lambda_route(p in params()) {
            let e26 = entropy_closed_form(&p).unwrap();
            let el = entropy_lambda_route(&p).unwrap();
            prop_assert!((e26 - el).abs() < 1e-9);
        }
    }
}
