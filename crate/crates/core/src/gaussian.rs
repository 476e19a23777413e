//! Normally ordered two-mode Gaussian states and their single-mode
//! reductions.
//!
//! A pure two-mode Gaussian state (displacements stripped) is stored as
//! `A0 :exp{½[x1ᵀ M1 x1 + x2ᵀ M2 x2 + 2 x1ᵀ M12 x2]}:` with
//! `xi = (ai†, ai)`. Tracing out mode 2 is a complex Gaussian integral and
//! leaves `A0/√(−det M2) :exp{½ x1ᵀ K x1}:` with
//! `K = M1 − M12 M2⁻¹ M12ᵀ`. The kernel `K` encodes a unimodular matrix
//! `M = ((a, d), (b, c))` through
//!
//! ```text
//! K Σ_B⁻¹ = ((c⁻¹ − 1, c⁻¹ d), (c⁻¹ b, 1 − c⁻¹))
//! ```
//!
//! and the reduced operator is `A exp{½ x1ᵀ (ln M) Σ_B x1}` with
//! `A = A0 √(c / −det M2)`. The eigenvalues `λ`, `1/λ` of `M` fix the
//! Schmidt spectrum `(1 − λ) λⁿ`.

use num_complex::Complex64;

use crate::error::{CveError, Result};
use crate::matcore::{self, det2, expm, inv2, log_unimodular, quad_roots_unit_product, C2Mat};

/// Tolerance for the structural invariants of [`GaussianCoeffState`].
pub const STATE_TOL: f64 = 1e-10;

/// Tolerance for the two readings of `c` from the kernel, and for the
/// invariants of [`ReducedGaussian`].
pub const DMAP_TOL: f64 = 1e-9;

/// `|c⁻¹|` at or below this is treated as the product-state limit.
pub const PRODUCT_TOL: f64 = 1e-15;

/// `λ` at or above `1 − LAMBDA_EDGE` has no finite entropy.
pub const LAMBDA_EDGE: f64 = 1e-12;

/// Coefficient matrices of a normally ordered two-mode Gaussian density
/// operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCoeffState {
    pub m1: C2Mat,
    pub m2: C2Mat,
    pub m12: C2Mat,
    pub a0: f64,
}

impl GaussianCoeffState {
    /// Validates the structural invariants; the error names the first
    /// one that fails.
    pub fn new(m1: C2Mat, m2: C2Mat, m12: C2Mat, a0: f64) -> Result<Self> {
        let state = GaussianCoeffState { m1, m2, m12, a0 };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in [("M1", &self.m1), ("M2", &self.m2), ("M12", &self.m12)] {
            if !m.is_finite() {
                return Err(CveError::InvariantViolation(format!("{name} finite entries")));
            }
        }
        for (name, m) in [("M1", &self.m1), ("M2", &self.m2)] {
            let scale = STATE_TOL * m.max_abs().max(1.0);
            if (m.get(0, 1) - m.get(1, 0)).norm() > scale {
                return Err(CveError::InvariantViolation(format!("{name} symmetry")));
            }
            let swapped = C2Mat::sigma1() * *m * C2Mat::sigma1();
            if swapped.max_diff(&m.conj()) > scale {
                return Err(CveError::InvariantViolation(format!(
                    "{name} swap-conjugation"
                )));
            }
        }
        let m12 = &self.m12;
        let scale = STATE_TOL * m12.max_abs().max(1.0);
        if (m12.get(1, 0) - m12.get(0, 1).conj()).norm() > scale
            || (m12.get(1, 1) - m12.get(0, 0).conj()).norm() > scale
        {
            return Err(CveError::InvariantViolation("M12 shape".into()));
        }
        if !(self.a0 > 0.0 && self.a0.is_finite()) {
            return Err(CveError::InvariantViolation("A0 positive".into()));
        }
        Ok(())
    }

    /// `K = M1 − M12 M2⁻¹ M12ᵀ`, the exponent of the normally ordered
    /// reduced operator.
    pub fn reduced_kernel(&self) -> Result<C2Mat> {
        let m2_inv = inv2(&self.m2)?;
        Ok(self.m1 - self.m12 * m2_inv * self.m12.transpose())
    }
}

/// Single-mode reduced state: `M = ((a, d), (b, c))` and prefactor `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedGaussian {
    pub a: f64,
    pub b: Complex64,
    pub c: f64,
    pub d: Complex64,
    /// The prefactor `A` of the exponential form.
    pub amp: f64,
    lambda: f64,
}

impl ReducedGaussian {
    /// Builds the reduced state from `c`, `d`, `b`, deriving
    /// `a = (1 + bd)/c`.
    pub fn from_cdb(c: f64, d: Complex64, b: Complex64, amp: f64) -> Result<Self> {
        let a = (Complex64::new(1.0, 0.0) + b * d) / c;
        let scale = DMAP_TOL * (1.0 + (b * d).norm()) / c.abs();
        if a.im.abs() > scale {
            return Err(CveError::DegenerateReduction(format!(
                "a = (1 + bd)/c is not real: {a}"
            )));
        }
        Self::new(a.re, b, c, d, amp)
    }

    pub fn new(a: f64, b: Complex64, c: f64, d: Complex64, amp: f64) -> Result<Self> {
        if !(a.is_finite() && c.is_finite() && b.is_finite() && d.is_finite()) {
            return Err(CveError::DegenerateReduction("non-finite entries of M".into()));
        }
        if !(amp > 0.0 && amp.is_finite()) {
            return Err(CveError::DegenerateReduction(format!(
                "prefactor A = {amp} is not positive"
            )));
        }
        let scale = 1.0 + d.norm();
        if (b + d.conj()).norm() > DMAP_TOL * scale {
            return Err(CveError::InvariantViolation("b = -conj(d)".into()));
        }
        let det = Complex64::new(a * c, 0.0) - b * d;
        if (det - 1.0).norm() > DMAP_TOL * (1.0 + (a * c).abs() + (b * d).norm()) {
            return Err(CveError::InvariantViolation(format!("det M = {det} != 1")));
        }
        let (lambda, _) = quad_roots_unit_product(a + c)?;
        Ok(ReducedGaussian {
            a,
            b,
            c,
            d,
            amp,
            lambda,
        })
    }

    /// The reduced state of a two-mode squeezed vacuum, `λ = tanh² r`.
    pub fn tmsv(r: f64) -> Result<Self> {
        let lambda = r.tanh().powi(2);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(lambda, zero, 1.0 / lambda, zero, (1.0 - lambda) / lambda.sqrt())
    }

    /// `M = ((a, d), (b, c))`.
    pub fn m_matrix(&self) -> C2Mat {
        C2Mat::new(
            Complex64::new(self.a, 0.0),
            self.d,
            self.b,
            Complex64::new(self.c, 0.0),
        )
    }

    /// The eigenvalue of `M` in `(0, 1]`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `A √λ / (1 − λ)`, which is `tr ρ1`.
    pub fn normalization(&self) -> f64 {
        self.amp * self.lambda.sqrt() / (1.0 - self.lambda)
    }
}

/// Outcome of a partial trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    /// `c⁻¹ = 0`: the reduced state is pure and the input a product state.
    Product,
    Entangled(ReducedGaussian),
}

impl Reduction {
    pub fn entropy(&self) -> Result<f64> {
        match self {
            Reduction::Product => Ok(0.0),
            Reduction::Entangled(red) => entropy_gaussian(red),
        }
    }

    pub fn is_separable(&self, tol: f64) -> bool {
        match self {
            Reduction::Product => true,
            Reduction::Entangled(red) => is_separable(red, tol),
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Reduction::Product => 0.0,
            Reduction::Entangled(red) => red.lambda(),
        }
    }

    pub fn entangled(&self) -> Option<&ReducedGaussian> {
        match self {
            Reduction::Product => None,
            Reduction::Entangled(red) => Some(red),
        }
    }
}

/// `D(M) = ((c⁻¹ − 1, c⁻¹ d), (c⁻¹ b, 1 − c⁻¹))`.
pub fn d_map(red: &ReducedGaussian) -> C2Mat {
    let ci = 1.0 / red.c;
    C2Mat::new(
        Complex64::new(ci - 1.0, 0.0),
        red.d * ci,
        red.b * ci,
        Complex64::new(1.0 - ci, 0.0),
    )
}

/// The normally ordered kernel `K = D(M) Σ_B` encoded by `red`.
pub fn kernel_of(red: &ReducedGaussian) -> C2Mat {
    d_map(red) * C2Mat::sigma_b()
}

/// Traces out mode 2.
pub fn reduce(state: &GaussianCoeffState) -> Result<Reduction> {
    let m2_inv = inv2(&state.m2)?;
    let coupling = state.m12 * m2_inv * state.m12.transpose();
    let kernel = state.m1 - coupling;
    let sigma_b_inv = matcore::inv2(&C2Mat::sigma_b())?;
    // D(M) = K Σ_B⁻¹ is split into its M1 and coupling parts so that
    // c⁻¹ = 1 − D22 keeps full relative precision when it is small: for a
    // pure input the M1 part alone cancels the 1 exactly.
    let d_own = state.m1 * sigma_b_inv;
    let d_coupling = coupling * sigma_b_inv;
    let dm = d_own - d_coupling;

    // (2,2) entry is 1 − c⁻¹, (1,1) entry is c⁻¹ − 1.
    let one = Complex64::new(1.0, 0.0);
    let c_inv = (one - d_own.get(1, 1)) + d_coupling.get(1, 1);
    let c_inv_check = (d_own.get(0, 0) + one) - d_coupling.get(0, 0);
    let scale = DMAP_TOL * kernel.max_abs().max(1.0);
    if (c_inv - c_inv_check).norm() > scale {
        return Err(CveError::DegenerateReduction(format!(
            "D(M) diagonal inconsistent: 1 - D22 = {c_inv}, D11 + 1 = {c_inv_check}"
        )));
    }
    if c_inv.im.abs() > scale {
        return Err(CveError::DegenerateReduction(format!(
            "c⁻¹ = {c_inv} is not real"
        )));
    }
    let c_inv = c_inv.re;
    if c_inv.abs() <= PRODUCT_TOL {
        return Ok(Reduction::Product);
    }
    if c_inv < 0.0 {
        return Err(CveError::DegenerateReduction(format!(
            "c⁻¹ = {c_inv} is negative"
        )));
    }
    let c = 1.0 / c_inv;
    let d = dm.get(0, 1) * c;
    let b = dm.get(1, 0) * c;

    let neg_det_m2 = -det2(&state.m2);
    if neg_det_m2.re <= 0.0 || neg_det_m2.im.abs() > scale {
        return Err(CveError::DegenerateReduction(format!(
            "-det M2 = {neg_det_m2} is not positive"
        )));
    }
    let amp = state.a0 * (c / neg_det_m2.re).sqrt();
    ReducedGaussian::from_cdb(c, d, b, amp).map(Reduction::Entangled)
}

/// `det(e^{βN} − I)` for a 2×2 `N`.
///
/// Uses `det(Y − I) = det Y − tr Y + 1` with `det e^{βN} = e^{β tr N}`;
/// expanding `ad − bc` directly loses all precision when `e^{βN}` has
/// large, nearly cancelling entries.
fn det_exp_minus_identity(n: &C2Mat, beta: f64) -> Complex64 {
    let y = expm(&(*n * beta));
    (n.trace() * beta).exp() - y.trace() + 1.0
}

/// `(e^{N} − I)⁻¹` by Cayley–Hamilton, `X⁻¹ = (tr X · I − X)/det X`.
fn exp_minus_identity_inverse(n: &C2Mat) -> Result<C2Mat> {
    let x = expm(n) - C2Mat::identity();
    let det = det_exp_minus_identity(n, 1.0);
    if !(det.norm() > 1e-14) || !det.is_finite() {
        return Err(CveError::DivergentPartition(det.norm()));
    }
    Ok((C2Mat::identity().scale(x.trace()) - x).scale(det.inv()))
}

/// `Z(β) = |det(e^{βN} − 1)|^{−1/2}`.
pub fn partition_function(n: &C2Mat, beta: f64) -> Result<f64> {
    let det = det_exp_minus_identity(n, beta).norm();
    if !(det > 1e-14) || !det.is_finite() {
        return Err(CveError::DivergentPartition(det));
    }
    Ok(det.powf(-0.5))
}

/// Entropy `−ln(1 − λ) − λ/(1 − λ) · ln λ` of the geometric spectrum
/// `(1 − λ) λⁿ`, in nats.
pub fn entropy_from_lambda(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    -(-lambda).ln_1p() - lambda / (1.0 - lambda) * lambda.ln()
}

/// `A √λ/|λ − 1| · [−ln A − (1 + λ)/(2(1 − λ)) · ln λ]`.
///
/// Invariant under `λ → 1/λ`.
pub fn prefactor_form_entropy(amp: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let bracket = -amp.ln() - (1.0 + lambda) / (2.0 * (1.0 - lambda)) * lambda.ln();
    amp * lambda.sqrt() / (lambda - 1.0).abs() * bracket
}

fn check_lambda(red: &ReducedGaussian) -> Result<f64> {
    let lambda = red.lambda();
    if lambda >= 1.0 - LAMBDA_EDGE {
        return Err(CveError::EntropyDiverges { lambda });
    }
    Ok(lambda)
}

/// Entanglement entropy in nats from the spectral parameter `λ`.
pub fn entropy_gaussian(red: &ReducedGaussian) -> Result<f64> {
    check_lambda(red).map(entropy_from_lambda)
}

/// Entropy through the matrix logarithm `N = ln M`:
/// `E = −A Z(−1) [ln A + ½ tr N (1 − e^N)⁻¹]`.
pub fn entropy_matrix_route(red: &ReducedGaussian) -> Result<f64> {
    check_lambda(red)?;
    let n = log_unimodular(&red.m_matrix())?;
    let z = partition_function(&n, -1.0)?;
    // N (1 − e^N)⁻¹ = −N (e^N − 1)⁻¹
    let tr = -(n * exp_minus_identity_inverse(&n)?).trace().re;
    Ok(-red.amp * z * (red.amp.ln() + 0.5 * tr))
}

/// Separability test `ln A = ½ tr N (e^N − 1)⁻¹` within `tol`.
pub fn is_separable(red: &ReducedGaussian, tol: f64) -> bool {
    let lambda = red.lambda();
    if lambda >= 1.0 - LAMBDA_EDGE {
        return false;
    }
    let rhs = log_unimodular(&red.m_matrix()).and_then(|n| {
        Ok(0.5 * (n * exp_minus_identity_inverse(&n)?).trace().re)
    });
    match rhs {
        Ok(rhs) if rhs.is_finite() => (red.amp.ln() - rhs).abs() <= tol,
        _ => entropy_from_lambda(lambda) <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cz(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tmsv_state(r: f64) -> GaussianCoeffState {
        let t = r.tanh();
        let m12 = C2Mat::diag(cz(-t), cz(-t));
        GaussianCoeffState::new(
            -C2Mat::sigma1(),
            -C2Mat::sigma1(),
            m12,
            1.0 / r.cosh().powi(2),
        )
        .unwrap()
    }

    #[test]
    fn tmsv_reduction_matches_hand_values() {
        let red = *reduce(&tmsv_state(1.0)).unwrap().entangled().unwrap();
        let t2 = 1f64.tanh().powi(2);
        assert_relative_eq!(red.a, t2, epsilon = 1e-14);
        assert_relative_eq!(red.c, 1.0 / t2, epsilon = 1e-13);
        assert!(red.b.norm() < 1e-15 && red.d.norm() < 1e-15);
        assert_relative_eq!(red.amp, 1.0 / (1f64.sinh() * 1f64.cosh()), epsilon = 1e-14);
        assert_relative_eq!(red.normalization(), 1.0, epsilon = 1e-14);
        // the d-map reproduces the kernel
        let k = tmsv_state(1.0).reduced_kernel().unwrap();
        assert!(kernel_of(&red).max_diff(&k) < 1e-14);
    }

    #[test]
    fn product_state_short_circuits() {
        let t = 0.4f64.tanh();
        let m1 = -C2Mat::new(cz(t), cz(1.0), cz(1.0), cz(t));
        let state = GaussianCoeffState::new(m1, -C2Mat::sigma1(), C2Mat::zero(), 1.0 / 0.4f64.cosh())
            .unwrap();
        let red = reduce(&state).unwrap();
        assert_eq!(red, Reduction::Product);
        assert_eq!(red.entropy().unwrap(), 0.0);
        assert!(red.is_separable(1e-9));
    }

    #[test]
    fn invariant_violations_are_named() {
        let bad = C2Mat::real(0.0, 1.0, 0.5, 0.0);
        let err = GaussianCoeffState::new(bad, -C2Mat::sigma1(), C2Mat::zero(), 1.0).unwrap_err();
        assert_eq!(err, CveError::InvariantViolation("M1 symmetry".into()));
        let m = C2Mat::new(cz(0.1), cz(1.0), cz(1.0), cz(0.2));
        let err = GaussianCoeffState::new(-C2Mat::sigma1(), m, C2Mat::zero(), 1.0).unwrap_err();
        assert_eq!(err, CveError::InvariantViolation("M2 swap-conjugation".into()));
        let m12 = C2Mat::real(0.1, 0.2, 0.3, 0.1);
        let err =
            GaussianCoeffState::new(-C2Mat::sigma1(), -C2Mat::sigma1(), m12, 1.0).unwrap_err();
        assert_eq!(err, CveError::InvariantViolation("M12 shape".into()));
        let err = GaussianCoeffState::new(-C2Mat::sigma1(), -C2Mat::sigma1(), C2Mat::zero(), 0.0)
            .unwrap_err();
        assert_eq!(err, CveError::InvariantViolation("A0 positive".into()));
    }

    #[test]
    fn singular_m2_is_rejected() {
        let state = GaussianCoeffState::new(
            -C2Mat::sigma1(),
            C2Mat::zero(),
            C2Mat::zero(),
            1.0,
        )
        .unwrap();
        assert!(matches!(reduce(&state), Err(CveError::SingularMatrix { .. })));
    }

    #[test]
    fn partition_function_cases() {
        let l = 0.25f64;
        let n = C2Mat::real(l.ln(), 0.0, 0.0, -l.ln());
        assert_relative_eq!(partition_function(&n, -1.0).unwrap(), 2.0 / 3.0, epsilon = 1e-14);

        let lt = 1f64.tanh().powi(2);
        let n = C2Mat::real(lt.ln(), 0.0, 0.0, -lt.ln());
        // reciprocal of the TMSV prefactor A = (1 − λ)/√λ, so that A·Z = 1
        let expected = lt.sqrt() / (1.0 - lt);
        assert_relative_eq!(partition_function(&n, -1.0).unwrap(), expected, epsilon = 1e-13);

        assert!(matches!(
            partition_function(&C2Mat::zero(), -1.0),
            Err(CveError::DivergentPartition(_))
        ));
    }

    #[test]
    fn partition_function_matches_fock_sum() {
        // tr λ^{-β/2} λ^{-β n} summed directly
        let l = 0.3f64;
        let n = C2Mat::real(l.ln(), 0.0, 0.0, -l.ln());
        for beta in [-1.0, -0.5, -2.0] {
            let sum: f64 = (0..400)
                .map(|k| l.powf(-beta * (k as f64 + 0.5)))
                .sum();
            assert_relative_eq!(partition_function(&n, beta).unwrap(), sum, epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_from_lambda(0.0), 0.0);
        assert_relative_eq!(entropy_from_lambda(0.5), 2.0 * 2f64.ln(), epsilon = 1e-15);
        let red = ReducedGaussian::tmsv(1.0).unwrap();
        let (ch, sh) = (1f64.cosh().powi(2), 1f64.sinh().powi(2));
        let expected = ch * ch.ln() - sh * sh.ln();
        assert_relative_eq!(entropy_gaussian(&red).unwrap(), expected, epsilon = 1e-13);
        assert_relative_eq!(entropy_gaussian(&red).unwrap(), 1.6199, epsilon = 1e-4);
        assert_relative_eq!(entropy_matrix_route(&red).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn entropy_matches_direct_series() {
        for lambda in [1e-6f64, 0.1, 0.5, 0.9] {
            let direct: f64 = (0..20_000)
                .map(|n| (1.0 - lambda) * lambda.powi(n))
                .filter(|&p| p > 0.0)
                .map(|p| -p * p.ln())
                .sum();
            assert_relative_eq!(entropy_from_lambda(lambda), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn prefactor_form_is_root_symmetric() {
        for lambda in [0.01f64, 0.3, 0.7] {
            let amp = (1.0 - lambda) / lambda.sqrt();
            let e_small = prefactor_form_entropy(amp, lambda);
            let e_large = prefactor_form_entropy(amp, 1.0 / lambda);
            assert_relative_eq!(e_small, e_large, epsilon = 1e-12);
            assert_relative_eq!(e_small, entropy_from_lambda(lambda), epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_diverges_at_unit_lambda() {
        let zero = Complex64::new(0.0, 0.0);
        let red = ReducedGaussian::new(1.0, zero, 1.0, zero, 1.0).unwrap();
        assert!(matches!(
            entropy_gaussian(&red),
            Err(CveError::EntropyDiverges { .. })
        ));
        assert!(!is_separable(&red, 1e-9));
    }

    #[test]
    fn separability_cases() {
        assert!(!is_separable(&ReducedGaussian::tmsv(1.0).unwrap(), 1e-9));
        assert!(is_separable(&ReducedGaussian::tmsv(1e-10).unwrap(), 1e-9));
        assert!(reduce(&tmsv_state(0.0)).unwrap().is_separable(1e-9));
    }

    #[test]
    fn reduced_invariants_rejected() {
        let d = Complex64::new(0.2, 0.1);
        assert!(ReducedGaussian::new(0.5, d, 2.0, d, 1.0).is_err());
        let zero = Complex64::new(0.0, 0.0);
        assert!(ReducedGaussian::new(0.5, zero, 3.0, zero, 1.0).is_err());
    }
}
