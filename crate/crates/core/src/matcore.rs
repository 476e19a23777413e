//! Complex 2×2 matrix algebra for the Gaussian pipeline.
//!
//! Matrix functions (exponential, logarithm) are evaluated in closed form
//! from the two eigenvalues of the matrix rather than by series, so the
//! logarithm branch is explicit and checked.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{CveError, Result};

/// Default singularity tolerance, relative to the largest entry magnitude.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Slack allowed below 2 for the trace of a unimodular matrix with real
/// positive eigenvalues.
pub const TRACE_TOL: f64 = 1e-9;

/// Allowed deviation of `det` from 1 in [`log_unimodular`].
pub const UNIMODULAR_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex 2×2 matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct C2Mat(pub [[Complex64; 2]; 2]);

impl fmt::Debug for C2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl C2Mat {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        C2Mat([[m00, m01], [m10, m11]])
    }

    pub const fn real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        C2Mat([
            [Complex64::new(m00, 0.0), Complex64::new(m01, 0.0)],
            [Complex64::new(m10, 0.0), Complex64::new(m11, 0.0)],
        ])
    }

    pub const fn identity() -> Self {
        C2Mat([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn zero() -> Self {
        C2Mat([[ZERO, ZERO], [ZERO, ZERO]])
    }

    /// Pauli matrix σ1 = ((0,1),(1,0)).
    pub const fn sigma1() -> Self {
        C2Mat::real(0.0, 1.0, 1.0, 0.0)
    }

    /// Symplectic form Σ_B = ((0,1),(-1,0)).
    pub const fn sigma_b() -> Self {
        C2Mat::real(0.0, 1.0, -1.0, 0.0)
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        C2Mat::new(a, ZERO, ZERO, b)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn det(&self) -> Complex64 {
        det2(self)
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        C2Mat::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let m = &self.0;
        C2Mat::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    /// Max entrywise distance to `other`.
    pub fn max_diff(&self, other: &C2Mat) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Add for C2Mat {
    type Output = C2Mat;
    fn add(self, rhs: C2Mat) -> C2Mat {
        let (a, b) = (&self.0, &rhs.0);
        C2Mat::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for C2Mat {
    type Output = C2Mat;
    fn sub(self, rhs: C2Mat) -> C2Mat {
        self + (-rhs)
    }
}

impl Neg for C2Mat {
    type Output = C2Mat;
    fn neg(self) -> C2Mat {
        self.map(|z| -z)
    }
}

impl Mul for C2Mat {
    type Output = C2Mat;
    fn mul(self, rhs: C2Mat) -> C2Mat {
        let (a, b) = (&self.0, &rhs.0);
        C2Mat::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Complex64> for C2Mat {
    type Output = C2Mat;
    fn mul(self, rhs: Complex64) -> C2Mat {
        self.scale(rhs)
    }
}

impl Mul<f64> for C2Mat {
    type Output = C2Mat;
    fn mul(self, rhs: f64) -> C2Mat {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

pub fn det2(m: &C2Mat) -> Complex64 {
    let m = &m.0;
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Inverse with the default singularity tolerance.
pub fn inv2(m: &C2Mat) -> Result<C2Mat> {
    inv2_with_tol(m, SINGULAR_TOL)
}

/// Inverse; fails when `|det| <= tol * max_abs(m)^2`.
pub fn inv2_with_tol(m: &C2Mat, tol: f64) -> Result<C2Mat> {
    let det = det2(m);
    let scale = m.max_abs();
    let threshold = tol * scale * scale;
    if !(det.norm() > threshold) {
        return Err(CveError::SingularMatrix {
            det: det.norm(),
            tol,
        });
    }
    let e = &m.0;
    Ok(C2Mat::new(e[1][1], -e[0][1], -e[1][0], e[0][0]).scale(det.inv()))
}

/// Roots of `λ² − trace·λ + 1 = 0`, ordered `(λ_small, λ_large)`.
///
/// The small root is recovered as the reciprocal of the large one, which
/// avoids cancellation for large traces.
pub fn quad_roots_unit_product(trace: f64) -> Result<(f64, f64)> {
    if !trace.is_finite() || trace < 2.0 - TRACE_TOL {
        return Err(CveError::NonPhysicalTrace { trace });
    }
    if trace <= 2.0 {
        return Ok((1.0, 1.0));
    }
    let disc = ((trace - 2.0) * (trace + 2.0)).sqrt();
    let large = 0.5 * (trace + disc);
    Ok((1.0 / large, large))
}

/// `x / (2 sinh x)`, finite at `x = 0`.
fn half_x_over_sinh(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        0.5 * (1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0)
    } else {
        x / (2.0 * x.sinh())
    }
}

/// `sinh(q) / q` for complex `q`, finite at `q = 0`.
fn sinhc(q: Complex64) -> Complex64 {
    if q.norm() < 1e-4 {
        let q2 = q * q;
        ONE + q2 / 6.0 + q2 * q2 / 120.0
    } else {
        q.sinh() / q
    }
}

/// Principal logarithm of a unimodular matrix with real positive
/// eigenvalues `λ`, `1/λ`.
///
/// With `x = ln λ_large` the result is `x/(2 sinh x) · (2M − tr(M)·I)`,
/// which is the eigen-projector form `ln λ_s P_s + ln λ_l P_l` collapsed
/// using `ln λ_s = −ln λ_l`.
pub fn log_unimodular(m: &C2Mat) -> Result<C2Mat> {
    if !m.is_finite() {
        return Err(CveError::BranchError("non-finite matrix entries".into()));
    }
    let det = det2(m);
    if (det - ONE).norm() > UNIMODULAR_TOL * m.max_abs().max(1.0).powi(2) {
        return Err(CveError::BranchError(format!(
            "det = {det} is not 1"
        )));
    }
    let tr = m.trace();
    if tr.im.abs() > TRACE_TOL * tr.norm().max(1.0) {
        return Err(CveError::BranchError(format!(
            "trace {tr} is not real: eigenvalues are complex"
        )));
    }
    let (_, large) = quad_roots_unit_product(tr.re).map_err(|_| {
        CveError::BranchError(format!(
            "trace {} < 2: eigenvalues are not real and positive",
            tr.re
        ))
    })?;
    let x = large.ln();
    let centered = *m * 2.0 - C2Mat::identity() * tr.re;
    Ok(centered * half_x_over_sinh(x))
}

/// Matrix exponential in closed form.
///
/// Writing `M = t·I + M0` with `M0` traceless, `M0² = q²·I` with
/// `q² = −det M0`, so `exp(M) = e^t (cosh q · I + sinh(q)/q · M0)`.
pub fn expm(m: &C2Mat) -> C2Mat {
    let t = m.trace() * 0.5;
    let m0 = *m - C2Mat::identity().scale(t);
    let q = (-det2(&m0)).sqrt();
    let et = t.exp();
    (C2Mat::identity().scale(q.cosh()) + m0.scale(sinhc(q))).scale(et)
}
