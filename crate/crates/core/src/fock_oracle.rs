//! Brute-force reference: two-mode states in a truncated Fock basis.
//!
//! States are stored as amplitude matrices `psi[n1][n2]`. The beam
//! splitter conserves the total photon number `N = n1 + n2`, so it acts
//! exactly on each block `N <= cutoff`. Amplitude outside those blocks is
//! dropped and reported as tail mass. The reduced state of mode 1 is the
//! Gram matrix `psi psi†`; its eigenvalues are the Schmidt spectrum.

use std::env;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::circuits::CircuitParams;
use crate::error::{CveError, Result};

/// Truncation tolerance on the discarded probability mass.
pub const TAIL_TOL: f64 = 1e-12;

/// Default hard ceiling for the adaptive cutoff.
pub const DEFAULT_MAX_CUTOFF: usize = 512;

/// Environment variable overriding [`DEFAULT_MAX_CUTOFF`].
pub const MAX_CUTOFF_ENV: &str = "CVE_MAX_CUTOFF";

/// Eigenvalues below this are left out of the entropy sum.
pub const EIGEN_FLOOR: f64 = 1e-15;

/// Amplitudes with squared modulus below this are zeroed before the
/// reduced state is diagonalized.
pub const AMPLITUDE_FLOOR_SQR: f64 = 1e-40;

/// Most negative raw eigenvalue accepted before clamping.
pub const NEGATIVE_EIGEN_TOL: f64 = -1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated two-mode amplitude matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeAmplitudes {
    psi: DMatrix<Complex64>,
    tail_mass: f64,
}

impl TwoModeAmplitudes {
    /// Wraps a square amplitude matrix; `tail_mass` is the probability
    /// already discarded by truncation.
    pub fn new(psi: DMatrix<Complex64>, tail_mass: f64) -> Result<Self> {
        if psi.nrows() != psi.ncols() || psi.nrows() == 0 {
            return Err(CveError::param(
                "psi",
                format!("must be square and non-empty, got {}x{}", psi.nrows(), psi.ncols()),
            ));
        }
        Ok(TwoModeAmplitudes { psi, tail_mass })
    }

    /// The number state `|n1, n2⟩` with cutoff `n1 + n2`.
    pub fn fock(n1: usize, n2: usize) -> Self {
        let dim = n1 + n2 + 1;
        let mut psi = DMatrix::zeros(dim, dim);
        psi[(n1, n2)] = Complex64::new(1.0, 0.0);
        TwoModeAmplitudes { psi, tail_mass: 0.0 }
    }

    /// Product `|u⟩ ⊗ |v⟩` restricted to `n1 + n2 <= cutoff`.
    pub fn product(u: &[Complex64], v: &[Complex64], cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let mut psi = DMatrix::zeros(dim, dim);
        let mut total = 0.0;
        let mut kept = 0.0;
        for (n1, a) in u.iter().enumerate() {
            for (n2, b) in v.iter().enumerate() {
                let amp = a * b;
                total += amp.norm_sqr();
                if n1 + n2 <= cutoff {
                    psi[(n1, n2)] = amp;
                    kept += amp.norm_sqr();
                }
            }
        }
        TwoModeAmplitudes {
            psi,
            tail_mass: (total - kept).max(0.0),
        }
    }

    pub fn psi(&self) -> &DMatrix<Complex64> {
        &self.psi
    }

    pub fn cutoff(&self) -> usize {
        self.psi.nrows() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitudes of block `N`, indexed by the photon number of mode 1.
    fn block(&self, total: usize) -> Vec<Complex64> {
        (0..=total).map(|n| self.psi[(n, total - n)]).collect()
    }

    fn set_block(&mut self, total: usize, values: &[Complex64]) {
        for (n, v) in values.iter().enumerate() {
            self.psi[(n, total - n)] = *v;
        }
    }

    /// Same state with the two modes exchanged.
    pub fn swapped(&self) -> Self {
        TwoModeAmplitudes {
            psi: self.psi.transpose(),
            tail_mass: self.tail_mass,
        }
    }
}

/// Single-mode squeezed vacuum `S(ζ)|0⟩` up to `cutoff`, with the
/// probability beyond `cutoff`.
///
/// `⟨2n|S(ζ)|0⟩ = (−e^{i arg ζ} tanh|ζ|)ⁿ √((2n)!) / (2ⁿ n! √cosh|ζ|)`.
pub fn squeezed_vacuum_with_tail(zeta: Complex64, cutoff: usize) -> (Vec<Complex64>, f64) {
    let r = zeta.norm();
    let t = r.tanh();
    let step = if r == 0.0 {
        ZERO
    } else {
        -zeta / r * t
    };
    let mut amps = vec![ZERO; cutoff + 1];
    amps[0] = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut n = 0usize;
    while 2 * n + 2 <= cutoff {
        let ratio = (((2 * n + 1) * (2 * n + 2)) as f64).sqrt() / (2 * (n + 1)) as f64;
        amps[2 * n + 2] = amps[2 * n] * step * ratio;
        n += 1;
    }
    if t == 0.0 {
        return (amps, 0.0);
    }
    // probability of the first pair index beyond the cutoff, then the
    // ratio p(n+1)/p(n) = t²(2n+1)/(2n+2) summed until negligible
    let mut p = amps[2 * n].norm_sqr();
    let mut tail = 0.0;
    let t2 = t * t;
    for _ in 0..10_000_000 {
        p *= t2 * (2 * n + 1) as f64 / (2 * n + 2) as f64;
        n += 1;
        tail += p;
        if p < 1e-20 * tail.max(1e-300) || p == 0.0 {
            break;
        }
    }
    (amps, tail)
}

/// Single-mode squeezed vacuum amplitudes; fails when the truncated
/// tail exceeds [`TAIL_TOL`].
pub fn squeezed_vacuum_amplitudes(zeta: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    let (amps, tail) = squeezed_vacuum_with_tail(zeta, cutoff);
    if tail > TAIL_TOL {
        return Err(CveError::CutoffTooSmall { cutoff, tail });
    }
    Ok(amps)
}

/// Probability lost when `S(ζ1)|0⟩ ⊗ S(ζ2)|0⟩` is restricted to
/// `n1 + n2 <= cutoff`.
pub fn joint_tail(zeta1: Complex64, zeta2: Complex64, cutoff: usize) -> f64 {
    let (u, t1) = squeezed_vacuum_with_tail(zeta1, cutoff);
    let (v, t2) = squeezed_vacuum_with_tail(zeta2, cutoff);
    let mut inner = 0.0;
    for (n1, a) in u.iter().enumerate() {
        let pa = a.norm_sqr();
        if pa == 0.0 {
            continue;
        }
        for b in v.iter().skip(cutoff + 1 - n1) {
            inner += pa * b.norm_sqr();
        }
    }
    t1 + t2 - t1 * t2 + inner
}

/// `S(ζ1)|0⟩ ⊗ S(ζ2)|0⟩` on the blocks `n1 + n2 <= cutoff`.
pub fn squeezed_product_state(zeta1: Complex64, zeta2: Complex64, cutoff: usize) -> TwoModeAmplitudes {
    let (u, _) = squeezed_vacuum_with_tail(zeta1, cutoff);
    let (v, _) = squeezed_vacuum_with_tail(zeta2, cutoff);
    let mut state = TwoModeAmplitudes::product(&u, &v, cutoff);
    state.tail_mass = joint_tail(zeta1, zeta2, cutoff);
    state
}

/// Block-by-block matrix elements `⟨n, N−n| B(θ, φ) |k, N−k⟩`.
///
/// With `B a1† B† = c a1† − e^{−iφ} s a2†`, `B a2† B† = c a2† + e^{iφ} s a1†`
/// and `N |k, N−k⟩ = √k a1† |k−1, N−k⟩ + √(N−k) a2† |k, N−k−1⟩`:
///
/// ```text
/// N U_N[n][k] = √k     (c √n U_{N−1}[n−1][k−1] − e^{−iφ} s √(N−n) U_{N−1}[n][k−1])
///             + √(N−k) (c √(N−n) U_{N−1}[n][k] + e^{iφ} s √n U_{N−1}[n−1][k])
/// ```
///
/// Every step is a weighted average, so rounding errors do not grow the
/// way they do in the one-sided ladder recurrences.
struct BlockRecurrence {
    cos: f64,
    sin_m: Complex64,
    sin_p: Complex64,
    total: usize,
    /// Row-major `(total+1)²` matrix of the current block.
    current: Vec<Complex64>,
    sqrt: Vec<f64>,
}

impl BlockRecurrence {
    fn new(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        BlockRecurrence {
            cos: c,
            sin_m: e.conj() * s,
            sin_p: e * s,
            total: 0,
            current: vec![Complex64::new(1.0, 0.0)],
            sqrt: vec![0.0, 1.0],
        }
    }

    fn advance(&mut self) {
        let prev_dim = self.total + 1;
        self.total += 1;
        let big_n = self.total;
        let dim = big_n + 1;
        while self.sqrt.len() <= big_n {
            let k = self.sqrt.len();
            self.sqrt.push((k as f64).sqrt());
        }
        let prev = &self.current;
        let at = |n: usize, k: usize| prev[n * prev_dim + k];
        let sq = &self.sqrt;
        let mut next = vec![ZERO; dim * dim];
        let inv_n = 1.0 / big_n as f64;
        for n in 0..dim {
            let up = n > 0;
            let stay = n < big_n;
            let wn = sq[n];
            let wm = sq[big_n - n];
            for k in 0..dim {
                let mut v = ZERO;
                if k > 0 {
                    let mut w = ZERO;
                    if up {
                        w += at(n - 1, k - 1) * (self.cos * wn);
                    }
                    if stay {
                        w -= self.sin_m * at(n, k - 1) * wm;
                    }
                    v += w * sq[k];
                }
                if k < big_n {
                    let mut w = ZERO;
                    if stay {
                        w += at(n, k) * (self.cos * wm);
                    }
                    if up {
                        w += self.sin_p * at(n - 1, k) * wn;
                    }
                    v += w * sq[big_n - k];
                }
                next[n * dim + k] = v * inv_n;
            }
        }
        self.current = next;
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let dim = self.total + 1;
        (0..dim)
            .map(|n| {
                let row = &self.current[n * dim..(n + 1) * dim];
                row.iter()
                    .zip(v)
                    .filter(|(_, x)| **x != ZERO)
                    .map(|(u, x)| u * x)
                    .sum()
            })
            .collect()
    }

    fn matrix(&self) -> DMatrix<Complex64> {
        let dim = self.total + 1;
        DMatrix::from_row_slice(dim, dim, &self.current)
    }
}

/// Beam-splitter block `N` from the ladder recurrence.
pub fn beam_splitter_block(total: usize, theta: f64, phi: f64) -> DMatrix<Complex64> {
    let mut rec = BlockRecurrence::new(theta, phi);
    for _ in 0..total {
        rec.advance();
    }
    rec.matrix()
}

/// Beam-splitter block `N` as `exp(G) = V e^{−iH} V†` from the Hermitian
/// eigendecomposition of `H = iG`, with
/// `G = θ(e^{iφ} a1† a2 − e^{−iφ} a1 a2†)` restricted to the block.
pub fn beam_splitter_block_eig(total: usize, theta: f64, phi: f64) -> DMatrix<Complex64> {
    let dim = total + 1;
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    let e = Complex64::from_polar(1.0, phi);
    for n in 0..total {
        let w = (((n + 1) * (total - n)) as f64).sqrt() * theta;
        g[(n + 1, n)] = e * w;
        g[(n, n + 1)] = -e.conj() * w;
    }
    let h = g * Complex64::new(0.0, 1.0);
    let eig = h.symmetric_eigen();
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        eig.eigenvalues.iter().map(|&x| Complex64::from_polar(1.0, -x)),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Applies `B(θ, φ) = exp[θ(a1† a2 e^{iφ} − a1 a2† e^{−iφ})]` exactly on
/// every block `N <= cutoff`.
pub fn apply_beam_splitter(state: &TwoModeAmplitudes, theta: f64, phi: f64) -> TwoModeAmplitudes {
    let mut out = state.clone();
    let mut rec = BlockRecurrence::new(theta, phi);
    for total in 0..=state.cutoff() {
        if total > 0 {
            rec.advance();
        }
        let v = state.block(total);
        if v.iter().all(|z| *z == ZERO) {
            continue;
        }
        out.set_block(total, &rec.apply(&v));
    }
    out
}

/// [`apply_beam_splitter`] with each block exponentiated by Hermitian
/// eigendecomposition; `O(cutoff⁴)`, used as a reference.
pub fn apply_beam_splitter_eig(state: &TwoModeAmplitudes, theta: f64, phi: f64) -> TwoModeAmplitudes {
    let mut out = state.clone();
    for total in 0..=state.cutoff() {
        let v = DVector::from_vec(state.block(total));
        let w = beam_splitter_block_eig(total, theta, phi) * v;
        out.set_block(total, w.as_slice());
    }
    out
}

/// Reduced-density-operator eigenvalues, clamped and sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    min_raw: f64,
    flushed_mass: f64,
}

impl Spectrum {
    /// Clamps entries in `[NEGATIVE_EIGEN_TOL, 0)` to zero and sorts.
    pub fn from_raw(mut values: Vec<f64>) -> Self {
        let min_raw = values.iter().cloned().fold(f64::INFINITY, f64::min);
        for v in values.iter_mut() {
            if *v < 0.0 && *v >= NEGATIVE_EIGEN_TOL {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum {
            eigenvalues: values,
            min_raw,
            flushed_mass: 0.0,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Smallest eigenvalue before clamping.
    pub fn min_raw(&self) -> f64 {
        self.min_raw
    }

    /// Mass left out of the entropy: eigenvalues below [`EIGEN_FLOOR`]
    /// plus amplitudes zeroed before diagonalization.
    pub fn dropped_mass(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&x| x < EIGEN_FLOOR)
            .sum::<f64>()
            + self.flushed_mass
    }

    /// Max entrywise difference to `other`, padding the shorter with zeros.
    pub fn max_diff(&self, other: &Spectrum) -> f64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|i| {
                let a = self.eigenvalues.get(i).copied().unwrap_or(0.0);
                let b = other.eigenvalues.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `−Σ λ ln λ` in nats, skipping eigenvalues below [`EIGEN_FLOOR`].
pub fn von_neumann_entropy(s: &Spectrum) -> f64 {
    s.eigenvalues
        .iter()
        .filter(|&&x| x >= EIGEN_FLOOR)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Indices of the rows and columns of `psi` that form one block of
/// `psi psi†` when the support has a fixed total-photon parity.
fn parity_sectors(psi: &DMatrix<Complex64>) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut seen = [false, false];
    for n1 in 0..psi.nrows() {
        for n2 in 0..psi.ncols() {
            if psi[(n1, n2)] != ZERO {
                seen[(n1 + n2) % 2] = true;
            }
        }
    }
    let idx = |p: usize, len: usize| (0..len).filter(|i| i % 2 == p).collect::<Vec<_>>();
    let total_parity = match seen {
        [true, false] => 0,
        [false, true] => 1,
        _ => return vec![((0..psi.nrows()).collect(), (0..psi.ncols()).collect())],
    };
    [0, 1]
        .into_iter()
        .map(|p| (idx(p, psi.nrows()), idx((p + total_parity) % 2, psi.ncols())))
        .collect()
}

/// Drops rows and columns of a sector that carry no amplitude.
fn trim_sector(psi: &DMatrix<Complex64>, rows: &[usize], cols: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let rows = rows
        .iter()
        .copied()
        .filter(|&r| cols.iter().any(|&c| psi[(r, c)] != ZERO))
        .collect();
    let cols = cols
        .iter()
        .copied()
        .filter(|&c| (0..psi.nrows()).any(|r| psi[(r, c)] != ZERO))
        .collect();
    (rows, cols)
}

/// Eigenvalues of `ρ1 = psi psi†`, renormalized by the retained norm.
///
/// Amplitudes with `|ψ|² <` [`AMPLITUDE_FLOOR_SQR`] are zeroed first;
/// their mass is reported through [`Spectrum::dropped_mass`]. Keeping
/// them lets products in the Gram matrix reach the subnormal range, where
/// the Hermitian QR iteration breaks down.
pub fn schmidt_spectrum(state: &TwoModeAmplitudes) -> Result<Spectrum> {
    let norm = state.norm_sqr();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(CveError::InvariantViolation(format!(
            "state norm {norm} is not positive and finite"
        )));
    }
    let mut flushed = 0.0;
    let psi = state.psi().map(|z| {
        if z.norm_sqr() < AMPLITUDE_FLOOR_SQR {
            flushed += z.norm_sqr();
            ZERO
        } else {
            z
        }
    });
    let mut values = Vec::with_capacity(psi.nrows());
    for (rows, cols) in parity_sectors(&psi) {
        let (rows, cols) = trim_sector(&psi, &rows, &cols);
        if rows.is_empty() {
            continue;
        }
        let sub = psi.select_rows(&rows).select_columns(&cols);
        let gram = &sub * sub.adjoint();
        values.extend(gram.symmetric_eigenvalues().iter().map(|v| v / norm));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CveError::InvariantViolation(
            "Hermitian eigensolver returned non-finite eigenvalues".into(),
        ));
    }
    let mut spectrum = Spectrum::from_raw(values);
    spectrum.flushed_mass = flushed / norm;
    Ok(spectrum)
}

/// Diagonal of `ρ1` in the Fock basis (photon-number distribution of
/// mode 1), renormalized.
pub fn mode1_distribution(state: &TwoModeAmplitudes) -> Vec<f64> {
    let norm = state.norm_sqr();
    state
        .psi()
        .row_iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm)
        .collect()
}

/// `(1 − λ) λⁿ` for `n = 0..=cutoff`, `λ = tanh² r`.
pub fn tmsv_schmidt(r: f64, cutoff: usize) -> Result<Spectrum> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(CveError::param("r", "must be finite and non-negative"));
    }
    let lambda = r.tanh().powi(2);
    let tail = lambda.powi(cutoff as i32 + 1);
    if tail > TAIL_TOL {
        return Err(CveError::CutoffTooSmall { cutoff, tail });
    }
    let values = (0..=cutoff)
        .map(|n| (1.0 - lambda) * lambda.powi(n as i32))
        .collect();
    Ok(Spectrum::from_raw(values))
}

/// Hard cutoff ceiling, from `CVE_MAX_CUTOFF` when set.
pub fn max_cutoff() -> usize {
    env::var(MAX_CUTOFF_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CUTOFF)
}

/// Starting cutoff `2⌈5 max(|ζ1|, |ζ2|, 0.5) cosh(max|ζ|)⌉`, doubled
/// until the joint tail drops below [`TAIL_TOL`].
pub fn adaptive_cutoff(zeta1: Complex64, zeta2: Complex64) -> Result<usize> {
    adaptive_cutoff_with_ceiling(zeta1, zeta2, max_cutoff())
}

pub fn adaptive_cutoff_with_ceiling(zeta1: Complex64, zeta2: Complex64, ceiling: usize) -> Result<usize> {
    let zmax = zeta1.norm().max(zeta2.norm());
    let start = 2.0 * (5.0 * zmax.max(0.5) * zmax.cosh()).ceil();
    let mut cutoff = (start as usize).min(ceiling);
    loop {
        let tail = joint_tail(zeta1, zeta2, cutoff);
        if tail < TAIL_TOL {
            return Ok(cutoff);
        }
        if cutoff >= ceiling {
            return Err(CveError::CutoffTooSmall { cutoff, tail });
        }
        cutoff = (cutoff * 2).min(ceiling);
    }
}

/// Result of a brute-force evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub entropy: f64,
    pub spectrum: Spectrum,
    pub cutoff: usize,
    pub tail_mass: f64,
}

/// The circuit state `B(θ, φ) S1(ζ1) S2(ζ2)|00⟩` at a fixed cutoff.
pub fn circuit_state(p: &CircuitParams, cutoff: usize) -> TwoModeAmplitudes {
    let input = squeezed_product_state(p.zeta1, p.zeta2, cutoff);
    apply_beam_splitter(&input, p.theta, p.phi)
}

pub fn oracle_circuit_at(p: &CircuitParams, cutoff: usize) -> Result<OracleReport> {
    let state = circuit_state(p, cutoff);
    let spectrum = schmidt_spectrum(&state)?;
    Ok(OracleReport {
        entropy: von_neumann_entropy(&spectrum),
        spectrum,
        cutoff,
        tail_mass: state.tail_mass(),
    })
}

/// Brute-force entanglement entropy of the circuit state with the
/// adaptive cutoff.
pub fn oracle_circuit(p: &CircuitParams) -> Result<OracleReport> {
    let cutoff = adaptive_cutoff(p.zeta1, p.zeta2)?;
    oracle_circuit_at(p, cutoff)
}

/// Reduced spectrum of `B(θ, φ)|n1, n2⟩`.
pub fn oracle_fock(n1: usize, n2: usize, theta: f64, phi: f64) -> Result<(Spectrum, Vec<f64>)> {
    let state = apply_beam_splitter(&TwoModeAmplitudes::fock(n1, n2), theta, phi);
    Ok((schmidt_spectrum(&state)?, mode1_distribution(&state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_amplitudes() {
        let amps = squeezed_vacuum_amplitudes(ZERO, 6).unwrap();
        assert_eq!(amps[0], c(1.0, 0.0));
        assert!(amps[1..].iter().all(|z| *z == ZERO));
    }

    #[test]
    fn squeezed_amplitude_ratio() {
        let r = 0.7f64;
        let amps = squeezed_vacuum_amplitudes(c(r, 0.0), 80).unwrap();
        let ratio = amps[2].norm_sqr() / amps[0].norm_sqr();
        assert_relative_eq!(ratio, r.tanh().powi(2) / 2.0, epsilon = 1e-15);
        assert!(amps[1] == ZERO && amps[3] == ZERO);
        // sign of the first pair amplitude is −e^{i arg ζ}
        assert!(amps[2].re < 0.0);
    }

    #[test]
    fn squeezed_normalization() {
        for r in [0.1, 0.8, 1.5] {
            let (amps, tail) = squeezed_vacuum_with_tail(Complex64::from_polar(r, 0.4), 400);
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm + tail - 1.0).abs() < 1e-12);
            assert!(tail < 1e-12);
        }
        assert!(matches!(
            squeezed_vacuum_amplitudes(c(1.5, 0.0), 60),
            Err(CveError::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn identity_beam_splitter() {
        let state = squeezed_product_state(c(0.4, 0.2), c(-0.3, 0.0), 20);
        let out = apply_beam_splitter(&state, 0.0, 0.7);
        assert!((out.psi() - state.psi()).norm() < 1e-15);
    }

    #[test]
    fn single_photon_block() {
        let theta = 0.37;
        let out = apply_beam_splitter(&TwoModeAmplitudes::fock(1, 0), theta, 0.0);
        assert_relative_eq!(out.psi()[(1, 0)].re, theta.cos(), epsilon = 1e-15);
        assert_relative_eq!(out.psi()[(0, 1)].re, -theta.sin(), epsilon = 1e-15);
        // analytic 2×2 exponential of θ((0, −1), (1, 0)) in the basis (|0,1⟩, |1,0⟩)
        let u = beam_splitter_block_eig(1, theta, 0.0);
        assert!((u[(1, 1)] - theta.cos()).norm() < 1e-14);
        assert!((u[(0, 1)] + theta.sin()).norm() < 1e-14);
    }

    #[test]
    fn hong_ou_mandel() {
        let out = apply_beam_splitter(&TwoModeAmplitudes::fock(1, 1), FRAC_PI_4, 0.0);
        let psi = out.psi();
        assert!(psi[(1, 1)].norm() < 1e-15);
        assert_relative_eq!(psi[(2, 0)].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(psi[(0, 2)].re, -FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn recurrence_matches_eigendecomposition() {
        for (theta, phi) in [(0.3, 0.0), (1.1, 0.8), (2.9, -2.0), (-0.6, 4.0)] {
            for total in [0, 1, 2, 5, 17, 40, 90] {
                let a = beam_splitter_block(total, theta, phi);
                let b = beam_splitter_block_eig(total, theta, phi);
                let dev = (&a - &b).camax();
                assert!(dev < 1e-11, "N={total} θ={theta} φ={phi}: {dev:e}");
            }
        }
    }

    #[test]
    fn large_blocks_stay_unitary() {
        let u = beam_splitter_block(400, 0.9, 0.3);
        let dev = (&u * u.adjoint() - DMatrix::identity(401, 401)).camax();
        assert!(dev < 1e-11, "{dev:e}");
    }

    #[test]
    fn spectrum_of_product_and_split_photon() {
        let s = schmidt_spectrum(&TwoModeAmplitudes::fock(2, 3)).unwrap();
        assert_relative_eq!(s.eigenvalues()[0], 1.0, epsilon = 1e-15);
        assert_eq!(von_neumann_entropy(&s), 0.0);
        let out = apply_beam_splitter(&TwoModeAmplitudes::fock(1, 0), FRAC_PI_4, 0.0);
        let s = schmidt_spectrum(&out).unwrap();
        assert_relative_eq!(s.eigenvalues()[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(s.eigenvalues()[1], 0.5, epsilon = 1e-14);
        assert_relative_eq!(von_neumann_entropy(&s), 2f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn entropy_of_simple_spectra() {
        assert_eq!(von_neumann_entropy(&Spectrum::from_raw(vec![1.0])), 0.0);
        assert_relative_eq!(
            von_neumann_entropy(&Spectrum::from_raw(vec![0.5, 0.5])),
            2f64.ln(),
            epsilon = 1e-15
        );
        let s = Spectrum::from_raw(vec![0.3, -1e-13, 0.7]);
        assert_eq!(s.eigenvalues(), &[0.7, 0.3, 0.0]);
        assert_eq!(s.min_raw(), -1e-13);
    }

    #[test]
    fn tmsv_fixture() {
        let s = tmsv_schmidt(0.0, 0).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0]);
        let s = tmsv_schmidt(1.0, 60).unwrap();
        let lambda = 1f64.tanh().powi(2);
        assert_relative_eq!(s.eigenvalues()[1] / s.eigenvalues()[0], lambda, epsilon = 1e-15);
        let ch = 1f64.cosh().powi(2);
        let sh = 1f64.sinh().powi(2);
        assert_relative_eq!(
            von_neumann_entropy(&s),
            ch * ch.ln() - sh * sh.ln(),
            epsilon = 1e-10
        );
        assert!(tmsv_schmidt(1.0, 10).is_err());
    }

    #[test]
    fn tmsv_from_circuit_matches_fixture() {
        let r = 0.6;
        let p = CircuitParams::tmsv(r).unwrap();
        let report = oracle_circuit(&p).unwrap();
        let fixture = tmsv_schmidt(r, report.cutoff / 2).unwrap();
        assert!(report.spectrum.max_diff(&fixture) < 1e-12);
        assert!(report.tail_mass < TAIL_TOL);
    }

    #[test]
    fn subsystem_symmetry() {
        let p = CircuitParams::new(0.5, 1.2, c(0.3, 0.5), c(-0.7, 0.1)).unwrap();
        let state = circuit_state(&p, 120);
        let e1 = von_neumann_entropy(&schmidt_spectrum(&state).unwrap());
        let e2 = von_neumann_entropy(&schmidt_spectrum(&state.swapped()).unwrap());
        assert!((e1 - e2).abs() < 1e-10);
    }

    #[test]
    fn cutoff_ceiling_is_enforced() {
        let z = c(3.0, 0.0);
        assert!(matches!(
            adaptive_cutoff_with_ceiling(z, z, 64),
            Err(CveError::CutoffTooSmall { cutoff: 64, .. })
        ));
        let small = adaptive_cutoff_with_ceiling(c(0.1, 0.0), ZERO, 512).unwrap();
        assert!(joint_tail(c(0.1, 0.0), ZERO, small) < TAIL_TOL);
    }

    #[test]
    fn near_vacuum_mode_is_diagonalized() {
        // one mode barely squeezed: amplitudes span hundreds of decades
        let p = CircuitParams::new(
            1.163310445831301,
            2.738485095147002,
            c(-0.8945812086012187, 1.0156675945233844),
            c(-0.0020419438937988067, 0.0005451967607431501),
        )
        .unwrap();
        let report = oracle_circuit_at(&p, 224).unwrap();
        assert!(report.spectrum.eigenvalues().iter().all(|v| v.is_finite()));
        assert!(report.spectrum.dropped_mass() < 1e-13);
        assert_relative_eq!(report.spectrum.sum(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn beam_splitter_period() {
        // B(θ + π) = (−1)^N B(θ) on block N
        let a = beam_splitter_block(7, 0.4, 0.2);
        let b = beam_splitter_block(7, 0.4 + PI, 0.2);
        assert!((a + b).camax() < 1e-13);
    }
}
