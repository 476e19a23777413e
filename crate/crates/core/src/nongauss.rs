//! Number states through a real beam splitter.
//!
//! For `|ψ⟩ = exp[θ(a1† a2 − a2† a1)] |n1, n2⟩` the reduced state of mode 1
//! is diagonal in the Fock basis, and its eigenvalues are Taylor
//! coefficients of a generating function in two auxiliary variables
//! `(α, β)`:
//!
//! ```text
//! λ_N = [α^{n1} β^{n2}]  −(1/W) (1 + αβ/W)^N   about α = β = −1,
//! W = β cos²θ + α sin²θ.
//! ```
//!
//! Coefficients are extracted exactly as truncated bivariate power
//! series in the shifted variables `u = α + 1`, `v = β + 1`, never by
//! numerical differentiation. Every spectrum is checked against the
//! block-unitary simulation in [`crate::fock_oracle`].

use crate::error::{CveError, Result};
use crate::fock_oracle::{self, Spectrum};

/// Default cap on `n1 + n2`.
pub const DEFAULT_MAX_TOTAL: usize = 40;

/// Entrywise tolerance against the oracle distribution.
pub const ORACLE_TOL: f64 = 1e-9;

/// Negative coefficients down to this are rounding and clamp to zero.
const NEGATIVE_TOL: f64 = -1e-12;

/// Input photon numbers and beam-splitter angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockPair {
    pub n1: usize,
    pub n2: usize,
    pub theta: f64,
}

impl FockPair {
    pub fn new(n1: usize, n2: usize, theta: f64) -> Result<Self> {
        Self::with_max_total(n1, n2, theta, DEFAULT_MAX_TOTAL)
    }

    pub fn with_max_total(n1: usize, n2: usize, theta: f64, max_total: usize) -> Result<Self> {
        if n1 + n2 > max_total {
            return Err(CveError::param(
                "n1 + n2",
                format!("{} exceeds the maximum total photon number {max_total}", n1 + n2),
            ));
        }
        if !theta.is_finite() {
            return Err(CveError::param("theta", "must be finite"));
        }
        Ok(FockPair { n1, n2, theta })
    }

    pub fn total(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn swapped(&self) -> Self {
        FockPair {
            n1: self.n2,
            n2: self.n1,
            theta: self.theta,
        }
    }
}

/// How the generating function is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    /// `(1/W)(1 + (αβ − 1)/W)^N` about `α = β = −1`, transcribed as
    /// printed. Produces negative "eigenvalues" and is kept only to show
    /// that the oracle rejects it.
    Literal,
    /// `−(1/W)(1 + αβ/W)^N` about `α = β = −1`: the trace over mode 2 of
    /// the normally ordered generating function, rewritten in the shifted
    /// variables.
    Resolved,
}

/// Bivariate power series truncated to degrees `(du, dv)`.
#[derive(Debug, Clone, PartialEq)]
struct Series {
    du: usize,
    dv: usize,
    c: Vec<f64>,
}

impl Series {
    fn zero(du: usize, dv: usize) -> Self {
        Series {
            du,
            dv,
            c: vec![0.0; (du + 1) * (dv + 1)],
        }
    }

    /// `k + a u + b v + e uv`.
    fn bilinear(du: usize, dv: usize, k: f64, a: f64, b: f64, e: f64) -> Self {
        let mut s = Series::zero(du, dv);
        s.set(0, 0, k);
        if du > 0 {
            s.set(1, 0, a);
        }
        if dv > 0 {
            s.set(0, 1, b);
        }
        if du > 0 && dv > 0 {
            s.set(1, 1, e);
        }
        s
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.c[i * (self.dv + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, x: f64) {
        self.c[i * (self.dv + 1) + j] = x;
    }

    fn add_scalar(mut self, k: f64) -> Self {
        self.c[0] += k;
        self
    }

    fn scale(mut self, k: f64) -> Self {
        self.c.iter_mut().for_each(|x| *x *= k);
        self
    }

    fn mul(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.du, self.dv);
        for i in 0..=self.du {
            for j in 0..=self.dv {
                let a = self.at(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..=self.du - i {
                    for l in 0..=self.dv - j {
                        let idx = (i + k) * (self.dv + 1) + j + l;
                        out.c[idx] += a * other.at(k, l);
                    }
                }
            }
        }
        out
    }

    /// Reciprocal by forward substitution; needs a nonzero constant term.
    fn recip(&self) -> Series {
        let c0 = self.at(0, 0);
        let mut out = Series::zero(self.du, self.dv);
        for i in 0..=self.du {
            for j in 0..=self.dv {
                let mut acc = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        acc -= self.at(k, l) * out.at(i - k, j - l);
                    }
                }
                out.set(i, j, acc / c0);
            }
        }
        out
    }
}

/// `λ_N`, `N = 0..=n1+n2`, extracted under `reading`, without clamping.
pub fn extract_spectrum(p: &FockPair, reading: Reading) -> Vec<f64> {
    let (du, dv) = (p.n1, p.n2);
    let (s, c) = p.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    // α = u − 1, β = v − 1
    let w = Series::bilinear(du, dv, -1.0, s2, c2, 0.0);
    let w_inv = w.recip();
    let alpha_beta = Series::bilinear(du, dv, 1.0, -1.0, -1.0, 1.0);
    let (prefactor, numerator) = match reading {
        Reading::Literal => (w_inv.clone(), alpha_beta.add_scalar(-1.0)),
        Reading::Resolved => (w_inv.clone().scale(-1.0), alpha_beta),
    };
    let ratio = numerator.mul(&w_inv).add_scalar(1.0);
    let mut term = prefactor;
    let mut out = Vec::with_capacity(p.total() + 1);
    for n in 0..=p.total() {
        if n > 0 {
            term = term.mul(&ratio);
        }
        out.push(term.at(du, dv));
    }
    out
}

/// Spectrum of mode 1 indexed by its photon number, with the oracle
/// comparison that validated it.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSpectrum {
    /// `λ_N` for `N = 0..=n1+n2`.
    pub lambda: Vec<f64>,
    /// Photon-number distribution of mode 1 from the block unitary.
    pub oracle: Vec<f64>,
    /// Max entrywise deviation, after relabeling when that matches better.
    pub max_dev: f64,
    /// `true` when the best match pairs `λ_N` with oracle entry `n1+n2−N`.
    pub relabeled: bool,
}

impl PhotonSpectrum {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_raw(self.lambda.clone())
    }

    pub fn sum(&self) -> f64 {
        self.lambda.iter().sum()
    }
}

fn max_dev<'a>(a: &[f64], b: impl Iterator<Item = &'a f64>) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Extracts the spectrum under `reading` and checks it against the oracle.
pub fn bs_fock_spectrum_with(p: &FockPair, reading: Reading) -> Result<PhotonSpectrum> {
    let mut lambda = extract_spectrum(p, reading);
    let (_, oracle) = fock_oracle::oracle_fock(p.n1, p.n2, p.theta, 0.0)?;
    let oracle = oracle[..=p.total()].to_vec();
    let direct = max_dev(&lambda, oracle.iter());
    let flipped = max_dev(&lambda, oracle.iter().rev());
    let (max_dev, relabeled) = if flipped < direct {
        (flipped, true)
    } else {
        (direct, false)
    };
    let negative = lambda.iter().any(|&x| x < NEGATIVE_TOL);
    if max_dev > ORACLE_TOL || negative || !max_dev.is_finite() {
        return Err(CveError::FormulaMismatch {
            max_dev,
            formula: lambda,
            oracle,
        });
    }
    lambda.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(PhotonSpectrum {
        lambda,
        oracle,
        max_dev,
        relabeled,
    })
}

/// Eigenvalues of the reduced state of `B(θ)|n1, n2⟩`.
pub fn bs_fock_spectrum(p: &FockPair) -> Result<PhotonSpectrum> {
    bs_fock_spectrum_with(p, Reading::Resolved)
}

/// Entanglement entropy of `B(θ)|n1, n2⟩` in nats.
pub fn bs_fock_entropy(p: &FockPair) -> Result<f64> {
    Ok(fock_oracle::von_neumann_entropy(&bs_fock_spectrum(p)?.spectrum()))
}
