//! Seeded property suites comparing every entropy route with the others
//! and with the Fock-space oracle.
//!
//! Samples are drawn from a ChaCha stream so a seed fixes the whole run.
//! Work runs in parallel but results are collected in sample order, and
//! the rendered report has no timings, so identical inputs print
//! identical bytes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, TAU};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuits::{
    bs_squeeze_coeffs, entropy_closed_form, entropy_closed_form_mutated, reduced_from_circuit,
    special_case_entropy, special_case_params, tmsv_entropy, CircuitParams,
};
use crate::error::{CveError, Result};
use crate::fock_oracle::{
    apply_beam_splitter, apply_beam_splitter_eig, circuit_state, oracle_circuit,
    oracle_circuit_at, schmidt_spectrum, von_neumann_entropy, TwoModeAmplitudes,
};
use crate::gaussian::{
    entropy_gaussian, entropy_matrix_route, prefactor_form_entropy, reduce,
    Reduction,
};
use crate::nongauss::{bs_fock_entropy, bs_fock_spectrum, FockPair};

/// Largest `|ζ|` drawn for random circuits.
pub const SAMPLE_SQUEEZING: f64 = 1.5;

/// Tolerance handed to the separability test.
pub const SEPARABILITY_TOL: f64 = 1e-9;

/// Entropy below this counts as zero entanglement.
pub const ZERO_ENTROPY: f64 = 1e-8;

/// Samples that also get the ρ2 and doubled-cutoff oracle runs.
const EXPENSIVE_SUBSET: usize = 10;

const PRODUCT_STATES: usize = 20;
const SPECIAL_CASE_PAIRS: usize = 10;
const UNITARITY_STATES: usize = 100;
const UNITARITY_CUTOFF: usize = 24;
const TMSV_RADII: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 1.5];
const NONGAUSS_MAX_TOTAL: usize = 10;
const NONGAUSS_ANGLES: usize = 16;

/// Which property suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Closed-form routes only.
    Gaussian,
    /// Oracle comparisons, oracle self-checks and number-state spectra.
    Fock,
    All,
}

impl Scope {
    fn gaussian(self) -> bool {
        matches!(self, Scope::Gaussian | Scope::All)
    }

    fn fock(self) -> bool {
        matches!(self, Scope::Fock | Scope::All)
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::Gaussian => "gaussian",
            Scope::Fock => "fock",
            Scope::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub scope: Scope,
    pub seed: u64,
    pub samples: usize,
    /// Swap in [`entropy_closed_form_mutated`] to check that the suites
    /// catch a wrong formula.
    pub mutate: bool,
}

/// Worst case of one property over its samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub tol: f64,
    pub checked: usize,
    pub max_dev: f64,
    /// Parameters of the worst sample, reported only on failure.
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.max_dev <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verify scope={} seed={} samples={}{}",
            c.scope.name(),
            c.seed,
            c.samples,
            if c.mutate { " mutated" } else { "" }
        );
        for p in &self.properties {
            let _ = writeln!(
                out,
                "{} {:<28} n={:<5} max_dev={:.11e} tol={:.0e}",
                if p.passed() { "PASS" } else { "FAIL" },
                p.name,
                p.checked,
                p.max_dev,
                p.tol
            );
            if let (false, Some(ce)) = (p.passed(), &p.counterexample) {
                let _ = writeln!(out, "     counterexample: {ce}");
            }
        }
        let passed = self.properties.iter().filter(|p| p.passed()).count();
        let _ = writeln!(
            out,
            "summary: {passed}/{} properties passed",
            self.properties.len()
        );
        out
    }
}

/// Collects per-sample deviations in order; errors count as infinite.
struct Tally {
    name: &'static str,
    tol: f64,
    checked: usize,
    worst: f64,
    label: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally {
            name,
            tol,
            checked: 0,
            worst: 0.0,
            label: None,
        }
    }

    fn add(&mut self, dev: Result<f64>, label: impl FnOnce() -> String) {
        self.checked += 1;
        let (dev, note) = match dev {
            Ok(d) if d.is_nan() => (f64::INFINITY, " (NaN)".to_string()),
            Ok(d) => (d, String::new()),
            Err(e) => (f64::INFINITY, format!(" ({e})")),
        };
        if dev > self.worst || (self.label.is_none() && dev > self.tol) {
            self.worst = dev;
            self.label = Some(format!("{}{note}", label()));
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            tol: self.tol,
            checked: self.checked,
            max_dev: self.worst,
            counterexample: self.label,
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.12e},{:.12e}", z.re, z.im)
}

pub fn describe(p: &CircuitParams) -> String {
    format!(
        "theta={:.12e} phi={:.12e} zeta1={} zeta2={}",
        p.theta,
        p.phi,
        fmt_complex(p.zeta1),
        fmt_complex(p.zeta2)
    )
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn random_zeta(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>() * SAMPLE_SQUEEZING, rng.gen::<f64>() * TAU)
}

/// Random circuits with `θ, φ ∈ [0, 2π)` and `|ζ| ≤ 1.5`.
pub fn sample_circuits(seed: u64, n: usize) -> Vec<CircuitParams> {
    let mut rng = stream(seed, 1);
    (0..n)
        .map(|_| {
            let theta = rng.gen::<f64>() * TAU;
            let phi = rng.gen::<f64>() * TAU;
            let z1 = random_zeta(&mut rng);
            let z2 = random_zeta(&mut rng);
            CircuitParams::new(theta, phi, z1, z2).expect("sampled parameters are in range")
        })
        .collect()
}

/// Circuits with `ζ1 = ζ2`, whose output is a product state.
pub fn product_circuits(seed: u64, n: usize) -> Vec<CircuitParams> {
    let mut rng = stream(seed, 2);
    (0..n)
        .map(|_| {
            let theta = rng.gen::<f64>() * TAU;
            let phi = rng.gen::<f64>() * TAU;
            let z = random_zeta(&mut rng);
            CircuitParams::new(theta, phi, z, z).expect("sampled parameters are in range")
        })
        .collect()
}

/// `(s1, s2)` pairs for the 50:50 special case.
pub fn special_case_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = stream(seed, 3);
    (0..n)
        .map(|_| {
            let s1 = (rng.gen::<f64>() * 2.0 - 1.0) * SAMPLE_SQUEEZING;
            let s2 = (rng.gen::<f64>() * 2.0 - 1.0) * SAMPLE_SQUEEZING;
            (s1, s2)
        })
        .collect()
}

/// Open-interval grid `θ_k = (2k − 1)π/(4K)`, `k = 1..K`, on `(0, π/2)`.
pub fn angle_grid(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|i| (2 * i - 1) as f64 * FRAC_PI_2 / (2 * k) as f64)
        .collect()
}

/// Entropy of a circuit from the normal-ordered coefficients, reduced
/// generically.
fn generic_entropy(p: &CircuitParams) -> Result<f64> {
    reduce(&bs_squeeze_coeffs(p))?.entropy()
}

/// Matrix-logarithm entropy; product states give 0.
fn matrix_route(p: &CircuitParams) -> Result<f64> {
    match reduce(&bs_squeeze_coeffs(p))? {
        Reduction::Product => Ok(0.0),
        Reduction::Entangled(red) => entropy_matrix_route(&red),
    }
}

fn lambda_route(p: &CircuitParams) -> Result<f64> {
    match reduced_from_circuit(p) {
        Ok(red) => entropy_gaussian(&red),
        Err(CveError::ProductState { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

struct CircuitRow {
    closed: Result<f64>,
    lambda: Result<f64>,
    matrix: Result<f64>,
    generic: Result<f64>,
    normalization: Result<f64>,
    root_swap: Result<f64>,
    separable: Result<bool>,
}

fn circuit_row(p: &CircuitParams, mutate: bool) -> CircuitRow {
    let closed = if mutate {
        entropy_closed_form_mutated(p)
    } else {
        entropy_closed_form(p)
    };
    let reduced = match reduced_from_circuit(p) {
        Ok(red) => Ok(Some(red)),
        Err(CveError::ProductState { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let normalization = reduced
        .clone()
        .map(|r| r.map_or(0.0, |r| (r.normalization() - 1.0).abs()));
    let root_swap = reduced.clone().map(|r| {
        r.map_or(0.0, |r| {
            let l = r.lambda();
            (prefactor_form_entropy(r.amp, l) - prefactor_form_entropy(r.amp, 1.0 / l)).abs()
        })
    });
    let separable = reduce(&bs_squeeze_coeffs(p)).map(|r| r.is_separable(SEPARABILITY_TOL));
    CircuitRow {
        closed,
        lambda: lambda_route(p),
        matrix: matrix_route(p),
        generic: generic_entropy(p),
        normalization,
        root_swap,
        separable,
    }
}

fn diff(a: &Result<f64>, b: &Result<f64>) -> Result<f64> {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok((x - y).abs()),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

fn gaussian_suite(cfg: &VerifyConfig, circuits: &[CircuitParams], rows: &[CircuitRow]) -> Vec<PropertyResult> {
    let mut out = Vec::new();

    let mut tmsv_e = Tally::new("tmsv_entropy", 1e-10);
    let mut tmsv_l = Tally::new("tmsv_lambda", 1e-12);
    for r in TMSV_RADII {
        let p = CircuitParams::tmsv(r).expect("fixed radii are valid");
        let closed = if cfg.mutate {
            entropy_closed_form_mutated(&p)
        } else {
            entropy_closed_form(&p)
        };
        tmsv_e.add(diff(&closed, &tmsv_entropy(r)), || format!("r={r}"));
        let lambda = crate::circuits::closed_form_lambda(&p).map(|l| (l - r.tanh().powi(2)).abs());
        tmsv_l.add(lambda, || format!("r={r}"));
    }
    out.push(tmsv_e.finish());
    out.push(tmsv_l.finish());

    let mut matrix = Tally::new("matrix_vs_lambda_route", 1e-9);
    let mut closed = Tally::new("closed_form_vs_lambda_route", 1e-9);
    let mut generic = Tally::new("generic_vs_circuit_reduce", 1e-9);
    let mut norm = Tally::new("normalization", 1e-10);
    let mut root = Tally::new("root_choice", 1e-9);
    for (p, row) in circuits.iter().zip(rows) {
        let label = || describe(p);
        matrix.add(diff(&row.matrix, &row.lambda), label);
        closed.add(diff(&row.closed, &row.lambda), label);
        generic.add(diff(&row.generic, &row.lambda), label);
        norm.add(row.normalization.clone(), label);
        root.add(row.root_swap.clone(), label);
    }
    out.extend([matrix, closed, generic, norm, root].map(Tally::finish));

    let products = product_circuits(cfg.seed, PRODUCT_STATES);
    let product_rows: Vec<_> = products.par_iter().map(|p| circuit_row(p, cfg.mutate)).collect();
    let mut sep = Tally::new("separability_disagreements", 0.0);
    let mut count = 0usize;
    let mut first: Option<String> = None;
    for (p, row) in circuits.iter().zip(rows).chain(products.iter().zip(&product_rows)) {
        let agree = match (&row.separable, &row.lambda) {
            (Ok(s), Ok(e)) => *s == (*e < ZERO_ENTROPY),
            _ => false,
        };
        if !agree {
            count += 1;
            first.get_or_insert_with(|| describe(p));
        }
    }
    sep.checked = circuits.len() + products.len();
    sep.worst = count as f64;
    sep.label = first;
    out.push(sep.finish());

    let mut special = Tally::new("special_case", 1e-9);
    for (s1, s2) in special_case_pairs(cfg.seed, SPECIAL_CASE_PAIRS) {
        for (l, phi) in [(0, 0.0), (1, FRAC_PI_2)] {
            let dev = special_case_params(s1, s2, phi).and_then(|p| {
                let closed = if cfg.mutate {
                    entropy_closed_form_mutated(&p)?
                } else {
                    entropy_closed_form(&p)?
                };
                Ok((special_case_entropy(s1, s2, phi, l)? - closed).abs())
            });
            special.add(dev, || format!("s1={s1:.12e} s2={s2:.12e} phi={phi}"));
        }
    }
    out.push(special.finish());
    out
}

fn random_state(rng: &mut ChaCha8Rng, cutoff: usize) -> TwoModeAmplitudes {
    let dim = cutoff + 1;
    let mut psi = DMatrix::zeros(dim, dim);
    for n1 in 0..dim {
        for n2 in 0..dim - n1 {
            psi[(n1, n2)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    TwoModeAmplitudes::new(psi / Complex64::new(norm, 0.0), 0.0).expect("square matrix")
}

fn inner(a: &TwoModeAmplitudes, b: &TwoModeAmplitudes) -> Complex64 {
    a.psi().iter().zip(b.psi().iter()).map(|(x, y)| x.conj() * y).sum()
}

fn fock_suite(cfg: &VerifyConfig, circuits: &[CircuitParams], rows: &[CircuitRow]) -> Vec<PropertyResult> {
    let mut out = Vec::new();

    let oracle: Vec<_> = circuits.par_iter().map(oracle_circuit).collect();
    let mut closed_oracle = Tally::new("closed_form_vs_oracle", 1e-8);
    let mut matrix_oracle = Tally::new("matrix_route_vs_oracle", 1e-8);
    for ((p, row), rep) in circuits.iter().zip(rows).zip(&oracle) {
        let e = rep.as_ref().map(|r| r.entropy).map_err(Clone::clone);
        closed_oracle.add(diff(&row.closed, &e), || describe(p));
        matrix_oracle.add(diff(&row.matrix, &e), || describe(p));
    }
    out.push(closed_oracle.finish());
    out.push(matrix_oracle.finish());

    let subset: Vec<_> = circuits
        .iter()
        .zip(&oracle)
        .take(EXPENSIVE_SUBSET)
        .filter_map(|(p, r)| r.as_ref().ok().map(|r| (*p, r.cutoff, r.entropy)))
        .collect();
    let expensive: Vec<_> = subset
        .par_iter()
        .map(|(p, cutoff, e)| {
            let state = circuit_state(p, *cutoff);
            let swapped = schmidt_spectrum(&state.swapped())
                .map(|s| (von_neumann_entropy(&s) - e).abs());
            let doubled = oracle_circuit_at(p, 2 * cutoff).map(|r| (r.entropy - e).abs());
            (swapped, doubled)
        })
        .collect();
    let mut symmetry = Tally::new("oracle_subsystem_symmetry", 1e-10);
    let mut drift = Tally::new("oracle_cutoff_doubling", 1e-9);
    for ((p, ..), (swapped, doubled)) in subset.iter().zip(expensive) {
        symmetry.add(swapped, || describe(p));
        drift.add(doubled, || describe(p));
    }
    out.push(symmetry.finish());
    out.push(drift.finish());

    let mut rng = stream(cfg.seed, 4);
    let states: Vec<_> = (0..UNITARITY_STATES)
        .map(|_| {
            let a = random_state(&mut rng, UNITARITY_CUTOFF);
            let b = random_state(&mut rng, UNITARITY_CUTOFF);
            let theta = rng.gen::<f64>() * TAU;
            let phi = rng.gen::<f64>() * TAU;
            (a, b, theta, phi)
        })
        .collect();
    let unitarity: Vec<_> = states
        .par_iter()
        .map(|(a, b, theta, phi)| {
            let ba = apply_beam_splitter(a, *theta, *phi);
            let bb = apply_beam_splitter(b, *theta, *phi);
            let gram = (inner(&ba, &bb) - inner(a, b))
                .norm()
                .max((inner(&ba, &ba) - inner(a, a)).norm());
            let reference = (apply_beam_splitter_eig(a, *theta, *phi).psi() - ba.psi()).camax();
            (gram, reference)
        })
        .collect();
    let mut unitary = Tally::new("beam_splitter_unitarity", 1e-12);
    let mut reference = Tally::new("beam_splitter_vs_eigen", 1e-11);
    for (i, (g, r)) in unitarity.into_iter().enumerate() {
        unitary.add(Ok(g), || format!("state #{i}"));
        reference.add(Ok(r), || format!("state #{i}"));
    }
    out.push(unitary.finish());
    out.push(reference.finish());

    out.extend(nongauss_suite());
    out
}

fn nongauss_suite() -> Vec<PropertyResult> {
    let mut grid = Vec::new();
    for total in 0..=NONGAUSS_MAX_TOTAL {
        for n1 in 0..=total {
            for theta in angle_grid(NONGAUSS_ANGLES) {
                grid.push(FockPair::new(n1, total - n1, theta).expect("grid is in range"));
            }
        }
    }
    let results: Vec<_> = grid
        .par_iter()
        .map(|p| {
            let spectrum = bs_fock_spectrum(p);
            let e = bs_fock_entropy(p);
            let swapped = bs_fock_entropy(&p.swapped());
            let mirrored = FockPair::new(p.n2, p.n1, FRAC_PI_2 - p.theta).and_then(|q| bs_fock_entropy(&q));
            (spectrum, e, swapped, mirrored)
        })
        .collect();
    let mut oracle = Tally::new("fock_spectrum_vs_oracle", 1e-9);
    let mut sum = Tally::new("fock_spectrum_trace", 1e-10);
    let mut swap = Tally::new("fock_entropy_swap", 1e-10);
    let mut mirror = Tally::new("fock_entropy_mirror", 1e-10);
    for (p, (spectrum, e, swapped, mirrored)) in grid.iter().zip(results) {
        let label = || format!("n1={} n2={} theta={:.12e}", p.n1, p.n2, p.theta);
        oracle.add(spectrum.as_ref().map(|s| s.max_dev).map_err(Clone::clone), label);
        sum.add(spectrum.map(|s| (s.sum() - 1.0).abs()), label);
        swap.add(diff(&e, &swapped), label);
        mirror.add(diff(&e, &mirrored), label);
    }
    let mut ln2 = Tally::new("fock_single_photon_ln2", 1e-12);
    let p = FockPair::new(1, 0, FRAC_PI_4).expect("valid");
    ln2.add(bs_fock_entropy(&p).map(|e| (e - LN_2).abs()), || "n1=1 n2=0 theta=pi/4".into());
    [oracle, sum, swap, mirror, ln2].map(Tally::finish).into()
}

/// Runs the suites selected by `cfg.scope`.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let circuits = sample_circuits(cfg.seed, cfg.samples);
    let rows: Vec<_> = circuits.par_iter().map(|p| circuit_row(p, cfg.mutate)).collect();
    let mut properties = Vec::new();
    if cfg.scope.gaussian() {
        properties.extend(gaussian_suite(cfg, &circuits, &rows));
    }
    if cfg.scope.fock() {
        properties.extend(fock_suite(cfg, &circuits, &rows));
    }
    VerifyReport {
        config: *cfg,
        properties,
    }
}
