//! The `cve` command-line interface.
//!
//! Every subcommand writes one JSON record (or a table for `sweep`) to
//! stdout and maps failures to a fixed set of exit codes:
//!
//! | code | meaning                          |
//! |------|----------------------------------|
//! | 0    | success                          |
//! | 1    | verification or `--check` failed |
//! | 2    | usage or invalid parameter       |
//! | 3    | entropy diverges                 |
//! | 4    | invariant violated               |
//! | 5    | degenerate reduction             |
//! | 6    | formula disagrees with oracle    |

use std::f64::consts::LN_2;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::circuits::{
    circuit_coeffs, entropy_closed_form, reduced_from_circuit, CircuitParams,
};
use crate::error::{CveError, Result};
use crate::fock_oracle::{oracle_circuit, von_neumann_entropy};
use crate::gaussian::{
    entropy_gaussian, entropy_matrix_route, reduce, GaussianCoeffState, ReducedGaussian,
    Reduction,
};
use crate::matcore::C2Mat;
use crate::nongauss::{bs_fock_entropy, bs_fock_spectrum_with, FockPair, Reading};
use crate::verify::{self, Scope, VerifyConfig, SEPARABILITY_TOL, ZERO_ENTROPY};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Route agreement demanded by `--check`.
pub const CHECK_TOL: f64 = 1e-8;

/// Entropy of bipartite pure continuous-variable states.
#[derive(Debug, Parser)]
#[command(name = "cve", version, about)]
pub struct Cli {
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Read angle flags (theta, phi, phases) in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CircuitArgs {
    /// Beam-splitter angle.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Beam-splitter phase.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Squeezing of mode 1 as "re,im".
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    pub zeta1: Complex64,
    /// Squeezing of mode 2 as "re,im".
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    pub zeta2: Complex64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of B(theta, phi) S1(zeta1) S2(zeta2)|00>.
    Circuit {
        #[command(flatten)]
        params: CircuitArgs,
        /// Also evaluate the matrix-logarithm route and the Fock oracle.
        #[arg(long)]
        check: bool,
    },
    /// Reduce a normally ordered Gaussian state read as JSON from stdin.
    Gaussian {
        /// Also evaluate the matrix-logarithm route.
        #[arg(long)]
        check: bool,
    },
    /// Spectrum and entropy of B(theta)|n1, n2>.
    Fock {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Print the oracle spectrum and its deviation.
        #[arg(long)]
        check: bool,
        /// Generating-function reading; `literal` is kept to show that the
        /// oracle rejects it.
        #[arg(long, value_enum, default_value_t = ReadingArg::Resolved, hide = true)]
        reading: ReadingArg,
    },
    /// Tabulate entropy over one swept parameter.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        params: CircuitArgs,
        /// Fixed photon number of mode 1 for number-state sweeps.
        #[arg(long, default_value_t = 0)]
        n1: usize,
        /// Fixed photon number of mode 2 for number-state sweeps.
        #[arg(long, default_value_t = 0)]
        n2: usize,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Use a deliberately wrong closed form.
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Gaussian,
    Fock,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Resolved,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    Theta,
    Phi,
    Zeta1Mag,
    Zeta1Phase,
    Zeta2Mag,
    Zeta2Phase,
    R,
    N1,
    N2,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Phi => "phi",
            SweepParam::Zeta1Mag => "zeta1_mag",
            SweepParam::Zeta1Phase => "zeta1_phase",
            SweepParam::Zeta2Mag => "zeta2_mag",
            SweepParam::Zeta2Phase => "zeta2_phase",
            SweepParam::R => "r",
            SweepParam::N1 => "n1",
            SweepParam::N2 => "n2",
        }
    }

    fn is_angle(self) -> bool {
        matches!(
            self,
            SweepParam::Theta | SweepParam::Phi | SweepParam::Zeta1Phase | SweepParam::Zeta2Phase
        )
    }

    fn is_integer(self) -> bool {
        matches!(self, SweepParam::N1 | SweepParam::N2)
    }
}

/// Parses `"re,im"` (or a bare real) into a complex number.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| format!("'{t}' is not a number; expected \"re,im\""))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("'{s}' is not of the form \"re,im\"")),
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Entropy units selected by `--bits`.
pub struct Units {
    pub bits: bool,
}

impl Units {
    fn key(&self) -> &'static str {
        if self.bits {
            "entropy_bits"
        } else {
            "entropy_nats"
        }
    }

    fn convert(&self, nats: f64) -> f64 {
        if self.bits {
            nats / LN_2
        } else {
            nats
        }
    }

    fn value(&self, nats: f64) -> Value {
        num(self.convert(nats))
    }
}

/// Where a subcommand writes and what it returns.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, io: Io<'_>) -> i32 {
    let Io {
        stdin,
        stdout,
        stderr,
    } = io;
    let result = dispatch(&cli, stdin, stdout, stderr);
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let CveError::FormulaMismatch {
                formula, oracle, ..
            } = &e
            {
                let _ = writeln!(
                    stderr,
                    "{}",
                    json!({
                        "formula": formula.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                        "oracle": oracle.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                    })
                );
            }
            e.exit_code()
        }
    };
    let _ = stdout.flush();
    code
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let units = Units { bits: cli.bits };
    let angle = |x: f64| if cli.degrees { x.to_radians() } else { x };
    match &cli.command {
        Command::Circuit { params, check } => {
            let p = circuit_params(params, &angle)?;
            let (record, ok) = circuit_record(&p, *check, &units)?;
            emit(out, &record)?;
            Ok(check_code(ok, err))
        }
        Command::Gaussian { check } => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| CveError::param("stdin", e.to_string()))?;
            let state = parse_gaussian_json(&text)?;
            let (record, ok) = gaussian_record(&state, *check, &units)?;
            emit(out, &record)?;
            Ok(check_code(ok, err))
        }
        Command::Fock {
            n1,
            n2,
            theta,
            check,
            reading,
        } => {
            let p = FockPair::new(*n1, *n2, angle(*theta))?;
            let reading = match reading {
                ReadingArg::Resolved => Reading::Resolved,
                ReadingArg::Literal => Reading::Literal,
            };
            let (record, ok) = fock_record(&p, reading, *check, &units)?;
            emit(out, &record)?;
            Ok(check_code(ok, err))
        }
        Command::Sweep {
            param,
            start,
            stop,
            steps,
            format,
            params,
            n1,
            n2,
        } => {
            let base = circuit_params(params, &angle)?;
            let spec = SweepSpec {
                param: *param,
                start: if param.is_angle() { angle(*start) } else { *start },
                stop: if param.is_angle() { angle(*stop) } else { *stop },
                steps: *steps,
                base,
                n1: *n1,
                n2: *n2,
            };
            let rows = sweep(&spec, &units)?;
            write_sweep(out, &spec, &rows, *format, &units)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            scope,
            seed,
            samples,
            mutate,
        } => {
            let cfg = VerifyConfig {
                scope: match scope {
                    ScopeArg::Gaussian => Scope::Gaussian,
                    ScopeArg::Fock => Scope::Fock,
                    ScopeArg::All => Scope::All,
                },
                seed: *seed,
                samples: *samples,
                mutate: *mutate,
            };
            let report = verify::run(&cfg);
            write!(out, "{}", report.render()).map_err(io_error)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}

fn io_error(e: std::io::Error) -> CveError {
    CveError::InvariantViolation(format!("write failed: {e}"))
}

fn emit(out: &mut dyn Write, record: &Value) -> Result<()> {
    writeln!(out, "{record}").map_err(io_error)
}

fn check_code(ok: bool, err: &mut dyn Write) -> i32 {
    if ok {
        EXIT_OK
    } else {
        let _ = writeln!(err, "error: route deviation exceeds {CHECK_TOL:e}");
        EXIT_CHECK_FAILED
    }
}

fn circuit_params(a: &CircuitArgs, angle: &dyn Fn(f64) -> f64) -> Result<CircuitParams> {
    CircuitParams::new(angle(a.theta), angle(a.phi), a.zeta1, a.zeta2)
}

/// Reduced state of a circuit, `None` for a product state.
fn circuit_reduced(p: &CircuitParams) -> Result<Option<ReducedGaussian>> {
    match reduced_from_circuit(p) {
        Ok(red) => Ok(Some(red)),
        Err(CveError::ProductState { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Fields shared by the circuit and coefficient-matrix records.
fn gaussian_fields(map: &mut Map<String, Value>, red: Option<&ReducedGaussian>, entropy: f64, units: &Units) {
    map.insert(units.key().into(), units.value(entropy));
    map.insert("lambda".into(), num(red.map_or(0.0, ReducedGaussian::lambda)));
    map.insert("A".into(), opt(red.map(|r| r.amp)));
}

fn tail_fields(
    map: &mut Map<String, Value>,
    red: Option<&ReducedGaussian>,
    tail_mass: Option<f64>,
    deviations: Option<Value>,
) {
    let separable = red.map_or(true, |r| crate::gaussian::is_separable(r, SEPARABILITY_TOL));
    map.insert("separable".into(), Value::Bool(separable));
    map.insert(
        "normalization_check".into(),
        num(red.map_or(1.0, ReducedGaussian::normalization)),
    );
    map.insert("tail_mass".into(), opt(tail_mass));
    map.insert("deviations".into(), deviations.unwrap_or(Value::Null));
}

fn matrix_route(red: Option<&ReducedGaussian>) -> Result<f64> {
    red.map_or(Ok(0.0), entropy_matrix_route)
}

/// Record for one circuit; the flag is `false` when `--check` found a
/// deviation above [`CHECK_TOL`].
pub fn circuit_record(p: &CircuitParams, check: bool, units: &Units) -> Result<(Value, bool)> {
    let entropy = entropy_closed_form(p)?;
    let red = circuit_reduced(p)?;
    let k = circuit_coeffs(p);
    let mut map = Map::new();
    gaussian_fields(&mut map, red.as_ref(), entropy, units);
    map.insert("alpha".into(), complex(k.alpha));
    map.insert("beta".into(), complex(k.beta_c));
    map.insert("delta".into(), complex(k.delta));
    let mut ok = true;
    let (tail, deviations) = if check {
        let matrix = matrix_route(red.as_ref())?;
        let oracle = oracle_circuit(p)?;
        let dm = (matrix - entropy).abs();
        let dor = (oracle.entropy - entropy).abs();
        ok = dm < CHECK_TOL && dor < CHECK_TOL;
        let dev = json!({
            "matrix_route_entropy": units.value(matrix),
            "matrix_route": num(units.convert(dm)),
            "oracle_entropy": units.value(oracle.entropy),
            "oracle": num(units.convert(dor)),
            "oracle_cutoff": oracle.cutoff,
        });
        (Some(oracle.tail_mass), Some(dev))
    } else {
        (None, None)
    };
    tail_fields(&mut map, red.as_ref(), tail, deviations);
    Ok((Value::Object(map), ok))
}

fn gaussian_record(state: &GaussianCoeffState, check: bool, units: &Units) -> Result<(Value, bool)> {
    let reduction = reduce(state)?;
    let red = reduction.entangled().copied();
    let entropy = match &reduction {
        Reduction::Product => 0.0,
        Reduction::Entangled(r) => entropy_gaussian(r)?,
    };
    let mut map = Map::new();
    gaussian_fields(&mut map, red.as_ref(), entropy, units);
    let mut ok = true;
    let deviations = if check {
        let matrix = matrix_route(red.as_ref())?;
        let dm = (matrix - entropy).abs();
        ok = dm < CHECK_TOL;
        Some(json!({
            "matrix_route_entropy": units.value(matrix),
            "matrix_route": num(units.convert(dm)),
        }))
    } else {
        None
    };
    tail_fields(&mut map, red.as_ref(), None, deviations);
    Ok((Value::Object(map), ok))
}

fn fock_record(p: &FockPair, reading: Reading, check: bool, units: &Units) -> Result<(Value, bool)> {
    let s = bs_fock_spectrum_with(p, reading)?;
    let entropy = von_neumann_entropy(&s.spectrum());
    let mut map = Map::new();
    map.insert("n1".into(), p.n1.into());
    map.insert("n2".into(), p.n2.into());
    map.insert("theta".into(), num(p.theta));
    map.insert(
        "spectrum".into(),
        Value::Array(s.lambda.iter().map(|&x| num(x)).collect()),
    );
    map.insert(units.key().into(), units.value(entropy));
    map.insert("separable".into(), Value::Bool(entropy < ZERO_ENTROPY));
    map.insert("normalization_check".into(), num(s.sum()));
    map.insert("tail_mass".into(), Value::Null);
    let deviations = check.then(|| {
        json!({
            "oracle_spectrum": s.oracle.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "oracle": num(s.max_dev),
            "relabeled": s.relabeled,
        })
    });
    map.insert("deviations".into(), deviations.unwrap_or(Value::Null));
    Ok((Value::Object(map), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianJson {
    #[serde(rename = "A0")]
    a0: f64,
    #[serde(rename = "M1")]
    m1: [[[f64; 2]; 2]; 2],
    #[serde(rename = "M2")]
    m2: [[[f64; 2]; 2]; 2],
    #[serde(rename = "M12")]
    m12: [[[f64; 2]; 2]; 2],
}

fn to_mat(m: &[[[f64; 2]; 2]; 2]) -> C2Mat {
    let z = |e: [f64; 2]| Complex64::new(e[0], e[1]);
    C2Mat::new(z(m[0][0]), z(m[0][1]), z(m[1][0]), z(m[1][1]))
}

/// Parses `{"A0": x, "M1": [[[re,im],[re,im]],[...]], "M2": ..., "M12": ...}`.
pub fn parse_gaussian_json(text: &str) -> Result<GaussianCoeffState> {
    let g: GaussianJson = serde_json::from_str(text)
        .map_err(|e| CveError::param("input JSON", e.to_string()))?;
    GaussianCoeffState::new(to_mat(&g.m1), to_mat(&g.m2), to_mat(&g.m12), g.a0)
}

/// One swept parameter over an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: CircuitParams,
    pub n1: usize,
    pub n2: usize,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(CveError::param("steps", "must be at least 2"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CveError::param("start/stop", "must be finite"));
        }
        if self.start == self.stop {
            return Err(CveError::param("start/stop", "must differ"));
        }
        if self.param.is_integer() {
            let step = (self.stop - self.start) / (self.steps - 1) as f64;
            let integral = |x: f64| x.fract() == 0.0;
            if !(integral(self.start) && integral(step)) || self.start < 0.0 || self.stop < 0.0 {
                return Err(CveError::param(
                    self.param.name(),
                    "photon numbers must be non-negative integers with an integer step",
                ));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

/// One row of a sweep; failures are kept with their message.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: std::result::Result<(f64, Option<f64>, bool), String>,
}

fn sweep_point(spec: &SweepSpec, x: f64) -> Result<(f64, Option<f64>, bool)> {
    let b = spec.base;
    let with_mag = |z: Complex64, m: f64| Complex64::from_polar(m, z.arg());
    let with_phase = |z: Complex64, t: f64| Complex64::from_polar(z.norm(), t);
    let circuit = match spec.param {
        SweepParam::Theta => Some((x, b.phi, b.zeta1, b.zeta2)),
        SweepParam::Phi => Some((b.theta, x, b.zeta1, b.zeta2)),
        SweepParam::Zeta1Mag => {
            if x < 0.0 {
                return Err(CveError::param("zeta1_mag", "must be non-negative"));
            }
            Some((b.theta, b.phi, with_mag(b.zeta1, x), b.zeta2))
        }
        SweepParam::Zeta1Phase => Some((b.theta, b.phi, with_phase(b.zeta1, x), b.zeta2)),
        SweepParam::Zeta2Mag => {
            if x < 0.0 {
                return Err(CveError::param("zeta2_mag", "must be non-negative"));
            }
            Some((b.theta, b.phi, b.zeta1, with_mag(b.zeta2, x)))
        }
        SweepParam::Zeta2Phase => Some((b.theta, b.phi, b.zeta1, with_phase(b.zeta2, x))),
        SweepParam::R => {
            if x < 0.0 {
                return Err(CveError::param("r", "must be non-negative"));
            }
            let p = CircuitParams::tmsv(x)?;
            Some((p.theta, p.phi, p.zeta1, p.zeta2))
        }
        SweepParam::N1 | SweepParam::N2 => None,
    };
    match circuit {
        Some((theta, phi, z1, z2)) => {
            let p = CircuitParams::new(theta, phi, z1, z2)?;
            let e = entropy_closed_form(&p)?;
            let red = circuit_reduced(&p)?;
            let sep = red.map_or(true, |r| crate::gaussian::is_separable(&r, SEPARABILITY_TOL));
            Ok((e, Some(red.map_or(0.0, |r| r.lambda())), sep))
        }
        None => {
            let n = x as usize;
            let (n1, n2) = if spec.param == SweepParam::N1 {
                (n, spec.n2)
            } else {
                (spec.n1, n)
            };
            let e = bs_fock_entropy(&FockPair::new(n1, n2, b.theta)?)?;
            Ok((e, None, e < ZERO_ENTROPY))
        }
    }
}

/// Evaluates every grid point, in parallel, keeping sweep order.
pub fn sweep(spec: &SweepSpec, _units: &Units) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .values()
        .par_iter()
        .map(|&x| SweepRow {
            value: x,
            outcome: sweep_point(spec, x).map_err(|e| e.to_string()),
        })
        .collect())
}

fn write_sweep(out: &mut dyn Write, spec: &SweepSpec, rows: &[SweepRow], format: Format, units: &Units) -> Result<()> {
    let name = spec.param.name();
    let fmt = |x: f64| round12(x).to_string();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            let header = [name, units.key(), "lambda", "separable", "error"];
            w.write_record(header).map_err(csv_error)?;
            for row in rows {
                let x = if spec.param.is_integer() {
                    (row.value as usize).to_string()
                } else {
                    fmt(row.value)
                };
                let record = match &row.outcome {
                    Ok((e, l, s)) => [
                        x,
                        fmt(units.convert(*e)),
                        l.map(fmt).unwrap_or_default(),
                        s.to_string(),
                        String::new(),
                    ],
                    Err(msg) => [x, String::new(), String::new(), String::new(), msg.clone()],
                };
                w.write_record(&record).map_err(csv_error)?;
            }
            w.flush().map_err(io_error)?;
        }
        Format::Jsonl => {
            for row in rows {
                let mut map = Map::new();
                let x = if spec.param.is_integer() {
                    Value::from(row.value as usize)
                } else {
                    num(row.value)
                };
                map.insert(name.into(), x);
                match &row.outcome {
                    Ok((e, l, s)) => {
                        map.insert(units.key().into(), units.value(*e));
                        map.insert("lambda".into(), opt(*l));
                        map.insert("separable".into(), Value::Bool(*s));
                        map.insert("error".into(), Value::Null);
                    }
                    Err(msg) => {
                        map.insert(units.key().into(), Value::Null);
                        map.insert("lambda".into(), Value::Null);
                        map.insert("separable".into(), Value::Null);
                        map.insert("error".into(), Value::String(msg.clone()));
                    }
                }
                emit(out, &Value::Object(map))?;
            }
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> CveError {
    CveError::InvariantViolation(format!("csv output failed: {e}"))
}

/// Parses `args` and runs; clap usage errors exit with code 2.
pub fn main_with<I, T>(args: I, io: Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, io),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(io.stderr, "{rendered}");
            } else {
                let _ = write!(io.stdout, "{rendered}");
            }
            code
        }
    }
}
