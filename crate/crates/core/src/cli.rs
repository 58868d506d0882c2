//! Command-line front end: read an operator, run one command, emit JSON.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::certificates::{family_attainment, family_cw_inf, parse_certificates, Certificate, EigenPairCert};
use crate::cone::{ConeVector, Gauge, SliceConfig};
use crate::error::Error;
use crate::operators::OperatorSpec;
use crate::oracles::{karp_cycle_mean, perron_root, policy_enumeration, power_bracket};
use crate::solver::{eigen_solve, growth_rate, growth_rate_whole, EigenSolveResult, Schedule, Shift, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub const MAX_DIM_VAR: &str = "CONEWISE_MAX_DIM";
const DEFAULT_MAX_DIM: usize = 512;

#[derive(Debug, Parser)]
#[command(name = "conewise", version, about = "Cone spectral radii and certificates for monotone homogeneous maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Operator JSON (stdin when omitted).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Solver configuration overrides (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// CSV file for the outer-iteration trace of `solve`.
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out of the JSON result.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone spectral radius and eigenvector.
    Solve,
    /// Collatz-Wielandt bracket by power iteration (linear operators).
    Bracket {
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Check certificates against the operator.
    Certify {
        /// Certificate JSON: a record, an array of records, or a solve result.
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Attainment report for a sup family, Collatz-Wielandt report for an inf family.
    Family {
        /// Random interior samples for the inf-family bounds.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Reference value from an independent oracle.
    Oracle {
        #[arg(long, value_enum)]
        kind: Option<OracleKind>,
    },
    /// Orbit growth rate.
    Growth {
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        /// Starting point, comma separated (all ones when omitted).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Karp,
    Perron,
    PowerBracket,
    Policy,
}

/// Input problems: malformed JSON, bad files, dimension limits.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{what}: malformed JSON: {source}")]
    Json { what: String, source: serde_json::Error },
    #[error(transparent)]
    Input(#[from] Error),
    #[error("dimension {dim} exceeds {MAX_DIM_VAR}={limit}")]
    TooLarge { dim: usize, limit: usize },
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    /// Verdict lines for `certify`.
    pub lines: Vec<String>,
    pub trace_csv: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum ScheduleOverride {
    #[default]
    Unset,
    Named(String),
    Geometric { geometric: f64 },
    Explicit(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ShiftOverride {
    Named(String),
    Value(f64),
}

/// JSON overrides for [`SolverConfig`]; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default)]
    schedule: ScheduleOverride,
    inner_tol: Option<f64>,
    outer_tol: Option<f64>,
    max_inner: Option<usize>,
    max_outer: Option<usize>,
    bracket_tol: Option<f64>,
    warm_start: Option<bool>,
    shift: Option<ShiftOverride>,
    u: Option<Vec<f64>>,
    gauge: Option<Gauge>,
}

impl ConfigOverrides {
    pub fn apply(self, n: usize) -> Result<SolverConfig, Error> {
        let mut cfg = SolverConfig::default();
        cfg.schedule = match self.schedule {
            ScheduleOverride::Unset => cfg.schedule,
            ScheduleOverride::Named(s) if s == "harmonic" => Schedule::Harmonic,
            ScheduleOverride::Named(s) if s == "geometric" => Schedule::Geometric { ratio: 0.5 },
            ScheduleOverride::Named(s) => return Err(Error::InvalidArgument(format!("unknown schedule \"{s}\""))),
            ScheduleOverride::Geometric { geometric } => Schedule::Geometric { ratio: geometric },
            ScheduleOverride::Explicit(v) => Schedule::Explicit(v),
        };
        if let Some(v) = self.inner_tol {
            cfg.inner_tol = v;
        }
        if let Some(v) = self.outer_tol {
            cfg.outer_tol = v;
        }
        if let Some(v) = self.max_inner {
            cfg.max_inner = v;
        }
        if let Some(v) = self.max_outer {
            cfg.max_outer = v;
        }
        if let Some(v) = self.bracket_tol {
            cfg.bracket_tol = v;
        }
        if let Some(v) = self.warm_start {
            cfg.warm_start = v;
        }
        cfg.shift = match self.shift {
            None => cfg.shift,
            Some(ShiftOverride::Named(s)) if s == "none" => Shift::None,
            Some(ShiftOverride::Named(s)) if s == "auto" => Shift::Auto,
            Some(ShiftOverride::Named(s)) => return Err(Error::InvalidArgument(format!("unknown shift \"{s}\""))),
            Some(ShiftOverride::Value(a)) => Shift::Fixed(a),
        };
        if self.u.is_some() || self.gauge.is_some() {
            let unit = match self.u {
                Some(u) => ConeVector::interior(u)?,
                None => ConeVector::ones(n),
            };
            let gauge = self.gauge.unwrap_or(Gauge::Unorm);
            cfg.slice = Some(SliceConfig::new(gauge, unit)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
            Ok(s)
        }
    }
}

fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Json { what: what.into(), source })
}

fn max_dim() -> usize {
    std::env::var(MAX_DIM_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

fn solver_config(cli: &Cli, n: usize) -> Result<SolverConfig, CliError> {
    let overrides = match &cli.config {
        None => ConfigOverrides::default(),
        Some(p) => {
            let text = read_text(Some(p))?;
            serde_json::from_str(&text).map_err(|source| CliError::Json { what: p.display().to_string(), source })?
        }
    };
    Ok(overrides.apply(n)?)
}

/// CSV rendering of a solve trace.
pub fn trace_csv(res: &EigenSolveResult) -> String {
    let mut out = String::from("k,s,lambda,inner_iters,bracket_lo,bracket_hi,residual\n");
    for (k, t) in res.trace.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            k + 1,
            t.s,
            t.lambda,
            t.inner_iters,
            t.bracket_lo,
            t.bracket_hi,
            t.residual
        );
    }
    out
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Runs the command against already loaded operator JSON text.
pub fn run_with_operator(cli: &Cli, operator_text: &str) -> Result<Outcome, CliError> {
    let spec = OperatorSpec::from_json(&parse_json(operator_text, "operator")?)?;
    let n = spec.dim();
    let limit = max_dim();
    if n > limit {
        return Err(CliError::TooLarge { dim: n, limit });
    }
    let mut outcome = match &cli.command {
        Command::Solve => {
            let cfg = solver_config(cli, n)?;
            let res = eigen_solve(&spec, &cfg)?;
            let mut body = to_value(&res);
            body["certificate"] = to_value(&Certificate::from(&EigenPairCert::from_solve(&res)?));
            let code = if res.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
            Outcome { code, json: body, lines: Vec::new(), trace_csv: Some(trace_csv(&res)) }
        }
        Command::Bracket { max_iter, tol } => {
            let OperatorSpec::Linear(a) = spec.restrict_to_cone() else {
                return Err(Error::InvalidArgument(format!("bracket needs a linear operator, got {}", spec.kind())).into());
            };
            let b = power_bracket(&a, &vec![1.0; n], *max_iter, *tol)?;
            let code = if b.stalled { EXIT_NOT_CONVERGED } else { EXIT_OK };
            let mut body = to_value(&b);
            body["midpoint"] = json!(b.midpoint());
            Outcome { code, json: body, lines: Vec::new(), trace_csv: None }
        }
        Command::Certify { certificate } => {
            let text = read_text(Some(certificate))?;
            let certs = parse_certificates(&parse_json(&text, &certificate.display().to_string())?)?;
            let mut lines = Vec::new();
            let mut verdicts = Vec::new();
            let mut all = true;
            for c in &certs {
                match c.check(&spec) {
                    Ok(v) => {
                        all &= v.accepted;
                        lines.push(v.to_string());
                        verdicts.push(to_value(&v));
                    }
                    Err(e @ (Error::NotInterior { .. } | Error::ZeroVector)) => {
                        all = false;
                        lines.push(format!("FAIL {} rejected: {e}", c.kind()));
                        verdicts.push(json!({"kind": c.kind(), "accepted": false, "error": e.to_string()}));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let code = if all { EXIT_OK } else { EXIT_FAIL };
            Outcome { code, json: json!({"verdicts": verdicts}), lines, trace_csv: None }
        }
        Command::Family { samples } => {
            let cfg = solver_config(cli, n)?;
            match spec.restrict_to_cone() {
                OperatorSpec::Sup(f) => {
                    let res = eigen_solve(&spec, &cfg)?;
                    let members = f
                        .members()
                        .iter()
                        .map(|m| EigenPairCert::from_solve(&eigen_solve(&OperatorSpec::Linear(m.clone()), &cfg)?))
                        .collect::<Result<Vec<_>, Error>>()?;
                    let rep = family_attainment(&spec, &EigenPairCert::from_solve(&res)?, &members)?;
                    let code = if rep.attained && rep.witness_optimal { EXIT_OK } else { EXIT_FAIL };
                    Outcome { code, json: to_value(&rep), lines: Vec::new(), trace_csv: None }
                }
                OperatorSpec::Inf(_) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let mut us = vec![ConeVector::ones(n)];
                    for _ in 0..*samples {
                        us.push(ConeVector::interior((0..n).map(|_| rng.gen_range(0.1..1.0)).collect())?);
                    }
                    let rep = family_cw_inf(&spec, &us, &cfg)?;
                    let code = if rep.agrees && rep.samples_consistent { EXIT_OK } else { EXIT_FAIL };
                    Outcome { code, json: to_value(&rep), lines: Vec::new(), trace_csv: None }
                }
                other => return Err(Error::InvalidArgument(format!("family needs a sup or inf operator, got {}", other.kind())).into()),
            }
        }
        Command::Oracle { kind } => {
            let cone = spec.restrict_to_cone();
            let kind = match (kind, &cone) {
                (Some(k), _) => *k,
                (None, OperatorSpec::MaxPlus(_)) => OracleKind::Karp,
                (None, OperatorSpec::Linear(_)) => OracleKind::Perron,
                (None, OperatorSpec::Sup(_) | OperatorSpec::Inf(_)) => OracleKind::Policy,
                (None, other) => return Err(Error::InvalidArgument(format!("no oracle for {} operators", other.kind())).into()),
            };
            let body = match (kind, &cone) {
                (OracleKind::Karp, OperatorSpec::MaxPlus(w)) => {
                    let mean = karp_cycle_mean(&w.weights())?;
                    json!({"oracle": "karp", "value": mean, "radius": mean.exp()})
                }
                (OracleKind::Perron, OperatorSpec::Linear(a)) => json!({"oracle": "perron", "value": perron_root(a)}),
                (OracleKind::PowerBracket, OperatorSpec::Linear(a)) => {
                    let b = power_bracket(a, &vec![1.0; n], 100_000, 1e-12)?;
                    json!({"oracle": "power_bracket", "value": b.midpoint(), "bracket": to_value(&b)})
                }
                (OracleKind::Policy, OperatorSpec::Sup(_) | OperatorSpec::Inf(_)) => {
                    let opt = policy_enumeration(&cone, perron_root)?;
                    json!({"oracle": "policy", "value": opt.value, "policy": opt.policy.0, "evaluated": opt.evaluated})
                }
                (k, other) => {
                    return Err(Error::InvalidArgument(format!("oracle {k:?} does not apply to {} operators", other.kind())).into())
                }
            };
            Outcome { code: EXIT_OK, json: body, lines: Vec::new(), trace_csv: None }
        }
        Command::Growth { horizon, x0 } => {
            let x0 = x0.clone().unwrap_or_else(|| vec![1.0; n]);
            let rep = if matches!(spec, OperatorSpec::WholeSpace(_)) {
                growth_rate_whole(&spec, &x0, *horizon)?
            } else {
                growth_rate(&spec, &ConeVector::new(x0)?, *horizon)?
            };
            Outcome { code: EXIT_OK, json: to_value(&rep), lines: Vec::new(), trace_csv: None }
        }
    };
    if let Value::Object(map) = &mut outcome.json {
        map.insert("command".into(), json!(command_name(&cli.command)));
        if !cli.no_timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            map.insert("timestamp".into(), json!(secs));
        }
    }
    Ok(outcome)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve => "solve",
        Command::Bracket { .. } => "bracket",
        Command::Certify { .. } => "certify",
        Command::Family { .. } => "family",
        Command::Oracle { .. } => "oracle",
        Command::Growth { .. } => "growth",
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Full run: reads inputs, writes artifacts, returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = read_text(cli.input.as_deref()).and_then(|text| run_with_operator(cli, &text));
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = serde_json::to_string_pretty(&outcome.json).expect("results serialize") + "\n";
    let written = (|| {
        if let (Some(path), Some(csv)) = (&cli.trace, &outcome.trace_csv) {
            write_file(path, csv)?;
        }
        match &cli.out {
            Some(path) => write_file(path, &text)?,
            None if outcome.lines.is_empty() => print!("{text}"),
            None => {}
        }
        Ok::<(), CliError>(())
    })();
    for line in &outcome.lines {
        println!("{line}");
    }
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    outcome.code
}
