//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven in-process.

use std::fmt::Write as _;

use clap::builder::TypedValueParser as _;
use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::catalog;
use crate::error::Error;
use crate::format::{self, KernelJson, ProlongationReport, TowerJson};
use crate::graded::GradedSpace;
use crate::lie::{der0, subspace_maps, G0Spec, GradedLieAlgebra};
use crate::prolong::{order_and_bound, prolong, ProlongationResult, Status, DEFAULT_MAX_DEGREE};
use crate::selftest::{self, Fault};
use crate::torsion::{kernel_reports, tower_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Der0,
    Prolong,
    Torsion,
    Tower,
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InjectedFault {
    ActQuasi,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "tanaka", version, about = "Tanaka prolongations of graded Lie algebras in exact arithmetic")]
pub struct RunConfig {
    pub command: Command,
    /// `preset:NAME` or a path to an algebra JSON file.
    pub input: Option<String>,
    /// A g⁰ preset (zero, gl, sl, so, sp, co, der0) or `file:PATH`.
    #[arg(long, default_value = "der0")]
    pub g0: String,
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub max_degree: usize,
    /// Defaults to dim m.
    #[arg(long)]
    pub base_dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
    pub seed: u64,
    /// Cases per property in `selftest`.
    #[arg(long, default_value_t = selftest::DEFAULT_CASES, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub cases: usize,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<InjectedFault>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Invalid(_) => EXIT_INPUT,
            _ => EXIT_FAILURE,
        };
        Outcome::fail(code, String::new(), format!("error: {e}\n"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => execute(&config),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::fail(EXIT_INPUT, String::new(), text)
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn execute(config: &RunConfig) -> Outcome {
    let result = match config.command {
        Command::Check => cmd_check(config),
        Command::Der0 => cmd_der0(config),
        Command::Prolong => cmd_prolong(config),
        Command::Torsion => cmd_torsion(config),
        Command::Tower => cmd_tower(config),
        Command::Selftest => Ok(cmd_selftest(config)),
    };
    result.unwrap_or_else(Outcome::from)
}

pub fn load_algebra(input: Option<&str>) -> Result<GradedLieAlgebra, Error> {
    let input = input.ok_or_else(|| Error::Parse("an input (preset:NAME or a path) is required".into()))?;
    if let Some(name) = input.strip_prefix("preset:") {
        return catalog::make_algebra(name);
    }
    let text = std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("cannot read {input}: {e}")))?;
    format::parse_algebra(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{input}: {msg}")),
        other => other,
    })
}

pub fn load_g0(spec: &str, m: &GradedLieAlgebra) -> Result<G0Spec, Error> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
            format::parse_g0(&text, m)
        }
        None => G0Spec::preset(spec).map_err(|e| Error::Parse(e.to_string())),
    }
}

fn degrees_text(s: &GradedSpace) -> String {
    s.degrees().map(|d| format!("{d}:{}", s.dim_of(d))).collect::<Vec<_>>().join(" ")
}

/// Validation and fundamentality problems, one line each.
fn problems(m: &GradedLieAlgebra) -> Vec<String> {
    let mut out: Vec<String> = m.validate().violations.iter().map(|v| v.to_string()).collect();
    if out.is_empty() {
        if !m.is_negatively_graded() {
            out.push("not negatively graded".into());
        } else if !m.is_fundamental() {
            out.push("not fundamental: m^{-1} does not generate m".into());
        }
    }
    out
}

fn require_fundamental(m: &GradedLieAlgebra) -> Option<Outcome> {
    let p = problems(m);
    (!p.is_empty()).then(|| Outcome::fail(EXIT_FAILURE, String::new(), p.iter().map(|l| format!("{l}\n")).collect()))
}

fn json<T: Serialize>(value: &T) -> String {
    format!("{}\n", format::to_json(value))
}

fn base_dim(config: &RunConfig, m: &GradedLieAlgebra) -> Result<usize, Error> {
    match config.base_dim {
        Some(b) if b < m.dim() => Err(Error::Invalid(format!("--base-dim {b} is below dim m = {}", m.dim()))),
        Some(b) => Ok(b),
        None => Ok(m.dim()),
    }
}

fn run_prolong(config: &RunConfig) -> Result<Result<(ProlongationResult, usize), Outcome>, Error> {
    let m = load_algebra(config.input.as_deref())?;
    if let Some(out) = require_fundamental(&m) {
        return Ok(Err(out));
    }
    let spec = load_g0(&config.g0, &m)?;
    let base = base_dim(config, &m)?;
    Ok(Ok((prolong(&m, &spec, config.max_degree)?, base)))
}

#[derive(Serialize)]
struct CheckJson {
    algebra: String,
    dim: usize,
    valid: bool,
    fundamental: bool,
    violations: Vec<String>,
}

pub fn cmd_check(config: &RunConfig) -> Result<Outcome, Error> {
    let m = load_algebra(config.input.as_deref())?;
    let violations: Vec<String> = m.validate().violations.iter().map(|v| v.to_string()).collect();
    let valid = violations.is_empty();
    let fundamental = valid && m.is_negatively_graded() && m.is_fundamental();
    let stdout = match config.format {
        OutputFormat::Json => json(&CheckJson { algebra: m.name().into(), dim: m.dim(), valid, fundamental, violations: violations.clone() }),
        OutputFormat::Text => {
            let mut s = format!("{}: dim {}, degrees {}\n", m.name(), m.dim(), degrees_text(m.space()));
            for v in &violations {
                let _ = writeln!(s, "violation: {v}");
            }
            let _ = writeln!(s, "{}", if valid { "valid graded Lie algebra" } else { "not a graded Lie algebra" });
            if valid {
                let _ = writeln!(s, "{}", if fundamental { "fundamental" } else { "not fundamental" });
            }
            s
        }
    };
    Ok(Outcome { code: if fundamental { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: String::new() })
}

#[derive(Serialize)]
struct Der0Json {
    algebra: String,
    dim: usize,
    basis: Vec<std::collections::BTreeMap<String, Vec<Vec<String>>>>,
}

pub fn cmd_der0(config: &RunConfig) -> Result<Outcome, Error> {
    let m = load_algebra(config.input.as_deref())?;
    let violations = m.validate().violations;
    if !violations.is_empty() {
        let stderr = violations.iter().map(|v| format!("{v}\n")).collect();
        return Ok(Outcome::fail(EXIT_FAILURE, String::new(), stderr));
    }
    let der = der0(&m)?;
    let maps = subspace_maps(m.space(), &der);
    let basis: Vec<_> = maps.iter().map(format::map_blocks).collect();
    let stdout = match config.format {
        OutputFormat::Json => json(&Der0Json { algebra: m.name().into(), dim: der.dim(), basis }),
        OutputFormat::Text => {
            let mut s = format!("dim der0({}) = {}\n", m.name(), der.dim());
            for (k, blocks) in basis.iter().enumerate() {
                let mut parts: Vec<(i32, String)> = blocks.iter().map(|(d, rows)| (d.parse().unwrap_or(0), format!("{d}: {}", rows_text(rows)))).collect();
                parts.sort();
                let parts: Vec<String> = parts.into_iter().map(|p| p.1).collect();
                let _ = writeln!(s, "  D{}: {}", k + 1, parts.join("; "));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn rows_text(rows: &[Vec<String>]) -> String {
    let r: Vec<String> = rows.iter().map(|row| format!("[{}]", row.join(" "))).collect();
    format!("[{}]", r.join(" "))
}

/// `order 1; dims g0=4 g1=3; bound 10` or `truncated at 3; dims 6,8,10`.
pub fn summary_line(result: &ProlongationResult, base_dim: usize) -> String {
    match result.status() {
        Status::Finite(order) => {
            let (_, bound) = order_and_bound(result, base_dim).expect("finite result");
            let dims: Vec<String> = result.dims().iter().enumerate().filter(|(_, &d)| d > 0).map(|(k, d)| format!("g{k}={d}")).collect();
            if dims.is_empty() {
                format!("order {order}; bound {bound}")
            } else {
                format!("order {order}; dims {}; bound {bound}", dims.join(" "))
            }
        }
        Status::TruncatedAt(d) => {
            let dims: Vec<String> = result.dims()[1..].iter().map(|x| x.to_string()).collect();
            format!("truncated at {d}; dims {}", dims.join(","))
        }
    }
}

pub fn cmd_prolong(config: &RunConfig) -> Result<Outcome, Error> {
    let (result, base) = match run_prolong(config)? {
        Ok(r) => r,
        Err(out) => return Ok(out),
    };
    let stdout = match config.format {
        OutputFormat::Json => json(&ProlongationReport::new(&result, base)),
        OutputFormat::Text => {
            let m = result.algebra();
            let mut s = format!("{} with g0 = {}, max degree {}\n", m.name(), result.g0_label(), result.max_degree());
            for (k, d) in result.dims().iter().enumerate() {
                let _ = writeln!(s, "dim g^{k} = {d}");
            }
            let _ = writeln!(s, "{}", summary_line(&result, base));
            if let Ok((order, bound)) = order_and_bound(&result, base) {
                let terms: Vec<String> = std::iter::once(base).chain(result.dims()[..=order].iter().copied()).map(|x| x.to_string()).collect();
                let _ = writeln!(s, "dim(M) + Σ dim(g^i) = {} = {bound}", terms.join(" + "));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

pub fn cmd_torsion(config: &RunConfig) -> Result<Outcome, Error> {
    let (result, _) = match run_prolong(config)? {
        Ok(r) => r,
        Err(out) => return Ok(out),
    };
    let n = config.level;
    let rep = kernel_reports(&result, n)?;
    let code = if rep.passed() { EXIT_OK } else { EXIT_FAILURE };
    let stdout = match config.format {
        OutputFormat::Json => json(&KernelJson::from(&rep)),
        OutputFormat::Text => {
            let verdict = |b: bool| if b { "PASS" } else { "FAIL" };
            let mut s = format!("{} with g0 = {}, level n = {n}\n", result.algebra().name(), result.g0_label());
            let _ = writeln!(s, "dim Tor^{} = {}", n + 1, rep.torsion_dim);
            let _ = writeln!(s, "dim domain = {}", rep.domain_dim);
            let _ = writeln!(s, "rank ∂ = {}", rep.rank);
            let _ = writeln!(s, "dim W^{} = {}", n + 1, rep.complement_dim);
            if n == 0 {
                let _ = writeln!(s, "{} Ker ∂ = gl_2 + g^1", verdict(rep.kernel_identity));
            } else {
                let _ = writeln!(s, "{} Ker ∂|gl_{} = g^{} + gl_{}(m_{n})", verdict(rep.kernel_identity), n + 1, n + 1, n + 2);
                let _ = writeln!(s, "{} ∂ injective on Σ Hom(g^i, g^{n})", verdict(rep.injective.unwrap_or(false)));
                let _ = writeln!(s, "{} image splits along the torsion decomposition", verdict(rep.split_respected));
            }
            for w in &rep.witnesses {
                let _ = writeln!(s, "  {w}");
            }
            s
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

pub fn cmd_tower(config: &RunConfig) -> Result<Outcome, Error> {
    let (result, base) = match run_prolong(config)? {
        Ok(r) => r,
        Err(out) => return Ok(out),
    };
    let report = tower_report(&result, base)?;
    let code = if report.rows.iter().all(|r| r.consistent) { EXIT_OK } else { EXIT_FAILURE };
    let stdout = match config.format {
        OutputFormat::Json => json(&TowerJson::from(&report)),
        OutputFormat::Text => {
            let truncated = matches!(report.status, Status::TruncatedAt(_));
            let mut s = format!("{} with g0 = {}, dim M = {}\n", report.algebra, report.g0, report.base_dim);
            let _ = writeln!(s, "{:>3} {:>6} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>7}", "n", "dim g", "G^n·GL", "G^n", "Tor", "rank", "W", "ker", "total");
            for r in &report.rows {
                let _ = write!(
                    s,
                    "{:>3} {:>6} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>7}",
                    r.n, r.dim_g, r.structure_group_dim, r.reduced_group_dim, r.torsion_dim, r.rank, r.complement_dim, r.kernel_dim, r.total_dim
                );
                if !r.consistent {
                    s.push_str("  inconsistent");
                }
                if truncated {
                    s.push_str("  truncated");
                }
                s.push('\n');
            }
            match report.bound {
                Some(b) => {
                    let _ = writeln!(s, "dim bound = {b}");
                }
                None => {
                    let _ = writeln!(s, "no bound: truncated at {}", report.rows.len() - 1);
                }
            }
            s
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

pub fn cmd_selftest(config: &RunConfig) -> Outcome {
    let fault = match config.inject_fault {
        Some(InjectedFault::ActQuasi) => Fault::ActQuasi,
        None => Fault::None,
    };
    let mut outcomes = selftest::quasi_suites(config.seed, config.cases, fault);
    outcomes.extend(selftest::catalog_suite());
    let mut stdout = format!("seed {}\n", config.seed);
    for o in &outcomes {
        let _ = writeln!(stdout, "{} {} ({} cases)", if o.passed() { "PASS" } else { "FAIL" }, o.name, o.cases);
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let _ = writeln!(stdout, "{passed}/{} suites passed", outcomes.len());
    match outcomes.iter().find(|o| !o.passed()) {
        None => Outcome::ok(stdout),
        Some(o) => {
            let stderr = format!("first counterexample in {}: {}\n", o.name, o.failure.as_deref().unwrap_or(""));
            Outcome::fail(EXIT_FAILURE, stdout, stderr)
        }
    }
}
