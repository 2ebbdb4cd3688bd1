//! `mahler`: measures, identity checks and parameter sweeps from the shell.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{OutputFormat, Precision, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mahler",
    version,
    about = "Mahler measures and identity checks"
)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; defaults to table for compute, json for verify, csv for sweep.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(
        long,
        global = true,
        value_enum,
        env = "MAHLER_PRECISION",
        default_value = "double"
    )]
    precision: Precision,

    /// Initial node count of the trapezoid rules and per-axis torus grid.
    #[arg(long, global = true)]
    nodes: Option<usize>,

    /// Absolute tolerance requested from the quadratures.
    #[arg(long, global = true)]
    quad_tol: Option<f64>,

    /// Replace a pass/fail tolerance, e.g. `--tol main_neg=1e-6`.
    #[arg(long = "tol", global = true, value_parser = parse_key_val)]
    tol: Vec<(String, f64)>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    show_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure of one family member or of a polynomial file.
    Compute(ComputeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate a family or an identity over an arithmetic λ grid.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// `Q_k` with `--k`, or `q(λ) = m(Q_{λ+4}(X-1,Y))` with `--lambda`.
    Q,
    P,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Torus,
    Jensen,
    /// Family-specific evaluator.
    Fast,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long, value_enum, required_unless_present = "poly_file")]
    family: Option<FamilyArg>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "k")]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Polynomial in the `coeff:e1,e2,...` text format.
    #[arg(long, conflicts_with = "family")]
    poly_file: Option<PathBuf>,
    /// Print d/dλ of the family measure instead (closed forms).
    #[arg(long)]
    derivative: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Main,
    Boyd,
    Derivatives,
    #[value(name = "J", alias = "j")]
    J,
    Hyp,
    Branches,
    Singularities,
    Asymptotics,
    Substitution,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// λ values replacing the suite defaults.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    lambda: Option<Vec<f64>>,
    /// k values for the boyd suite.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    k: Option<Vec<i64>>,
    /// μ grid size of the hyp suite.
    #[arg(long)]
    grid: Option<usize>,
    /// Samples along the curve for the branches suite.
    #[arg(long)]
    samples: Option<usize>,
    /// Also report q − r on (−5, −4]; these reports never fail the run.
    #[arg(long)]
    exploratory: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepIdentity {
    Main,
    Derivatives,
    #[value(name = "J1", alias = "j1")]
    J1,
    #[value(name = "J2", alias = "j2")]
    J2,
    #[value(name = "J3", alias = "j3")]
    J3,
    Branches,
    Singularities,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(
        long,
        value_enum,
        required_unless_present = "identity",
        conflicts_with = "identity"
    )]
    family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    identity: Option<SweepIdentity>,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, allow_negative_numbers = true)]
    step: f64,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

fn parse_key_val(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((k.to_string(), v))
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<mahler_core::Error> for Failure {
    fn from(e: mahler_core::Error) -> Self {
        use mahler_core::Error as E;
        let code = match e {
            E::InvalidParameter(_) | E::UnsupportedRegime { .. } | E::Parse { .. } => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn config_from(cli: &Cli) -> RunConfig {
    let mut c = RunConfig {
        precision: cli.precision,
        ..RunConfig::default()
    };
    if let Some(n) = cli.nodes {
        c.node_budget = n;
        c.nodes_given = true;
    }
    if let Some(t) = cli.quad_tol {
        c.quadrature_tolerance = t;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    c.jobs = cli.jobs;
    c.output_format = cli.format;
    c.tolerance_overrides = cli.tol.iter().cloned().collect::<BTreeMap<_, _>>();
    for (k, v) in &c.tolerance_overrides {
        if let Some(slot) = c.tolerances.get_mut(k) {
            *slot = *v;
        }
    }
    c
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    code: EXIT_NUMERICAL,
                    message: e.to_string(),
                })
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = config_from(&cli);
    config.validate().map_err(Failure::usage)?;
    if cli.show_config {
        let text = serde_json::to_string_pretty(&config).expect("config serializes") + "\n";
        emit(&cli.out, &text)?;
        return Ok(EXIT_OK);
    }
    let Some(command) = &cli.command else {
        return Err(Failure::usage("no command given; see --help"));
    };
    if let Some(j) = config.jobs {
        if j == 0 {
            return Err(Failure::usage("--jobs must be positive"));
        }
        // only fails if a pool exists already
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
    let (text, code) = match command {
        Command::Compute(a) => commands::compute(a, &config)?,
        Command::Verify(a) => commands::verify(a, &config)?,
        Command::Sweep(a) => commands::sweep(a, &config)?,
    };
    emit(&cli.out, &text)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
