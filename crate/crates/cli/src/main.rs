//! `adasub`: instance files in, CSV reports out.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adasub::bundled;
use adasub::evaluation::Method;
use adasub::experiment::{
    bench, certify_row, check_table, evaluate_row, opt_table, ratio_table, report_table, run_table,
    ExperimentConfig, Table,
};
use adasub::format::parse_instance;
use adasub::oracles::{ratio_bound, OracleLimits};
use adasub::policies::Policy;
use adasub::{Constraint, Error, Instance, Problem};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "adasub",
    version,
    about = "Adaptive stochastic maximization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write CSV here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Slack for property checks and certification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Largest instance the exhaustive oracles accept.
    #[arg(long, global = true)]
    max_items: Option<usize>,
    /// Cap on enumerated deterministic policies.
    #[arg(long, global = true)]
    max_policies: Option<u64>,
    /// Cap on reachable partial realizations.
    #[arg(long, global = true)]
    max_lattice: Option<u64>,
    /// Cap on nodes expanded by exact evaluation.
    #[arg(long, global = true, env = "ADASUB_NODE_LIMIT")]
    node_limit: Option<u64>,
}

#[derive(Args)]
struct Target {
    /// Instance file, or the name of a bundled instance.
    #[arg(long)]
    instance: String,
}

#[derive(Args)]
struct PolicyArg {
    /// arg, sad, best1, dg, greedy, arg-dummies, pi2 or never.
    #[arg(long, default_value = "arg")]
    policy: String,
    /// Comma-separated item ids used by `dg`.
    #[arg(long)]
    sample_set: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Check adaptive submodularity and adaptive monotonicity.
    Check(Target),
    /// Compute the adaptive monotonicity ratio.
    Ratio(Target),
    /// Compute the optimal adaptive policy.
    Opt(Target),
    /// Simulate one seeded trajectory.
    Run {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        policy: PolicyArg,
    },
    /// Expected utility of a policy.
    Evaluate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        /// Monte Carlo sample count; implies `--method mc` when given.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Guaranteed approximation ratio for a monotonicity ratio.
    Bound {
        #[arg(long)]
        m: f64,
        #[arg(long, default_value = "cardinality")]
        constraint: String,
    },
    /// Certify that a policy meets its guarantee.
    Certify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        policy: PolicyArg,
    },
    /// Certify every bundled instance against the standard policies.
    Bench {
        /// Instances to sweep instead of the bundled set.
        #[arg(long)]
        instance: Vec<String>,
        /// Fill the wall_time_ms column.
        #[arg(long)]
        timings: bool,
    },
}

/// A failed run: exit status plus the error.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if matches!(e, Error::TooLarge { .. }) {
                3
            } else {
                2
            },
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn io_failure(e: io::Error, path: &Path) -> Failure {
    Failure {
        code: 2,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn load_instance(spec: &str) -> Result<Instance, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| io_failure(e, path))?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("instance");
        return Ok(parse_instance(&text, name)?);
    }
    if bundled::source(spec).is_some() {
        let name = spec.strip_suffix(".toy").unwrap_or(spec);
        return Ok(bundled::load(name)?);
    }
    Err(io_failure(io::Error::from(io::ErrorKind::NotFound), path))
}

fn load_problem(target: &Target) -> Result<Problem, Failure> {
    Ok(Problem::new(load_instance(&target.instance)?)?)
}

fn policy(arg: &PolicyArg, problem: &Problem) -> Result<Policy, Failure> {
    let sample = arg
        .sample_set
        .as_deref()
        .map(|s| problem.instance().parse_set(s))
        .transpose()?;
    Ok(Policy::from_id(&arg.policy, sample)?)
}

fn config(common: &Common) -> ExperimentConfig {
    let d = OracleLimits::default();
    ExperimentConfig {
        seed: common.seed,
        tolerance: common.tolerance,
        limits: OracleLimits {
            max_items: common.max_items.unwrap_or(d.max_items),
            max_policies: common.max_policies.unwrap_or(d.max_policies),
            max_lattice: common.max_lattice.unwrap_or(d.max_lattice),
            node_limit: common.node_limit.unwrap_or(d.node_limit),
        },
        ..ExperimentConfig::default()
    }
}

enum Output {
    Table(Table),
    /// A single number on its own line.
    Value(f64),
}

/// Runs the command; returns its output and whether every check passed.
fn execute(cli: &Cli) -> Result<(Output, bool), Failure> {
    let mut config = config(&cli.common);
    let table = match &cli.command {
        Command::Check(t) => check_table(&load_problem(t)?, &config)?,
        Command::Ratio(t) => ratio_table(&load_problem(t)?, &config)?,
        Command::Opt(t) => opt_table(&load_problem(t)?, &config)?,
        Command::Run { target, policy: p } => {
            let problem = load_problem(target)?;
            run_table(&problem, &policy(p, &problem)?, &config)?
        }
        Command::Evaluate {
            target,
            policy: p,
            method,
            samples,
        } => {
            let problem = load_problem(target)?;
            let method = match (method, samples) {
                (MethodArg::Mc, _) | (_, Some(_)) => Method::MonteCarlo,
                (MethodArg::Exact, None) => Method::Exact,
            };
            if let Some(n) = samples {
                config.samples = *n;
            }
            let row = evaluate_row(&problem, &policy(p, &problem)?, method, &config)?;
            report_table(&[row])
        }
        Command::Bound { m, constraint } => {
            let c: Constraint = constraint.parse()?;
            return Ok((Output::Value(ratio_bound(*m, c)?), true));
        }
        Command::Certify { target, policy: p } => {
            let problem = load_problem(target)?;
            let row = certify_row(&problem, &policy(p, &problem)?, &config)?;
            let pass = row.pass != Some(false);
            return Ok((Output::Table(report_table(&[row])), pass));
        }
        Command::Bench { instance, timings } => {
            config.timings = *timings;
            let instances = if instance.is_empty() {
                bundled::all()
            } else {
                instance
                    .iter()
                    .map(|s| load_instance(s))
                    .collect::<Result<Vec<_>, _>>()?
            };
            // failures show in the pass column; the exit status stays 0
            report_table(&bench(&instances, &config)?)
        }
    };
    Ok((Output::Table(table), true))
}

fn emit(output: &Output, path: Option<&Path>) -> Result<(), Failure> {
    let text = match output {
        Output::Table(t) => t.to_csv()?,
        Output::Value(v) => format!("{v}\n"),
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(e, p)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(e, Path::new("<stdout>"))),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|(out, pass)| {
        emit(&out, cli.common.output.as_deref())?;
        Ok(pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!(
                "error kind={} code={} message={}",
                f.kind,
                f.code,
                quote(&f.message)
            );
            ExitCode::from(f.code)
        }
    }
}
