//! Command-line front end: solve a single instance, generate instances,
//! check feasibility, and run benchmark sweeps to CSV.

mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multicover::approx::{solve_two_approx, solve_two_eps};
use multicover::baselines::{solve_greedy, solve_rrlp};
use multicover::exact::{solve_bruteforce, solve_dp};
use multicover::generate::{generate_adversarial, generate_random, rss, DemandSpec};
use multicover::instance::{ingest_csv, validate, Instance, Solution};
use multicover::Error;

#[derive(Parser)]
#[command(name = "multicover", version, about = "Weighted set multi-cover toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with a chosen algorithm.
    Solve(SolveArgs),
    /// Write a fresh instance as JSON.
    Generate {
        #[command(subcommand)]
        family: GenerateCommand,
    },
    /// Run an algorithm sweep from a config file and emit CSV rows.
    Bench(bench::BenchArgs),
    /// Check demand feasibility and print the per-item report.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Algo {
    Dp,
    Bf,
    #[value(name = "2approx")]
    TwoApprox,
    #[value(name = "2eps")]
    TwoEps,
    Greedy,
    Rrlp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// Algorithm to run.
    #[arg(long)]
    algo: Algo,
    /// Instance file: JSON, or CSV with the companion flags below.
    #[arg(long)]
    input: PathBuf,
    /// Approximation budget for the 2eps algorithm.
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Seed for randomized algorithms.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// CSV input only: item indicator columns, in universe order.
    #[arg(long, value_delimiter = ',')]
    items: Vec<String>,
    /// CSV input only: the weight column.
    #[arg(long)]
    weight_column: Option<String>,
    /// CSV input only: per-item demands, aligned with --items.
    #[arg(long, value_delimiter = ',')]
    demands: Vec<u32>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Nested family on which the density greedy overpays.
    Adversarial {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coin-flip membership, integer weights in [1, 1000], clamped demands.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SpecArg::Random)]
        spec: SpecArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum SpecArg {
    Random,
    Uniform,
    Normal,
    Exp,
    Poisson,
    Zipf,
}

impl SpecArg {
    pub(crate) fn to_spec(self) -> DemandSpec {
        match self {
            SpecArg::Random => DemandSpec::Random,
            SpecArg::Uniform => DemandSpec::Uniform,
            SpecArg::Normal => DemandSpec::Normal,
            SpecArg::Exp => DemandSpec::Exp,
            SpecArg::Poisson => DemandSpec::Poisson,
            SpecArg::Zipf => DemandSpec::Zipf,
        }
    }
}

/// CSV label for a demand distribution. Matches the `--spec` flag tokens so
/// rows round-trip into configs; the distribution parameters are fixed, so
/// they carry no information worth a column full of punctuation.
pub(crate) fn spec_label(spec: DemandSpec) -> &'static str {
    match spec {
        DemandSpec::Random => "random",
        DemandSpec::Uniform => "uniform",
        DemandSpec::Normal => "normal",
        DemandSpec::Exp => "exp",
        DemandSpec::Poisson => "poisson",
        DemandSpec::Zipf => "zipf",
    }
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',')]
    items: Vec<String>,
    #[arg(long)]
    weight_column: Option<String>,
    #[arg(long, value_delimiter = ',')]
    demands: Vec<u32>,
}

/// A terminal failure: message for standard error plus the process exit
/// code. Infeasibility exits 2, everything else 1.
pub(crate) struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Infeasible(_)) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not failures.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Generate { family } => cmd_generate(family),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("multicover: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

pub(crate) fn run_algo(
    algo: Algo,
    inst: &Instance,
    eps: f64,
    seed: Option<u64>,
) -> multicover::Result<Solution> {
    match algo {
        Algo::Dp => solve_dp(inst),
        Algo::Bf => solve_bruteforce(inst),
        Algo::TwoApprox => solve_two_approx(inst),
        Algo::TwoEps => solve_two_eps(inst, eps),
        Algo::Greedy => solve_greedy(inst),
        Algo::Rrlp => solve_rrlp(inst, seed.unwrap_or(0)),
    }
}

/// Reads an instance from JSON, or from CSV when the `.csv` extension and
/// the companion flags describe the table layout.
pub(crate) fn load_instance(
    path: &Path,
    items: &[String],
    weight_column: Option<&str>,
    demands: &[u32],
) -> Result<Instance, Failure> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let Some(weight_column) = weight_column else {
            return Err(Failure::usage(
                "CSV input needs --items, --weight-column and --demands",
            ));
        };
        if items.is_empty() || demands.len() != items.len() {
            return Err(Failure::usage(format!(
                "CSV input needs --demands aligned with --items, got {} and {}",
                demands.len(),
                items.len()
            )));
        }
        let file = fs::File::open(path).map_err(|e| Failure::usage(format!(
            "cannot read {}: {e}",
            path.display()
        )))?;
        return Ok(ingest_csv(file, items, weight_column, demands)?);
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!(
        "cannot read {}: {e}",
        path.display()
    )))?;
    Ok(Instance::from_json(&text)?)
}

/// Writes to the file when given, standard output otherwise.
pub(crate) fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!(
            "cannot write {}: {e}",
            path.display()
        ))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let inst = load_instance(
        &args.input,
        &args.items,
        args.weight_column.as_deref(),
        &args.demands,
    )?;
    let started = Instant::now();
    let sol = run_algo(args.algo, &inst, args.eps, args.seed)?;
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    let score = rss(&inst, &sol)?;

    let text = match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "algorithm": sol.algorithm,
                "selected": sol.selected,
                "total_weight": sol.total_weight,
                "rss": score,
                "runtime_ms": runtime_ms,
                "seed": sol.seed,
            });
            let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
            text.push('\n');
            text
        }
        Format::Csv => bench::render_csv(&[bench::Row {
            algorithm: sol.algorithm.clone(),
            n: inst.n(),
            ell: inst.ell(),
            demand_spec: "file".into(),
            seed: sol.seed,
            total_weight: Some(sol.total_weight),
            rss: Some(score),
            runtime_ms: Some(runtime_ms),
            status: "ok".into(),
        }])?,
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_generate(family: GenerateCommand) -> Result<(), Failure> {
    let (inst, output) = match family {
        GenerateCommand::Adversarial { ell, output } => (generate_adversarial(ell)?, output),
        GenerateCommand::Random { n, ell, seed, spec, output } => {
            (generate_random(n, ell, spec.to_spec(), seed)?, output)
        }
    };
    let mut text = inst.to_json();
    text.push('\n');
    emit(output.as_deref(), &text)
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let inst = load_instance(
        &args.input,
        &args.items,
        args.weight_column.as_deref(),
        &args.demands,
    )?;
    let report = validate(&inst);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(None, &text)?;
    if report.feasible {
        Ok(())
    } else {
        Err(Failure { code: 2, message: format!("infeasible instance: {report}") })
    }
}
